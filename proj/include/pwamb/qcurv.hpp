#pragma once

#include "pwamb/tensor.hpp"

#include <vector>

namespace pwamb {

// Delta^j ln t for the ambient Laplacian of g; t must be a positive coordinate.
Expr ambient_laplacian_power(const MetricTensor& g, std::size_t j, const std::string& t_name = "t");

struct QReport {
    std::vector<Expr> powers; // powers[j - 1] = Delta^j ln t
    Expr q;                   // -Delta^n ln t at rho = 0, t = 1
    bool vanishes = false;
};

// g must be in normal form on (t, x^1..x^m, rho) with m = 2n even:
// g_tt = 2 rho, g_trho = t, g_rhorho = 0 and no t-x or rho-x terms.
QReport q_curvature(const MetricTensor& g);

// Whether Delta f = 0 for f depending only on t and the base coordinates of
// an ambient PW chart (t, x^A, p_A, rho). Throws ValidationError("not_horizontal")
// when f involves p_A or rho.
bool horizontal_annihilation_check(const MetricTensor& g, const Expr& f);

} // namespace pwamb
