#pragma once

#include "pwamb/chart.hpp"
#include "pwamb/tensor.hpp"

namespace pwamb::testing {

inline const Chart& base2() {
    static const Chart c("N", {"x1", "x2"});
    return c;
}

inline const Chart& base3() {
    static const Chart c("N3", {"x1", "x2", "x3"});
    return c;
}

inline AffineConnection flat_connection(const Chart& c) {
    return AffineConnection(c, std::vector<Expr>(c.dim() * c.dim() * c.dim()));
}

// Gamma_1^2_1 = x1 x2; Ric_11 = x1 is its only nonzero curvature component.
inline AffineConnection e1_connection() {
    std::vector<Expr> g(8);
    g[(0 * 2 + 1) * 2 + 0] = parse_expr("x1*x2", base2());
    return AffineConnection(base2(), g);
}

inline MetricTensor stereographic_sphere() {
    static const Chart c("S2", {"x", "y"});
    Expr f = parse_expr("4/(1 + x^2 + y^2)^2", c);
    return MetricTensor::from_components(c, {f, Expr(), Expr(), f});
}

} // namespace pwamb::testing
