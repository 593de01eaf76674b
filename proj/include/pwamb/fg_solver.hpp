#pragma once

#include "pwamb/sampling.hpp"
#include "pwamb/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pwamb {

// t^2 (sum_k rho^k phi^(k))_ij dx^i . dx^j + 2 rho dt^2 + 2 t dt . drho on
// (t, x, rho), with phi^(0) = g0. Coefficients are (0,2) tensors on g0's
// chart; only the first `order` of them are used.
MetricTensor assemble_ansatz(const MetricTensor& g0, const std::vector<TensorField>& coefficients, std::size_t order);

struct ExpansionResult {
    std::size_t dimension = 0; // m
    std::size_t order = 0;     // K requested
    // phi[k - 1] = phi^(k) for every solved order.
    std::vector<TensorField> phi;
    // residuals[k - 1]: rho^(k-1) coefficient of the x-block of Ric after
    // substituting every solved coefficient.
    std::vector<TensorField> residuals;
    // Present when m is even and the expansion reached order m / 2: the
    // g0-trace-free part of the critical-order equations after solving.
    std::optional<TensorField> obstruction;
    bool obstructed = false;
    // Orders where undetermined components were fixed, with how.
    struct FreeFlag {
        std::size_t order;
        std::vector<std::string> components; // "i,j", 1-based
        // "+"-joined steps: rho_rho_equation, trace_free_gauge, set_to_zero
        std::string resolution;
    };
    std::vector<FreeFlag> free_flags;
};

// Solves Ric = 0 order by order for the rho-Taylor coefficients of the
// normal-form ambient metric over g0, up to order K (stopping early at a
// nonzero obstruction). Every solved order is re-verified in the fully
// substituted Ricci tensor; a failure there throws MathError("guard").
ExpansionResult fg_expand(const MetricTensor& g0, std::size_t order);

// Critical-order residual for even m; the zero tensor iff the expansion
// continues. Proportional to the obstruction tensor; no normalisation claimed.
TensorField obstruction_residual(const MetricTensor& g0);

struct RicciReport {
    struct Entry {
        std::size_t i, j;
        Expr value;
        std::optional<Point> witness; // where value evaluates nonzero
    };
    bool flat = true;
    std::vector<Entry> entries; // upper triangle, i <= j
};
RicciReport ricci_flat_report(const MetricTensor& g);

} // namespace pwamb
