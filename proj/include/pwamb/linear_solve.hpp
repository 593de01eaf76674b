#pragma once

#include "pwamb/expr.hpp"

#include <map>
#include <vector>

namespace pwamb {

struct LinearSolution {
    // Every unknown; undetermined ones are set to zero.
    std::map<SymbolId, Expr> values;
    // Unknowns without a pivot, in the order they were given.
    std::vector<SymbolId> free;
    // Every unknown expressed through the free unknowns (a free unknown maps
    // to its own symbol).
    std::map<SymbolId, Expr> general;
    // Equations that reduce to a nonzero expression free of the unknowns.
    std::vector<Expr> residual;

    bool consistent() const { return residual.empty(); }
};

// Solves equations e_k = 0 that are affine in `unknowns` with coefficients in
// the Expr field, by Gauss-Jordan elimination. Throws MathError("nonlinear")
// when some equation is not affine in the unknowns.
LinearSolution solve_linear(const std::vector<Expr>& equations, const std::vector<SymbolId>& unknowns);

// Splits an affine equation into coefficients of `unknowns` and the constant part.
struct AffineForm {
    std::vector<Expr> coefficients;
    Expr constant;
};
AffineForm affine_form(const Expr& equation, const std::vector<SymbolId>& unknowns);

} // namespace pwamb
