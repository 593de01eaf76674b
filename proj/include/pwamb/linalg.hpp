#pragma once

#include "pwamb/expr.hpp"

#include <optional>
#include <vector>

namespace pwamb {

// Row-major square matrix of expressions.
struct ExprMatrix {
    std::size_t n = 0;
    std::vector<Expr> entries;

    explicit ExprMatrix(std::size_t size = 0) : n(size), entries(size * size) {}
    Expr& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }
    const Expr& operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

// Exact inverse by Gauss-Jordan elimination over the Expr field;
// nullopt when singular.
std::optional<ExprMatrix> invert(const ExprMatrix& m);
Expr determinant(const ExprMatrix& m);

using RationalMatrix = std::vector<std::vector<Rational>>;

std::size_t rank(RationalMatrix m);

struct Signature {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;
};

// Inertia of a symmetric rational matrix via exact congruence diagonalisation.
Signature signature(RationalMatrix m);

} // namespace pwamb
