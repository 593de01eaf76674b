#pragma once

#include "pwamb/expr.hpp"

#include <climits>
#include <vector>

namespace pwamb {

// Power series in one variable rho with Expr coefficients, known modulo
// rho^valid. An exact polynomial has valid == kExact; the default value is
// the exact zero. Arithmetic propagates validity, so a coefficient is only
// ever read where it is determined.
class RhoSeries {
public:
    static constexpr int kExact = INT_MAX / 4;

    RhoSeries() = default;
    RhoSeries(std::vector<Expr> coefficients, int valid);
    static RhoSeries exact(std::vector<Expr> coefficients) { return RhoSeries(std::move(coefficients), kExact); }
    static RhoSeries constant(const Expr& c) { return exact({c}); }

    int valid() const { return valid_; }
    bool is_exact() const { return valid_ >= kExact; }
    // Exact zero only; a series that is zero up to its validity is not "zero".
    bool is_zero() const { return is_exact() && coeffs_.empty(); }
    // Lowest index with a nonzero coefficient, or valid() if there is none.
    int order() const;
    // Coefficient of rho^k; throws MathError("series_truncated") when k >= valid().
    Expr coefficient(int k) const;
    const std::vector<Expr>& coefficients() const { return coeffs_; }

    RhoSeries truncated(int valid) const;
    RhoSeries map(const std::function<Expr(const Expr&)>& fn) const;
    RhoSeries derivative_rho() const;

    friend RhoSeries operator+(const RhoSeries& a, const RhoSeries& b);
    friend RhoSeries operator-(const RhoSeries& a, const RhoSeries& b);
    friend RhoSeries operator*(const RhoSeries& a, const RhoSeries& b);
    RhoSeries operator-() const;

private:
    void normalize();
    std::vector<Expr> coeffs_;
    int valid_ = kExact;
};

RhoSeries scale(const RhoSeries& s, const Rational& c);

} // namespace pwamb
