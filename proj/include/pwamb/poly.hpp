#pragma once

#include "pwamb/symbol.hpp"

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pwamb {

using Rational = mpq_class;

struct Factor {
    SymbolId var;
    std::uint32_t exp;
    bool operator==(const Factor&) const = default;
};

// Sparse power product, factors sorted by ascending symbol id, exponents > 0.
using Monomial = boost::container::small_vector<Factor, 4>;

// Lexicographic comparison with lower symbol ids as more significant
// variables. Returns <0, 0, >0.
int compare(const Monomial& a, const Monomial& b);
Monomial multiply(const Monomial& a, const Monomial& b);
// a / b when b divides a.
std::optional<Monomial> divide(const Monomial& a, const Monomial& b);
std::uint32_t degree_of(const Monomial& m, SymbolId var);

struct Term {
    Monomial mono;
    Rational coeff;
};

// Sparse multivariate polynomial over Q. Terms are kept sorted in strictly
// descending lex order with nonzero coefficients, so structural equality is
// mathematical equality.
class Poly {
public:
    Poly() = default;
    Poly(long c);
    Poly(const Rational& c);

    static Poly variable(SymbolId var, std::uint32_t exp = 1);
    static Poly monomial(Monomial m, Rational c);
    // Builds from arbitrary terms: sorts, merges duplicates, drops zeros.
    static Poly from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_one() const;
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_term() const;
    const Term& leading() const { return terms_.front(); }

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly scaled(const Rational& c) const;
    Poly times(const Monomial& m, const Rational& c) const;
    Poly pow(unsigned e) const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(SymbolId var) const;
    std::uint32_t degree_in(SymbolId var) const;
    // Coefficient of var^d, a polynomial free of var.
    Poly coefficient(SymbolId var, std::uint32_t d) const;
    bool depends_on(SymbolId var) const;
    std::set<SymbolId> variables() const;
    // Gcd of all monomials (minimum exponents).
    Monomial monomial_content() const;
    // Total degree over the variables accepted by `pred`.
    std::uint32_t degree_over(const std::function<bool(SymbolId)>& pred) const;

    Rational evaluate(const std::map<SymbolId, Rational>& point) const;

    // Divided by the leading coefficient (zero stays zero).
    Poly monic() const;

    std::size_t hash() const;

private:
    std::vector<Term> terms_;
};

// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
// Monic greatest common divisor (gcd(0, 0) = 0).
Poly gcd(const Poly& a, const Poly& b);

std::string to_string(const Rational& q);

} // namespace pwamb
