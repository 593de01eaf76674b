#pragma once

#include "pwamb/poly.hpp"
#include "pwamb/symbol.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

namespace pwamb {

// How differentiation treats solver unknowns.
enum class UnknownMode {
    Constant, // unknowns are constants
    Function, // unknowns are functions; d(u)/dc becomes the symbol u_dc
};

// Exact scalar in Q(x_1, ..., x_d)[ln x_j]: a reduced fraction of sparse
// polynomials. The denominator is monic and coprime to the numerator, so the
// representation is canonical and equality is structural. Logarithms appear
// only in the numerator and only to degree one; anything else is rejected.
//
// Values are immutable and share their representation.
class Expr {
public:
    Expr();
    Expr(long c);
    Expr(const Rational& c);
    Expr(Poly num);
    // Reduces num/den to canonical form. Throws MathError on a zero denominator.
    Expr(Poly num, Poly den);

    static Expr symbol(SymbolId id);
    static Expr ln(SymbolId coordinate);

    const Poly& num() const { return rep_->num; }
    const Poly& den() const { return rep_->den; }

    bool is_zero() const { return rep_->num.is_zero(); }
    bool is_constant() const { return rep_->num.is_constant() && rep_->den.is_one(); }
    bool is_polynomial() const { return rep_->den.is_one(); }
    std::optional<Rational> constant_value() const;

    Expr operator-() const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    Expr& operator/=(const Expr& o) { return *this = *this / o; }
    Expr inverse() const;
    Expr pow(int e) const;

    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }

    Expr derivative(SymbolId coordinate, UnknownMode mode = UnknownMode::Constant) const;

    // Exact value at a rational point; every symbol must be assigned and the
    // expression must be free of logarithms.
    Rational evaluate(const std::map<SymbolId, Rational>& point) const;

    // Simultaneous substitution of symbols by expressions.
    Expr substitute(const std::map<SymbolId, Expr>& replacements) const;

    bool depends_on(SymbolId id) const;
    std::set<SymbolId> symbols() const;
    bool has_log() const;
    bool has_unknowns() const;

    // Canonical, deterministic text in the expression grammar.
    std::string str() const;

private:
    struct Rep {
        Poly num;
        Poly den;
    };
    explicit Expr(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
    static Expr make_reduced(Poly num, Poly den); // caller guarantees coprime
    std::shared_ptr<const Rep> rep_;
};

std::ostream& operator<<(std::ostream& os, const Expr& e);

inline Expr scale(const Expr& e, const Rational& c) { return e * Expr(c); }

} // namespace pwamb
