#include "pwamb/expr.hpp"

#include "pwamb/error.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

namespace pwamb {
namespace {

void check_log_class(const Poly& num, const Poly& den) {
    for (const Term& t : den.terms())
        for (const Factor& f : t.mono)
            if (symbols::is_log(f.var))
                throw MathError("ln_class", "logarithm in a denominator is not supported");
    for (const Term& t : num.terms())
        for (const Factor& f : t.mono)
            if (f.exp > 1 && symbols::is_log(f.var))
                throw MathError("ln_class", "logarithm of degree >= 2 is not supported");
}

} // namespace

Expr::Expr() {
    static const auto zero = std::make_shared<const Rep>(Rep{Poly{}, Poly(1)});
    rep_ = zero;
}

Expr::Expr(long c) : Expr(Poly(c)) {}

Expr::Expr(const Rational& c) {
    Rational q = c;
    q.canonicalize();
    *this = Expr(Poly(q));
}

Expr::Expr(Poly num) {
    check_log_class(num, Poly(1));
    rep_ = std::make_shared<const Rep>(Rep{std::move(num), Poly(1)});
}

Expr::Expr(Poly num, Poly den) {
    if (den.is_zero()) throw MathError("division_by_zero", "division by the zero expression");
    if (num.is_zero()) {
        *this = Expr();
        return;
    }
    if (den.is_constant()) {
        Rational c = den.leading().coeff;
        *this = Expr(c == 1 ? std::move(num) : num.scaled(1 / c));
        return;
    }
    Poly g = gcd(num, den);
    if (!g.is_one()) {
        num = *divide_exact(num, g);
        den = *divide_exact(den, g);
    }
    *this = make_reduced(std::move(num), std::move(den));
}

Expr Expr::make_reduced(Poly num, Poly den) {
    if (num.is_zero()) return Expr();
    Rational lc = den.leading().coeff;
    if (lc != 1) {
        Rational inv = 1 / lc;
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    check_log_class(num, den);
    return Expr(std::make_shared<const Rep>(Rep{std::move(num), std::move(den)}));
}

Expr Expr::symbol(SymbolId id) { return Expr(Poly::variable(id)); }

Expr Expr::ln(SymbolId coordinate) { return symbol(symbols::log_of(coordinate)); }

std::optional<Rational> Expr::constant_value() const {
    if (!is_constant()) return std::nullopt;
    return num().constant_term();
}

Expr Expr::operator-() const {
    if (is_zero()) return *this;
    return Expr(std::make_shared<const Rep>(Rep{-num(), den()}));
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den().is_one() && b.den().is_one()) return Expr(a.num() + b.num());
    if (a.den() == b.den()) return Expr(a.num() + b.num(), a.den());
    // Henrici: only factors of gcd(da, db) can cancel.
    Poly g = gcd(a.den(), b.den());
    if (g.is_one()) return Expr::make_reduced(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
    Poly da = *divide_exact(a.den(), g), db = *divide_exact(b.den(), g);
    Poly num = a.num() * db + b.num() * da;
    Poly den = a.den() * db;
    Poly h = gcd(num, g);
    if (!h.is_one()) {
        num = *divide_exact(num, h);
        den = *divide_exact(den, h);
    }
    return Expr::make_reduced(std::move(num), std::move(den));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr();
    if (a.den().is_one() && b.den().is_one()) return Expr(a.num() * b.num());
    Poly g1 = gcd(a.num(), b.den()), g2 = gcd(b.num(), a.den());
    Poly an = g1.is_one() ? a.num() : *divide_exact(a.num(), g1);
    Poly bd = g1.is_one() ? b.den() : *divide_exact(b.den(), g1);
    Poly bn = g2.is_one() ? b.num() : *divide_exact(b.num(), g2);
    Poly ad = g2.is_one() ? a.den() : *divide_exact(a.den(), g2);
    return Expr::make_reduced(an * bn, ad * bd);
}

Expr Expr::inverse() const {
    if (is_zero()) throw MathError("division_by_zero", "division by the zero expression");
    return make_reduced(den(), num());
}

Expr operator/(const Expr& a, const Expr& b) { return a * b.inverse(); }

Expr Expr::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    return make_reduced(num().pow(static_cast<unsigned>(e)), den().pow(static_cast<unsigned>(e)));
}

bool Expr::operator==(const Expr& o) const {
    return rep_ == o.rep_ || (num() == o.num() && den() == o.den());
}

namespace {

// Total derivative of a polynomial along `coord`.
Expr derive_poly(const Poly& p, SymbolId coord, UnknownMode mode) {
    Expr out(p.derivative(coord));
    for (SymbolId v : p.variables()) {
        const SymbolInfo& info = symbols::info(v);
        if (info.kind == SymbolKind::Log && info.argument == coord) {
            out += Expr(p.derivative(v)) / Expr::symbol(coord);
        } else if (info.kind == SymbolKind::Unknown && mode == UnknownMode::Function) {
            out += Expr(p.derivative(v)) * Expr::symbol(symbols::unknown_derivative(v, coord));
        }
    }
    return out;
}

} // namespace

Expr Expr::derivative(SymbolId coordinate, UnknownMode mode) const {
    if (!symbols::is_coordinate(coordinate))
        throw MathError("bad_symbol", "differentiation variable must be a coordinate");
    if (is_zero()) return *this;
    Expr dn = derive_poly(num(), coordinate, mode);
    if (den().is_one()) return dn;
    Expr dd = derive_poly(den(), coordinate, mode);
    if (dd.is_zero()) return dn / Expr(den());
    // (n' d - n d') / d^2
    return (dn * Expr(den()) - Expr(num()) * dd) / Expr(den().pow(2));
}

Rational Expr::evaluate(const std::map<SymbolId, Rational>& point) const {
    if (has_log()) throw MathError("ln_not_evaluable", "cannot evaluate an expression containing ln");
    Rational d = den().evaluate(point);
    if (d == 0) throw MathError("division_by_zero", "denominator vanishes at the evaluation point");
    return num().evaluate(point) / d;
}

namespace {

Expr substitute_poly(const Poly& p, const std::map<SymbolId, Expr>& rep,
                     std::map<std::pair<SymbolId, std::uint32_t>, Expr>& powers) {
    auto replacement = [&](SymbolId v) -> std::optional<Expr> {
        if (auto it = rep.find(v); it != rep.end()) return it->second;
        const SymbolInfo& info = symbols::info(v);
        if (info.kind != SymbolKind::Log) return std::nullopt;
        auto it = rep.find(info.argument);
        if (it == rep.end()) return std::nullopt;
        const Expr& target = it->second;
        if (target == Expr(1)) return Expr();
        if (target.is_polynomial() && target.num().is_monomial()) {
            const Term& t = target.num().leading();
            if (t.coeff == 1 && t.mono.size() == 1 && t.mono[0].exp == 1 &&
                symbols::is_coordinate(t.mono[0].var))
                return Expr::ln(t.mono[0].var);
        }
        throw MathError("ln_class", "substitution maps ln(" + symbols::name(info.argument) +
                                        ") outside the supported class");
    };

    // Split each term into the untouched part and the replaced part.
    Expr result;
    Poly untouched_sum;
    for (const Term& t : p.terms()) {
        Monomial keep;
        Expr factor(1);
        bool replaced = false;
        for (const Factor& f : t.mono) {
            auto r = replacement(f.var);
            if (!r) {
                keep.push_back(f);
                continue;
            }
            replaced = true;
            auto key = std::make_pair(f.var, f.exp);
            auto it = powers.find(key);
            if (it == powers.end()) it = powers.emplace(key, r->pow(static_cast<int>(f.exp))).first;
            factor *= it->second;
        }
        if (!replaced) {
            untouched_sum += Poly::monomial(std::move(keep), t.coeff);
        } else {
            result += factor * Expr(Poly::monomial(std::move(keep), t.coeff));
        }
    }
    return result + Expr(std::move(untouched_sum));
}

} // namespace

Expr Expr::substitute(const std::map<SymbolId, Expr>& replacements) const {
    if (is_zero() || replacements.empty()) return *this;
    std::map<std::pair<SymbolId, std::uint32_t>, Expr> powers;
    Expr n = substitute_poly(num(), replacements, powers);
    if (den().is_one()) return n;
    Expr d = substitute_poly(den(), replacements, powers);
    return n / d;
}

bool Expr::depends_on(SymbolId id) const { return num().depends_on(id) || den().depends_on(id); }

std::set<SymbolId> Expr::symbols() const {
    std::set<SymbolId> s = num().variables();
    for (SymbolId v : den().variables()) s.insert(v);
    return s;
}

bool Expr::has_log() const {
    for (SymbolId v : num().variables())
        if (symbols::is_log(v)) return true;
    return false;
}

bool Expr::has_unknowns() const {
    for (SymbolId v : symbols())
        if (symbols::is_unknown(v)) return true;
    return false;
}

namespace {

using NamedFactors = std::vector<std::pair<std::string, std::uint32_t>>;

struct PrintTerm {
    NamedFactors factors;
    std::uint32_t degree = 0;
    Rational coeff;
};

// Terms in a name-based order, independent of symbol interning order.
std::vector<PrintTerm> print_order(const Poly& p) {
    std::vector<PrintTerm> out;
    for (const Term& t : p.terms()) {
        PrintTerm pt;
        pt.coeff = t.coeff;
        for (const Factor& f : t.mono) {
            pt.factors.emplace_back(symbols::name(f.var), f.exp);
            pt.degree += f.exp;
        }
        std::sort(pt.factors.begin(), pt.factors.end());
        out.push_back(std::move(pt));
    }
    std::sort(out.begin(), out.end(), [](const PrintTerm& a, const PrintTerm& b) {
        if (a.degree != b.degree) return a.degree > b.degree;
        const std::size_t n = std::min(a.factors.size(), b.factors.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a.factors[i].first != b.factors[i].first) return a.factors[i].first < b.factors[i].first;
            if (a.factors[i].second != b.factors[i].second)
                return a.factors[i].second > b.factors[i].second;
        }
        return a.factors.size() > b.factors.size();
    });
    return out;
}

std::string term_body(const PrintTerm& t, const Rational& magnitude) {
    std::string s;
    if (t.factors.empty()) return to_string(magnitude);
    if (magnitude != 1) s = to_string(magnitude) + "*";
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
        if (i > 0) s += "*";
        s += t.factors[i].first;
        if (t.factors[i].second > 1) s += "^" + std::to_string(t.factors[i].second);
    }
    return s;
}

std::string poly_str(const std::vector<PrintTerm>& terms, const Rational& scale) {
    if (terms.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        Rational c = terms[i].coeff * scale;
        bool negative = c < 0;
        Rational mag = negative ? Rational(-c) : c;
        if (i == 0) {
            if (negative) s += "-";
        } else {
            s += negative ? " - " : " + ";
        }
        s += term_body(terms[i], mag);
    }
    return s;
}

} // namespace

std::string Expr::str() const {
    auto nt = print_order(num());
    if (den().is_one()) return poly_str(nt, 1);
    auto dt = print_order(den());
    Rational scale = 1 / dt.front().coeff;
    std::string n = poly_str(nt, scale);
    std::string d = poly_str(dt, scale);
    if (nt.size() > 1) n = "(" + n + ")";
    bool bare_den = dt.size() == 1 && dt.front().factors.size() == 1 &&
                    dt.front().coeff * scale == 1;
    if (!bare_den) d = "(" + d + ")";
    return n + "/" + d;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

} // namespace pwamb
