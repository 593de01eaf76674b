#include "pwamb/poly.hpp"

#include "pwamb/error.hpp"

#include <algorithm>
#include <limits>

namespace pwamb {

int compare(const Monomial& a, const Monomial& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].var != b[i].var) return a[i].var < b[i].var ? 1 : -1;
        if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp ? 1 : -1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() > b.size() ? 1 : -1;
}

Monomial multiply(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].var == b[j].var) {
            out.push_back({a[i].var, a[i].exp + b[j].exp});
            ++i;
            ++j;
        } else if (a[i].var < b[j].var) {
            out.push_back(a[i++]);
        } else {
            out.push_back(b[j++]);
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(b[j]);
    return out;
}

std::optional<Monomial> divide(const Monomial& a, const Monomial& b) {
    Monomial out;
    std::size_t i = 0;
    for (const Factor& f : b) {
        while (i < a.size() && a[i].var < f.var) out.push_back(a[i++]);
        if (i == a.size() || a[i].var != f.var || a[i].exp < f.exp) return std::nullopt;
        if (a[i].exp > f.exp) out.push_back({f.var, a[i].exp - f.exp});
        ++i;
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    return out;
}

std::uint32_t degree_of(const Monomial& m, SymbolId var) {
    for (const Factor& f : m) {
        if (f.var == var) return f.exp;
        if (f.var > var) break;
    }
    return 0;
}

namespace {

Monomial remove_var(const Monomial& m, SymbolId var) {
    Monomial out;
    for (const Factor& f : m)
        if (f.var != var) out.push_back(f);
    return out;
}

} // namespace

Poly::Poly(long c) {
    if (c != 0) terms_.push_back({{}, Rational(c)});
}

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.push_back({{}, c});
}

Poly Poly::variable(SymbolId var, std::uint32_t exp) {
    Poly p;
    Monomial m;
    if (exp > 0) m.push_back({var, exp});
    p.terms_.push_back({std::move(m), Rational(1)});
    return p;
}

Poly Poly::monomial(Monomial m, Rational c) {
    Poly p;
    if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return compare(x.mono, y.mono) > 0; });
    Poly p;
    p.terms_.reserve(terms.size());
    for (Term& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coeff += t.coeff;
        } else {
            if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
            p.terms_.push_back(std::move(t));
        }
    }
    if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty());
}

bool Poly::is_one() const {
    return terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].coeff == 1;
}

Rational Poly::constant_term() const {
    if (!terms_.empty() && terms_.back().mono.empty()) return terms_.back().coeff;
    return 0;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (Term& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

namespace {

template <bool Subtract>
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = compare(a[i].mono, b[j].mono);
        if (c > 0) {
            out.push_back(a[i++]);
        } else if (c < 0) {
            out.push_back(b[j++]);
            if constexpr (Subtract) out.back().coeff = -out.back().coeff;
        } else {
            Rational s = Subtract ? Rational(a[i].coeff - b[j].coeff)
                                  : Rational(a[i].coeff + b[j].coeff);
            if (s != 0) out.push_back({a[i].mono, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) {
        out.push_back(b[j]);
        if constexpr (Subtract) out.back().coeff = -out.back().coeff;
    }
    return out;
}

} // namespace

Poly& Poly::operator+=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) return *this = o;
    terms_ = merge<false>(terms_, o.terms_);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    terms_ = merge<true>(terms_, o.terms_);
    return *this;
}

Poly Poly::scaled(const Rational& c) const {
    if (c == 0) return {};
    Poly p = *this;
    if (c != 1)
        for (Term& t : p.terms_) t.coeff *= c;
    return p;
}

Poly Poly::times(const Monomial& m, const Rational& c) const {
    if (c == 0) return {};
    Poly p;
    p.terms_.reserve(terms_.size());
    for (const Term& t : terms_) p.terms_.push_back({multiply(t.mono, m), t.coeff * c});
    return p; // lex is a monomial order, so the order is preserved
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.size() == 1) return b.times(a.terms_[0].mono, a.terms_[0].coeff);
    if (b.size() == 1) return a.times(b.terms_[0].mono, b.terms_[0].coeff);
    const Poly& big = a.size() >= b.size() ? a : b;
    const Poly& small = a.size() >= b.size() ? b : a;
    // Accumulate one shifted copy of `big` per term of `small`; each copy is
    // already sorted, so merging keeps everything linear per step.
    Poly acc;
    for (const Term& t : small.terms_) acc += big.times(t.mono, t.coeff);
    return acc;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::pow(unsigned e) const {
    Poly result(1), base = *this;
    while (e > 0) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e > 0) base *= base;
    }
    return result;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].coeff != o.terms_[i].coeff || !(terms_[i].mono == o.terms_[i].mono))
            return false;
    return true;
}

Poly Poly::derivative(SymbolId var) const {
    std::vector<Term> out;
    for (const Term& t : terms_) {
        for (std::size_t k = 0; k < t.mono.size(); ++k) {
            if (t.mono[k].var != var) continue;
            Monomial m = t.mono;
            Rational c = t.coeff * m[k].exp;
            if (--m[k].exp == 0) m.erase(m.begin() + static_cast<std::ptrdiff_t>(k));
            out.push_back({std::move(m), std::move(c)});
            break;
        }
    }
    return from_terms(std::move(out));
}

std::uint32_t Poly::degree_in(SymbolId var) const {
    std::uint32_t d = 0;
    for (const Term& t : terms_) d = std::max(d, degree_of(t.mono, var));
    return d;
}

Poly Poly::coefficient(SymbolId var, std::uint32_t d) const {
    Poly p;
    for (const Term& t : terms_)
        if (degree_of(t.mono, var) == d) p.terms_.push_back({remove_var(t.mono, var), t.coeff});
    return p;
}

bool Poly::depends_on(SymbolId var) const {
    for (const Term& t : terms_)
        if (degree_of(t.mono, var) > 0) return true;
    return false;
}

std::set<SymbolId> Poly::variables() const {
    std::set<SymbolId> vars;
    for (const Term& t : terms_)
        for (const Factor& f : t.mono) vars.insert(f.var);
    return vars;
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return {};
    Monomial m = terms_.front().mono;
    for (const Term& t : terms_) {
        Monomial next;
        for (const Factor& f : m) {
            std::uint32_t e = std::min(f.exp, degree_of(t.mono, f.var));
            if (e > 0) next.push_back({f.var, e});
        }
        m = std::move(next);
        if (m.empty()) break;
    }
    return m;
}

std::uint32_t Poly::degree_over(const std::function<bool(SymbolId)>& pred) const {
    std::uint32_t best = 0;
    for (const Term& t : terms_) {
        std::uint32_t d = 0;
        for (const Factor& f : t.mono)
            if (pred(f.var)) d += f.exp;
        best = std::max(best, d);
    }
    return best;
}

namespace {

Rational power(const Rational& base, std::uint32_t e) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

} // namespace

Rational Poly::evaluate(const std::map<SymbolId, Rational>& point) const {
    Rational sum = 0;
    for (const Term& t : terms_) {
        Rational v = t.coeff;
        for (const Factor& f : t.mono) {
            auto it = point.find(f.var);
            if (it == point.end())
                throw MathError("unassigned_symbol",
                                "no value for symbol '" + symbols::name(f.var) + "'");
            v *= power(it->second, f.exp);
        }
        sum += v;
    }
    return sum;
}

Poly Poly::monic() const {
    if (terms_.empty() || terms_.front().coeff == 1) return *this;
    return scaled(1 / terms_.front().coeff);
}

std::size_t Poly::hash() const {
    std::size_t h = terms_.size();
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (const Term& t : terms_) {
        for (const Factor& f : t.mono) mix((static_cast<std::size_t>(f.var) << 20) ^ f.exp);
        mix(std::hash<std::string>{}(t.coeff.get_str()));
    }
    return h;
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw MathError("division_by_zero", "polynomial division by zero");
    if (a.is_zero()) return Poly{};
    if (b.is_constant()) return a.scaled(1 / b.leading().coeff);
    if (b.is_monomial()) {
        std::vector<Term> out;
        out.reserve(a.size());
        for (const Term& t : a.terms()) {
            auto q = divide(t.mono, b.leading().mono);
            if (!q) return std::nullopt;
            out.push_back({std::move(*q), t.coeff / b.leading().coeff});
        }
        return Poly::from_terms(std::move(out));
    }
    Poly r = a;
    std::vector<Term> quotient;
    const Term& lb = b.leading();
    while (!r.is_zero()) {
        auto q = divide(r.leading().mono, lb.mono);
        if (!q) return std::nullopt;
        Rational c = r.leading().coeff / lb.coeff;
        r -= b.times(*q, c);
        quotient.push_back({std::move(*q), std::move(c)});
    }
    return Poly::from_terms(std::move(quotient));
}

namespace {

Poly gcd_impl(const Poly& a, const Poly& b);

// Gcd of the coefficients of p viewed as a polynomial in var.
Poly content_in(const Poly& p, SymbolId var) {
    std::map<std::uint32_t, std::vector<Term>> groups;
    for (const Term& t : p.terms())
        groups[degree_of(t.mono, var)].push_back({remove_var(t.mono, var), t.coeff});
    Poly g;
    for (auto& [deg, terms] : groups) {
        g = gcd_impl(g, Poly::from_terms(std::move(terms)));
        if (g.is_constant()) return Poly(1);
    }
    return g;
}

Poly primitive_part(const Poly& p, SymbolId var) {
    Poly c = content_in(p, var);
    if (c.is_one()) return p.monic();
    auto q = divide_exact(p, c);
    if (!q) throw MathError("internal", "content does not divide polynomial");
    return q->monic();
}

// Pseudo-remainder of a by b with respect to var.
Poly pseudo_remainder(Poly a, const Poly& b, SymbolId var) {
    const std::uint32_t db = b.degree_in(var);
    const Poly lcb = b.coefficient(var, db);
    std::uint32_t da = a.degree_in(var);
    while (!a.is_zero() && da >= db) {
        Poly lca = a.coefficient(var, da);
        Monomial shift;
        if (da > db) shift.push_back({var, da - db});
        a = lcb * a - (lca * b).times(shift, 1);
        std::uint32_t next = a.degree_in(var);
        if (!a.is_zero() && next >= da)
            throw MathError("internal", "pseudo-remainder failed to reduce degree");
        da = next;
    }
    return a;
}

// Heuristic gcd over Z: evaluate one variable at a large integer xi, take
// the gcd of the images recursively and rebuild it from its xi-adic digits.
// A reconstruction that divides both inputs is the gcd when xi exceeds twice
// the smaller coefficient norm. Gives up (nullopt) rather than growing
// integers without bound.

constexpr std::size_t kHeuristicMaxBits = 16384;
constexpr int kHeuristicAttempts = 6;

// p scaled to integer coefficients with unit content and positive leading
// coefficient; `content` receives the removed integer content when p was
// already integral.
Poly integer_primitive(const Poly& p, mpz_class* content = nullptr) {
    mpz_class den = 1, num = 0;
    for (const Term& t : p.terms()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
    }
    if (content) *content = num;
    if (p.is_zero()) return p;
    Rational scale(den, num);
    scale.canonicalize();
    if (p.leading().coeff < 0) scale = -scale;
    return p.scaled(scale);
}

mpz_class max_norm(const Poly& p) {
    mpz_class m = 0;
    for (const Term& t : p.terms()) m = std::max(m, mpz_class(abs(t.coeff.get_num())));
    return m;
}

Poly evaluate_at(const Poly& p, SymbolId var, const mpz_class& xi) {
    std::vector<Term> out;
    out.reserve(p.size());
    for (const Term& t : p.terms()) {
        mpz_class power;
        mpz_pow_ui(power.get_mpz_t(), xi.get_mpz_t(), degree_of(t.mono, var));
        out.push_back({remove_var(t.mono, var), t.coeff * power});
    }
    return Poly::from_terms(std::move(out));
}

// Inverse of evaluate_at for symmetric xi-adic digits.
Poly interpolate(Poly h, SymbolId var, const mpz_class& xi) {
    std::vector<Term> out;
    const mpz_class half = xi / 2;
    const Rational inv_xi(mpz_class(1), xi);
    for (std::uint32_t i = 0; !h.is_zero(); ++i) {
        std::vector<Term> digit;
        for (const Term& t : h.terms()) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), t.coeff.get_num_mpz_t(), xi.get_mpz_t());
            if (r > half) r -= xi;
            if (r != 0) digit.push_back({t.mono, Rational(r)});
        }
        Poly g = Poly::from_terms(digit);
        for (Term& t : digit) {
            if (i > 0) t.mono = multiply(t.mono, Monomial{{var, i}});
            out.push_back(std::move(t));
        }
        h = (h - g).scaled(inv_xi);
    }
    return Poly::from_terms(std::move(out));
}

std::optional<Poly> heuristic_gcd(const Poly& f0, const Poly& g0) {
    mpz_class cf, cg;
    Poly f = integer_primitive(f0, &cf), g = integer_primitive(g0, &cg);
    mpz_class c;
    mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
    if (f.is_constant() || g.is_constant()) return Poly(Rational(c));
    std::set<SymbolId> vars = f.variables();
    for (SymbolId v : g.variables()) vars.insert(v);
    const SymbolId var = *vars.begin();

    auto accept = [&](const Poly& candidate) -> std::optional<Poly> {
        if (candidate.is_zero()) return std::nullopt;
        Poly h = integer_primitive(candidate);
        if (divide_exact(f, h) && divide_exact(g, h)) return h.scaled(Rational(c));
        return std::nullopt;
    };

    mpz_class xi = 2 * std::min(max_norm(f), max_norm(g)) + 29;
    for (int attempt = 0; attempt < kHeuristicAttempts; ++attempt) {
        if (mpz_sizeinbase(xi.get_mpz_t(), 2) > kHeuristicMaxBits) return std::nullopt;
        Poly ff = evaluate_at(f, var, xi), gg = evaluate_at(g, var, xi);
        if (!ff.is_zero() && !gg.is_zero()) {
            if (auto h = heuristic_gcd(ff, gg)) {
                if (auto r = accept(interpolate(*h, var, xi))) return r;
                // Cofactor reconstructions.
                if (auto cff = divide_exact(ff, *h)) {
                    Poly cf_var = interpolate(*cff, var, xi);
                    if (!cf_var.is_zero())
                        if (auto q = divide_exact(f, cf_var))
                            if (auto r = accept(*q)) return r;
                }
                if (auto cgg = divide_exact(gg, *h)) {
                    Poly cg_var = interpolate(*cgg, var, xi);
                    if (!cg_var.is_zero())
                        if (auto q = divide_exact(g, cg_var))
                            if (auto r = accept(*q)) return r;
                }
            }
        }
        mpz_class root = sqrt(sqrt(xi));
        xi = xi * 73794 * root / 27011;
    }
    return std::nullopt;
}

// Both arguments nonzero, non-constant, without monomial content.
Poly gcd_core(const Poly& a, const Poly& b) {
    if (a.monic() == b.monic()) return a.monic();
    if (divide_exact(a, b)) return b.monic();
    if (divide_exact(b, a)) return a.monic();
    if (auto h = heuristic_gcd(a, b)) return h->monic();

    const std::set<SymbolId> va = a.variables(), vb = b.variables();
    for (SymbolId v : va)
        if (!vb.count(v)) return gcd_impl(content_in(a, v), b);
    for (SymbolId v : vb)
        if (!va.count(v)) return gcd_impl(a, content_in(b, v));

    SymbolId main = *va.begin();
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (SymbolId v : va) {
        std::uint32_t d = std::max(a.degree_in(v), b.degree_in(v));
        if (d < best) {
            best = d;
            main = v;
        }
    }

    Poly ca = content_in(a, main), cb = content_in(b, main);
    Poly gc = gcd_impl(ca, cb);
    Poly pa = primitive_part(a, main), pb = primitive_part(b, main);
    if (pa.degree_in(main) < pb.degree_in(main)) std::swap(pa, pb);
    while (true) {
        Poly r = pseudo_remainder(pa, pb, main);
        if (r.is_zero()) return (gc * pb).monic();
        if (r.degree_in(main) == 0) return gc.monic();
        pa = std::move(pb);
        pb = primitive_part(r, main);
    }
}

Poly gcd_impl(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly(1);

    Monomial ma = a.monomial_content(), mb = b.monomial_content();
    Monomial common;
    for (const Factor& f : ma) {
        std::uint32_t e = std::min(f.exp, degree_of(mb, f.var));
        if (e > 0) common.push_back({f.var, e});
    }
    Poly a1 = ma.empty() ? a : *divide_exact(a, Poly::monomial(ma, 1));
    Poly b1 = mb.empty() ? b : *divide_exact(b, Poly::monomial(mb, 1));
    Poly g(1);
    if (!a1.is_constant() && !b1.is_constant()) g = gcd_core(a1, b1);
    return g.times(common, 1).monic();
}

} // namespace

Poly gcd(const Poly& a, const Poly& b) { return gcd_impl(a, b); }

std::string to_string(const Rational& q) { return q.get_str(); }

} // namespace pwamb
