#include "pwamb/linear_solve.hpp"

#include "pwamb/error.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace pwamb {

AffineForm affine_form(const Expr& equation, const std::vector<SymbolId>& unknowns) {
    const std::set<SymbolId> set(unknowns.begin(), unknowns.end());
    auto is_target = [&set](SymbolId v) { return set.count(v) > 0; };
    for (SymbolId v : equation.den().variables())
        if (is_target(v))
            throw MathError("nonlinear", "unknown '" + symbols::name(v) + "' appears in a denominator");
    if (equation.num().degree_over(is_target) > 1)
        throw MathError("nonlinear", "equation is not affine in the unknowns: " + equation.str());

    AffineForm form;
    Expr den_inv = Expr(Poly(1), equation.den());
    Poly constant;
    std::vector<std::vector<Term>> parts(unknowns.size());
    std::map<SymbolId, std::size_t> column;
    for (std::size_t i = 0; i < unknowns.size(); ++i) column[unknowns[i]] = i;
    for (const Term& t : equation.num().terms()) {
        std::optional<std::size_t> col;
        Monomial rest;
        for (const Factor& f : t.mono) {
            if (auto it = column.find(f.var); it != column.end()) col = it->second;
            else rest.push_back(f);
        }
        if (col) parts[*col].push_back({std::move(rest), t.coeff});
        else constant += Poly::monomial(t.mono, t.coeff);
    }
    for (auto& p : parts) form.coefficients.push_back(Expr(Poly::from_terms(std::move(p))) * den_inv);
    form.constant = Expr(std::move(constant)) * den_inv;
    return form;
}

namespace {

// Cheaper pivots first: constants, then short numerators and denominators.
std::size_t pivot_cost(const Expr& e) {
    if (e.is_constant()) return 0;
    return 1 + e.num().size() + 2 * e.den().size();
}

} // namespace

LinearSolution solve_linear(const std::vector<Expr>& equations, const std::vector<SymbolId>& unknowns) {
    const std::size_t n = unknowns.size();
    struct Row {
        std::vector<Expr> a;
        Expr b;
    };
    std::vector<Row> rows;
    for (const Expr& e : equations) {
        if (e.is_zero()) continue;
        AffineForm f = affine_form(e, unknowns);
        rows.push_back({std::move(f.coefficients), std::move(f.constant)});
    }

    std::vector<std::optional<std::size_t>> pivot_row(n);
    std::vector<bool> used(rows.size(), false);
    for (std::size_t col = 0; col < n; ++col) {
        std::optional<std::size_t> best;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (used[r] || rows[r].a[col].is_zero()) continue;
            if (!best || pivot_cost(rows[r].a[col]) < pivot_cost(rows[*best].a[col])) best = r;
        }
        if (!best) continue;
        used[*best] = true;
        pivot_row[col] = *best;
        Row& p = rows[*best];
        Expr inv = p.a[col].inverse();
        for (Expr& x : p.a) x *= inv;
        p.b *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == *best || rows[r].a[col].is_zero()) continue;
            Expr factor = rows[r].a[col];
            for (std::size_t c = 0; c < n; ++c)
                if (!p.a[c].is_zero()) rows[r].a[c] -= factor * p.a[c];
            rows[r].b -= factor * p.b;
        }
    }

    LinearSolution sol;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (!used[r] && !rows[r].b.is_zero()) sol.residual.push_back(rows[r].b);
    for (std::size_t col = 0; col < n; ++col)
        if (!pivot_row[col]) sol.free.push_back(unknowns[col]);
    for (std::size_t col = 0; col < n; ++col) {
        SymbolId u = unknowns[col];
        if (!pivot_row[col]) {
            sol.values[u] = Expr();
            sol.general[u] = Expr::symbol(u);
            continue;
        }
        const Row& p = rows[*pivot_row[col]];
        Expr value = -p.b;
        Expr general = value;
        for (std::size_t c = 0; c < n; ++c)
            if (c != col && !pivot_row[c] && !p.a[c].is_zero())
                general -= p.a[c] * Expr::symbol(unknowns[c]);
        sol.values[u] = value;
        sol.general[u] = general;
    }
    return sol;
}

} // namespace pwamb
