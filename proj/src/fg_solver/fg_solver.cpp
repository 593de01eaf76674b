#include "pwamb/fg_solver.hpp"

#include "pwamb/constructions.hpp"
#include "pwamb/curvature.hpp"
#include "pwamb/error.hpp"
#include "pwamb/linear_solve.hpp"
#include "pwamb/series.hpp"

namespace pwamb {

namespace {

void check_symmetric(const TensorField& t, std::size_t k) {
    if (t.slots() != std::vector<Slot>{Slot::Lower, Slot::Lower})
        throw ValidationError("bad_coefficient", "coefficient " + std::to_string(k) + " is not a (0,2) tensor");
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = i + 1; j < t.dim(); ++j)
            if (t(i, j) != t(j, i))
                throw ValidationError("asymmetric_coefficient", "coefficient " + std::to_string(k) + " is not symmetric");
}

std::string pair_name(std::size_t i, std::size_t j) { return std::to_string(i + 1) + "," + std::to_string(j + 1); }

// x-block (upper triangle) and the rho-rho entry of the Ricci series of the ansatz
// with coefficients phi^(1..k), inverse truncated at rho^N.
std::vector<RhoSeries> ricci_block(const MetricTensor& g0, const std::vector<TensorField>& phi, int truncation) {
    const Chart& base = g0.chart();
    const std::size_t m = g0.dim(), d = m + 2;
    const Chart amb = ambient_chart_over(base);
    const Expr t = amb.coord(0), t2 = t * t;
    const SymbolId tid = amb.id(0);

    std::vector<RhoSeries> g(d * d);
    g[0] = RhoSeries::exact({Expr(), Expr(2)});
    g[d - 1] = g[(d - 1) * d] = RhoSeries::constant(t);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<Expr> c{t2 * g0(i, j)};
            for (const TensorField& f : phi) c.push_back(t2 * f(i, j));
            g[(i + 1) * d + j + 1] = RhoSeries::exact(std::move(c));
        }

    // Neumann series around the rho = 0 metric.
    ExprMatrix g0m(d);
    for (std::size_t i = 0; i < d * d; ++i) g0m.entries[i] = g[i].is_zero() ? Expr() : g[i].coefficient(0);
    auto a0 = invert(g0m);
    if (!a0) throw ValidationError("degenerate_metric", "base metric is degenerate");
    std::vector<RhoSeries> a(d * d), mneg(d * d);
    for (std::size_t i = 0; i < d * d; ++i)
        if (!a0->entries[i].is_zero()) a[i] = RhoSeries::constant(a0->entries[i]);
    std::vector<RhoSeries> e(d * d);
    for (std::size_t i = 0; i < d * d; ++i) {
        if (g[i].is_zero()) continue;
        std::vector<Expr> c = g[i].coefficients();
        c[0] = Expr();
        e[i] = RhoSeries(std::move(c), truncation);
    }
    auto matmul = [d](const std::vector<RhoSeries>& x, const std::vector<RhoSeries>& y) {
        std::vector<RhoSeries> out(d * d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) {
                if (x[i * d + k].is_zero()) continue;
                for (std::size_t j = 0; j < d; ++j)
                    if (!y[k * d + j].is_zero()) out[i * d + j] = out[i * d + j] + x[i * d + k] * y[k * d + j];
            }
        return out;
    };
    mneg = matmul(a, e);
    for (auto& s : mneg) s = -s;
    std::vector<RhoSeries> inv = a, term = a;
    for (int j = 1; j < truncation; ++j) {
        term = matmul(mneg, term);
        for (std::size_t i = 0; i < d * d; ++i) inv[i] = inv[i] + term[i];
    }
    for (auto& s : inv)
        if (!s.is_zero()) s = s.truncated(truncation);

    auto deriv = [&](const RhoSeries& s, std::size_t k) -> RhoSeries {
        if (k == 0) return s.map([tid](const Expr& x) { return x.derivative(tid); });
        if (k == d - 1) return s.derivative_rho();
        const SymbolId x = base.id(k - 1);
        return s.map([x](const Expr& v) { return v.derivative(x, UnknownMode::Function); });
    };
    auto gamma = curvature::levi_civita_symbols<RhoSeries>(g, inv, d, deriv);
    return curvature::ricci_components<RhoSeries>(gamma, d, deriv, [m, d](std::size_t a, std::size_t b) {
        return (a >= 1 && b >= 1 && a <= m && b <= m && a <= b) || (a == d - 1 && b == d - 1);
    });
}

Expr block_coefficient(const std::vector<RhoSeries>& ric, std::size_t d, std::size_t i, std::size_t j, int k) {
    const RhoSeries& s = ric[(i + 1) * d + j + 1];
    return s.is_zero() ? Expr() : s.coefficient(k);
}

// g0-trace-free part of a symmetric (0,2) tensor.
TensorField trace_free(const MetricTensor& g0, const TensorField& r) {
    const std::size_t m = g0.dim();
    const TensorField& inv = g0.inverse();
    Expr tr;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (!inv(a, b).is_zero() && !r(a, b).is_zero()) tr += inv(a, b) * r(a, b);
    return r - g0.tensor() * (tr / Expr(static_cast<long>(m)));
}

TensorField symmetric_from(const Chart& chart, std::size_t m, const std::function<Expr(std::size_t, std::size_t)>& f) {
    std::vector<Expr> c(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) c[i * m + j] = c[j * m + i] = f(i, j);
    return TensorField(chart, {Slot::Lower, Slot::Lower}, std::move(c), {{0, 1}});
}

} // namespace

MetricTensor assemble_ansatz(const MetricTensor& g0, const std::vector<TensorField>& coefficients, std::size_t order) {
    if (coefficients.size() < order)
        throw ValidationError("bad_shape", "fewer coefficients than the requested order");
    const std::size_t m = g0.dim(), d = m + 2;
    for (std::size_t k = 0; k < order; ++k) {
        check_symmetric(coefficients[k], k + 1);
        if (coefficients[k].chart() != g0.chart())
            throw ValidationError("chart_mismatch", "coefficient chart differs from the base metric chart");
    }
    Chart amb = ambient_chart_over(g0.chart());
    const Expr t = amb.coord(0), rho = amb.coord(d - 1);
    std::vector<Expr> c(d * d);
    c[0] = Expr(2) * rho;
    c[d - 1] = c[(d - 1) * d] = t;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Expr h = g0(i, j);
            Expr power(1);
            for (std::size_t k = 0; k < order; ++k) {
                power *= rho;
                if (!coefficients[k](i, j).is_zero()) h += power * coefficients[k](i, j);
            }
            c[(i + 1) * d + j + 1] = t * t * h;
        }
    return MetricTensor::from_components(amb, std::move(c));
}

ExpansionResult fg_expand(const MetricTensor& g0, std::size_t order) {
    if (order < 1) throw ValidationError("bad_order", "expansion order must be at least 1");
    const std::size_t m = g0.dim(), d = m + 2;
    if (m < 2) throw ValidationError("dimension", "expansion needs dimension m >= 2");
    g0.inverse(); // degenerate base metrics fail here
    const Chart& chart = g0.chart();

    ExpansionResult result;
    result.dimension = m;
    result.order = order;

    for (std::size_t k = 1; k <= order; ++k) {
        std::vector<SymbolId> unknowns;
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        std::map<std::pair<std::size_t, std::size_t>, SymbolId> by_slot;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                SymbolId u = symbols::fresh_unknown("phi" + std::to_string(k) + "_" + std::to_string(i + 1) +
                                                    std::to_string(j + 1));
                unknowns.push_back(u);
                slots.emplace_back(i, j);
                by_slot[{i, j}] = u;
            }
        TensorField trial = symmetric_from(chart, m, [&](std::size_t i, std::size_t j) {
            return Expr::symbol(by_slot.at({i, j}));
        });
        std::vector<TensorField> phi = result.phi;
        phi.push_back(trial);
        auto ric = ricci_block(g0, phi, static_cast<int>(k) + 1);

        std::vector<Expr> equations;
        for (auto [i, j] : slots) {
            Expr eq = block_coefficient(ric, d, i, j, static_cast<int>(k) - 1);
            for (SymbolId s : eq.symbols())
                if (symbols::is_unknown(s) && symbols::info(s).derivative_order > 0)
                    throw MathError("derivative_of_unknown",
                                    "order " + std::to_string(k) + " equation " + pair_name(i, j) +
                                        " involves a derivative of an unknown coefficient");
            equations.push_back(eq);
        }
        LinearSolution sol = solve_linear(equations, unknowns);

        std::map<SymbolId, Expr> values = sol.values;
        if (!sol.free.empty()) {
            ExpansionResult::FreeFlag flag{k, {}, "set_to_zero"};
            for (SymbolId f : sol.free)
                for (std::size_t s = 0; s < unknowns.size(); ++s)
                    if (unknowns[s] == f) flag.components.push_back(pair_name(slots[s].first, slots[s].second));
            if (sol.consistent()) {
                TensorField general = symmetric_from(chart, m, [&](std::size_t i, std::size_t j) {
                    return sol.general.at(by_slot.at({i, j}));
                });
                std::vector<std::string> steps;
                std::vector<Expr> extra;
                // The rho-rho component of Ric at order k-2 constrains the trace.
                if (k >= 2) {
                    const RhoSeries& rr = ric[d * d - 1];
                    Expr e = rr.is_zero() ? Expr() : rr.coefficient(static_cast<int>(k) - 2);
                    for (SymbolId s : e.symbols())
                        if (symbols::is_unknown(s) && symbols::info(s).derivative_order > 0)
                            throw MathError("derivative_of_unknown",
                                            "order " + std::to_string(k) + " rho-rho equation involves a derivative");
                    std::map<SymbolId, Expr> gen(sol.general.begin(), sol.general.end());
                    e = e.substitute(gen);
                    if (!e.is_zero()) {
                        extra.push_back(e);
                        steps.push_back("rho_rho_equation");
                    }
                }
                std::vector<Expr> gauge = extra;
                TensorField tf = trace_free(g0, general);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = i; j < m; ++j)
                        if (!tf(i, j).is_zero()) gauge.push_back(tf(i, j));
                // Prefer the rho-rho equation plus a pure-trace phi^(k); fall
                // back to the rho-rho equation alone.
                LinearSolution fix = solve_linear(gauge, sol.free);
                if (fix.consistent()) {
                    steps.push_back("trace_free_gauge");
                } else {
                    fix = solve_linear(extra, sol.free);
                    if (!fix.consistent()) fix = solve_linear({}, sol.free);
                    if (extra.empty() || !fix.consistent()) steps.clear();
                }
                if (!fix.free.empty()) steps.push_back("set_to_zero");
                for (SymbolId u : unknowns) values[u] = sol.general.at(u).substitute(fix.values);
                flag.resolution.clear();
                for (const auto& st : steps) flag.resolution += (flag.resolution.empty() ? "" : "+") + st;
                if (flag.resolution.empty()) flag.resolution = "set_to_zero";
            }
            result.free_flags.push_back(flag);
        }
        TensorField solved = trial.map([&](const Expr& e) { return e.substitute(values); });

        const bool critical = m % 2 == 0 && k == m / 2;
        if (critical) {
            TensorField residual = symmetric_from(chart, m, [&](std::size_t i, std::size_t j) {
                return block_coefficient(ric, d, i, j, static_cast<int>(k) - 1).substitute(values);
            });
            TensorField obstruction = trace_free(g0, residual);
            for (const Expr& e : obstruction.components())
                if (e.has_unknowns())
                    throw MathError("internal", "critical-order residual still depends on unknowns");
            result.obstruction = obstruction;
            if (!obstruction.is_zero()) {
                result.obstructed = true;
                break;
            }
        }
        if (!sol.consistent())
            throw MathError("inconsistent", "order " + std::to_string(k) + " equations have no solution");
        result.phi.push_back(solved);
    }

    // Guard re-check: every solved order vanishes with all coefficients in place.
    const std::size_t solved = result.phi.size();
    if (solved > 0) {
        auto ric = ricci_block(g0, result.phi, static_cast<int>(solved) + 1);
        for (std::size_t k = 1; k <= solved; ++k) {
            TensorField r = symmetric_from(chart, m, [&](std::size_t i, std::size_t j) {
                return block_coefficient(ric, d, i, j, static_cast<int>(k) - 1);
            });
            if (!r.is_zero())
                throw MathError("guard", "order " + std::to_string(k) +
                                             " does not vanish after substituting the solved coefficients");
            result.residuals.push_back(r);
        }
    }
    return result;
}

TensorField obstruction_residual(const MetricTensor& g0) {
    const std::size_t m = g0.dim();
    if (m % 2 != 0) throw ValidationError("odd_dimension", "the obstruction is defined for even dimension only");
    ExpansionResult r = fg_expand(g0, m / 2);
    if (!r.obstruction) throw MathError("internal", "critical order was not reached");
    return *r.obstruction;
}

RicciReport ricci_flat_report(const MetricTensor& g) {
    TensorField ric = ricci(g);
    RicciReport report;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i; j < g.dim(); ++j) {
            RicciReport::Entry e{i, j, ric(i, j), std::nullopt};
            if (!e.value.is_zero()) {
                report.flat = false;
                e.witness = find_nonzero_point(e.value, g.chart());
            }
            report.entries.push_back(std::move(e));
        }
    return report;
}

} // namespace pwamb
