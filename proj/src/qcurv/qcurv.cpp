#include "pwamb/qcurv.hpp"

#include "pwamb/error.hpp"

namespace pwamb {

namespace {

void require_normal_form(const MetricTensor& g) {
    const Chart& c = g.chart();
    const std::size_t d = c.dim();
    auto fail = [&](const std::string& why) {
        throw ValidationError("not_normal_form", "metric on '" + c.name() + "' is not in normal form: " + why);
    };
    if (d < 4 || c.coord_name(0) != "t" || c.coord_name(d - 1) != "rho") fail("chart is not (t, x, rho)");
    if (!c.is_positive(c.id(0))) fail("t is not declared positive");
    const Expr t = c.coord(0), rho = c.coord(d - 1);
    if (g(0, 0) != Expr(2) * rho) fail("g_tt != 2 rho");
    if (g(0, d - 1) != t) fail("g_trho != t");
    if (!g(d - 1, d - 1).is_zero()) fail("g_rhorho != 0");
    for (std::size_t i = 1; i + 1 < d; ++i)
        if (!g(0, i).is_zero() || !g(d - 1, i).is_zero()) fail("mixed t-x or rho-x terms");
}

} // namespace

Expr ambient_laplacian_power(const MetricTensor& g, std::size_t j, const std::string& t_name) {
    const Chart& c = g.chart();
    const std::size_t ti = c.require_index(t_name);
    if (!c.is_positive(c.id(ti)))
        throw ValidationError("not_positive", "coordinate '" + t_name + "' must be declared positive for ln");
    Expr f = Expr::ln(c.id(ti));
    for (std::size_t k = 0; k < j; ++k) {
        if (f.is_zero()) break;
        f = laplacian(g, f);
    }
    return f;
}

QReport q_curvature(const MetricTensor& g) {
    require_normal_form(g);
    const Chart& c = g.chart();
    const std::size_t m = c.dim() - 2;
    if (m % 2 != 0) throw ValidationError("odd_dimension", "Q-curvature needs even dimension m");
    QReport r;
    Expr f = Expr::ln(c.id(0));
    for (std::size_t j = 1; j <= m / 2; ++j) {
        f = f.is_zero() ? Expr() : laplacian(g, f);
        r.powers.push_back(f);
    }
    std::map<SymbolId, Expr> slice{{c.id(0), Expr(1)}, {c.id(c.dim() - 1), Expr()}};
    r.q = -f.substitute(slice);
    r.vanishes = r.q.is_zero();
    return r;
}

bool horizontal_annihilation_check(const MetricTensor& g, const Expr& f) {
    const Chart& c = g.chart();
    const std::size_t d = c.dim();
    if (d < 6 || d % 2 != 0 || c.coord_name(0) != "t" || c.coord_name(d - 1) != "rho")
        throw ValidationError("bad_chart", "not an ambient chart (t, x^A, p_A, rho)");
    const std::size_t n = d / 2 - 1;
    for (SymbolId s : f.symbols()) {
        SymbolId base = symbols::is_log(s) ? symbols::info(s).argument : s;
        auto idx = c.index_of(base);
        if (!idx)
            throw ValidationError("unknown_coordinate", "function uses '" + symbols::name(s) + "' outside the chart");
        if (*idx > n)
            throw ValidationError("not_horizontal", "function depends on fiber coordinate '" + c.coord_name(*idx) + "'");
    }
    return laplacian(g, f).is_zero();
}

} // namespace pwamb
