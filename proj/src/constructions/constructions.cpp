#include "pwamb/constructions.hpp"

#include "pwamb/error.hpp"
#include "pwamb/sampling.hpp"

namespace pwamb {

namespace {

void require_valid(const AffineConnection& d) {
    if (d.dim() < 2)
        throw ValidationError("dimension", "the construction needs a base of dimension n >= 2");
    d.validate();
}

std::vector<std::string> base_positive(const Chart& base) { return base.positive_names(); }

bool is_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void check_split_signature(const MetricTensor& g, std::size_t n) {
    PointSampler sampler(5);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Point p = sampler.point(g.chart());
        RationalMatrix m(g.dim(), std::vector<Rational>(g.dim()));
        try {
            for (std::size_t i = 0; i < g.dim(); ++i)
                for (std::size_t j = 0; j < g.dim(); ++j) m[i][j] = g(i, j).evaluate(p);
        } catch (const MathError&) {
            continue;
        }
        Signature s = signature(m);
        if (s.positive != n || s.negative != n || s.zero != 0)
            throw MathError("signature", "metric is not of split signature (" + std::to_string(s.positive) + "," +
                                             std::to_string(s.negative) + "," + std::to_string(s.zero) + ")");
        return;
    }
    throw MathError("signature", "no regular sample point found for the signature check");
}

} // namespace

std::vector<std::string> fiber_names(const Chart& base, const std::string& prefix) {
    std::vector<std::string> out;
    for (const std::string& c : base.coords()) {
        if (c.size() > 1 && c[0] == 'x' && is_digits(c.substr(1)))
            out.push_back(prefix + c.substr(1));
        else
            out.push_back(prefix + "_" + c);
    }
    return out;
}

Chart cotangent_chart(const Chart& base, const std::string& prefix) {
    std::vector<std::string> coords = base.coords();
    for (auto& f : fiber_names(base, prefix)) coords.push_back(f);
    return Chart("T*" + base.name(), coords, base_positive(base));
}

Chart cone_base_chart(const Chart& base) {
    std::vector<std::string> coords{"x0"};
    coords.insert(coords.end(), base.coords().begin(), base.coords().end());
    auto pos = base_positive(base);
    pos.push_back("x0");
    return Chart("C(" + base.name() + ")", coords, pos);
}

Chart cone_chart(const Chart& base) {
    std::vector<std::string> coords{"x0"};
    coords.insert(coords.end(), base.coords().begin(), base.coords().end());
    for (auto& f : fiber_names(base, "y")) coords.push_back(f);
    coords.push_back("y0");
    auto pos = base_positive(base);
    pos.push_back("x0");
    return Chart("T*C(" + base.name() + ")", coords, pos);
}

Chart ambient_chart(const Chart& base) {
    std::vector<std::string> coords{"t"};
    coords.insert(coords.end(), base.coords().begin(), base.coords().end());
    for (auto& f : fiber_names(base, "p")) coords.push_back(f);
    coords.push_back("rho");
    auto pos = base_positive(base);
    pos.push_back("t");
    return Chart("ambient(" + base.name() + ")", coords, pos);
}

Chart ambient_chart_over(const Chart& base) {
    std::vector<std::string> coords{"t"};
    coords.insert(coords.end(), base.coords().begin(), base.coords().end());
    coords.push_back("rho");
    auto pos = base_positive(base);
    pos.push_back("t");
    return Chart("ambient(" + base.name() + ")", coords, pos);
}

MetricTensor patterson_walker(const AffineConnection& d, const std::string& prefix) {
    require_valid(d);
    const std::size_t n = d.dim();
    Chart chart = cotangent_chart(d.chart(), prefix);
    const std::size_t m = 2 * n;
    std::vector<Expr> g(m * m);
    for (std::size_t a = 0; a < n; ++a) {
        g[a * m + n + a] = Expr(1);
        g[(n + a) * m + a] = Expr(1);
        for (std::size_t b = 0; b < n; ++b) {
            Expr v;
            for (std::size_t c = 0; c < n; ++c)
                if (!d(a, c, b).is_zero()) v -= Expr(2) * chart.coord(n + c) * d(a, c, b);
            g[a * m + b] = v;
        }
    }
    MetricTensor metric = MetricTensor::from_components(chart, std::move(g));
    check_split_signature(metric, n);
    return metric;
}

AffineConnection thomas_cone(const AffineConnection& d) {
    require_valid(d);
    const std::size_t n = d.dim(), m = n + 1;
    Chart chart = cone_base_chart(d.chart());
    TensorField ric = ricci(d);
    Expr x0 = chart.coord(0);
    Expr inv_x0 = Expr(1) / x0;
    Expr factor = x0 / Expr(static_cast<long>(n - 1));
    std::vector<Expr> gamma(m * m * m);
    auto at = [&](std::size_t a, std::size_t c, std::size_t b) -> Expr& { return gamma[(a * m + c) * m + b]; };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) at(a + 1, c + 1, b + 1) = d(a, c, b);
            at(a + 1, 0, b + 1) = -factor * ric(a, b);
        }
    for (std::size_t b = 0; b < n; ++b) {
        at(0, b + 1, b + 1) = inv_x0;
        at(b + 1, b + 1, 0) = inv_x0;
    }
    // volume density sigma^p x0^(n q) with exponent 1/q when the base exponent is p/q
    const Rational& e = d.volume_exponent();
    const long p = e.get_num().get_si(), q = e.get_den().get_si();
    Expr density = d.volume_density().pow(static_cast<int>(p)) * x0.pow(static_cast<int>(n * q));
    return AffineConnection(chart, std::move(gamma), density, Rational(1, q));
}

MetricTensor cone_pw_formula(const AffineConnection& d) {
    require_valid(d);
    const std::size_t n = d.dim(), m = 2 * n + 2;
    Chart chart = cone_chart(d.chart());
    TensorField ric = ricci(d);
    const Expr x0 = chart.coord(0), y0 = chart.coord(m - 1);
    auto y = [&](std::size_t a) { return chart.coord(n + 1 + a); };
    std::vector<Expr> g(m * m);
    auto set = [&](std::size_t i, std::size_t j, const Expr& v) {
        g[i * m + j] = v;
        g[j * m + i] = v;
    };
    set(0, m - 1, Expr(1));
    for (std::size_t a = 0; a < n; ++a) {
        set(a + 1, n + 1 + a, Expr(1));
        set(0, a + 1, Expr(-2) * y(a) / x0);
        for (std::size_t b = a; b < n; ++b) {
            Expr v = Expr(2) * x0 * y0 * ric(a, b) / Expr(static_cast<long>(n - 1));
            for (std::size_t c = 0; c < n; ++c)
                if (!d(a, c, b).is_zero()) v -= Expr(2) * y(c) * d(a, c, b);
            set(a + 1, b + 1, v);
        }
    }
    return MetricTensor::from_components(chart, std::move(g));
}

MetricTensor cone_pw(const AffineConnection& d) {
    MetricTensor formula = cone_pw_formula(d);
    MetricTensor via_thomas = patterson_walker(thomas_cone(d), "y").permuted_to(formula.chart());
    if (via_thomas != formula)
        throw MathError("diagram", "cone metric from the Thomas connection differs from the closed form");
    return formula;
}

MetricTensor ambient_pw(const AffineConnection& d) {
    require_valid(d);
    const std::size_t n = d.dim(), m = 2 * n + 2;
    Chart chart = ambient_chart(d.chart());
    TensorField ric = ricci(d);
    const Expr t = chart.coord(0), rho = chart.coord(m - 1), t2 = t * t;
    auto p = [&](std::size_t a) { return chart.coord(n + 1 + a); };
    std::vector<Expr> g(m * m);
    auto set = [&](std::size_t i, std::size_t j, const Expr& v) {
        g[i * m + j] = v;
        g[j * m + i] = v;
    };
    set(0, 0, Expr(2) * rho);
    set(0, m - 1, t);
    for (std::size_t a = 0; a < n; ++a) {
        set(a + 1, n + 1 + a, t2);
        for (std::size_t b = a; b < n; ++b) {
            Expr v = Expr(2) * rho * ric(a, b) / Expr(static_cast<long>(n - 1));
            for (std::size_t c = 0; c < n; ++c)
                if (!d(a, c, b).is_zero()) v -= Expr(2) * p(c) * d(a, c, b);
            set(a + 1, b + 1, t2 * v);
        }
    }
    return MetricTensor::from_components(chart, std::move(g));
}

CoordinateMap fg_map(const Chart& base) {
    const std::size_t n = base.dim();
    Chart amb = ambient_chart(base), cone = cone_chart(base);
    const Expr t = amb.coord(0), rho = amb.coord(2 * n + 1);
    CoordinateMap map{amb, cone, {}};
    map.components.push_back(t);
    for (std::size_t a = 0; a < n; ++a) map.components.push_back(amb.coord(a + 1));
    for (std::size_t a = 0; a < n; ++a) map.components.push_back(t * t * amb.coord(n + 1 + a));
    map.components.push_back(t * rho);
    return map;
}

CoordinateMap inverse_fg_map(const Chart& base) {
    const std::size_t n = base.dim();
    Chart amb = ambient_chart(base), cone = cone_chart(base);
    const Expr x0 = cone.coord(0), y0 = cone.coord(2 * n + 1);
    CoordinateMap map{cone, amb, {}};
    map.components.push_back(x0);
    for (std::size_t a = 0; a < n; ++a) map.components.push_back(cone.coord(a + 1));
    for (std::size_t a = 0; a < n; ++a) map.components.push_back(cone.coord(n + 1 + a) / (x0 * x0));
    map.components.push_back(y0 / x0);
    return map;
}

Chart base_of_cone_chart(const Chart& cone) {
    const std::size_t dim = cone.dim();
    if (dim < 6 || dim % 2 != 0 || cone.coord_name(0) != "x0" || cone.coord_name(dim - 1) != "y0")
        throw ValidationError("bad_chart", "chart '" + cone.name() + "' is not a cone chart (x0, x^A, y_A, y0)");
    const std::size_t n = dim / 2 - 1;
    std::vector<std::string> coords(cone.coords().begin() + 1, cone.coords().begin() + 1 + n);
    std::vector<std::string> pos;
    for (const auto& c : coords)
        if (cone.is_positive(c)) pos.push_back(c);
    Chart base("N", coords, pos);
    if (cone_chart(base) != cone)
        throw ValidationError("bad_chart", "chart '" + cone.name() + "' is not a cone chart (x0, x^A, y_A, y0)");
    return base;
}

MetricTensor normalize_to_fg(const MetricTensor& cone_metric) {
    Chart base = base_of_cone_chart(cone_metric.chart());
    return pullback_metric(fg_map(base), cone_metric);
}

MetricTensor einstein_ambient(const MetricTensor& g, const Rational& lambda) {
    const std::size_t m = g.dim();
    if (m < 2) throw ValidationError("dimension", "the Einstein ambient needs dimension m >= 2");
    TensorField ric = ricci(g);
    const Expr c(Rational(2 * lambda * static_cast<long>(m - 1)));
    if (ric != g.tensor() * c)
        throw ValidationError("not_einstein", "Ric(g) != 2 lambda (m - 1) g for lambda = " + to_string(lambda));
    Chart chart = ambient_chart_over(g.chart());
    const std::size_t d = m + 2;
    const Expr t = chart.coord(0), rho = chart.coord(d - 1);
    const Expr s = Expr(1) + Expr(lambda) * rho;
    const Expr warp = t * t * s * s;
    std::vector<Expr> comps(d * d);
    comps[0] = Expr(2) * rho;
    comps[d - 1] = t;
    comps[(d - 1) * d] = t;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (!g(i, j).is_zero()) comps[(i + 1) * d + j + 1] = warp * g(i, j);
    MetricTensor out = MetricTensor::from_components(chart, std::move(comps));
    if (!ricci(out).is_zero()) throw MathError("not_ricci_flat", "Einstein ambient metric is not Ricci-flat");
    return out;
}

CanonicalFields canonical_fields(const AffineConnection& d) {
    const std::size_t n = d.dim();
    Chart cb = cone_base_chart(d.chart());
    Chart amb = ambient_chart(d.chart());
    const std::size_t m = 2 * n + 2;
    std::vector<Expr> z(n + 1), k(m), killing(m), euler(m);
    z[0] = cb.coord(0);
    euler[0] = amb.coord(0);
    killing[0] = amb.coord(0);
    for (std::size_t i = n + 1; i < m; ++i) {
        k[i] = Expr(2) * amb.coord(i);
        killing[i] = Expr(-2) * amb.coord(i);
    }
    CanonicalFields f{TensorField::vector_field(cb, z), TensorField::vector_field(amb, k),
                      TensorField::vector_field(amb, killing), TensorField::vector_field(amb, euler)};
    if (f.euler != f.killing + f.k) throw MathError("internal", "Euler field is not Killing + homothety");
    return f;
}

std::vector<TensorField> fiber_frame(const Chart& base) {
    Chart amb = ambient_chart(base);
    const std::size_t n = base.dim(), m = 2 * n + 2;
    std::vector<TensorField> out;
    for (std::size_t i = n + 1; i < m; ++i) {
        std::vector<Expr> v(m);
        v[i] = Expr(1);
        out.push_back(TensorField::vector_field(amb, v));
    }
    return out;
}

ConstructionBundle build_bundle(const AffineConnection& d) {
    ConstructionBundle b;
    b.d = d;
    b.base = d.chart();
    b.pw = patterson_walker(d);
    b.cotangent = b.pw.chart();
    b.thomas = thomas_cone(d);
    b.cone_base = b.thomas.chart();
    b.cone_metric = cone_pw(d);
    b.cone = b.cone_metric.chart();
    b.ambient_metric = ambient_pw(d);
    b.ambient = b.ambient_metric.chart();
    b.fields = canonical_fields(d);
    return b;
}

} // namespace pwamb
