#include "pwamb/cli.hpp"
#include "pwamb/constructions.hpp"
#include "pwamb/error.hpp"
#include "pwamb/fg_solver.hpp"
#include "pwamb/sampling.hpp"

#include <chrono>
#include <functional>

namespace pwamb::cli {

namespace {

std::string index_label(const TensorField& t, const TensorField::Index& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + t.chart().coord_name(idx[i]);
    return s;
}

// Null when equal; otherwise the first differing component and a point
// where the difference is nonzero.
Json difference_witness(const TensorField& a, const TensorField& b) {
    if (!a.same_shape(b)) return Json{{"reason", "shape or chart mismatch"}};
    for (std::size_t f = 0; f < a.components().size(); ++f) {
        Expr diff = a(f) - b(f);
        if (diff.is_zero()) continue;
        Json w;
        w["component"] = index_label(a, a.unflat(f));
        w["difference"] = diff.str();
        if (auto p = find_nonzero_point(diff, a.chart())) w["point"] = describe_point(*p);
        return w;
    }
    return nullptr;
}

Json zero_witness(const TensorField& t) { return difference_witness(t, TensorField(t.chart(), t.slots())); }

CheckResult check(const std::string& name, const std::function<Json()>& body) {
    CheckResult r;
    r.name = name;
    auto start = std::chrono::steady_clock::now();
    r.witness = body();
    r.pass = r.witness.is_null();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CheckResult> ricci_suite(const AffineConnection& d) {
    std::vector<CheckResult> out;
    out.push_back(check("ricci.ambient_flat", [&] { return zero_witness(ricci(ambient_pw(d))); }));
    out.push_back(check("ricci.cone_metric_flat", [&] { return zero_witness(ricci(cone_pw_formula(d))); }));
    out.push_back(check("ricci.thomas_cone_flat", [&] { return zero_witness(ricci(thomas_cone(d))); }));
    return out;
}

std::vector<CheckResult> diagram_suite(const AffineConnection& d) {
    std::vector<CheckResult> out;
    out.push_back(check("diagram.pw_of_thomas_is_cone_metric", [&] {
        MetricTensor formula = cone_pw_formula(d);
        MetricTensor via = patterson_walker(thomas_cone(d), "y").permuted_to(formula.chart());
        return difference_witness(via.tensor(), formula.tensor());
    }));
    out.push_back(check("diagram.normalized_cone_is_ambient", [&] {
        return difference_witness(normalize_to_fg(cone_pw_formula(d)).tensor(), ambient_pw(d).tensor());
    }));
    out.push_back(check("diagram.euler_field_parallel", [&] {
        AffineConnection cone = thomas_cone(d);
        TensorField nz = covariant_derivative(cone, canonical_fields(d).z);
        const std::size_t m = cone.dim();
        std::vector<Expr> id(m * m);
        for (std::size_t i = 0; i < m; ++i) id[i * m + i] = Expr(1);
        return difference_witness(nz, TensorField(cone.chart(), nz.slots(), id));
    }));
    out.push_back(check("diagram.restriction_is_pw", [&] {
        MetricTensor amb = ambient_pw(d), pw = patterson_walker(d);
        const Chart& c = amb.chart();
        std::map<SymbolId, Expr> slice{{c.id(0), Expr(1)}, {c.id(c.dim() - 1), Expr()}};
        const std::size_t m = pw.dim();
        std::vector<Expr> r(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) r[i * m + j] = amb(i + 1, j + 1).substitute(slice);
        return difference_witness(TensorField(pw.chart(), {Slot::Lower, Slot::Lower}, r), pw.tensor());
    }));
    return out;
}

std::vector<CheckResult> symmetry_suite(const AffineConnection& d) {
    MetricTensor g = ambient_pw(d);
    CanonicalFields f = canonical_fields(d);
    const TensorField twice = g.tensor() * Expr(2);
    std::vector<CheckResult> out;
    out.push_back(check("symmetry.euler_homogeneity",
                        [&] { return difference_witness(lie_derivative(f.euler, g.tensor()), twice); }));
    out.push_back(
        check("symmetry.homothety", [&] { return difference_witness(lie_derivative(f.k, g.tensor()), twice); }));
    out.push_back(check("symmetry.killing", [&] { return zero_witness(lie_derivative(f.killing, g.tensor())); }));
    out.push_back(
        check("symmetry.euler_decomposition", [&] { return difference_witness(f.euler, f.killing + f.k); }));
    return out;
}

std::vector<CheckResult> distribution_suite(const AffineConnection& d) {
    std::vector<CheckResult> out;
    out.push_back(check("distribution.fiber_parallel_isotropic", [&]() -> Json {
        DistributionReport r = check_parallel_distribution(ambient_pw(d), fiber_frame(d.chart()));
        if (r.passed()) return nullptr;
        return Json{{"failures", r.failures}};
    }));
    return out;
}

std::vector<CheckResult> isotropy_suite(const AffineConnection& d) {
    MetricTensor g = patterson_walker(d);
    TensorField ric = ricci(g);
    std::vector<CheckResult> out;
    auto iso = [&](const TensorField& t) -> Json {
        IsotropyReport r = check_isotropic(g, t);
        if (r.isotropic) return nullptr;
        Json w = Json::array();
        for (const auto& [label, value] : r.failures) w.push_back({{"contraction", label}, {"value", value.str()}});
        return Json{{"failures", w}};
    };
    out.push_back(check("isotropy.pw_ricci", [&] { return iso(ric); }));
    out.push_back(check("isotropy.pw_ricci_derivative",
                        [&] { return iso(covariant_derivative(g.levi_civita(), ric)); }));
    CheckResult prop = check("isotropy.ricci_proportional_to_base", [&]() -> Json {
        const std::size_t n = d.dim();
        TensorField base_ric = ricci(d);
        // dx-dx block only
        for (std::size_t i = 0; i < 2 * n; ++i)
            for (std::size_t j = 0; j < 2 * n; ++j)
                if ((i >= n || j >= n) && !ric(i, j).is_zero())
                    return Json{{"component", g.chart().coord_name(i) + "," + g.chart().coord_name(j)},
                                {"reason", "Ricci tensor is not supported on the base block"}};
        std::optional<Expr> c;
        for (std::size_t i = 0; i < n && !c; ++i)
            for (std::size_t j = 0; j < n && !c; ++j)
                if (!base_ric(i, j).is_zero()) c = ric(i, j) / base_ric(i, j);
        if (!c) return zero_witness(ric);
        if (!c->is_constant()) return Json{{"reason", "ratio is not constant"}, {"ratio", c->str()}};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (ric(i, j) != *c * base_ric(i, j))
                    return Json{{"component", g.chart().coord_name(i) + "," + g.chart().coord_name(j)},
                                {"reason", "ratio differs from " + c->str()}};
        return nullptr;
    });
    {
        // Report the constant even on success.
        const std::size_t n = d.dim();
        TensorField base_ric = ricci(d);
        Json constant = nullptr;
        for (std::size_t i = 0; i < n && constant.is_null(); ++i)
            for (std::size_t j = 0; j < n && constant.is_null(); ++j)
                if (!base_ric(i, j).is_zero()) constant = (ric(i, j) / base_ric(i, j)).str();
        prop.details = Json{{"constant", constant}};
    }
    out.push_back(prop);
    return out;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"ricci", "diagram", "symmetry", "distribution", "isotropy"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const AffineConnection& d) {
    if (suite == "ricci") return ricci_suite(d);
    if (suite == "diagram") return diagram_suite(d);
    if (suite == "symmetry") return symmetry_suite(d);
    if (suite == "distribution") return distribution_suite(d);
    if (suite == "isotropy") return isotropy_suite(d);
    throw ValidationError("unknown_suite", "unknown suite '" + suite + "'");
}

} // namespace pwamb::cli
