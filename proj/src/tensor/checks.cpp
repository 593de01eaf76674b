#include "pwamb/error.hpp"
#include "pwamb/linear_solve.hpp"
#include "pwamb/sampling.hpp"
#include "pwamb/tensor.hpp"

namespace pwamb {

namespace {

using Matching = std::vector<std::pair<std::size_t, std::size_t>>;

void matchings(std::vector<std::size_t>& open, Matching& cur, std::vector<Matching>& out) {
    if (open.empty()) {
        out.push_back(cur);
        return;
    }
    const std::size_t first = open.front();
    for (std::size_t i = 1; i < open.size(); ++i) {
        const std::size_t partner = open[i];
        std::vector<std::size_t> rest;
        for (std::size_t j = 1; j < open.size(); ++j)
            if (j != i) rest.push_back(open[j]);
        cur.emplace_back(first, partner);
        matchings(rest, cur, out);
        cur.pop_back();
    }
}

std::string label(const Matching& m) {
    std::string s;
    for (auto [a, b] : m) s += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    return s;
}

} // namespace

IsotropyReport check_isotropic(const MetricTensor& g, const TensorField& t) {
    for (Slot s : t.slots())
        if (s != Slot::Lower) throw ValidationError("bad_tensor", "isotropy check needs a covariant tensor");
    if (t.chart() != g.chart()) throw ValidationError("chart_mismatch", "metric and tensor charts differ");
    const std::size_t r = t.rank(), n = g.dim();
    const TensorField& inv = g.inverse();
    std::vector<std::pair<std::size_t, std::size_t>> inv_nz;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (!inv(a, b).is_zero()) inv_nz.emplace_back(a, b);

    std::vector<std::size_t> open(2 * r);
    for (std::size_t i = 0; i < 2 * r; ++i) open[i] = i;
    Matching cur;
    std::vector<Matching> all;
    matchings(open, cur, all);

    IsotropyReport report;
    std::vector<std::size_t> idx(2 * r);
    for (const Matching& m : all) {
        Expr total;
        std::function<void(std::size_t, const Expr&)> walk = [&](std::size_t p, const Expr& weight) {
            if (p == m.size()) {
                std::span<const std::size_t> left(idx.data(), r), right(idx.data() + r, r);
                const Expr& x = t.at(left);
                if (x.is_zero()) return;
                const Expr& y = t.at(right);
                if (y.is_zero()) return;
                total += weight * x * y;
                return;
            }
            for (auto [a, b] : inv_nz) {
                idx[m[p].first] = a;
                idx[m[p].second] = b;
                walk(p + 1, weight * inv(a, b));
            }
        };
        walk(0, Expr(1));
        if (!total.is_zero()) {
            report.isotropic = false;
            report.failures.emplace_back(label(m), total);
        }
    }
    return report;
}

DistributionReport check_parallel_distribution(const MetricTensor& g, const std::vector<TensorField>& frame) {
    const Chart& chart = g.chart();
    const std::size_t n = g.dim(), k = frame.size();
    for (const TensorField& v : frame)
        if (v.slots() != std::vector<Slot>{Slot::Upper} || v.chart() != chart)
            throw ValidationError("bad_frame", "frame entries must be vector fields on the metric chart");

    // Independence at a random rational point (retry past poles).
    PointSampler sampler(11);
    bool independent = false;
    for (int attempt = 0; attempt < 32 && !independent; ++attempt) {
        Point p = sampler.point(chart);
        try {
            RationalMatrix m(k, std::vector<Rational>(n));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t a = 0; a < n; ++a) m[i][a] = frame[i](a).evaluate(p);
            independent = rank(m) == k;
            if (!independent) break;
        } catch (const MathError&) {
        }
    }
    if (!independent) throw ValidationError("dependent_frame", "frame is linearly dependent");

    DistributionReport report;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            Expr s;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (!g(a, b).is_zero() && !frame[i](a).is_zero() && !frame[j](b).is_zero())
                        s += g(a, b) * frame[i](a) * frame[j](b);
            if (!s.is_zero()) {
                report.isotropic = false;
                report.failures.push_back("g(V" + std::to_string(i + 1) + ", V" + std::to_string(j + 1) +
                                          ") = " + s.str());
            }
        }

    const AffineConnection& conn = g.levi_civita();
    std::vector<SymbolId> alphas;
    for (std::size_t i = 0; i < k; ++i) alphas.push_back(symbols::fresh_unknown("alpha"));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<Expr> eqs;
            for (std::size_t a = 0; a < n; ++a) {
                Expr w = frame[i](a).derivative(chart.id(c));
                for (std::size_t d = 0; d < n; ++d)
                    if (!conn(c, a, d).is_zero() && !frame[i](d).is_zero()) w += conn(c, a, d) * frame[i](d);
                for (std::size_t l = 0; l < k; ++l)
                    if (!frame[l](a).is_zero()) w -= Expr::symbol(alphas[l]) * frame[l](a);
                if (!w.is_zero()) eqs.push_back(w);
            }
            if (eqs.empty()) continue;
            if (!solve_linear(eqs, alphas).consistent()) {
                report.parallel = false;
                report.failures.push_back("nabla_" + chart.coord_name(c) + " V" + std::to_string(i + 1) +
                                          " leaves the distribution");
            }
        }
    return report;
}

} // namespace pwamb
