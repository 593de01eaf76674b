#include "pwamb/sampling.hpp"

#include "pwamb/error.hpp"

namespace pwamb {

long PointSampler::next_int(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(rng_() % span);
}

Rational PointSampler::next_rational(bool positive) {
    long p = positive ? next_int(1, 9) : next_int(-9, 9);
    long q = next_int(1, 5);
    Rational r(p, q);
    r.canonicalize();
    return r;
}

Point PointSampler::point(const Chart& chart) {
    Point pt;
    for (SymbolId id : chart.ids()) pt[id] = next_rational(chart.is_positive(id));
    return pt;
}

std::optional<Point> find_nonzero_point(const Expr& e, const Chart& chart, std::uint64_t seed, int attempts) {
    if (e.is_zero()) return std::nullopt;
    PointSampler sampler(seed);
    for (int i = 0; i < attempts; ++i) {
        Point p = sampler.point(chart);
        try {
            if (e.evaluate(p) != 0) return p;
        } catch (const MathError&) {
            // pole or unassigned symbol: try another point
        }
    }
    return std::nullopt;
}

std::map<std::string, std::string> describe_point(const Point& p) {
    std::map<std::string, std::string> out;
    for (const auto& [id, v] : p) out[symbols::name(id)] = to_string(v);
    return out;
}

} // namespace pwamb
