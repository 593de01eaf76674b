#pragma once

#include "pwamb/chart.hpp"
#include "pwamb/expr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>

namespace pwamb {

using Point = std::map<SymbolId, Rational>;

// Deterministic random rational points. Uses raw mt19937_64 output (never the
// implementation-defined std distributions) so sequences are portable.
class PointSampler {
public:
    explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t next_u64() { return rng_(); }
    // Uniform integer in [lo, hi].
    long next_int(long lo, long hi);
    // p/q with |p| <= 9, 1 <= q <= 5; positive when requested.
    Rational next_rational(bool positive);
    Point point(const Chart& chart);

private:
    std::mt19937_64 rng_;
};

// A point of `chart` where `e` evaluates to a nonzero value, avoiding poles.
std::optional<Point> find_nonzero_point(const Expr& e, const Chart& chart, std::uint64_t seed = 7,
                                        int attempts = 64);

// Point in chart coordinate names, for reports.
std::map<std::string, std::string> describe_point(const Point& p);

} // namespace pwamb
