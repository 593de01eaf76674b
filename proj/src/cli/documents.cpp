#include "pwamb/cli.hpp"

#include "pwamb/error.hpp"
#include "pwamb/sampling.hpp"

#include <charconv>
#include <functional>

namespace pwamb::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ValidationError("bad_document", msg); }

std::string require_string(const Json& j, const std::string& what) {
    if (!j.is_string()) bad(what + " must be a string");
    return j.get<std::string>();
}

std::vector<std::string> string_list(const Json& j, const std::string& what) {
    if (!j.is_array()) bad(what + " must be a list of strings");
    std::vector<std::string> out;
    for (const Json& e : j) out.push_back(require_string(e, what + " entry"));
    return out;
}

std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : key) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::optional<std::size_t> parse_index(const std::string& s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

// 0-based slot from a 1-based index or a coordinate name.
std::size_t slot_of(const std::string& part, const Chart& chart, const std::string& key) {
    if (auto i = parse_index(part)) {
        if (*i < 1 || *i > chart.dim())
            throw ValidationError("index_out_of_range", "index " + part + " in '" + key + "' is out of range");
        return *i - 1;
    }
    if (auto i = chart.index_of(part)) return *i;
    throw ValidationError("index_out_of_range", "'" + part + "' in '" + key + "' is not a coordinate");
}

std::string gamma_name(std::size_t a, std::size_t c, std::size_t b) {
    return "Gamma_" + std::to_string(a + 1) + "^" + std::to_string(c + 1) + "_" + std::to_string(b + 1);
}

} // namespace

ConnectionSpec spec_from_json(const Json& doc) {
    if (!doc.is_object()) bad("connection spec must be an object");
    ConnectionSpec s;
    if (doc.contains("name")) s.name = require_string(doc["name"], "name");
    if (!doc.contains("coordinates")) bad("connection spec needs 'coordinates'");
    s.coordinates = string_list(doc["coordinates"], "coordinates");
    if (doc.contains("positive")) s.positive = string_list(doc["positive"], "positive");
    if (doc.contains("christoffel")) {
        if (!doc["christoffel"].is_object()) bad("'christoffel' must be an object");
        for (auto it = doc["christoffel"].begin(); it != doc["christoffel"].end(); ++it)
            s.christoffel[it.key()] = require_string(it.value(), "christoffel entry " + it.key());
    }
    if (doc.contains("volume")) s.volume = require_string(doc["volume"], "volume");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        static const std::vector<std::string> known{"name", "coordinates", "positive", "christoffel", "volume", "kind"};
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            bad("unknown field '" + it.key() + "' in connection spec");
    }
    return s;
}

Json spec_to_json(const ConnectionSpec& spec) {
    Json j;
    j["kind"] = "connection";
    j["name"] = spec.name;
    j["coordinates"] = spec.coordinates;
    if (!spec.positive.empty()) j["positive"] = spec.positive;
    j["christoffel"] = Json::object();
    for (const auto& [k, v] : spec.christoffel) j["christoffel"][k] = v;
    j["volume"] = spec.volume;
    return j;
}

AffineConnection to_connection(const ConnectionSpec& spec) {
    Chart chart(spec.name, spec.coordinates, spec.positive);
    const std::size_t n = chart.dim();
    std::vector<Expr> gamma(n * n * n);
    std::vector<bool> given(n * n * n, false);
    for (const auto& [key, text] : spec.christoffel) {
        auto parts = split_key(key);
        if (parts.size() != 3)
            throw ValidationError("bad_index", "christoffel key '" + key + "' must have the form \"A,C,B\"");
        std::size_t a = slot_of(parts[0], chart, key), c = slot_of(parts[1], chart, key),
                    b = slot_of(parts[2], chart, key);
        Expr value = parse_expr(text, chart);
        const std::size_t f = (a * n + c) * n + b;
        if (given[f] && gamma[f] != value)
            throw ValidationError("duplicate_entry", gamma_name(a, c, b) + " is given twice with different values");
        gamma[f] = value;
        given[f] = true;
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const std::size_t f = (a * n + c) * n + b, g = (b * n + c) * n + a;
                if (given[f] && given[g]) {
                    if (gamma[f] != gamma[g])
                        throw ValidationError("torsion", gamma_name(a, c, b) + " != " + gamma_name(b, c, a));
                } else if (given[f]) {
                    gamma[g] = gamma[f];
                } else if (given[g]) {
                    gamma[f] = gamma[g];
                }
            }
    Expr volume = parse_expr(spec.volume, chart);
    if (volume.is_zero()) throw ValidationError("volume", "volume density must be nonzero");
    return AffineConnection(chart, std::move(gamma), volume);
}

Json chart_to_json(const Chart& c) {
    Json j;
    j["name"] = c.name();
    j["coordinates"] = c.coords();
    j["positive"] = c.positive_names();
    return j;
}

Json connection_to_json(const AffineConnection& d, const std::string& name) {
    Json j;
    j["kind"] = "connection";
    j["name"] = name;
    j["chart"] = chart_to_json(d.chart());
    j["christoffel"] = Json::object();
    const std::size_t n = d.dim();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t b = a; b < n; ++b)
                if (!d(a, c, b).is_zero())
                    j["christoffel"][std::to_string(a + 1) + "," + std::to_string(c + 1) + "," + std::to_string(b + 1)] =
                        d(a, c, b).str();
    j["volume"] = d.volume_density().str();
    j["volume_exponent"] = to_string(d.volume_exponent());
    return j;
}

Json tensor_to_json(const TensorField& t) {
    Json comps = Json::object();
    for (std::size_t f = 0; f < t.components().size(); ++f) {
        auto idx = t.unflat(f);
        bool canonical = true;
        for (auto [a, b] : t.symmetries())
            if (idx[a] > idx[b]) canonical = false;
        if (!canonical) continue;
        std::string key;
        for (std::size_t s = 0; s < idx.size(); ++s) key += (s ? "," : "") + t.chart().coord_name(idx[s]);
        comps[key] = t(f).str();
    }
    return comps;
}

Json metric_to_json(const MetricTensor& g) {
    Json j;
    j["kind"] = "metric";
    j["chart"] = chart_to_json(g.chart());
    Json comps = Json::object();
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t k = i; k < g.dim(); ++k)
            comps[g.chart().coord_name(i) + "," + g.chart().coord_name(k)] = g(i, k).str();
    j["components"] = comps;
    return j;
}

MetricTensor metric_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("chart") || !doc.contains("components"))
        bad("metric document needs 'chart' and 'components'");
    const Json& cj = doc["chart"];
    if (!cj.is_object() || !cj.contains("coordinates")) bad("chart needs 'coordinates'");
    std::string name = cj.contains("name") ? require_string(cj["name"], "chart name") : std::string("M");
    std::vector<std::string> pos = cj.contains("positive") ? string_list(cj["positive"], "positive")
                                                           : std::vector<std::string>{};
    Chart chart(name, string_list(cj["coordinates"], "coordinates"), pos);
    const std::size_t n = chart.dim();
    std::vector<Expr> comps(n * n);
    std::vector<bool> given(n * n, false);
    if (!doc["components"].is_object()) bad("'components' must be an object");
    for (auto it = doc["components"].begin(); it != doc["components"].end(); ++it) {
        auto parts = split_key(it.key());
        if (parts.size() != 2) throw ValidationError("bad_index", "component key '" + it.key() + "' must be \"i,j\"");
        std::size_t i = slot_of(parts[0], chart, it.key()), k = slot_of(parts[1], chart, it.key());
        Expr v = parse_expr(require_string(it.value(), "component " + it.key()), chart);
        for (auto [a, b] : {std::pair{i, k}, std::pair{k, i}}) {
            if (given[a * n + b] && comps[a * n + b] != v)
                throw ValidationError("asymmetric_metric", "component " + it.key() + " conflicts with its mirror");
            comps[a * n + b] = v;
            given[a * n + b] = true;
        }
    }
    return MetricTensor::from_components(chart, std::move(comps));
}

std::vector<ConnectionSpec> generate_corpus(std::size_t count, std::size_t n, unsigned degree, std::uint64_t seed) {
    if (n < 2 || n > 8) throw ValidationError("infeasible", "corpus dimension must be between 2 and 8");
    if (degree > 6) throw ValidationError("infeasible", "corpus degree must be at most 6");
    PointSampler rng(seed);
    std::vector<std::string> coords;
    for (std::size_t i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
    Chart chart("corpus", coords);

    // Exponent vectors of total degree <= degree in a fixed order.
    std::vector<std::vector<unsigned>> monomials;
    std::vector<unsigned> e(n, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i == n) {
            monomials.push_back(e);
            return;
        }
        for (unsigned d = 0; d <= left; ++d) {
            e[i] = d;
            rec(i + 1, left - d);
        }
        e[i] = 0;
    };
    rec(0, degree);
    auto random_poly = [&]() {
        static const long coeffs[] = {-2, -1, 1, 2};
        Expr out;
        for (const auto& mono : monomials) {
            if (rng.next_u64() % 2 == 0) continue;
            Expr term(coeffs[rng.next_u64() % 4]);
            for (std::size_t k = 0; k < n; ++k) term *= chart.coord(k).pow(static_cast<int>(mono[k]));
            out += term;
        }
        return out;
    };

    std::vector<ConnectionSpec> out;
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<Expr> gamma(n * n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    Expr v = random_poly();
                    gamma[(a * n + c) * n + b] = v;
                    gamma[(b * n + c) * n + a] = v;
                }
        // Gamma_A^B_B = 0: absorb the trace into Gamma_A^A_A.
        for (std::size_t a = 0; a < n; ++a) {
            Expr tr;
            for (std::size_t b = 0; b < n; ++b) tr += gamma[(a * n + b) * n + b];
            gamma[(a * n + a) * n + a] -= tr;
        }
        ConnectionSpec spec;
        spec.name = "corpus-n" + std::to_string(n) + "-d" + std::to_string(degree) + "-s" + std::to_string(seed) +
                    "-" + std::to_string(s);
        spec.coordinates = coords;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t b = a; b < n; ++b) {
                    const Expr& v = gamma[(a * n + c) * n + b];
                    if (!v.is_zero())
                        spec.christoffel[std::to_string(a + 1) + "," + std::to_string(c + 1) + "," +
                                         std::to_string(b + 1)] = v.str();
                }
        out.push_back(std::move(spec));
    }
    return out;
}

} // namespace pwamb::cli
