#pragma once

#include "pwamb/tensor.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace pwamb::cli {

using Json = nlohmann::json;

// Input document for a connection. Christoffel keys are "A,C,B" (1-based),
// meaning Gamma_A^C_B; the mirror Gamma_B^C_A is filled in automatically.
struct ConnectionSpec {
    std::string name = "D";
    std::vector<std::string> coordinates;
    std::vector<std::string> positive;
    std::map<std::string, std::string> christoffel;
    std::string volume = "1";
};

ConnectionSpec spec_from_json(const Json& doc);
Json spec_to_json(const ConnectionSpec& spec);
// Parses expressions and completes the lower-index symmetry. Conflicting
// mirror entries raise ValidationError("torsion"). The connection itself is
// not validated here.
AffineConnection to_connection(const ConnectionSpec& spec);
Json connection_to_json(const AffineConnection& d, const std::string& name);

// {"kind": "metric", "chart": {...}, "components": {"c_i,c_j": expr}} with the
// upper triangle keyed by coordinate names.
Json metric_to_json(const MetricTensor& g);
// Keys may be coordinate names or 1-based indices; missing entries are zero.
MetricTensor metric_from_json(const Json& doc);
Json chart_to_json(const Chart& c);
Json tensor_to_json(const TensorField& t);

// Seeded random torsion-free, trace-free polynomial connections.
std::vector<ConnectionSpec> generate_corpus(std::size_t count, std::size_t n, unsigned degree, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool pass = true;
    Json witness;  // null when passing
    Json details;  // optional extra data
    double seconds = 0;
};

// Suite names: ricci, diagram, symmetry, distribution, isotropy.
std::vector<CheckResult> run_suite(const std::string& suite, const AffineConnection& d);
const std::vector<std::string>& suite_names();

// Entry point shared by the executable and the tests. Returns the exit
// status: 0 pass, 1 verification failure, 2 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pwamb::cli
