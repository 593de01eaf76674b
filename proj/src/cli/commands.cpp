#include "pwamb/cli.hpp"
#include "pwamb/constructions.hpp"
#include "pwamb/error.hpp"
#include "pwamb/fg_solver.hpp"
#include "pwamb/qcurv.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pwamb::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kPass = 0, kFail = 1, kInputError = 2;
constexpr const char* kWorkdirVar = "PWAMB_WORKDIR";

fs::path resolve(const std::string& p) {
    fs::path path(p);
    if (path.is_relative())
        if (const char* wd = std::getenv(kWorkdirVar); wd && *wd) return fs::path(wd) / path;
    return path;
}

Json read_document(const std::string& file) {
    fs::path path = resolve(file);
    std::ifstream in(path);
    if (!in) throw ValidationError("io_error", "cannot read '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("bad_json", "'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

bool is_metric_document(const Json& doc) {
    return doc.is_object() && doc.contains("kind") && doc["kind"] == "metric";
}

AffineConnection load_connection(const Json& doc, std::string& name) {
    ConnectionSpec spec = spec_from_json(doc);
    name = spec.name;
    AffineConnection d = to_connection(spec);
    if (d.dim() < 2) throw ValidationError("dimension", "the constructions need n >= 2 base coordinates");
    d.validate();
    return d;
}

Json check_json(const CheckResult& r, bool timing) {
    Json j;
    j["check"] = r.name;
    j["verdict"] = r.pass ? "pass" : "fail";
    if (!r.witness.is_null()) j["witness"] = r.witness;
    if (!r.details.is_null()) j["details"] = r.details;
    if (timing) j["seconds"] = r.seconds;
    return j;
}

int emit(const Json& doc, const std::string& out_file, std::ostream& out) {
    std::string text = doc.dump(2) + "\n";
    if (out_file.empty()) {
        out << text;
    } else {
        fs::path path = resolve(out_file);
        std::ofstream f(path);
        if (!f) throw ValidationError("io_error", "cannot write '" + path.string() + "'");
        f << text;
    }
    return 0;
}

Json status_doc(Json doc, bool pass) {
    doc["status"] = pass ? "pass" : "fail";
    return doc;
}

int cmd_build(const std::string& spec_file, const std::string& target, const std::string& out_file,
              std::ostream& out) {
    std::string name;
    AffineConnection d = load_connection(read_document(spec_file), name);
    Json doc;
    if (target == "pw") {
        doc = metric_to_json(patterson_walker(d));
    } else if (target == "cone") {
        doc = connection_to_json(thomas_cone(d), name + "/thomas");
    } else if (target == "cone-pw") {
        doc = metric_to_json(cone_pw(d));
    } else if (target == "ambient") {
        doc = metric_to_json(ambient_pw(d));
    } else {
        throw ValidationError("unknown_target", "unknown build target '" + target + "'");
    }
    doc["source"] = name;
    doc["target"] = target;
    emit(doc, out_file, out);
    return kPass;
}

int cmd_verify(const std::string& spec_file, const std::string& suite, bool timing, const std::string& out_file,
               std::ostream& out) {
    std::string name;
    AffineConnection d = load_connection(read_document(spec_file), name);
    std::vector<std::string> suites;
    if (suite == "all")
        suites = suite_names();
    else
        suites = {suite};
    Json checks = Json::array();
    bool pass = true;
    for (const auto& s : suites)
        for (const CheckResult& r : run_suite(s, d)) {
            pass = pass && r.pass;
            checks.push_back(check_json(r, timing));
        }
    Json doc;
    doc["kind"] = "verification";
    doc["source"] = name;
    doc["suite"] = suite;
    doc["checks"] = checks;
    emit(status_doc(doc, pass), out_file, out);
    return pass ? kPass : kFail;
}

Json expansion_json(const ExpansionResult& r) {
    Json doc;
    doc["kind"] = "expansion";
    doc["dimension"] = r.dimension;
    doc["order"] = r.order;
    Json phi = Json::array();
    for (std::size_t k = 0; k < r.phi.size(); ++k)
        phi.push_back({{"order", k + 1}, {"components", tensor_to_json(r.phi[k])}, {"zero", r.phi[k].is_zero()}});
    doc["coefficients"] = phi;
    Json res = Json::array();
    for (std::size_t k = 0; k < r.residuals.size(); ++k)
        res.push_back({{"order", k + 1}, {"zero", r.residuals[k].is_zero()}});
    doc["residuals"] = res;
    if (r.obstruction)
        doc["obstruction"] = {{"components", tensor_to_json(*r.obstruction)}, {"zero", r.obstruction->is_zero()}};
    else
        doc["obstruction"] = nullptr;
    doc["obstructed"] = r.obstructed;
    Json flags = Json::array();
    for (const auto& f : r.free_flags)
        flags.push_back({{"order", f.order}, {"components", f.components}, {"resolution", f.resolution}});
    doc["free_unknowns"] = flags;
    return doc;
}

int cmd_expand(const std::string& file, int order, const std::string& out_file, std::ostream& out) {
    Json input = read_document(file);
    Json doc;
    bool pass = true;
    if (is_metric_document(input)) {
        MetricTensor g0 = metric_from_json(input);
        const std::size_t k = order > 0 ? static_cast<std::size_t>(order) : g0.dim() / 2 + 1;
        ExpansionResult r = fg_expand(g0, k);
        doc = expansion_json(r);
        doc["source"] = input["chart"].value("name", "M");
    } else {
        std::string name;
        AffineConnection d = load_connection(input, name);
        const std::size_t k = order > 0 ? static_cast<std::size_t>(order) : d.dim() + 1;
        MetricTensor g0 = patterson_walker(d);
        ExpansionResult r = fg_expand(g0, k);
        doc = expansion_json(r);
        doc["source"] = name;
        // The closed-form ambient metric is linear in rho.
        CheckResult c;
        c.name = "expansion.matches_closed_form";
        c.pass = !r.obstructed && r.phi.size() == k && assemble_ansatz(g0, r.phi, k) == ambient_pw(d);
        for (std::size_t j = 1; j < r.phi.size(); ++j) c.pass = c.pass && r.phi[j].is_zero();
        pass = c.pass;
        doc["checks"] = Json::array({check_json(c, false)});
    }
    emit(status_doc(doc, pass), out_file, out);
    return pass ? kPass : kFail;
}

int cmd_qcurv(const std::string& spec_file, const std::string& out_file, std::ostream& out) {
    std::string name;
    AffineConnection d = load_connection(read_document(spec_file), name);
    QReport q = q_curvature(ambient_pw(d));
    Json doc;
    doc["kind"] = "qcurv";
    doc["source"] = name;
    doc["laplacian_log_t"] = q.powers.front().str();
    Json powers = Json::array();
    for (std::size_t j = 0; j < q.powers.size(); ++j) powers.push_back({{"power", j + 1}, {"value", q.powers[j].str()}});
    doc["powers"] = powers;
    doc["q"] = q.q.str();
    CheckResult lap{"qcurv.laplacian_log_t_zero", q.powers.front().is_zero(), nullptr, nullptr, 0};
    CheckResult qz{"qcurv.q_zero", q.vanishes, nullptr, nullptr, 0};
    doc["checks"] = Json::array({check_json(lap, false), check_json(qz, false)});
    const bool pass = lap.pass && qz.pass;
    emit(status_doc(doc, pass), out_file, out);
    return pass ? kPass : kFail;
}

int cmd_corpus(std::size_t count, std::size_t dim, unsigned degree, std::uint64_t seed, const std::string& out_file,
               std::ostream& out) {
    Json specs = Json::array();
    for (const ConnectionSpec& s : generate_corpus(count, dim, degree, seed)) {
        // generated specs must validate
        to_connection(s).validate();
        specs.push_back(spec_to_json(s));
    }
    Json doc;
    doc["kind"] = "corpus";
    doc["count"] = count;
    doc["dim"] = dim;
    doc["degree"] = degree;
    doc["seed"] = seed;
    doc["specs"] = specs;
    emit(doc, out_file, out);
    return kPass;
}

Json error_doc(const std::string& code, const std::string& message) {
    return Json{{"status", "error"}, {"error", {{"code", code}, {"message", message}}}};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Patterson-Walker ambient metric toolkit"};
    app.require_subcommand(1);
    std::string spec, target, suite = "all", out_file;
    int order = 0;
    bool timing = false;
    std::size_t count = 0, dim = 2;
    unsigned degree = 1;
    std::uint64_t seed = 0;

    auto* build = app.add_subcommand("build", "Build a metric or connection from a connection spec");
    build->add_option("--spec", spec, "Connection spec file")->required();
    build->add_option("--target", target, "pw, cone, cone-pw or ambient")
        ->required()
        ->check(CLI::IsMember({"pw", "cone", "cone-pw", "ambient"}));
    build->add_option("--out", out_file, "Write the document to a file");

    auto* verify = app.add_subcommand("verify", "Run verification suites on a connection spec");
    verify->add_option("--spec", spec, "Connection spec file")->required();
    verify->add_option("--suite", suite, "ricci, diagram, symmetry, distribution, isotropy or all")
        ->check(CLI::IsMember({"ricci", "diagram", "symmetry", "distribution", "isotropy", "all"}));
    verify->add_flag("--timing", timing, "Include per-check timings (non-deterministic)");
    verify->add_option("--out", out_file, "Write the document to a file");

    auto* expand = app.add_subcommand("expand", "Order-by-order ambient expansion");
    expand->add_option("--spec", spec, "Connection spec or metric document")->required();
    expand->add_option("--order", order, "Maximum order (default n+1 for connections, m/2+1 for metrics)")
        ->check(CLI::PositiveNumber);
    expand->add_option("--out", out_file, "Write the document to a file");

    auto* qcurv = app.add_subcommand("qcurv", "Q-curvature of the ambient metric");
    qcurv->add_option("--spec", spec, "Connection spec file")->required();
    qcurv->add_option("--out", out_file, "Write the document to a file");

    auto* corpus = app.add_subcommand("corpus", "Generate random valid connection specs");
    corpus->add_option("--count", count, "Number of specs")->required();
    corpus->add_option("--dim", dim, "Base dimension n")->required();
    corpus->add_option("--degree", degree, "Polynomial degree of the Christoffel symbols")->required();
    corpus->add_option("--seed", seed, "Random seed")->required();
    corpus->add_option("--out", out_file, "Write the document to a file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        const int code = app.exit(e, out, msg);
        if (code == 0) return kPass; // --help
        err << msg.str();
        out << error_doc("usage", e.what()).dump(2) << "\n";
        return kInputError;
    }

    try {
        if (build->parsed()) return cmd_build(spec, target, out_file, out);
        if (verify->parsed()) return cmd_verify(spec, suite, timing, out_file, out);
        if (expand->parsed()) return cmd_expand(spec, order, out_file, out);
        if (qcurv->parsed()) return cmd_qcurv(spec, out_file, out);
        if (corpus->parsed()) return cmd_corpus(count, dim, degree, seed, out_file, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        out << error_doc(e.code(), e.what()).dump(2) << "\n";
        return kInputError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        out << error_doc(e.code(), e.what()).dump(2) << "\n";
        return kInputError;
    } catch (const Error& e) {
        err << "verification error: " << e.what() << "\n";
        out << error_doc(e.code(), e.what()).dump(2) << "\n";
        return kFail;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        out << error_doc("bad_document", e.what()).dump(2) << "\n";
        return kInputError;
    }
    return kInputError;
}

} // namespace pwamb::cli
