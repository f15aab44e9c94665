// heckelab: exact computations in extended unipotent Hecke algebras.
//
// Subcommands: basis, cells, jring, blocks, conv, replift, finite-model,
// verify-all. Results are emitted as deterministic JSON (plus CSV for the
// table-shaped outputs) and can be cached on disk keyed by a content hash of
// the configuration.

#include "heckelab/shell.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace heckelab;

namespace {

struct CliArgs {
    std::string config_file;
    std::string type;
    std::string matrices_file;
    int n = -1;
    std::string aut;
    std::vector<int> J, ss, ss2, lambda, lambda2;
    int d = std::numeric_limits<int>::min(), d2 = std::numeric_limits<int>::min();
    int q = -1;
    long p3_samples = -1;
    long seed = -1;
    int jobs = -1;
    std::string out, cache_dir;
};

void add_common(CLI::App* cmd, CliArgs& a) {
    cmd->add_option("--config", a.config_file, "JSON configuration file");
    cmd->add_option("--type", a.type, "Cartan type label (A1, A2, B2, G2, A1xA1, ...)");
    cmd->add_option("--matrices", a.matrices_file,
                    "JSON file with simple_roots / simple_coroots matrices");
    cmd->add_option("--n", a.n, "modulus of the character lattice");
    cmd->add_option("--aut", a.aut, "diagram automorphism: trivial | flip");
    cmd->add_option("--J", a.J, "parabolic subset (generator indices)")->delimiter(',');
    cmd->add_option("--ss", a.ss, "first sequence of generator indices")->delimiter(',');
    cmd->add_option("--ss2", a.ss2, "second sequence of generator indices")->delimiter(',');
    cmd->add_option("--lambda", a.lambda, "character residues")->delimiter(',');
    cmd->add_option("--lambda2", a.lambda2, "second character residues")->delimiter(',');
    cmd->add_option("--d", a.d, "power of the automorphism for the first component");
    cmd->add_option("--d2", a.d2, "power for the second component (default: inverse of d)");
    cmd->add_option("--q", a.q, "field size for the finite model");
    cmd->add_option("--p3-samples", a.p3_samples, "sample count for P3 (0 = exhaustive)");
    cmd->add_option("--seed", a.seed, "seed for sampled checks");
    cmd->add_option("--jobs", a.jobs, "job-level parallelism (reserved)");
    cmd->add_option("--out", a.out, "output JSON path (stdout when omitted)");
    cmd->add_option("--cache-dir", a.cache_dir, "on-disk result cache directory");
}

JobConfig assemble(const CliArgs& a, const std::string& task) {
    Json base = Json::object();
    if (!a.config_file.empty()) {
        std::ifstream in(a.config_file);
        if (!in) throw ConfigError("cannot open config file: " + a.config_file);
        base = Json::parse(in, nullptr, false);
        if (base.is_discarded()) throw ConfigError("config file is not valid JSON");
    }
    if (base.empty() && a.type.empty() && a.matrices_file.empty() && task != "finite-model")
        throw ConfigError("no root datum given (use --type, --matrices, or --config)");
    JobConfig cfg = JobConfig::from_json(base.empty() ? Json::object({{"type", "A1"}}) : base);
    if (!a.type.empty()) cfg.type = a.type;
    if (!a.matrices_file.empty()) {
        std::ifstream in(a.matrices_file);
        if (!in) throw ConfigError("cannot open matrices file: " + a.matrices_file);
        Json m = Json::parse(in, nullptr, false);
        if (m.is_discarded()) throw ConfigError("matrices file is not valid JSON");
        cfg.simple_roots.clear();
        cfg.simple_coroots.clear();
        try {
            for (auto& row : m.at("simple_roots")) cfg.simple_roots.push_back(row.get<IVec>());
            for (auto& row : m.at("simple_coroots"))
                cfg.simple_coroots.push_back(row.get<IVec>());
        } catch (const Json::exception& e) {
            throw ConfigError(std::string("malformed matrices file: ") + e.what());
        }
        cfg.type.clear();
    }
    if (a.n >= 0) cfg.n = a.n;
    if (!a.aut.empty()) cfg.aut = a.aut;
    if (!a.J.empty()) cfg.J = a.J;
    if (!a.ss.empty()) cfg.ss = a.ss;
    if (!a.ss2.empty()) cfg.ss2 = a.ss2;
    if (!a.lambda.empty()) cfg.lambda = a.lambda;
    if (!a.lambda2.empty()) cfg.lambda2 = a.lambda2;
    if (a.d != std::numeric_limits<int>::min()) cfg.d_pow = a.d;
    if (a.d2 != std::numeric_limits<int>::min()) cfg.d2_pow = a.d2;
    if (a.q >= 0) cfg.q = a.q;
    if (a.p3_samples >= 0) cfg.p3_samples = a.p3_samples;
    if (a.seed >= 0) cfg.seed = static_cast<unsigned>(a.seed);
    if (a.jobs >= 0) cfg.jobs = a.jobs;
    cfg.out = a.out;
    cfg.cache_dir = a.cache_dir;
    cfg.task = task;
    return cfg;
}

int emit(const JobConfig& cfg, const RunResult& r) {
    Json doc;
    doc["task"] = cfg.task;
    doc["config"] = cfg.to_json();
    doc["exit_code"] = r.exit_code;
    doc["artifact"] = r.artifact;
    std::string text = doc.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.out);
        if (!out) {
            std::cerr << "cannot write " << cfg.out << "\n";
            return kExitBadConfig;
        }
        out << text;
        if (!r.csv.empty()) {
            std::string csv_path = cfg.out;
            auto dot = csv_path.rfind('.');
            csv_path = (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".csv";
            std::ofstream csv(csv_path);
            csv << r.csv;
        }
    }
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations in extended unipotent Hecke algebras"};
    app.require_subcommand(1);
    CliArgs args;
    const char* tasks[] = {"basis",   "cells",   "jring",        "blocks",
                           "conv",    "replift", "finite-model", "verify-all"};
    const char* descs[] = {"canonical basis elements",
                           "cells and the a-function",
                           "gamma constants, distinguished set, Phi",
                           "block isomorphisms theta_lambda and Psi",
                           "convolution-trace identities for one configuration",
                           "simple modules, lifted traces, Schur elements",
                           "the GL_2 Yokonuma model over F_q",
                           "the full identity suite for one context"};
    std::map<std::string, CLI::App*> cmds;
    for (int i = 0; i < 8; ++i) {
        CLI::App* cmd = app.add_subcommand(tasks[i], descs[i]);
        add_common(cmd, args);
        cmds[tasks[i]] = cmd;
    }
    CLI11_PARSE(app, argc, argv);
    std::string task;
    for (auto& [name, cmd] : cmds)
        if (cmd->parsed()) task = name;
    try {
        JobConfig cfg = assemble(args, task);
        RunResult r = run_job(cfg);
        return emit(cfg, r);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
