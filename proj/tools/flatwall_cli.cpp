// Copyright 2026 The flatwall Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

// Command-line front end: generate fixtures, run the pipeline, verify
// certificates. Exit codes: 0 success, 2 verification failure, 3 parameter or
// input error, 64 usage error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "flatwall/classifier.hpp"
#include "flatwall/gen_verify.hpp"
#include "flatwall/graph.hpp"
#include "flatwall/minor_model.hpp"
#include "flatwall/pipeline.hpp"
#include "flatwall/wall.hpp"
#include "json.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 2;
constexpr int kBadInput = 3;
constexpr int kUsage = 64;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(1) << '\n';
}

// Model and certificate files may also be whole outcome documents.
const nlohmann::json& part(const nlohmann::json& doc, const char* key) {
    return doc.is_object() && doc.contains("kind") && doc.contains(key) ? doc.at(key) : doc;
}

int report(const fw::ValidationReport& rep, const std::string& what) {
    if (rep.ok()) {
        std::cout << what << ": ok\n";
        return kOk;
    }
    std::cout << what << ": rejected (" << (rep.kind == fw::ValidationReport::Kind::Structural ? "structural" : "semantic")
              << "): " << rep.clause << '\n';
    return kRejected;
}

struct RunArgs {
    std::string graph, wall, out;
    int t = 0, w = 0, d = 0, threads = 1;
    std::optional<long long> n;
    std::optional<int> z, tau;
    bool check_invariants = false;
};

void add_run_flags(CLI::App* cmd, RunArgs& a, bool weak) {
    cmd->add_option("--graph", a.graph, "host graph file")->required();
    cmd->add_option("--wall", a.wall, "wall document (JSON)")->required();
    cmd->add_option("--t", a.t, "clique size t")->required();
    cmd->add_option("--w", a.w, "flat wall size w")->required();
    if (weak) cmd->add_option("--d", a.d, "maximum degree D")->required();
    cmd->add_option("--override-n", a.n, "number of basic walls N");
    cmd->add_option("--override-z", a.z, "basic wall height z'");
    cmd->add_option("--override-tau", a.tau, "core depth tau");
    cmd->add_option("--out", a.out, "outcome document (JSON)")->required();
    cmd->add_option("--threads", a.threads, "classification threads")->check(CLI::PositiveNumber);
    if (!weak) cmd->add_flag("--check-invariants", a.check_invariants, "check the apex-search invariants on every step");
}

int run(const RunArgs& a, bool weak) {
    const fw::Graph g = fw::read_graph_file(a.graph);
    const fw::Wall w = fw::wall_from_json(read_json(a.wall));
    auto rep = fw::check_wall(g, w);
    if (!rep.ok()) throw fw::ParameterError("the wall does not live in the graph: " + rep.clause);
    fw::Overrides o;
    o.n = a.n;
    o.z = a.z;
    o.tau = a.tau;
    const fw::Params p = weak ? fw::weak_params(a.t, a.w, a.d, o) : fw::strong_params(a.t, a.w, o);
    fw::RunOptions opt;
    opt.threads = a.threads;
    opt.check_invariants = a.check_invariants;
    const fw::Outcome out = weak ? fw::flat_wall_weak(g, w, p, opt) : fw::flat_wall_strong(g, w, p, opt);
    nlohmann::json doc = fw::outcome_to_json(out);
    doc["params"] = fw::params_to_json(p);
    write_json(a.out, doc);
    for (const std::string& line : out.log) std::cerr << line << '\n';
    std::cout << (out.kind == fw::Outcome::Kind::Flat ? "flat" : "clique_minor") << " via " << out.branch << '\n';
    return report(fw::verify_outcome(g, w, p, out), "outcome");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flat wall pipeline: generate, run, verify"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    CLI::App* gen = app.add_subcommand("gen", "generate fixtures")->require_subcommand(1);
    std::string out, wall_out, chain_out, plan_file;
    int h = 0, r = 0, wp = 0, tp = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;

    CLI::App* gen_wall = gen->add_subcommand("wall", "elementary wall with h rows and r columns");
    gen_wall->add_option("--h", h, "rows")->required()->check(CLI::PositiveNumber);
    gen_wall->add_option("--w", r, "columns")->required()->check(CLI::PositiveNumber);
    gen_wall->add_option("--out", out, "graph file")->required();
    gen_wall->add_option("--wall-out", wall_out, "wall document (JSON)")->required();

    CLI::App* gen_lb = gen->add_subcommand("lowerbound", "grid with crossed black cells");
    gen_lb->add_option("--wp", wp, "w'")->required()->check(CLI::PositiveNumber);
    gen_lb->add_option("--tp", tp, "t'")->required()->check(CLI::PositiveNumber);
    gen_lb->add_option("--out", out, "graph file")->required();

    CLI::App* gen_pl = gen->add_subcommand("planted", "chain of basic walls with planted gadgets");
    gen_pl->add_option("--plan", plan_file, "plan document (JSON)")->required();
    gen_pl->add_option("--seed", seed, "overrides the seed of the plan")->each([&](const std::string&) { seed_given = true; });
    gen_pl->add_option("--out", out, "graph file")->required();
    gen_pl->add_option("--wall-out", wall_out, "wall document (JSON)")->required();
    gen_pl->add_option("--chain-out", chain_out, "chain document (JSON)");

    CLI::App* run_cmd = app.add_subcommand("run", "run the pipeline")->require_subcommand(1);
    RunArgs weak_args, strong_args;
    CLI::App* run_weak = run_cmd->add_subcommand("weak", "bounded-degree variant, no apex vertices");
    add_run_flags(run_weak, weak_args, true);
    CLI::App* run_strong = run_cmd->add_subcommand("strong", "variant with at most t-5 apex vertices");
    add_run_flags(run_strong, strong_args, false);

    CLI::App* verify = app.add_subcommand("verify", "check a certificate")->require_subcommand(1);
    std::string graph_file, model_file, cert_file;
    int t = 0;
    CLI::App* verify_model = verify->add_subcommand("model", "minor model");
    verify_model->add_option("--graph", graph_file, "host graph file")->required();
    verify_model->add_option("--model", model_file, "model or outcome document (JSON)")->required();
    verify_model->add_option("--t", t, "also require the pattern to be K_t");
    CLI::App* verify_flat = verify->add_subcommand("flat", "flat wall certificate");
    verify_flat->add_option("--graph", graph_file, "host graph file")->required();
    verify_flat->add_option("--cert", cert_file, "certificate or outcome document (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kUsage;
    }

    try {
        if (*gen_wall) {
            const fw::Wall w = fw::identity_wall(h, r);
            fw::write_graph_file(out, w.tmpl.g);
            write_json(wall_out, fw::wall_to_json(w));
            std::cout << "wall " << h << " x " << r << ": " << w.tmpl.g.n() << " vertices\n";
        } else if (*gen_lb) {
            const fw::LowerBoundGraph lb = fw::gen_lowerbound(wp, tp);
            fw::write_graph_file(out, lb.g);
            std::cout << "side " << lb.side << ", " << lb.black_cells.size() << " black cells, "
                      << tp * tp - static_cast<int>(lb.black_cells.size()) << " clipped, max degree " << lb.g.max_degree()
                      << '\n';
        } else if (*gen_pl) {
            fw::PlantedPlan plan = fw::plan_from_json(read_json(plan_file));
            if (seed_given) plan.seed = seed;
            const fw::PlantedChain pc = fw::gen_planted_chain(plan);
            fw::write_graph_file(out, pc.g);
            write_json(wall_out, fw::wall_to_json(pc.wall));
            if (!chain_out.empty()) write_json(chain_out, fw::chain_to_json(pc.chain));
            std::cout << "expected types:";
            for (int k : pc.expected) std::cout << ' ' << k;
            std::cout << '\n';
        } else if (*run_weak) {
            return run(weak_args, true);
        } else if (*run_strong) {
            return run(strong_args, false);
        } else if (*verify_model) {
            const fw::Graph g = fw::read_graph_file(graph_file);
            const fw::MinorModel m = fw::model_from_json(part(read_json(model_file), "model"));
            auto rep = fw::validate_minor_model(g, m);
            if (rep.ok() && t > 0 && !(m.pattern == fw::complete_graph(t)))
                rep = fw::ValidationReport::semantic("pattern is not K_" + std::to_string(t));
            return report(rep, "model");
        } else if (*verify_flat) {
            const fw::Graph g = fw::read_graph_file(graph_file);
            const fw::FlatWallCertificate c = fw::certificate_from_json(part(read_json(cert_file), "certificate"));
            return report(fw::verify_flat_certificate(g, c), "certificate");
        }
        return kOk;
    } catch (const fw::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kBadInput;
    } catch (const fw::StructuralError& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return kBadInput;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kBadInput;
    }
}
