#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <unordered_set>

#include "sng/cascade.hpp"
#include "sng/dynamics.hpp"
#include "sng/game.hpp"
#include "sng/oracle.hpp"
#include "sng/paradox.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitClaimFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnknown = 3;

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    f >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

struct ParamFlags {
    int n = 4;
    std::string theta = "1/10";
    std::string e = "1/4";
    std::string i = "3/10";
    std::string c = "3/5";
};

void add_param_flags(CLI::App* sc, ParamFlags& pf) {
    sc->add_option("--n", pf.n, "players per rank subtype (a rank holds 2n)");
    sc->add_option("--theta", pf.theta, "use price, num/den or integer");
    sc->add_option("--e", pf.e, "emotional weight");
    sc->add_option("--i", pf.i, "inclination weight");
    sc->add_option("--c", pf.c, "control weight");
}

sng::CascadeParams to_params(const ParamFlags& pf) {
    return {pf.n, sng::Rational::parse(pf.theta), sng::Rational::parse(pf.e),
            sng::Rational::parse(pf.i), sng::Rational::parse(pf.c)};
}

// Shortest improving-move sequence from the start to a terminal state.
std::vector<sng::Move> path_to_sink(const sng::ImprovementGraph& g) {
    if (g.sinks.empty()) return {};
    std::unordered_set<std::uint32_t> sinkset(g.sinks.begin(), g.sinks.end());
    std::vector<std::int64_t> parent(g.nodes.size(), -2);
    std::vector<int> via(g.nodes.size(), -1);
    std::queue<std::uint32_t> q;
    parent[g.start] = -1;
    q.push(g.start);
    std::uint32_t found = g.start;
    bool done = sinkset.count(g.start) > 0;
    while (!q.empty() && !done) {
        std::uint32_t u = q.front();
        q.pop();
        for (std::size_t idx = 0; idx < g.arcs[u].size() && !done; ++idx) {
            std::uint32_t w = g.arcs[u][idx].to;
            if (parent[w] != -2) continue;
            parent[w] = u;
            via[w] = static_cast<int>(idx);
            if (sinkset.count(w)) {
                found = w;
                done = true;
            } else {
                q.push(w);
            }
        }
    }
    if (!done) return {};
    std::vector<sng::Move> trace;
    for (std::uint32_t at = found; parent[at] != -1;
         at = static_cast<std::uint32_t>(parent[at]))
        trace.push_back(g.arcs[parent[at]][via[at]].move);
    std::reverse(trace.begin(), trace.end());
    return trace;
}

const char* kind_word(sng::PathClassification::Kind k) {
    switch (k) {
        case sng::PathClassification::Kind::AllFinite: return "all-finite";
        case sng::PathClassification::Kind::AllInfinite: return "all-infinite";
        case sng::PathClassification::Kind::Mixed: return "mixed";
        case sng::PathClassification::Kind::Unknown: return "unknown";
    }
    return "?";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"games of product choice on social networks"};
    app.require_subcommand(1);

    auto* sc_build = app.add_subcommand("build-cascade", "generate a cascade as JSON");
    ParamFlags build_pf;
    std::string build_out;
    add_param_flags(sc_build, build_pf);
    sc_build->add_option("-o,--out", build_out, "output file (stdout when omitted)");

    auto* sc_params = app.add_subcommand("validate-params", "check a parameter tuple");
    ParamFlags check_pf;
    add_param_flags(sc_params, check_pf);

    auto* sc_verify = app.add_subcommand("verify", "build one example and check its claim");
    ParamFlags verify_pf;
    std::string case_str;
    std::size_t verify_limit = 1'000'000;
    bool as_json = false;
    bool as_text = false;
    bool strip_cross = false;
    std::string decrease_to;
    std::string dot_dir;
    sc_verify->add_option("case", case_str, "which example to verify")->required();
    add_param_flags(sc_verify, verify_pf);
    sc_verify->add_option("--limits", verify_limit, "explored-state budget");
    auto* opt_json = sc_verify->add_flag("--json", as_json, "machine-readable report");
    auto* opt_text = sc_verify->add_flag("--text", as_text, "human-readable report (default)");
    opt_json->excludes(opt_text);
    sc_verify->add_flag("--strip-cross", strip_cross,
                        "very-bad only: drop the cross-construction emotional edges");
    sc_verify->add_option("--decrease-to", decrease_to,
                          "decrease scenarios: new weight instead of 0");
    sc_verify->add_option("--dot", dot_dir, "directory for a DOT rendering of the network");

    auto* sc_run = app.add_subcommand("run-dynamics", "explore improvement paths");
    std::string run_net, run_start, run_trace;
    std::size_t run_limit = 1'000'000;
    sc_run->add_option("-i,--input", run_net, "network JSON")->required();
    sc_run->add_option("--start", run_start, "start state JSON")->required();
    sc_run->add_option("--limits", run_limit, "explored-state budget");
    sc_run->add_option("--trace", run_trace, "write a JSON exploration report here");

    auto* sc_dot = app.add_subcommand("export-dot", "render a network as Graphviz DOT");
    std::string dot_in, dot_out;
    sc_dot->add_option("-i,--input", dot_in, "network JSON")->required();
    sc_dot->add_option("-o,--out", dot_out, "output DOT file")->required();

    auto* sc_oracle = app.add_subcommand("oracle-check", "brute-force cross-check of the engine");
    std::string oracle_in;
    bool oracle_random = false;
    int oracle_count = 20;
    unsigned oracle_seed = 1;
    sc_oracle->add_option("-i,--input", oracle_in, "network JSON");
    sc_oracle->add_flag("--random", oracle_random, "generate random small networks");
    sc_oracle->add_option("--count", oracle_count, "how many random networks");
    sc_oracle->add_option("--seed", oracle_seed, "first seed");

    auto* sc_list = app.add_subcommand("list-cases", "list the example names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*sc_build) {
            sng::CascadeParams p = to_params(build_pf);
            auto violations = sng::validate_params(p);
            if (!violations.empty()) {
                for (const auto& v : violations) std::cerr << v << "\n";
                return kExitClaimFailed;
            }
            sng::CascadeAssembly a = sng::build_cascade(p);
            std::string text = sng::assembly_to_json(a).dump(2) + "\n";
            if (build_out.empty())
                std::cout << text;
            else
                write_text_file(build_out, text);
            return kExitPass;
        }

        if (*sc_params) {
            sng::CascadeParams p = to_params(check_pf);
            auto violations = sng::validate_params(p);
            if (violations.empty()) {
                std::cout << "ok\n";
                return kExitPass;
            }
            for (const auto& v : violations) std::cout << v << "\n";
            return kExitClaimFailed;
        }

        if (*sc_verify) {
            auto kind = sng::case_from_name(case_str);
            if (!kind) {
                std::cerr << "unknown case: " << case_str << "\n";
                return kExitUsage;
            }
            sng::CascadeParams p = to_params(verify_pf);
            std::optional<sng::Rational> to;
            if (!decrease_to.empty()) to = sng::Rational::parse(decrease_to);
            sng::ExploreLimits limits;
            limits.max_states = verify_limit;

            sng::ParadoxReport rep;
            if (*kind == sng::CaseKind::VeryBad) {
                rep = sng::verify_very_bad(p, limits, strip_cross);
            } else {
                sng::ParadoxCase c = sng::build_example(*kind, p, to);
                rep = sng::verify(c, limits);
            }
            if (!dot_dir.empty()) {
                sng::ParadoxCase c = sng::build_example(*kind, p, to);
                std::filesystem::create_directories(dot_dir);
                write_text_file(dot_dir + "/" + case_str + ".dot",
                                sng::network_to_dot(c.base_net, c.roles));
            }
            if (as_json)
                std::cout << sng::report_to_json(rep).dump(2) << "\n";
            else
                std::cout << sng::report_to_text(rep);
            switch (rep.verdict) {
                case sng::ParadoxReport::Verdict::Pass: return kExitPass;
                case sng::ParadoxReport::Verdict::Fail: return kExitClaimFailed;
                case sng::ParadoxReport::Verdict::Unknown: return kExitUnknown;
            }
        }

        if (*sc_run) {
            sng::Network net = sng::network_from_json(read_json_file(run_net));
            auto diags = sng::validate_network(net);
            for (const auto& d : diags)
                if (d.severity == sng::Diagnostic::Severity::Error)
                    throw std::runtime_error("invalid network: " + d.message);
            sng::State start = sng::state_from_json(read_json_file(run_start));
            sng::validate_state(net, start);
            sng::ExploreLimits limits;
            limits.max_states = run_limit;
            sng::ImprovementGraph g = sng::explore(net, start, limits);
            sng::PathClassification cls = sng::classify(g);

            std::cout << "classification: " << kind_word(cls.kind) << "\n"
                      << "states: " << g.nodes.size() << ", moves: " << g.arc_count()
                      << ", sinks: " << g.sinks.size()
                      << ", cycle: " << (g.has_cycle ? "yes" : "no")
                      << ", truncated: " << (g.truncated ? "yes" : "no") << "\n";

            if (!run_trace.empty()) {
                nlohmann::json j;
                j["classification"] = kind_word(cls.kind);
                j["states"] = g.nodes.size();
                j["moves"] = g.arc_count();
                j["truncated"] = g.truncated;
                std::vector<sng::Move> witness = path_to_sink(g);
                if (!witness.empty()) j["path-to-sink"] = sng::trace_to_json(witness);
                nlohmann::json sinks = nlohmann::json::array();
                std::size_t cap = 0;
                for (std::uint32_t sid : g.sinks) {
                    if (++cap > 50) break;
                    sinks.push_back(sng::state_to_json(sng::unpack_state(g.nodes[sid])));
                }
                j["sinks"] = sinks;
                if (cls.cycle_node)
                    j["cycle-state"] =
                        sng::state_to_json(sng::unpack_state(g.nodes[*cls.cycle_node]));
                write_text_file(run_trace, j.dump(2) + "\n");
            }
            return g.truncated ? kExitUnknown : kExitPass;
        }

        if (*sc_dot) {
            sng::Network net = sng::network_from_json(read_json_file(dot_in));
            write_text_file(dot_out, sng::network_to_dot(net));
            return kExitPass;
        }

        if (*sc_oracle) {
            if (oracle_in.empty() && !oracle_random) {
                std::cerr << "oracle-check needs -i FILE or --random\n";
                return kExitUsage;
            }
            bool all_ok = true;
            if (!oracle_in.empty()) {
                sng::Network net = sng::network_from_json(read_json_file(oracle_in));
                sng::CrossCheckReport rep = sng::cross_check(net);
                std::cout << sng::cross_check_report_to_json(rep).dump(2) << "\n";
                all_ok = rep.ok;
            } else {
                for (int k = 0; k < oracle_count; ++k) {
                    std::mt19937 rng(oracle_seed + static_cast<unsigned>(k));
                    sng::Network net = sng::random_network(rng);
                    sng::CrossCheckReport rep = sng::cross_check(net);
                    std::cout << "seed " << (oracle_seed + k) << ": "
                              << (rep.ok ? "ok" : "MISMATCH") << " (" << rep.states_scanned
                              << " states, " << rep.equilibria << " equilibria)\n";
                    if (!rep.ok) {
                        for (const auto& m : rep.mismatches) std::cout << "  " << m << "\n";
                        all_ok = false;
                    }
                }
            }
            return all_ok ? kExitPass : kExitClaimFailed;
        }

        if (*sc_list) {
            for (sng::CaseKind k : sng::all_cases()) std::cout << sng::case_name(k) << "\n";
            std::cout << "\n" << sng::three_product_minimality_note() << "\n";
            return kExitPass;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
