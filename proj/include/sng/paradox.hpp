#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sng/cascade.hpp"
#include "sng/dynamics.hpp"
#include "sng/game.hpp"

namespace sng {

enum class CaseKind {
    Vulnerable,
    Fragile,
    Ineffective,
    Unsafe,
    VeryBad,
    DecreaseAllWorse,
    DecreaseAllBetter,
    DecreaseLoop,
    IncreaseAllWorse,
    IncreaseAllBetter,
    IncreaseLoop,
};

std::string case_name(CaseKind kind);
std::optional<CaseKind> case_from_name(const std::string& name);
std::vector<CaseKind> all_cases();

struct Mutation {
    enum class Type { Expand, Contract, SetWeight };
    Type type = Type::Expand;
    PlayerId player = 0;      // Expand / Contract
    int product = 0;          // Expand / Contract
    Rational theta;           // Expand
    EdgeSelector selector;    // SetWeight
    Rational weight;          // SetWeight
};

Network apply_mutation(const Network& net, const Mutation& m);

// Contraction can invalidate the prepared start state; the affected player
// is re-seeded to refusal before exploration.
State reseed_start(const Network& mutated, const State& start);

struct ParadoxCase {
    CaseKind claim = CaseKind::Vulnerable;
    Network base_net;
    State start;
    Mutation mutation;
    std::map<PlayerId, std::string> roles;
    CascadeParams params;
    // The combined-network checks demand emotional balance at every state;
    // elsewhere the monitor is recorded without affecting the verdict.
    bool invariant_required = false;
};

// Builds the requested construction at the given cascade size. For the
// weight-decrease cases decrease_to overrides the default new weight of 0.
ParadoxCase build_example(CaseKind kind, const CascadeParams& p,
                          const std::optional<Rational>& decrease_to = {});

struct Condition {
    std::string name;
    bool passed = false;
    bool required = true;  // diagnostics carry false and never affect the verdict
    std::string detail;
};

struct ExploreStats {
    std::size_t states = 0;
    std::size_t arcs = 0;
    std::size_t sink_count = 0;
    bool has_cycle = false;
    bool truncated = false;
    long long elapsed_ms = 0;
};

struct ParadoxReport {
    std::string case_name;
    enum class Verdict { Pass, Fail, Unknown };
    Verdict verdict = Verdict::Fail;
    std::vector<Condition> conditions;
    ExploreStats stats;
    std::vector<Move> witness_trace;    // start-to-sink path for finite claims
    std::optional<State> cycle_state;   // a state on a cycle for infinite claims
    std::vector<ParadoxReport> parts;   // sub-verdicts of the combined network
};

ParadoxReport verify(const ParadoxCase& c, const ExploreLimits& limits = {});

// Builds the combined network once and checks all four claims against it,
// each with its own start and mutation, with the emotional balance of every
// influence receiver monitored across every explored state. The stripped
// variant drops the cross-construction emotional edges first.
ParadoxReport verify_very_bad(const CascadeParams& p, const ExploreLimits& limits = {},
                              bool strip_cross_influence = false);

// The generated constructions use a three-product alphabet, and three is
// known to be the minimum; the lower bound is cited, not re-derived here.
std::string three_product_minimality_note();

nlohmann::json case_to_json(const ParadoxCase& c);
nlohmann::json report_to_json(const ParadoxReport& r);
std::string report_to_text(const ParadoxReport& r);

}  // namespace sng
