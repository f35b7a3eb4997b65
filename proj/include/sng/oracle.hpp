#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sng/game.hpp"

namespace sng {

struct EnumerationBudget {
    std::size_t max_total_states = 2'000'000;
};

// Ground truth by brute force. Everything here recomputes payoffs from the
// definition with its own adjacency representation, deliberately sharing no
// code with the engine, so agreement between the two carries weight.

// All Nash equilibria, found by scanning the full strategy space.
// Throws std::length_error when the space exceeds the budget.
std::vector<State> enumerate_equilibria(const Network& net,
                                        const EnumerationBudget& budget = {});

// Engine entry points under test; tests may substitute corrupted versions
// to confirm the comparison actually detects disagreement.
struct EngineHooks {
    std::function<Rational(const Network&, const State&, PlayerId)> payoff;
    std::function<std::vector<Move>(const Network&, const State&)> moves;
    std::function<bool(const Network&, const State&)> equilibrium;
    std::function<std::vector<State>(const Network&, const State&)> reachable;
};

EngineHooks default_engine_hooks();

struct CrossCheckReport {
    bool ok = false;
    std::size_t states_scanned = 0;
    std::size_t equilibria = 0;
    std::vector<std::string> mismatches;  // empty iff ok
};

// Compares oracle and engine on every state: payoffs, improving-deviation
// sets, the equilibrium set, and reachability from one sampled start.
CrossCheckReport cross_check(const Network& net, const EnumerationBudget& budget = {},
                             const EngineHooks& hooks = default_engine_hooks());

// Seeded generator for small test networks: up to max_players players and
// max_products products, random availability, small rational weights and
// thresholds with denominators up to 8, edge density about one half.
Network random_network(std::mt19937& rng, int max_players = 6, int max_products = 3);

nlohmann::json cross_check_report_to_json(const CrossCheckReport& r);

}  // namespace sng
