#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sng/game.hpp"

namespace sng {

struct ExploreLimits {
    std::size_t max_states = 1'000'000;
    std::optional<std::size_t> max_depth;
};

// Node payloads are packed states: one byte per player, strategy + 1.
using PackedState = std::string;

PackedState pack_state(const State& s);
State unpack_state(const PackedState& p);

struct Arc {
    Move move;
    std::uint32_t to = 0;
};

// The reachable part of the improvement relation from one start state.
// When truncated is false the node set is the full reachable set and
// has_cycle is exact; when true the classification must stay Unknown.
struct ImprovementGraph {
    std::deque<PackedState> nodes;
    std::vector<std::vector<Arc>> arcs;
    std::uint32_t start = 0;
    std::vector<std::uint32_t> sinks;
    bool has_cycle = false;
    bool truncated = false;

    std::size_t arc_count() const;
};

// Players whose moves are suppressed during exploration (used to model
// boundary drivers that hold a fixed strategy).
using FrozenSet = std::set<PlayerId>;

ImprovementGraph explore(const Network& net, const State& start,
                         const ExploreLimits& limits = {},
                         const FrozenSet& frozen = {});

struct PathClassification {
    enum class Kind { AllFinite, AllInfinite, Mixed, Unknown };
    Kind kind = Kind::Unknown;
    std::vector<std::uint32_t> sinks;       // AllFinite / Mixed
    std::optional<std::uint32_t> cycle_node; // on a cycle, when one exists
};

PathClassification classify(const ImprovementGraph& g);

enum class MoveFilter { AllMoves, ProductMovesOnly };

// Follows the improvement relation from start as long as every visited
// state has exactly one admissible move, and reports the first state that
// breaks single-threadedness (two moves, a revisit, or budget exhaustion).
struct ChainResult {
    bool ok = false;
    std::vector<Move> trace;
    State terminal;               // meaningful when ok
    std::vector<State> visited;   // start first; every state along the walk
    // failure details
    enum class Failure { None, Branch, Cycle, Truncated };
    Failure failure = Failure::None;
    State failure_state;
    std::vector<Move> branch_moves;
};

ChainResult unique_chain(const Network& net, const State& start,
                         const ExploreLimits& limits = {},
                         const FrozenSet& frozen = {},
                         MoveFilter filter = MoveFilter::AllMoves);

nlohmann::json trace_to_json(const std::vector<Move>& trace);

// Graphviz rendering: nodes carry the state and its payoff vector, arcs
// the move and its gain.
std::string improvement_graph_to_dot(const Network& net, const ImprovementGraph& g);

}  // namespace sng
