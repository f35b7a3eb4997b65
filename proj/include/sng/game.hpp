#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sng/rational.hpp"

namespace sng {

using PlayerId = int;

// Strategy encoding used throughout: -1 is refusal, k >= 0 is product k.
constexpr int kRefusal = -1;

enum class EdgeClass { Plain, Control, Inclination, Emotional };

std::string edge_class_name(EdgeClass c);
EdgeClass edge_class_from_name(const std::string& name);

struct Edge {
    PlayerId src = 0;
    PlayerId dst = 0;
    Rational weight;
    EdgeClass cls = EdgeClass::Plain;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Player {
    std::string label;
    std::vector<int> available;           // sorted product ids
    std::map<int, Rational> thresholds;   // product id -> use price

    bool has(int product) const;

    friend bool operator==(const Player&, const Player&) = default;
};

// A game description. Players influence each other along directed edges:
// the payoff of a player sums the weights of incoming edges whose source
// currently uses the same product, minus the product's use price. Refusal
// always pays zero. Parallel edges are legal and their weights add up.
struct Network {
    std::vector<std::string> products;
    std::vector<Player> players;
    std::vector<Edge> edges;

    friend bool operator==(const Network&, const Network&) = default;
};

using State = std::vector<int>;  // one strategy per player

struct Move {
    PlayerId player = 0;
    int to = kRefusal;
    Rational gain;

    friend bool operator==(const Move&, const Move&) = default;
};

struct Diagnostic {
    enum class Severity { Error, Note };
    Severity severity = Severity::Error;
    std::string message;
};

// Construction helpers used by the builders.
PlayerId add_player(Network& net, std::string label, std::vector<int> available,
                    const Rational& theta);
void add_edge(Network& net, PlayerId src, PlayerId dst, const Rational& weight,
              EdgeClass cls);

// Throws std::invalid_argument when s is not a valid state of net.
void validate_state(const Network& net, const State& s);

Rational payoff(const Network& net, const State& s, PlayerId i);
std::vector<Rational> payoff_vector(const Network& net, const State& s);

// All strictly improving unilateral deviations, ordered by player id,
// refusal before products, products by id.
std::vector<Move> improving_moves(const Network& net, const State& s);

bool is_equilibrium(const Network& net, const State& s);
// Restricted variant: only deviations by the listed players are considered.
bool is_equilibrium_for(const Network& net, const State& s,
                        const std::vector<PlayerId>& players);

// Rejects moves that do not strictly improve the mover's payoff.
State apply_move(const Network& net, const State& s, const Move& m);

Network expand(const Network& net, PlayerId i, int product, const Rational& theta);
Network contract(const Network& net, PlayerId i, int product);

struct EdgeSelector {
    PlayerId src = 0;
    PlayerId dst = 0;
    std::optional<EdgeClass> cls;
};

// The selector must match exactly one edge; ambiguity is an error.
Network set_edge_weight(const Network& net, const EdgeSelector& sel,
                        const Rational& weight);

// Strict elementwise comparison of payoff vectors.
bool dominates(const std::vector<Rational>& a, const std::vector<Rational>& b);

std::vector<Diagnostic> validate_network(const Network& net);

nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const State& s);
State state_from_json(const nlohmann::json& j);

// Graphviz rendering of the network topology. Optional role annotations
// (player id -> short role string) extend the node labels.
std::string network_to_dot(const Network& net,
                           const std::map<PlayerId, std::string>& roles = {});

}  // namespace sng
