#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sng/dynamics.hpp"
#include "sng/game.hpp"

using namespace sng;

namespace {

Network stimulus_pair() {
    Network net;
    net.products = {"A"};
    add_player(net, "s1", {0}, Rational(1));
    add_player(net, "s2", {0}, Rational(1));
    add_edge(net, 0, 1, Rational(5), EdgeClass::Control);
    add_edge(net, 1, 0, Rational(5), EdgeClass::Control);
    return net;
}

// Three players chasing each other in a circle: each one's controller keeps
// moving away from the product it just adopted, so no assignment is stable.
// Spirits 0..2 are frozen boundary sources.
struct Trio {
    Network net;
    FrozenSet frozen{0, 1, 2};
    State start;
};

Trio chasing_trio() {
    Trio t;
    t.net.products = {"A", "B", "C"};
    Rational theta(1, 10), i(3, 10), c(3, 5);
    add_player(t.net, "fa", {0}, theta);
    add_player(t.net, "fb", {1}, theta);
    add_player(t.net, "fc", {2}, theta);
    add_player(t.net, "p1", {0, 2}, theta);
    add_player(t.net, "m", {0, 1}, theta);
    add_player(t.net, "p2", {1, 2}, theta);
    add_edge(t.net, 0, 3, i, EdgeClass::Inclination);
    add_edge(t.net, 1, 4, i, EdgeClass::Inclination);
    add_edge(t.net, 2, 5, i, EdgeClass::Inclination);
    add_edge(t.net, 5, 3, c, EdgeClass::Control);
    add_edge(t.net, 3, 4, c, EdgeClass::Control);
    add_edge(t.net, 4, 5, c, EdgeClass::Control);
    t.start = {0, 1, 2, 0, 1, 2};
    return t;
}

}  // namespace

TEST_CASE("packing round-trips refusal and products") {
    State s{kRefusal, 0, 3, kRefusal, 117};
    CHECK(unpack_state(pack_state(s)) == s);
    CHECK(pack_state(s).size() == s.size());
}

TEST_CASE("single player with one product rests at refusal") {
    Network net;
    net.products = {"A"};
    add_player(net, "solo", {0}, Rational(1));
    ImprovementGraph g = explore(net, {kRefusal});
    CHECK(g.nodes.size() == 1);
    CHECK(g.arc_count() == 0);
    CHECK(g.sinks == std::vector<std::uint32_t>{0});
    CHECK(classify(g).kind == PathClassification::Kind::AllFinite);
}

TEST_CASE("locked pair from half adoption reaches two different rests") {
    Network net = stimulus_pair();
    ImprovementGraph g = explore(net, {0, kRefusal});
    CHECK(g.nodes.size() == 3);
    CHECK(g.sinks.size() == 2);
    CHECK_FALSE(g.has_cycle);
    CHECK_FALSE(g.truncated);

    PathClassification cls = classify(g);
    CHECK(cls.kind == PathClassification::Kind::AllFinite);

    SUBCASE("every recorded arc is improving at its source") {
        for (std::size_t u = 0; u < g.arcs.size(); ++u) {
            State from = unpack_state(g.nodes[u]);
            auto legal = improving_moves(net, from);
            for (const Arc& a : g.arcs[u])
                CHECK(std::find(legal.begin(), legal.end(), a.move) != legal.end());
        }
    }

    SUBCASE("from total refusal nothing moves") {
        ImprovementGraph r = explore(net, {kRefusal, kRefusal});
        CHECK(r.nodes.size() == 1);
    }
}

TEST_CASE("chasing trio never settles") {
    Trio t = chasing_trio();
    ImprovementGraph g = explore(t.net, t.start, {}, t.frozen);
    CHECK_FALSE(g.truncated);
    CHECK(g.sinks.empty());
    CHECK(g.has_cycle);
    CHECK(g.nodes.size() <= 27);  // three movable players, three options each

    PathClassification cls = classify(g);
    CHECK(cls.kind == PathClassification::Kind::AllInfinite);
    REQUIRE(cls.cycle_node.has_value());

    // no state in the component admits zero moves for the unfrozen players
    for (std::size_t u = 0; u < g.nodes.size(); ++u)
        CHECK_FALSE(g.arcs[u].empty());
}

TEST_CASE("exploration truncates at the state budget") {
    Trio t = chasing_trio();
    ExploreLimits lim;
    lim.max_states = 5;
    ImprovementGraph g = explore(t.net, t.start, lim, t.frozen);
    CHECK(g.truncated);
    CHECK(g.nodes.size() == 5);
    CHECK(classify(g).kind == PathClassification::Kind::Unknown);
}

TEST_CASE("classify reports a mixed component from a hand-built graph") {
    ImprovementGraph g;
    g.nodes = {pack_state({0}), pack_state({1}), pack_state({kRefusal})};
    g.arcs = {{Arc{Move{}, 1}, Arc{Move{}, 2}}, {Arc{Move{}, 0}}, {}};
    g.start = 0;
    g.sinks = {2};
    g.has_cycle = true;
    PathClassification cls = classify(g);
    CHECK(cls.kind == PathClassification::Kind::Mixed);
    CHECK(cls.sinks == std::vector<std::uint32_t>{2});
    CHECK(cls.cycle_node.has_value());
}

TEST_CASE("unique chain walks a single forced move") {
    Network net;
    net.products = {"A", "B"};
    Rational theta(1, 10);
    add_player(net, "d", {1}, theta);
    add_player(net, "fb", {1}, theta);
    add_player(net, "ea", {0}, theta);
    add_player(net, "p", {0, 1}, theta);
    add_edge(net, 0, 3, Rational(3, 5), EdgeClass::Control);
    add_edge(net, 1, 3, Rational(3, 10), EdgeClass::Inclination);
    add_edge(net, 2, 3, Rational(1, 4), EdgeClass::Emotional);
    FrozenSet frozen{0, 1, 2};

    ChainResult r = unique_chain(net, {1, 1, 0, 0}, {}, frozen);
    REQUIRE(r.ok);
    CHECK(r.trace.size() == 1);
    CHECK(r.trace[0].player == 3);
    CHECK(r.trace[0].to == 1);
    CHECK(r.trace[0].gain == Rational(13, 20));  // 0.8 against 0.15
    CHECK(r.terminal == State{1, 1, 0, 1});
    CHECK(r.visited.size() == 2);
}

TEST_CASE("unique chain reports the first branch") {
    Network net = stimulus_pair();
    ChainResult r = unique_chain(net, {0, kRefusal});
    CHECK_FALSE(r.ok);
    CHECK(r.failure == ChainResult::Failure::Branch);
    CHECK(r.failure_state == State{0, kRefusal});
    REQUIRE(r.branch_moves.size() == 2);
    CHECK(r.branch_moves[0].player == 0);
    CHECK(r.branch_moves[0].to == kRefusal);
    CHECK(r.branch_moves[1].player == 1);
    CHECK(r.branch_moves[1].to == 0);
}

TEST_CASE("two independent half-adopted pairs cannot walk single file") {
    Network net;
    net.products = {"A"};
    for (int k = 0; k < 4; ++k)
        add_player(net, "s" + std::to_string(k), {0}, Rational(1));
    add_edge(net, 0, 1, Rational(5), EdgeClass::Control);
    add_edge(net, 1, 0, Rational(5), EdgeClass::Control);
    add_edge(net, 2, 3, Rational(5), EdgeClass::Control);
    add_edge(net, 3, 2, Rational(5), EdgeClass::Control);

    // both settled pairs stay quiet; both missing adopters could move
    ChainResult r = unique_chain(net, {0, 0, 0, kRefusal}, {}, {0, 2});
    CHECK(r.ok);  // only player 3 is movable once 0 and 2 are frozen

    ChainResult both = unique_chain(net, {0, kRefusal, 0, kRefusal}, {}, {0, 2});
    CHECK_FALSE(both.ok);
    CHECK(both.failure == ChainResult::Failure::Branch);
    CHECK(both.branch_moves.size() == 2);
    CHECK(both.branch_moves[0].player == 1);
    CHECK(both.branch_moves[1].player == 3);
}

TEST_CASE("unique chain flags a cycle instead of looping") {
    Trio t = chasing_trio();
    ChainResult r = unique_chain(t.net, t.start, {}, t.frozen,
                                 MoveFilter::ProductMovesOnly);
    CHECK_FALSE(r.ok);
    // the walk either hits a two-move state or comes back around
    CHECK(r.failure != ChainResult::Failure::None);
}

TEST_CASE("trace and graph exports") {
    Network net = stimulus_pair();
    ImprovementGraph g = explore(net, {0, kRefusal});

    nlohmann::json tj = trace_to_json({{1, 0, Rational(4)}, {0, kRefusal, Rational(1)}});
    REQUIRE(tj.is_array());
    CHECK(tj[0]["player"] == 1);
    CHECK(tj[0]["to"] == 0);
    CHECK(tj[0]["gain"] == "4/1");
    CHECK(tj[1]["to"] == -1);

    std::string dot = improvement_graph_to_dot(net, g);
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("(+4)") != std::string::npos);          // arc gain label
    CHECK(dot.find("peripheries=2") != std::string::npos); // sink marker
}
