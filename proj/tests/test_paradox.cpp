#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sng/cascade.hpp"
#include "sng/dynamics.hpp"
#include "sng/game.hpp"
#include "sng/paradox.hpp"

using namespace sng;

namespace {

CascadeParams minimal() {
    return {4, Rational(1, 10), Rational(1, 4), Rational(3, 10), Rational(3, 5)};
}

const Condition* cond(const ParadoxReport& r, const std::string& name) {
    for (const Condition& c : r.conditions)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("case names round-trip") {
    auto cases = all_cases();
    CHECK(cases.size() == 11);
    std::set<std::string> seen;
    for (CaseKind k : cases) {
        std::string name = case_name(k);
        CHECK(seen.insert(name).second);
        auto back = case_from_name(name);
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
    CHECK_FALSE(case_from_name("brittle").has_value());
}

TEST_CASE("every construction starts at a base equilibrium on three products") {
    for (CaseKind k : all_cases()) {
        CAPTURE(case_name(k));
        ParadoxCase c = build_example(k, minimal());
        CHECK(c.base_net.products.size() == 3);
        CHECK(is_equilibrium(c.base_net, c.start));
        for (const auto& d : validate_network(c.base_net))
            CHECK(d.severity == Diagnostic::Severity::Note);
    }
}

TEST_CASE("expansion example wiring") {
    ParadoxCase c = build_example(CaseKind::Vulnerable, minimal());
    REQUIRE(c.base_net.players.size() == 32);
    const Player& p1 = c.base_net.players[30];
    const Player& p2 = c.base_net.players[31];
    CHECK(p1.available == std::vector<int>{kProductA});
    CHECK(p2.available == std::vector<int>{kProductB, kProductC});
    CHECK(c.start[30] == kProductA);
    CHECK(c.start[31] == kProductC);
    CHECK(c.mutation.type == Mutation::Type::Expand);
    CHECK(c.mutation.player == 30);
    CHECK(c.mutation.product == kProductC);
    CHECK(c.roles.at(30) == "external:1");
    CHECK(c.roles.at(31) == "external:2");

    int emotional_to_p1 = 0, emotional_to_p2 = 0, incl_to_p2 = 0;
    for (const Edge& e : c.base_net.edges) {
        if (e.cls == EdgeClass::Emotional && e.dst == 30) emotional_to_p1++;
        if (e.cls == EdgeClass::Emotional && e.dst == 31) emotional_to_p2++;
        if (e.cls == EdgeClass::Inclination && e.dst == 31) {
            incl_to_p2++;
            CHECK(c.base_net.players[e.src].available ==
                  std::vector<int>{kProductC});
        }
    }
    CHECK(emotional_to_p1 == 8);  // one rank, 2n members
    CHECK(emotional_to_p2 == 8);
    CHECK(incl_to_p2 == 1);

    SUBCASE("the sibling case differs by one inclination edge") {
        ParadoxCase f = build_example(CaseKind::Fragile, minimal());
        CHECK(f.base_net.players.size() == c.base_net.players.size());
        CHECK(f.base_net.edges.size() == c.base_net.edges.size() + 1);
    }
}

TEST_CASE("contraction example wiring") {
    ParadoxCase c = build_example(CaseKind::Ineffective, minimal());
    CHECK(c.base_net.players.size() == 31);
    CHECK(c.base_net.players[30].available ==
          std::vector<int>{kProductA, kProductB});
    CHECK(c.mutation.type == Mutation::Type::Contract);
    CHECK(c.mutation.product == kProductB);

    ParadoxCase u = build_example(CaseKind::Unsafe, minimal());
    CHECK(u.base_net.players.size() == 33);
    CHECK(u.base_net.players[30].available ==
          std::vector<int>{kProductB, kProductC});
    CHECK(u.base_net.players[31].available ==
          std::vector<int>{kProductA, kProductC});
    CHECK(u.base_net.players[32].available ==
          std::vector<int>{kProductB, kProductC});
}

TEST_CASE("mutations apply and reseed") {
    Network net;
    net.products = {"A", "B"};
    add_player(net, "p", {0, 1}, Rational(1));
    add_player(net, "q", {0}, Rational(1));
    add_edge(net, 0, 1, Rational(2), EdgeClass::Control);

    Mutation grow{Mutation::Type::Expand, 1, 1, Rational(3), {}, {}};
    Network bigger = apply_mutation(net, grow);
    CHECK(bigger.players[1].available == std::vector<int>{0, 1});
    CHECK(bigger.players[1].thresholds.at(1) == Rational(3));

    Mutation shrink{Mutation::Type::Contract, 0, 1, {}, {}, {}};
    Network smaller = apply_mutation(net, shrink);
    CHECK(smaller.players[0].available == std::vector<int>{0});

    State invalid{1, 0};
    CHECK(reseed_start(smaller, invalid) == State{kRefusal, 0});
    CHECK(reseed_start(bigger, invalid) == invalid);

    Mutation reweight{Mutation::Type::SetWeight, 0, 0, {},
                      EdgeSelector{0, 1, EdgeClass::Control}, Rational(7)};
    Network heavier = apply_mutation(net, reweight);
    CHECK(payoff(heavier, {0, 0}, 1) == Rational(6));
}

TEST_CASE("the expansion trap closes and everyone loses") {
    ParadoxReport r = verify(build_example(CaseKind::Vulnerable, minimal()));
    CHECK(r.verdict == ParadoxReport::Verdict::Pass);
    CHECK(r.stats.states == 30);
    CHECK(r.stats.sink_count == 1);
    CHECK_FALSE(r.stats.truncated);
    CHECK(cond(r, "start-dominates-every-sink") != nullptr);
    CHECK(cond(r, "start-dominates-every-sink")->passed);
    CHECK(cond(r, "sinks-are-equilibria-of-both")->passed);
    CHECK_FALSE(r.witness_trace.empty());

    SUBCASE("the new option ends refused at the only rest point") {
        ParadoxCase c = build_example(CaseKind::Vulnerable, minimal());
        Network mut = apply_mutation(c.base_net, c.mutation);
        ImprovementGraph g = explore(mut, c.start);
        REQUIRE(g.sinks.size() == 1);
        State sink = unpack_state(g.nodes[g.sinks[0]]);
        CHECK(sink[30] == kRefusal);
    }
}

TEST_CASE("the contraction claim outgrows any practical budget standalone") {
    ParadoxReport r = verify(build_example(CaseKind::Ineffective, minimal()),
                             {20000, {}});
    // the walk to the better rest point exists, but the full relation also
    // admits refusal detours at every abandoned chain link, so the graph
    // outgrows the budget and the claim stays undetermined
    CHECK(r.verdict == ParadoxReport::Verdict::Unknown);
    CHECK(r.stats.truncated);
    CHECK(cond(r, "start-is-equilibrium")->passed);
    CHECK(cond(r, "start-reseeded") != nullptr);
}

TEST_CASE("oscillating cases stay undetermined within a finite budget") {
    for (CaseKind k : {CaseKind::Fragile, CaseKind::Unsafe}) {
        CAPTURE(case_name(k));
        ParadoxReport r = verify(build_example(k, minimal()), {20000, {}});
        CHECK(r.verdict == ParadoxReport::Verdict::Unknown);
        CHECK(r.stats.truncated);
        CHECK(r.stats.sink_count == 0);
    }
}

TEST_CASE("weight decrease on the closed loop makes everyone worse") {
    ParadoxReport zero = verify(build_example(CaseKind::DecreaseAllWorse, minimal()));
    CHECK(zero.verdict == ParadoxReport::Verdict::Pass);
    CHECK(zero.stats.states == 27);

    ParadoxReport partial = verify(build_example(CaseKind::DecreaseAllWorse, minimal(),
                                                 Rational(1, 40)));
    CHECK(partial.verdict == zero.verdict);
    CHECK(partial.stats.states == zero.stats.states);
}

TEST_CASE("weight increase wakes the dormant edge and everyone loses") {
    ParadoxReport r = verify(build_example(CaseKind::IncreaseAllWorse, minimal()));
    CHECK(r.verdict == ParadoxReport::Verdict::Pass);
    CHECK(cond(r, "start-dominates-every-sink")->passed);
}

TEST_CASE("combined network carries all four claims at once") {
    ParadoxReport r = verify_very_bad(minimal());
    CHECK(r.verdict == ParadoxReport::Verdict::Pass);
    REQUIRE(r.parts.size() == 4);
    for (const ParadoxReport& part : r.parts) {
        CAPTURE(part.case_name);
        CHECK(part.verdict == ParadoxReport::Verdict::Pass);
        CHECK_FALSE(part.stats.truncated);
        CHECK(part.stats.states <= 150);
        const Condition* inv = cond(part, "emotional-invariant");
        REQUIRE(inv != nullptr);
        CHECK(inv->passed);
        CHECK(inv->required);
    }
    CHECK(cond(r, "emotional-invariant-everywhere")->passed);

    SUBCASE("the shared network is the disjoint union plus cross influence") {
        ParadoxCase combined = build_example(CaseKind::VeryBad, minimal());
        CHECK(combined.base_net.players.size() == 32 + 32 + 31 + 33);
        // the two finite-claim cascades also reach into the other blocks
        bool cross_found = false;
        for (const Edge& e : combined.base_net.edges)
            if (e.cls == EdgeClass::Emotional && e.src < 32 && e.dst >= 32)
                cross_found = true;
        CHECK(cross_found);
    }
}

TEST_CASE("without cross influence the combined checks lose their shelter") {
    ParadoxReport r = verify_very_bad(minimal(), {20000, {}}, true);
    CHECK(r.verdict == ParadoxReport::Verdict::Fail);
    REQUIRE(r.parts.size() == 4);

    // the expansion trap still terminates, but players in untouched blocks
    // keep their exact payoffs, so strict domination breaks on ties
    CHECK(r.parts[0].verdict == ParadoxReport::Verdict::Fail);
    const Condition* dom = cond(r.parts[0], "start-dominates-every-sink");
    REQUIRE(dom != nullptr);
    CHECK_FALSE(dom->passed);

    // the other three blocks explode into refusal churn and stay undetermined
    for (std::size_t k = 1; k < 4; ++k)
        CHECK(r.parts[k].verdict == ParadoxReport::Verdict::Unknown);
}

TEST_CASE("reports serialize") {
    ParadoxReport r = verify(build_example(CaseKind::Vulnerable, minimal()));
    nlohmann::json j = report_to_json(r);
    CHECK(j["case"] == "vulnerable");
    CHECK(j["verdict"] == "PASS");
    CHECK(j["conditions"].is_array());
    CHECK(j["stats"]["states"] == 30);

    std::string text = report_to_text(r);
    CHECK(text.find("verdict: PASS") != std::string::npos);
    CHECK(text.find("start-is-equilibrium") != std::string::npos);

    ParadoxCase c = build_example(CaseKind::Vulnerable, minimal());
    nlohmann::json env = case_to_json(c);
    CHECK(env["claim"] == "vulnerable");
    CHECK(env["network"]["players"].size() == 32);
    CHECK(env["start"].size() == 32);
    CHECK(env["mutation"]["type"] == "expand");
}

TEST_CASE("the alphabet stays at three products") {
    std::string note = three_product_minimality_note();
    CHECK_FALSE(note.empty());
    CHECK(note.find("three") != std::string::npos);
}
