#include "sng/cascade.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sng {

namespace {

const char* product_letter(int t) {
    switch (t) {
        case kProductA: return "A";
        case kProductB: return "B";
        case kProductC: return "C";
    }
    throw std::logic_error("product out of range");
}

// Secondary products alternate along a rank chain, starting with the next
// product in the A->B->C->A cycle.
int first_secondary(int main) { return (main + 1) % 3; }
int second_secondary(int main) { return (main + 2) % 3; }
int member_secondary(int main, int k /*1-based*/) {
    return k % 2 == 1 ? first_secondary(main) : second_secondary(main);
}

std::vector<PlayerId> build_spirits(Network& net, const CascadeParams& p,
                                    std::map<int, std::pair<PlayerId, PlayerId>>& spirits,
                                    std::map<PlayerId, std::string>& roles) {
    std::vector<PlayerId> ids;
    for (int t : {kProductA, kProductB, kProductC}) {
        std::string letter = product_letter(t);
        PlayerId a = add_player(net, "s" + letter + "1", {t}, p.theta);
        PlayerId b = add_player(net, "s" + letter + "2", {t}, p.theta);
        add_edge(net, a, b, p.c, EdgeClass::Control);
        add_edge(net, b, a, p.c, EdgeClass::Control);
        spirits[t] = {a, b};
        roles[a] = "spirit:" + letter;
        roles[b] = "spirit:" + letter;
        ids.push_back(a);
        ids.push_back(b);
    }
    return ids;
}

std::vector<PlayerId> build_rank(Network& net, const CascadeParams& p, int main,
                                 const std::map<int, std::pair<PlayerId, PlayerId>>& spirits,
                                 std::map<PlayerId, std::string>& roles) {
    std::vector<PlayerId> members;
    std::string letter = product_letter(main);
    for (int k = 1; k <= 2 * p.n; ++k) {
        int sec = member_secondary(main, k);
        PlayerId id = add_player(net, letter + std::to_string(k), {main, sec}, p.theta);
        roles[id] = "rank:" + letter + ":" + std::to_string(k);
        // the chain head is inclined toward the rank's main product, everyone
        // else toward their own secondary
        PlayerId spirit = k == 1 ? spirits.at(main).first : spirits.at(sec).first;
        add_edge(net, spirit, id, p.i, EdgeClass::Inclination);
        if (!members.empty()) add_edge(net, members.back(), id, p.c, EdgeClass::Control);
        members.push_back(id);
    }
    return members;
}

}  // namespace

std::vector<std::string> validate_params(const CascadeParams& p) {
    std::vector<std::string> out;
    if (p.n < 1) out.push_back("n must be a positive integer");
    if (!(p.theta > Rational(0))) out.push_back("theta > 0 violated");
    if (!(p.e > Rational(0))) out.push_back("e > 0 violated");
    if (!(p.i > p.e)) out.push_back("i > e violated");
    if (!(p.i > p.theta)) out.push_back("i > theta violated");
    if (!(p.c > p.i + p.e)) out.push_back("c > i + e violated");
    if (p.n >= 1 && !(Rational(p.n) * p.e > p.c + p.i))
        out.push_back("n*e > c + i violated");
    return out;
}

CascadeAssembly build_cascade(const CascadeParams& p) {
    auto violations = validate_params(p);
    if (!violations.empty()) {
        std::string msg = "invalid cascade parameters:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }

    CascadeAssembly a;
    a.params = p;
    a.net.products = {"A", "B", "C"};
    build_spirits(a.net, p, a.spirits, a.roles);

    // ranks in wiring order, each fed by the previous rank's tail
    for (int main : {kProductC, kProductA, kProductB})
        a.rank_members[main] = build_rank(a.net, p, main, a.spirits, a.roles);
    add_edge(a.net, a.rank_members[kProductC].back(), a.rank_members[kProductA].front(),
             p.c, EdgeClass::Control);
    add_edge(a.net, a.rank_members[kProductA].back(), a.rank_members[kProductB].front(),
             p.c, EdgeClass::Control);
    a.input_anchor = a.rank_members[kProductC].front();
    a.output_source = a.rank_members[kProductB].back();

    // every rank pours emotional weight on everyone who can never follow it
    for (int main : {kProductC, kProductA, kProductB}) {
        std::vector<PlayerId>& targets = a.influence_targets[main];
        for (PlayerId v = 0; v < static_cast<PlayerId>(a.net.players.size()); ++v)
            if (!a.net.players[v].has(main)) targets.push_back(v);
        for (PlayerId m : a.rank_members[main])
            for (PlayerId v : targets) add_edge(a.net, m, v, p.e, EdgeClass::Emotional);
    }
    return a;
}

void attach_influence(const CascadeAssembly& assembly, Network& target, PlayerId v,
                      const std::vector<int>& rank_mains,
                      const std::vector<int>& future_products) {
    if (v < 0 || v >= static_cast<PlayerId>(target.players.size()))
        throw std::out_of_range("influence target out of range");
    std::vector<int> effective = target.players[v].available;
    effective.insert(effective.end(), future_products.begin(), future_products.end());
    for (int t : effective)
        if (t != kProductA && t != kProductB && t != kProductC)
            throw std::invalid_argument("influence target uses a product outside the "
                                        "construction alphabet");
    for (int main : rank_mains) {
        if (std::find(effective.begin(), effective.end(), main) != effective.end())
            throw std::invalid_argument(
                "cannot attach rank " + std::string(product_letter(main)) +
                " influence: target can use its main product");
        auto it = assembly.rank_members.find(main);
        if (it == assembly.rank_members.end())
            throw std::invalid_argument("no such rank");
        for (PlayerId m : it->second)
            add_edge(target, m, v, assembly.params.e, EdgeClass::Emotional);
    }
}

State cascade_state(const CascadeAssembly& assembly, CascadePhase phase) {
    State s(assembly.net.players.size(), kRefusal);
    for (const auto& [t, pair] : assembly.spirits) {
        s[pair.first] = t;
        s[pair.second] = t;
    }
    for (const auto& [main, members] : assembly.rank_members)
        for (std::size_t k = 0; k < members.size(); ++k)
            s[members[k]] = phase == CascadePhase::First
                                ? main
                                : member_secondary(main, static_cast<int>(k) + 1);
    return s;
}

std::map<int, int> emotional_profile(const Network& net, const State& s, PlayerId v) {
    std::map<int, int> counts;
    for (const Edge& e : net.edges)
        if (e.dst == v && e.cls == EdgeClass::Emotional && s[e.src] != kRefusal)
            counts[s[e.src]]++;
    return counts;
}

bool check_emotional_invariant(const Network& net, const State& s, PlayerId v) {
    auto counts = emotional_profile(net, s, v);
    const auto& avail = net.players[v].available;
    for (std::size_t x = 0; x < avail.size(); ++x)
        for (std::size_t y = x + 1; y < avail.size(); ++y) {
            int cx = counts.count(avail[x]) ? counts[avail[x]] : 0;
            int cy = counts.count(avail[y]) ? counts[avail[y]] : 0;
            if (cx - cy > 1 || cy - cx > 1) return false;
        }
    return true;
}

bool CheckReport::all_passed() const {
    for (const CheckItem& it : items)
        if (!it.informational && !it.passed) return false;
    return true;
}

const CheckItem* CheckReport::find(const std::string& name) const {
    for (const CheckItem& it : items)
        if (it.name == name) return &it;
    return nullptr;
}

CascadeHarness make_harness(const CascadeAssembly& assembly) {
    CascadeHarness h;
    h.assembly = assembly;
    h.net = assembly.net;
    h.input = add_player(h.net, "input", {kProductA, kProductB, kProductC},
                         assembly.params.theta);
    add_edge(h.net, h.input, assembly.input_anchor, assembly.params.c, EdgeClass::Control);
    h.observer = add_player(h.net, "observer", {}, assembly.params.theta);
    add_edge(h.net, assembly.output_source, h.observer, assembly.params.c,
             EdgeClass::Control);
    return h;
}

namespace {

State harness_state(const CascadeHarness& h, CascadePhase phase, int input_product) {
    State fragment = cascade_state(h.assembly, phase);
    State s(h.net.players.size(), kRefusal);
    std::copy(fragment.begin(), fragment.end(), s.begin());
    s[h.input] = input_product;
    return s;
}

std::vector<PlayerId> cascade_player_ids(const CascadeAssembly& a) {
    std::vector<PlayerId> ids(a.net.players.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<PlayerId>(i);
    return ids;
}

std::string describe_state(const Network& net, const State& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += s[i] == kRefusal ? "t0" : net.products[s[i]];
    }
    return out;
}

std::string describe_moves(const Network& net, const std::vector<Move>& ms) {
    std::string out;
    for (const Move& m : ms) {
        if (!out.empty()) out += "; ";
        out += net.players[m.player].label + "->" +
               (m.to == kRefusal ? std::string("t0") : net.products[m.to]) + " (+" +
               m.gain.pretty() + ")";
    }
    return out;
}

bool invariant_along(const Network& net, const std::vector<State>& states,
                     std::string& witness) {
    for (std::size_t k = 0; k < states.size(); ++k)
        for (PlayerId v = 0; v < static_cast<PlayerId>(net.players.size()); ++v)
            if (!check_emotional_invariant(net, states[k], v)) {
                witness = "player " + net.players[v].label + " unbalanced at step " +
                          std::to_string(k);
                return false;
            }
    return true;
}

}  // namespace

CheckReport verify_rank_lemma(const CascadeAssembly& assembly, int rank_main,
                              int boundary_product) {
    const CascadeParams& p = assembly.params;
    if (rank_main < 0 || rank_main > 2) throw std::invalid_argument("unknown rank");
    if (boundary_product != rank_main && boundary_product != first_secondary(rank_main))
        throw std::invalid_argument(
            "boundary must reward the rank's main product or the chain head's secondary");

    // one rank in isolation: its spirits, its chain, and a pinned driver
    Network net;
    net.products = {"A", "B", "C"};
    std::map<int, std::pair<PlayerId, PlayerId>> spirits;
    std::map<PlayerId, std::string> roles;
    build_spirits(net, p, spirits, roles);
    std::vector<PlayerId> members = build_rank(net, p, rank_main, spirits, roles);
    PlayerId driver = add_player(net, "driver", {kProductA, kProductB, kProductC}, p.theta);
    add_edge(net, driver, members.front(), p.c, EdgeClass::Control);
    FrozenSet frozen{driver};

    auto rank_state = [&](bool main_phase) {
        State s(net.players.size(), kRefusal);
        for (const auto& [t, pr] : spirits) s[pr.first] = s[pr.second] = t;
        for (std::size_t k = 0; k < members.size(); ++k)
            s[members[k]] = main_phase
                                ? rank_main
                                : member_secondary(rank_main, static_cast<int>(k) + 1);
        s[driver] = boundary_product;
        return s;
    };
    bool toward_main = boundary_product == rank_main;
    State expected = rank_state(toward_main);
    State start = rank_state(!toward_main);

    CheckReport rep;
    auto add = [&](std::string name, bool ok, std::string detail = "",
                   bool informational = false) {
        rep.items.push_back({std::move(name), ok, informational, std::move(detail)});
    };

    auto settled_moves = improving_moves(net, expected);
    std::erase_if(settled_moves, [&](const Move& m) { return m.player == driver; });
    add("matching-boundary-stable", settled_moves.empty(), describe_moves(net, settled_moves));

    auto start_moves = improving_moves(net, start);
    std::erase_if(start_moves, [&](const Move& m) { return m.player == driver; });
    add("opposite-state-unstable", !start_moves.empty());

    ChainResult walk = unique_chain(net, start, {}, frozen, MoveFilter::ProductMovesOnly);
    add("product-walk-single-threaded", walk.ok,
        walk.ok ? "" : "stopped at " + describe_state(net, walk.failure_state));
    add("product-walk-terminal", walk.ok && walk.terminal == expected);
    add("product-walk-length",
        walk.trace.size() == static_cast<std::size_t>(2 * p.n),
        std::to_string(walk.trace.size()) + " moves");
    std::map<PlayerId, int> per_player;
    for (const Move& m : walk.trace) per_player[m.player]++;
    bool each_once = per_player.size() == members.size();
    for (PlayerId m : members)
        if (per_player[m] != 1) each_once = false;
    add("product-walk-each-member-once", each_once);

    std::string witness;
    add("emotional-balance-along-walk", invariant_along(net, walk.visited, witness), witness);

    ChainResult strict = unique_chain(net, start, {}, frozen, MoveFilter::AllMoves);
    std::string detail;
    if (!strict.ok && strict.failure == ChainResult::Failure::Branch)
        detail = "branch at " + describe_state(net, strict.failure_state) + ": " +
                 describe_moves(net, strict.branch_moves);
    add("strict-walk-single-threaded", strict.ok, detail, true);

    return rep;
}

GapReport verify_payoff_gap(const CascadeAssembly& assembly) {
    const CascadeParams& p = assembly.params;
    CascadeHarness h = make_harness(assembly);
    State s_first = harness_state(h, CascadePhase::First, kProductC);
    State s_second = harness_state(h, CascadePhase::Second, kProductA);

    GapReport rep;
    rep.bound = Rational(p.n) * p.e - p.c - p.i;
    auto pv_first = payoff_vector(h.net, s_first);
    auto pv_second = payoff_vector(h.net, s_second);
    std::size_t cascade_count = assembly.net.players.size();
    rep.first_payoffs.assign(pv_first.begin(), pv_first.begin() + cascade_count);
    rep.second_payoffs.assign(pv_second.begin(), pv_second.begin() + cascade_count);

    bool all_positive_gap = true;
    bool all_meet_bound = true;
    rep.min_gap = Rational(0);
    for (std::size_t i = 0; i < cascade_count; ++i) {
        Rational g = rep.second_payoffs[i] - rep.first_payoffs[i];
        rep.gaps.push_back(g);
        if (i == 0 || g < rep.min_gap) rep.min_gap = g;
        if (!(g > Rational(0))) all_positive_gap = false;
        if (g < rep.bound) all_meet_bound = false;
    }
    rep.checks.items.push_back({"second-strictly-better-per-player", all_positive_gap,
                                false, ""});
    rep.checks.items.push_back({"gap-meets-bound", all_meet_bound, false,
                                "min gap " + rep.min_gap.pretty() + ", bound " +
                                    rep.bound.pretty()});
    Rational spirit_gap =
        rep.gaps[assembly.spirits.at(kProductA).first];
    rep.checks.items.push_back(
        {"spirit-gain-recorded", spirit_gap >= rep.bound, true,
         "spirit gain " + spirit_gap.pretty() + " (= 2n*e at these weights)"});
    return rep;
}

CheckReport verify_cascade_properties(const CascadeAssembly& assembly) {
    const CascadeParams& p = assembly.params;
    CheckReport rep;
    auto add = [&](std::string name, bool ok, std::string detail = "",
                   bool informational = false) {
        rep.items.push_back({std::move(name), ok, informational, std::move(detail)});
    };

    // 1: the construction exposes exactly one control port in and one out
    int control_into_anchor = 0, control_out_of_tail = 0;
    for (const Edge& e : assembly.net.edges)
        if (e.cls == EdgeClass::Control) {
            if (e.dst == assembly.input_anchor) control_into_anchor++;
            if (e.src == assembly.output_source) control_out_of_tail++;
        }
    add("single-external-ports", control_into_anchor == 0 && control_out_of_tail == 0,
        "anchor and tail are free for exactly one external edge each");

    // 2: every reward source of an inclination edge is a single-product spirit
    bool spirits_fixed = true;
    std::map<PlayerId, int> incoming_inclination;
    for (const Edge& e : assembly.net.edges)
        if (e.cls == EdgeClass::Inclination) {
            if (assembly.net.players[e.src].available.size() != 1) spirits_fixed = false;
            incoming_inclination[e.dst]++;
        }
    for (const auto& [main, members] : assembly.rank_members)
        for (PlayerId m : members)
            if (incoming_inclination[m] != 1) spirits_fixed = false;
    for (const auto& [t, pr] : assembly.spirits)
        if (incoming_inclination.count(pr.first) || incoming_inclination.count(pr.second))
            spirits_fixed = false;
    add("inclination-sources-are-fixed-spirits", spirits_fixed);

    CascadeHarness h = make_harness(assembly);
    auto internals = cascade_player_ids(assembly);
    State second_a = harness_state(h, CascadePhase::Second, kProductA);
    State first_b = harness_state(h, CascadePhase::First, kProductB);
    State first_c = harness_state(h, CascadePhase::First, kProductC);

    // 3 and 4: each boundary condition pins its own equilibrium
    add("second-stable-under-input-A", is_equilibrium_for(h.net, second_a, internals));
    add("output-plays-A-in-second", second_a[assembly.output_source] == kProductA);
    add("first-stable-under-input-B", is_equilibrium_for(h.net, first_b, internals));
    add("first-stable-under-input-C", is_equilibrium_for(h.net, first_c, internals));
    add("output-plays-B-in-first", first_b[assembly.output_source] == kProductB);

    // 5: flipping the input drives the full switch, one move per human
    FrozenSet frozen{h.input};
    std::size_t expected_len = static_cast<std::size_t>(6 * p.n);
    {
        State from = second_a;
        from[h.input] = kProductC;
        ChainResult walk = unique_chain(h.net, from, {}, frozen, MoveFilter::ProductMovesOnly);
        State target = first_c;
        add("walk-to-first-reaches-terminal", walk.ok && walk.terminal == target,
            walk.ok ? "" : "walk did not terminate cleanly");
        add("walk-to-first-length", walk.trace.size() == expected_len,
            std::to_string(walk.trace.size()) + " moves");
        std::string witness;
        add("walk-to-first-balanced", invariant_along(h.net, walk.visited, witness), witness);
        ChainResult strict = unique_chain(h.net, from, {}, frozen, MoveFilter::AllMoves);
        std::string detail;
        if (!strict.ok && strict.failure == ChainResult::Failure::Branch)
            detail = "branch: " + describe_moves(h.net, strict.branch_moves);
        add("walk-to-first-strict-unique", strict.ok, detail, true);
    }
    {
        State from = first_c;
        from[h.input] = kProductA;
        ChainResult walk = unique_chain(h.net, from, {}, frozen, MoveFilter::ProductMovesOnly);
        State target = second_a;
        add("walk-to-second-reaches-terminal", walk.ok && walk.terminal == target,
            walk.ok ? "" : "walk did not terminate cleanly");
        add("walk-to-second-length", walk.trace.size() == expected_len,
            std::to_string(walk.trace.size()) + " moves");
        std::string witness;
        add("walk-to-second-balanced", invariant_along(h.net, walk.visited, witness), witness);
        ChainResult strict = unique_chain(h.net, from, {}, frozen, MoveFilter::AllMoves);
        std::string detail;
        if (!strict.ok && strict.failure == ChainResult::Failure::Branch)
            detail = "branch: " + describe_moves(h.net, strict.branch_moves);
        add("walk-to-second-strict-unique", strict.ok, detail, true);
    }

    // 6 and 7: payoff levels and the linear gap
    auto pv_first = payoff_vector(h.net, first_c);
    auto pv_second = payoff_vector(h.net, second_a);
    bool positive = true;
    for (PlayerId i : internals)
        if (!(pv_first[i] > Rational(0)) || !(pv_second[i] > Rational(0))) positive = false;
    add("payoffs-positive-in-both-states", positive);
    GapReport gap = verify_payoff_gap(assembly);
    add("second-dominates-first",
        gap.checks.find("second-strictly-better-per-player")->passed);
    add("gap-meets-bound", gap.checks.find("gap-meets-bound")->passed,
        "min gap " + gap.min_gap.pretty() + ", bound " + gap.bound.pretty());

    // 8: external receivers gain balanced bulk, nothing in the first state
    {
        CascadeHarness h2 = make_harness(assembly);
        PlayerId v = add_player(h2.net, "ext", {kProductB, kProductC}, p.theta);
        attach_influence(assembly, h2.net, v, {kProductA});
        State s2(h2.net.players.size(), kRefusal);
        State frag = cascade_state(assembly, CascadePhase::Second);
        std::copy(frag.begin(), frag.end(), s2.begin());
        s2[h2.input] = kProductA;
        auto profile2 = emotional_profile(h2.net, s2, v);
        State s1(h2.net.players.size(), kRefusal);
        State frag1 = cascade_state(assembly, CascadePhase::First);
        std::copy(frag1.begin(), frag1.end(), s1.begin());
        s1[h2.input] = kProductC;
        auto profile1 = emotional_profile(h2.net, s1, v);
        bool ok = profile2[kProductB] == p.n && profile2[kProductC] == p.n &&
                  profile1[kProductB] == 0 && profile1[kProductC] == 0;
        add("external-bonus-balanced", ok,
            "second-state bonus n*e per product, none in first");
        bool rejected = false;
        try {
            PlayerId bad = add_player(h2.net, "bad", {kProductA, kProductB}, p.theta);
            attach_influence(assembly, h2.net, bad, {kProductA});
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        add("external-precondition-enforced", rejected);
    }
    return rep;
}

nlohmann::json assembly_to_json(const CascadeAssembly& assembly) {
    nlohmann::json j = network_to_json(assembly.net);
    j["ports"] = {{"input_anchor", assembly.input_anchor},
                  {"output_source", assembly.output_source}};
    nlohmann::json roles = nlohmann::json::object();
    for (const auto& [id, role] : assembly.roles) roles[std::to_string(id)] = role;
    j["roles"] = roles;
    return j;
}

nlohmann::json check_report_to_json(const CheckReport& report) {
    nlohmann::json items = nlohmann::json::array();
    for (const CheckItem& it : report.items)
        items.push_back({{"name", it.name},
                         {"passed", it.passed},
                         {"informational", it.informational},
                         {"detail", it.detail}});
    return {{"all_passed", report.all_passed()}, {"items", items}};
}

}  // namespace sng
