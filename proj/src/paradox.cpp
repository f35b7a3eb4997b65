#include "sng/paradox.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace sng {

namespace {

const std::pair<CaseKind, const char*> kCaseNames[] = {
    {CaseKind::Vulnerable, "vulnerable"},
    {CaseKind::Fragile, "fragile"},
    {CaseKind::Ineffective, "ineffective"},
    {CaseKind::Unsafe, "unsafe"},
    {CaseKind::VeryBad, "very-bad"},
    {CaseKind::DecreaseAllWorse, "dec-all-worse"},
    {CaseKind::DecreaseAllBetter, "dec-all-better"},
    {CaseKind::DecreaseLoop, "dec-loop"},
    {CaseKind::IncreaseAllWorse, "inc-all-worse"},
    {CaseKind::IncreaseAllBetter, "inc-all-better"},
    {CaseKind::IncreaseLoop, "inc-loop"},
};

}  // namespace

std::string case_name(CaseKind kind) {
    for (const auto& [k, name] : kCaseNames)
        if (k == kind) return name;
    throw std::invalid_argument("unknown case kind");
}

std::optional<CaseKind> case_from_name(const std::string& name) {
    for (const auto& [k, n] : kCaseNames)
        if (name == n) return k;
    return std::nullopt;
}

std::vector<CaseKind> all_cases() {
    std::vector<CaseKind> out;
    for (const auto& [k, n] : kCaseNames) out.push_back(k);
    return out;
}

Network apply_mutation(const Network& net, const Mutation& m) {
    switch (m.type) {
        case Mutation::Type::Expand:
            return expand(net, m.player, m.product, m.theta);
        case Mutation::Type::Contract:
            return contract(net, m.player, m.product);
        case Mutation::Type::SetWeight:
            return set_edge_weight(net, m.selector, m.weight);
    }
    throw std::logic_error("unreachable mutation type");
}

State reseed_start(const Network& mutated, const State& start) {
    State out = start;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] != kRefusal && !mutated.players[i].has(out[i]))
            out[i] = kRefusal;
    return out;
}

namespace {

CascadeAssembly checked_cascade(const CascadeParams& p) {
    auto violations = validate_params(p);
    if (!violations.empty()) {
        std::string msg = "invalid cascade parameters";
        for (const auto& v : violations) msg += "; " + v;
        throw std::invalid_argument(msg);
    }
    return build_cascade(p);
}

State embed_state(const CascadeAssembly& a, CascadePhase phase, std::size_t total) {
    State s = cascade_state(a, phase);
    s.resize(total, kRefusal);
    return s;
}

Mutation expand_mutation(PlayerId pl, int product, const Rational& theta) {
    Mutation m;
    m.type = Mutation::Type::Expand;
    m.player = pl;
    m.product = product;
    m.theta = theta;
    return m;
}

Mutation contract_mutation(PlayerId pl, int product) {
    Mutation m;
    m.type = Mutation::Type::Contract;
    m.player = pl;
    m.product = product;
    return m;
}

Mutation reweight_mutation(PlayerId src, PlayerId dst, const Rational& w) {
    Mutation m;
    m.type = Mutation::Type::SetWeight;
    m.selector.src = src;
    m.selector.dst = dst;
    m.selector.cls = EdgeClass::Control;
    m.weight = w;
    return m;
}

// A planned strategy grant for an external player (the expansion cases).
struct ExternalInfo {
    PlayerId id = 0;
    std::vector<int> future;
};

struct BuiltCase {
    ParadoxCase c;
    CascadeAssembly assembly;
    std::vector<ExternalInfo> externals;
};

// Two customers: one committed to A and feeding the cascade's input, one
// choosing between B and C on the cascade's output side. Granting the first
// customer access to C lets every improvement path drag the whole network
// into the low-payoff phase.
BuiltCase make_vulnerable(const CascadeParams& p) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    auto roles = b.assembly.roles;
    PlayerId p1 = add_player(net, "p1", {kProductA}, p.theta);
    PlayerId p2 = add_player(net, "p2", {kProductB, kProductC}, p.theta);
    roles[p1] = "external:1";
    roles[p2] = "external:2";
    add_edge(net, p1, b.assembly.input_anchor, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.output_source, p2, p.c, EdgeClass::Control);
    add_edge(net, p2, p1, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.spirits.at(kProductC).first, p2, p.i, EdgeClass::Inclination);
    attach_influence(b.assembly, net, p1, {kProductB}, {kProductC});
    attach_influence(b.assembly, net, p2, {kProductA});
    State start = embed_state(b.assembly, CascadePhase::Second, net.players.size());
    start[p1] = kProductA;
    start[p2] = kProductC;
    b.c.claim = CaseKind::Vulnerable;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = expand_mutation(p1, kProductC, p.theta);
    b.c.roles = std::move(roles);
    b.c.params = p;
    b.externals = {{p1, {kProductC}}, {p2, {}}};
    return b;
}

// Same wiring plus an inclination that keeps the first customer interested
// in A, so the collapse never settles: the network oscillates forever.
BuiltCase make_fragile(const CascadeParams& p) {
    BuiltCase b = make_vulnerable(p);
    PlayerId p1 = b.externals[0].id;
    add_edge(b.c.base_net, b.assembly.spirits.at(kProductA).first, p1, p.i,
             EdgeClass::Inclination);
    b.c.claim = CaseKind::Fragile;
    return b;
}

// One customer closing the loop output -> customer -> input. Taking its
// current product B away forces it onto A, which releases the cascade into
// the high-payoff phase.
BuiltCase make_ineffective(const CascadeParams& p) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    auto roles = b.assembly.roles;
    PlayerId p1 = add_player(net, "p1", {kProductA, kProductB}, p.theta);
    roles[p1] = "external:1";
    add_edge(net, b.assembly.output_source, p1, p.c, EdgeClass::Control);
    add_edge(net, p1, b.assembly.input_anchor, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.spirits.at(kProductA).first, p1, p.i, EdgeClass::Inclination);
    attach_influence(b.assembly, net, p1, {kProductC});
    State start = embed_state(b.assembly, CascadePhase::First, net.players.size());
    start[p1] = kProductB;
    b.c.claim = CaseKind::Ineffective;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = contract_mutation(p1, kProductB);
    b.c.roles = std::move(roles);
    b.c.params = p;
    b.externals = {{p1, {}}};
    return b;
}

// Three customers around the cascade. Removing the first customer's product
// strands it at refusal and leaves the other two chasing each other through
// the cascade's phases forever.
BuiltCase make_unsafe(const CascadeParams& p) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    auto roles = b.assembly.roles;
    PlayerId p1 = add_player(net, "p1", {kProductB, kProductC}, p.theta);
    PlayerId p2 = add_player(net, "p2", {kProductC, kProductA}, p.theta);
    PlayerId p3 = add_player(net, "p3", {kProductB, kProductC}, p.theta);
    roles[p1] = "external:1";
    roles[p2] = "external:2";
    roles[p3] = "external:3";
    add_edge(net, p1, p2, p.c, EdgeClass::Control);
    add_edge(net, p2, b.assembly.input_anchor, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.output_source, p3, p.c, EdgeClass::Control);
    add_edge(net, p3, p2, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.spirits.at(kProductC).first, p1, p.i, EdgeClass::Inclination);
    add_edge(net, b.assembly.spirits.at(kProductA).first, p2, p.i, EdgeClass::Inclination);
    add_edge(net, b.assembly.spirits.at(kProductC).first, p3, p.i, EdgeClass::Inclination);
    attach_influence(b.assembly, net, p2, {kProductB});
    attach_influence(b.assembly, net, p3, {kProductA});
    State start = embed_state(b.assembly, CascadePhase::First, net.players.size());
    start[p1] = kProductC;
    start[p2] = kProductC;
    start[p3] = kProductB;
    b.c.claim = CaseKind::Unsafe;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = contract_mutation(p1, kProductC);
    b.c.roles = std::move(roles);
    b.c.params = p;
    b.externals = {{p1, {}}, {p2, {}}, {p3, {}}};
    return b;
}

// The cascade's own output feeds its input. Cutting that loop's weight
// returns the cascade to the low phase, costing every player.
BuiltCase make_dec_all_worse(const CascadeParams& p, const Rational& to) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    add_edge(net, b.assembly.output_source, b.assembly.input_anchor, p.c,
             EdgeClass::Control);
    State start = embed_state(b.assembly, CascadePhase::Second, net.players.size());
    b.c.claim = CaseKind::DecreaseAllWorse;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = reweight_mutation(b.assembly.output_source,
                                     b.assembly.input_anchor, to);
    b.c.roles = b.assembly.roles;
    b.c.params = p;
    return b;
}

// The loop-closing customer is held on B by the cascade's output. Cutting
// that supporting edge drops the customer to A and frees the cascade.
BuiltCase make_dec_all_better(const CascadeParams& p, const Rational& to) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    auto roles = b.assembly.roles;
    PlayerId p1 = add_player(net, "p1", {kProductA, kProductB}, p.theta);
    roles[p1] = "external:1";
    add_edge(net, b.assembly.output_source, p1, p.c, EdgeClass::Control);
    add_edge(net, p1, b.assembly.input_anchor, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.spirits.at(kProductA).first, p1, p.i, EdgeClass::Inclination);
    attach_influence(b.assembly, net, p1, {kProductC});
    State start = embed_state(b.assembly, CascadePhase::First, net.players.size());
    start[p1] = kProductB;
    b.c.claim = CaseKind::DecreaseAllBetter;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = reweight_mutation(b.assembly.output_source, p1, to);
    b.c.roles = std::move(roles);
    b.c.params = p;
    b.externals = {{p1, {}}};
    return b;
}

// A fixed C supporter props up the middle customer. Cutting the supporting
// edge starts an endless chase between the remaining two customers.
BuiltCase make_dec_loop(const CascadeParams& p, const Rational& to) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    auto roles = b.assembly.roles;
    PlayerId p1 = add_player(net, "p1", {kProductC}, p.theta);
    PlayerId p2 = add_player(net, "p2", {kProductC, kProductA}, p.theta);
    PlayerId p3 = add_player(net, "p3", {kProductB, kProductC}, p.theta);
    roles[p1] = "external:1";
    roles[p2] = "external:2";
    roles[p3] = "external:3";
    add_edge(net, p1, p2, p.c, EdgeClass::Control);
    add_edge(net, p2, b.assembly.input_anchor, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.output_source, p3, p.c, EdgeClass::Control);
    add_edge(net, p3, p2, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.spirits.at(kProductC).first, p1, p.i, EdgeClass::Inclination);
    add_edge(net, b.assembly.spirits.at(kProductA).first, p2, p.i, EdgeClass::Inclination);
    add_edge(net, b.assembly.spirits.at(kProductC).first, p3, p.i, EdgeClass::Inclination);
    attach_influence(b.assembly, net, p2, {kProductB});
    attach_influence(b.assembly, net, p3, {kProductA});
    State start = embed_state(b.assembly, CascadePhase::First, net.players.size());
    start[p1] = kProductC;
    start[p2] = kProductC;
    start[p3] = kProductB;
    b.c.claim = CaseKind::DecreaseLoop;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = reweight_mutation(p1, p2, to);
    b.c.roles = std::move(roles);
    b.c.params = p;
    b.externals = {{p1, {}}, {p2, {}}, {p3, {}}};
    return b;
}

// A dormant zero-weight edge from the output-side customer to the
// input-side one. Raising its weight lets the output side drag the input
// side off A, collapsing the cascade.
BuiltCase make_inc_all_worse(const CascadeParams& p) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    auto roles = b.assembly.roles;
    PlayerId p1 = add_player(net, "p1", {kProductC, kProductA}, p.theta);
    PlayerId p2 = add_player(net, "p2", {kProductB, kProductC}, p.theta);
    roles[p1] = "external:1";
    roles[p2] = "external:2";
    add_edge(net, p1, b.assembly.input_anchor, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.output_source, p2, p.c, EdgeClass::Control);
    add_edge(net, p2, p1, Rational(0), EdgeClass::Control);
    add_edge(net, b.assembly.spirits.at(kProductC).first, p2, p.i, EdgeClass::Inclination);
    attach_influence(b.assembly, net, p1, {kProductB});
    attach_influence(b.assembly, net, p2, {kProductA});
    State start = embed_state(b.assembly, CascadePhase::Second, net.players.size());
    start[p1] = kProductA;
    start[p2] = kProductC;
    b.c.claim = CaseKind::IncreaseAllWorse;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = reweight_mutation(p2, p1, p.c);
    b.c.roles = std::move(roles);
    b.c.params = p;
    b.externals = {{p1, {}}, {p2, {}}};
    return b;
}

// A dormant edge from a committed A customer to the loop-closing customer.
// Raising its weight pulls the loop customer onto A and frees the cascade.
BuiltCase make_inc_all_better(const CascadeParams& p) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    auto roles = b.assembly.roles;
    PlayerId p1 = add_player(net, "p1", {kProductA}, p.theta);
    PlayerId p2 = add_player(net, "p2", {kProductA, kProductB}, p.theta);
    roles[p1] = "external:1";
    roles[p2] = "external:2";
    add_edge(net, p1, p2, Rational(0), EdgeClass::Control);
    add_edge(net, p2, b.assembly.input_anchor, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.output_source, p2, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.spirits.at(kProductA).first, p1, p.i, EdgeClass::Inclination);
    add_edge(net, b.assembly.spirits.at(kProductA).first, p2, p.i, EdgeClass::Inclination);
    attach_influence(b.assembly, net, p1, {kProductB});
    attach_influence(b.assembly, net, p2, {kProductC});
    State start = embed_state(b.assembly, CascadePhase::First, net.players.size());
    start[p1] = kProductA;
    start[p2] = kProductB;
    b.c.claim = CaseKind::IncreaseAllBetter;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = reweight_mutation(p1, p2, p.c);
    b.c.roles = std::move(roles);
    b.c.params = p;
    b.externals = {{p1, {}}, {p2, {}}};
    return b;
}

// Like the all-worse increase, but the input-side customer keeps an
// inclination toward A, so the drag never settles and the phases alternate.
BuiltCase make_inc_loop(const CascadeParams& p) {
    BuiltCase b;
    b.assembly = checked_cascade(p);
    Network net = b.assembly.net;
    auto roles = b.assembly.roles;
    PlayerId p1 = add_player(net, "p1", {kProductC, kProductA}, p.theta);
    PlayerId p2 = add_player(net, "p2", {kProductB, kProductC}, p.theta);
    roles[p1] = "external:1";
    roles[p2] = "external:2";
    add_edge(net, p1, b.assembly.input_anchor, p.c, EdgeClass::Control);
    add_edge(net, b.assembly.output_source, p2, p.c, EdgeClass::Control);
    add_edge(net, p2, p1, Rational(0), EdgeClass::Control);
    add_edge(net, b.assembly.spirits.at(kProductA).first, p1, p.i, EdgeClass::Inclination);
    add_edge(net, b.assembly.spirits.at(kProductC).first, p2, p.i, EdgeClass::Inclination);
    attach_influence(b.assembly, net, p1, {kProductB});
    attach_influence(b.assembly, net, p2, {kProductA});
    State start = embed_state(b.assembly, CascadePhase::Second, net.players.size());
    start[p1] = kProductA;
    start[p2] = kProductC;
    b.c.claim = CaseKind::IncreaseLoop;
    b.c.base_net = std::move(net);
    b.c.start = std::move(start);
    b.c.mutation = reweight_mutation(p2, p1, p.c);
    b.c.roles = std::move(roles);
    b.c.params = p;
    b.externals = {{p1, {}}, {p2, {}}};
    return b;
}

CascadeAssembly shift_assembly(const CascadeAssembly& a, int off) {
    CascadeAssembly out;
    out.net = a.net;
    out.params = a.params;
    out.input_anchor = a.input_anchor + off;
    out.output_source = a.output_source + off;
    for (const auto& [prod, pair] : a.spirits)
        out.spirits[prod] = {pair.first + off, pair.second + off};
    for (const auto& [prod, members] : a.rank_members) {
        auto& v = out.rank_members[prod];
        for (PlayerId m : members) v.push_back(m + off);
    }
    for (const auto& [prod, targets] : a.influence_targets) {
        auto& v = out.influence_targets[prod];
        for (PlayerId t : targets) v.push_back(t + off);
    }
    for (const auto& [id, role] : a.roles) out.roles[id + off] = role;
    return out;
}

struct SubSlot {
    CaseKind kind;
    Mutation mutation;
    int offset = 0;
};

struct CombinedBuild {
    Network net;
    State start;
    std::map<PlayerId, std::string> roles;
    std::vector<SubSlot> subs;
};

// Disjoint union of the first four constructions. The cascades of the
// first and third parts then spread their emotional influence to every
// player outside their own part that can never use the rank's product,
// futures from the planned expansions included.
CombinedBuild build_combined(const CascadeParams& p, bool with_cross) {
    std::vector<BuiltCase> built;
    built.push_back(make_vulnerable(p));
    built.push_back(make_fragile(p));
    built.push_back(make_ineffective(p));
    built.push_back(make_unsafe(p));

    CombinedBuild out;
    out.net.products = built[0].c.base_net.products;
    std::vector<int> offsets;
    for (std::size_t k = 0; k < built.size(); ++k) {
        const Network& sub = built[k].c.base_net;
        int off = static_cast<int>(out.net.players.size());
        offsets.push_back(off);
        std::string prefix = "x" + std::to_string(k + 1);
        for (const Player& pl : sub.players) {
            Player q = pl;
            q.label = prefix + "." + q.label;
            out.net.players.push_back(std::move(q));
        }
        for (Edge ed : sub.edges) {
            ed.src += off;
            ed.dst += off;
            out.net.edges.push_back(ed);
        }
        for (const auto& [id, role] : built[k].c.roles)
            out.roles[id + off] = prefix + ":" + role;
        for (int s : built[k].c.start) out.start.push_back(s);
        Mutation m = built[k].c.mutation;
        if (m.type == Mutation::Type::SetWeight) {
            m.selector.src += off;
            m.selector.dst += off;
        } else {
            m.player += off;
        }
        out.subs.push_back({built[k].c.claim, m, off});
    }

    std::vector<std::vector<int>> future(out.net.players.size());
    for (std::size_t k = 0; k < built.size(); ++k)
        for (const auto& ex : built[k].externals)
            future[ex.id + offsets[k]] = ex.future;

    if (with_cross) {
        for (int k : {0, 2}) {
            CascadeAssembly shifted = shift_assembly(built[k].assembly, offsets[k]);
            PlayerId lo = offsets[k];
            PlayerId hi = lo + static_cast<PlayerId>(built[k].c.base_net.players.size());
            for (PlayerId v = 0; v < static_cast<PlayerId>(out.net.players.size()); ++v) {
                if (v >= lo && v < hi) continue;
                std::vector<int> mains;
                for (int m : {kProductA, kProductB, kProductC}) {
                    bool usable = out.net.players[v].has(m);
                    for (int f : future[v]) usable = usable || f == m;
                    if (!usable) mains.push_back(m);
                }
                if (!mains.empty())
                    attach_influence(shifted, out.net, v, mains, future[v]);
            }
        }
    }
    return out;
}

}  // namespace

ParadoxCase build_example(CaseKind kind, const CascadeParams& p,
                          const std::optional<Rational>& decrease_to) {
    Rational to = decrease_to.value_or(Rational(0));
    switch (kind) {
        case CaseKind::Vulnerable: return make_vulnerable(p).c;
        case CaseKind::Fragile: return make_fragile(p).c;
        case CaseKind::Ineffective: return make_ineffective(p).c;
        case CaseKind::Unsafe: return make_unsafe(p).c;
        case CaseKind::DecreaseAllWorse: return make_dec_all_worse(p, to).c;
        case CaseKind::DecreaseAllBetter: return make_dec_all_better(p, to).c;
        case CaseKind::DecreaseLoop: return make_dec_loop(p, to).c;
        case CaseKind::IncreaseAllWorse: return make_inc_all_worse(p).c;
        case CaseKind::IncreaseAllBetter: return make_inc_all_better(p).c;
        case CaseKind::IncreaseLoop: return make_inc_loop(p).c;
        case CaseKind::VeryBad: {
            CombinedBuild cb = build_combined(p, true);
            ParadoxCase c;
            c.claim = CaseKind::VeryBad;
            c.base_net = std::move(cb.net);
            c.start = std::move(cb.start);
            c.mutation = cb.subs[0].mutation;
            c.roles = std::move(cb.roles);
            c.params = p;
            return c;
        }
    }
    throw std::logic_error("unreachable case kind");
}

namespace {

const char* verdict_word(ParadoxReport::Verdict v) {
    switch (v) {
        case ParadoxReport::Verdict::Pass: return "PASS";
        case ParadoxReport::Verdict::Fail: return "FAIL";
        case ParadoxReport::Verdict::Unknown: return "UNKNOWN";
    }
    return "?";
}

void push_condition(ParadoxReport& rep, std::string name, bool passed,
                    bool required, std::string detail) {
    rep.conditions.push_back({std::move(name), passed, required, std::move(detail)});
}

std::vector<Move> shortest_path_to_sink(const ImprovementGraph& g) {
    if (g.sinks.empty()) return {};
    std::unordered_set<std::uint32_t> sinkset(g.sinks.begin(), g.sinks.end());
    std::vector<std::int64_t> parent(g.nodes.size(), -2);
    std::vector<int> via(g.nodes.size(), -1);
    std::queue<std::uint32_t> q;
    parent[g.start] = -1;
    std::uint32_t found = g.start;
    bool done = sinkset.count(g.start) > 0;
    q.push(g.start);
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
    std::vector<Move> trace;
    for (std::uint32_t at = found; parent[at] != -1;
         at = static_cast<std::uint32_t>(parent[at]))
        trace.push_back(g.arcs[parent[at]][via[at]].move);
    std::reverse(trace.begin(), trace.end());
    return trace;
}

struct InvariantScan {
    std::size_t monitored_players = 0;
    std::size_t violations = 0;
    std::string first;
};

// Bulk form of the per-state balance check, run over every explored state:
// for each player with incoming emotional edges, the counts of emotional
// sources using each of the player's available products may differ by at
// most one.
InvariantScan scan_emotional_invariant(const Network& net, const ImprovementGraph& g) {
    struct Entry {
        PlayerId v;
        std::vector<PlayerId> sources;
    };
    std::vector<std::vector<PlayerId>> srcs(net.players.size());
    for (const Edge& ed : net.edges)
        if (ed.cls == EdgeClass::Emotional) srcs[ed.dst].push_back(ed.src);
    std::vector<Entry> entries;
    for (PlayerId v = 0; v < static_cast<PlayerId>(net.players.size()); ++v)
        if (!srcs[v].empty() && net.players[v].available.size() >= 2)
            entries.push_back({v, std::move(srcs[v])});

    InvariantScan out;
    out.monitored_players = entries.size();
    std::vector<int> cnt(net.products.size());
    for (std::size_t nid = 0; nid < g.nodes.size(); ++nid) {
        const PackedState& ps = g.nodes[nid];
        for (const Entry& en : entries) {
            std::fill(cnt.begin(), cnt.end(), 0);
            for (PlayerId s : en.sources) {
                char ch = ps[s];
                if (ch > 0) ++cnt[ch - 1];
            }
            const auto& avail = net.players[en.v].available;
            bool bad = false;
            for (std::size_t x = 0; x + 1 < avail.size() && !bad; ++x)
                for (std::size_t y = x + 1; y < avail.size() && !bad; ++y)
                    if (std::abs(cnt[avail[x]] - cnt[avail[y]]) > 1) bad = true;
            if (bad) {
                if (out.violations == 0)
                    out.first = "player " + net.players[en.v].label +
                                " at explored state #" + std::to_string(nid);
                ++out.violations;
            }
        }
    }
    return out;
}

bool state_valid_in(const Network& net, const State& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != kRefusal && !net.players[i].has(s[i])) return false;
    return true;
}

}  // namespace

ParadoxReport verify(const ParadoxCase& c, const ExploreLimits& limits) {
    if (c.claim == CaseKind::VeryBad) return verify_very_bad(c.params, limits);

    auto t0 = std::chrono::steady_clock::now();
    ParadoxReport rep;
    rep.case_name = case_name(c.claim);

    bool start_eq = is_equilibrium(c.base_net, c.start);
    push_condition(rep, "start-is-equilibrium", start_eq, true,
                   start_eq ? "no player can improve before the change"
                            : "a player already has an improving move before the change");

    Network mutated = apply_mutation(c.base_net, c.mutation);
    State start = reseed_start(mutated, c.start);
    if (start != c.start) {
        std::string who;
        for (std::size_t i = 0; i < start.size(); ++i)
            if (start[i] != c.start[i]) who = mutated.players[i].label;
        push_condition(rep, "start-reseeded", true, false,
                       "player " + who + " fell back to refusal, its strategy was removed");
    }

    ImprovementGraph g = explore(mutated, start, limits);
    PathClassification cls = classify(g);
    rep.stats.states = g.nodes.size();
    rep.stats.arcs = g.arc_count();
    rep.stats.sink_count = g.sinks.size();
    rep.stats.has_cycle = g.has_cycle;
    rep.stats.truncated = g.truncated;

    push_condition(rep, "exploration-complete", !g.truncated, true,
                   g.truncated ? "state budget exhausted, classification undetermined"
                               : std::to_string(g.nodes.size()) + " states, " +
                                     std::to_string(rep.stats.arcs) + " moves");

    bool finite_claim = c.claim == CaseKind::Vulnerable || c.claim == CaseKind::Ineffective ||
                        c.claim == CaseKind::DecreaseAllWorse ||
                        c.claim == CaseKind::DecreaseAllBetter ||
                        c.claim == CaseKind::IncreaseAllWorse ||
                        c.claim == CaseKind::IncreaseAllBetter;

    std::string cyc_note;
    if (cls.cycle_node)
        cyc_note = "a cycle passes through explored state #" + std::to_string(*cls.cycle_node);

    if (finite_claim) {
        bool fin = cls.kind == PathClassification::Kind::AllFinite;
        push_condition(rep, "all-paths-finite", fin, true,
                       fin ? "every improvement path terminates"
                           : (g.truncated ? "undetermined, exploration truncated" : cyc_note));
        push_condition(rep, "sinks-exist", !g.sinks.empty(), true,
                       std::to_string(g.sinks.size()) + " terminal state(s)");

        std::vector<Rational> start_pv = payoff_vector(c.base_net, c.start);
        bool start_side = c.claim == CaseKind::Vulnerable ||
                          c.claim == CaseKind::DecreaseAllWorse ||
                          c.claim == CaseKind::IncreaseAllWorse;
        bool dom = !g.sinks.empty();
        std::string dom_detail;
        for (std::uint32_t sid : g.sinks) {
            State sink = unpack_state(g.nodes[sid]);
            std::vector<Rational> pv = payoff_vector(mutated, sink);
            bool ok = start_side ? dominates(start_pv, pv) : dominates(pv, start_pv);
            if (!ok) {
                dom = false;
                for (std::size_t i = 0; i < pv.size(); ++i) {
                    bool strict = start_side ? start_pv[i] > pv[i] : pv[i] > start_pv[i];
                    if (!strict) {
                        dom_detail = "at sink #" + std::to_string(sid) + " player " +
                                     mutated.players[i].label + " has " + pv[i].str() +
                                     " vs " + start_pv[i].str() + " at the start";
                        break;
                    }
                }
                break;
            }
        }
        if (dom && !g.sinks.empty())
            dom_detail = start_side ? "every player is strictly worse off at every sink"
                                    : "every player is strictly better off at every sink";
        push_condition(rep,
                       start_side ? "start-dominates-every-sink" : "every-sink-dominates-start",
                       dom, true, dom_detail);

        if (c.claim == CaseKind::Vulnerable || c.claim == CaseKind::Ineffective ||
            c.claim == CaseKind::DecreaseAllBetter || c.claim == CaseKind::IncreaseAllBetter) {
            bool both = !g.sinks.empty();
            std::string detail = "each sink is stable in the changed and the unchanged network";
            for (std::uint32_t sid : g.sinks) {
                State sink = unpack_state(g.nodes[sid]);
                if (!state_valid_in(c.base_net, sink)) {
                    both = false;
                    detail = "sink #" + std::to_string(sid) +
                             " uses a strategy unavailable in the unchanged network";
                    break;
                }
                if (!is_equilibrium(c.base_net, sink)) {
                    both = false;
                    detail = "sink #" + std::to_string(sid) +
                             " is not stable in the unchanged network";
                    break;
                }
            }
            bool dual = c.claim == CaseKind::Vulnerable || c.claim == CaseKind::Ineffective;
            push_condition(rep,
                           dual ? "sinks-are-equilibria-of-both" : "sinks-are-base-equilibria",
                           both, true, detail);
        }
        rep.witness_trace = shortest_path_to_sink(g);
    } else {
        push_condition(rep, "no-equilibrium-reachable", g.sinks.empty(), true,
                       g.sinks.empty()
                           ? "no improvement path terminates"
                           : std::to_string(g.sinks.size()) + " terminal state(s) reached");
        push_condition(rep, "cycle-exists", g.has_cycle, true,
                       g.has_cycle ? cyc_note : "no reachable cycle");
        if (c.claim == CaseKind::Fragile) {
            State all_ref(mutated.players.size(), kRefusal);
            bool eq = is_equilibrium(mutated, all_ref);
            PackedState packed = pack_state(all_ref);
            bool reached = false;
            for (const PackedState& ps : g.nodes)
                if (ps == packed) {
                    reached = true;
                    break;
                }
            push_condition(rep, "refusal-equilibrium-exists-unreached", eq && !reached, true,
                           eq ? (reached ? "the all-refusal equilibrium was reached"
                                         : "the all-refusal equilibrium exists but no "
                                           "improvement path reaches it")
                              : "total refusal is not an equilibrium here");
        }
        if (cls.cycle_node) rep.cycle_state = unpack_state(g.nodes[*cls.cycle_node]);
    }

    InvariantScan inv = scan_emotional_invariant(mutated, g);
    push_condition(rep, "emotional-invariant", inv.violations == 0, c.invariant_required,
                   inv.violations == 0
                       ? "balanced for all " + std::to_string(inv.monitored_players) +
                             " influenced players across " + std::to_string(g.nodes.size()) +
                             " states"
                       : std::to_string(inv.violations) + " unbalanced (state, player) pairs, first: " +
                             inv.first);

    bool all_required = true;
    for (const Condition& cond : rep.conditions)
        if (cond.required && !cond.passed) all_required = false;
    rep.verdict = g.truncated ? ParadoxReport::Verdict::Unknown
                              : (all_required ? ParadoxReport::Verdict::Pass
                                              : ParadoxReport::Verdict::Fail);

    auto t1 = std::chrono::steady_clock::now();
    rep.stats.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return rep;
}

ParadoxReport verify_very_bad(const CascadeParams& p, const ExploreLimits& limits,
                              bool strip_cross_influence) {
    auto t0 = std::chrono::steady_clock::now();
    ParadoxReport agg;
    agg.case_name = strip_cross_influence ? "very-bad (cross influence removed)" : "very-bad";
    CombinedBuild cb = build_combined(p, !strip_cross_influence);

    bool any_fail = false;
    bool any_unknown = false;
    bool invariant_ok = true;
    for (const SubSlot& slot : cb.subs) {
        ParadoxCase sub;
        sub.claim = slot.kind;
        sub.base_net = cb.net;
        sub.start = cb.start;
        sub.mutation = slot.mutation;
        sub.roles = cb.roles;
        sub.params = p;
        sub.invariant_required = !strip_cross_influence;
        ParadoxReport r = verify(sub, limits);
        r.case_name = case_name(slot.kind) + std::string(" on the combined network");

        any_fail = any_fail || r.verdict == ParadoxReport::Verdict::Fail;
        any_unknown = any_unknown || r.verdict == ParadoxReport::Verdict::Unknown;
        std::string failing;
        for (const Condition& cond : r.conditions) {
            if (cond.required && !cond.passed)
                failing += (failing.empty() ? "" : ", ") + cond.name;
            if (cond.name == "emotional-invariant" && !cond.passed) invariant_ok = false;
        }
        push_condition(agg, case_name(slot.kind) + std::string("-claim"),
                       r.verdict == ParadoxReport::Verdict::Pass, true,
                       std::string(verdict_word(r.verdict)) +
                           (failing.empty() ? "" : ", failing: " + failing));

        agg.stats.states += r.stats.states;
        agg.stats.arcs += r.stats.arcs;
        agg.stats.sink_count += r.stats.sink_count;
        agg.stats.has_cycle = agg.stats.has_cycle || r.stats.has_cycle;
        agg.stats.truncated = agg.stats.truncated || r.stats.truncated;
        agg.parts.push_back(std::move(r));
    }
    push_condition(agg, "emotional-invariant-everywhere", invariant_ok, true,
                   invariant_ok ? "balanced at every explored state of all four checks"
                                : "violated during at least one of the four checks");

    agg.verdict = any_fail ? ParadoxReport::Verdict::Fail
                           : (any_unknown ? ParadoxReport::Verdict::Unknown
                                          : (invariant_ok ? ParadoxReport::Verdict::Pass
                                                          : ParadoxReport::Verdict::Fail));
    auto t1 = std::chrono::steady_clock::now();
    agg.stats.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return agg;
}

std::string three_product_minimality_note() {
    return "Every generated construction uses the fixed three-product alphabet "
           "{A, B, C} and never introduces a fourth product. Three products are "
           "also necessary for examples of this kind; that lower bound is "
           "inherited from earlier published work and is taken as given rather "
           "than re-derived here.";
}

namespace {

nlohmann::json mutation_to_json(const Mutation& m) {
    nlohmann::json j;
    switch (m.type) {
        case Mutation::Type::Expand:
            j["type"] = "expand";
            j["player"] = m.player;
            j["product"] = m.product;
            j["theta"] = m.theta.str();
            break;
        case Mutation::Type::Contract:
            j["type"] = "contract";
            j["player"] = m.player;
            j["product"] = m.product;
            break;
        case Mutation::Type::SetWeight:
            j["type"] = "set-weight";
            j["src"] = m.selector.src;
            j["dst"] = m.selector.dst;
            if (m.selector.cls) j["class"] = edge_class_name(*m.selector.cls);
            j["weight"] = m.weight.str();
            break;
    }
    return j;
}

}  // namespace

nlohmann::json case_to_json(const ParadoxCase& c) {
    nlohmann::json j;
    j["claim"] = case_name(c.claim);
    j["network"] = network_to_json(c.base_net);
    j["start"] = state_to_json(c.start);
    j["mutation"] = mutation_to_json(c.mutation);
    nlohmann::json roles = nlohmann::json::object();
    for (const auto& [id, role] : c.roles) roles[std::to_string(id)] = role;
    j["roles"] = roles;
    return j;
}

nlohmann::json report_to_json(const ParadoxReport& r) {
    nlohmann::json j;
    j["case"] = r.case_name;
    j["verdict"] = verdict_word(r.verdict);
    nlohmann::json conds = nlohmann::json::array();
    for (const Condition& c : r.conditions) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["required"] = c.required;
        cj["detail"] = c.detail;
        conds.push_back(cj);
    }
    j["conditions"] = conds;
    j["stats"] = {{"states", r.stats.states},
                  {"arcs", r.stats.arcs},
                  {"sinks", r.stats.sink_count},
                  {"cycle", r.stats.has_cycle},
                  {"truncated", r.stats.truncated},
                  {"elapsed-ms", r.stats.elapsed_ms}};
    if (!r.witness_trace.empty()) j["witness"] = trace_to_json(r.witness_trace);
    if (r.cycle_state) j["cycle-state"] = state_to_json(*r.cycle_state);
    if (!r.parts.empty()) {
        nlohmann::json parts = nlohmann::json::array();
        for (const ParadoxReport& part : r.parts) parts.push_back(report_to_json(part));
        j["parts"] = parts;
    }
    return j;
}

namespace {

void render_report(const ParadoxReport& r, std::string& out, const std::string& ind) {
    out += ind + "case: " + r.case_name + "\n";
    out += ind + "verdict: " + verdict_word(r.verdict) + "\n";
    out += ind + "explored " + std::to_string(r.stats.states) + " states, " +
           std::to_string(r.stats.arcs) + " moves, " + std::to_string(r.stats.sink_count) +
           " sink(s), cycle: " + (r.stats.has_cycle ? "yes" : "no") +
           ", truncated: " + (r.stats.truncated ? "yes" : "no") + ", " +
           std::to_string(r.stats.elapsed_ms) + " ms\n";
    for (const Condition& c : r.conditions) {
        const char* mark = c.required ? (c.passed ? " ok " : "FAIL") : (c.passed ? "info" : "warn");
        out += ind + "  [" + mark + "] " + c.name;
        if (!c.detail.empty()) out += ": " + c.detail;
        out += "\n";
    }
    if (!r.witness_trace.empty())
        out += ind + "  witness: " + std::to_string(r.witness_trace.size()) +
               " improving moves reach a terminal state\n";
    if (r.cycle_state) {
        out += ind + "  cycle witness state:";
        for (int s : *r.cycle_state) out += " " + std::to_string(s);
        out += "\n";
    }
    for (const ParadoxReport& part : r.parts) {
        out += ind + "  part:\n";
        render_report(part, out, ind + "    ");
    }
}

}  // namespace

std::string report_to_text(const ParadoxReport& r) {
    std::string out;
    render_report(r, out, "");
    return out;
}

}  // namespace sng
