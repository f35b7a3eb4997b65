#include "sng/oracle.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "sng/dynamics.hpp"

namespace sng {

namespace {

// Dense aggregated adjacency, the oracle's own view of the graph.
using WeightMatrix = std::vector<std::vector<Rational>>;

WeightMatrix build_matrix(const Network& net) {
    std::size_t n = net.players.size();
    WeightMatrix w(n, std::vector<Rational>(n, Rational(0)));
    for (const Edge& ed : net.edges) w[ed.src][ed.dst] += ed.weight;
    return w;
}

// The defining sum, written out directly: incoming agreeing weight minus
// the use price, zero on refusal.
Rational oracle_payoff(const Network& net, const WeightMatrix& w, const State& s,
                       PlayerId i) {
    if (s[i] == kRefusal) return Rational(0);
    Rational total(0);
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (static_cast<PlayerId>(j) == i) continue;
        if (s[j] == s[i]) total += w[j][i];
    }
    return total - net.players[i].thresholds.at(s[i]);
}

struct OracleMove {
    PlayerId player;
    int to;
    Rational gain;

    friend bool operator<(const OracleMove& a, const OracleMove& b) {
        if (a.player != b.player) return a.player < b.player;
        if (a.to != b.to) return a.to < b.to;
        return a.gain < b.gain;
    }
};

std::vector<OracleMove> oracle_moves(const Network& net, const WeightMatrix& w,
                                     const State& s) {
    std::vector<OracleMove> out;
    State probe = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        PlayerId pid = static_cast<PlayerId>(i);
        Rational cur = oracle_payoff(net, w, s, pid);
        std::vector<int> alternatives;
        if (s[i] != kRefusal) alternatives.push_back(kRefusal);
        for (int prod : net.players[i].available)
            if (prod != s[i]) alternatives.push_back(prod);
        for (int alt : alternatives) {
            probe[i] = alt;
            Rational next = oracle_payoff(net, w, probe, pid);
            if (next > cur) out.push_back({pid, alt, next - cur});
        }
        probe[i] = s[i];
    }
    return out;
}

// Full strategy space walker. Throws once the space is known to exceed the
// budget, before any heavy work starts.
struct SpaceWalker {
    std::vector<std::vector<int>> options;
    std::vector<std::size_t> index;
    State state;
    bool live = true;

    SpaceWalker(const Network& net, std::size_t budget) {
        std::size_t total = 1;
        for (const Player& pl : net.players) {
            std::vector<int> opts;
            opts.push_back(kRefusal);
            for (int prod : pl.available) opts.push_back(prod);
            if (total > budget / opts.size())
                throw std::length_error("strategy space exceeds the enumeration budget");
            total *= opts.size();
            options.push_back(std::move(opts));
        }
        index.assign(options.size(), 0);
        state.assign(options.size(), kRefusal);
    }

    void advance() {
        for (std::size_t i = 0; i < index.size(); ++i) {
            if (++index[i] < options[i].size()) {
                state[i] = options[i][index[i]];
                return;
            }
            index[i] = 0;
            state[i] = options[i][0];
        }
        live = false;
    }
};

std::vector<State> oracle_reachable(const Network& net, const WeightMatrix& w,
                                    const State& start, std::size_t budget) {
    std::set<State> seen;
    std::queue<State> q;
    seen.insert(start);
    q.push(start);
    while (!q.empty()) {
        State s = q.front();
        q.pop();
        for (const OracleMove& m : oracle_moves(net, w, s)) {
            State next = s;
            next[m.player] = m.to;
            if (seen.insert(next).second) {
                if (seen.size() > budget)
                    throw std::length_error("reachable set exceeds the enumeration budget");
                q.push(next);
            }
        }
    }
    return {seen.begin(), seen.end()};
}

std::string describe_state(const State& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + ")";
}

}  // namespace

std::vector<State> enumerate_equilibria(const Network& net,
                                        const EnumerationBudget& budget) {
    WeightMatrix w = build_matrix(net);
    std::vector<State> out;
    for (SpaceWalker walk(net, budget.max_total_states); walk.live; walk.advance())
        if (oracle_moves(net, w, walk.state).empty()) out.push_back(walk.state);
    return out;
}

EngineHooks default_engine_hooks() {
    EngineHooks h;
    h.payoff = [](const Network& net, const State& s, PlayerId i) {
        return payoff(net, s, i);
    };
    h.moves = [](const Network& net, const State& s) { return improving_moves(net, s); };
    h.equilibrium = [](const Network& net, const State& s) {
        return is_equilibrium(net, s);
    };
    h.reachable = [](const Network& net, const State& start) {
        ImprovementGraph g = explore(net, start);
        std::vector<State> out;
        for (const PackedState& ps : g.nodes) out.push_back(unpack_state(ps));
        return out;
    };
    return h;
}

CrossCheckReport cross_check(const Network& net, const EnumerationBudget& budget,
                             const EngineHooks& hooks) {
    CrossCheckReport rep;
    WeightMatrix w = build_matrix(net);
    auto note = [&rep](std::string msg) {
        if (rep.mismatches.size() < 25) rep.mismatches.push_back(std::move(msg));
    };

    for (SpaceWalker walk(net, budget.max_total_states); walk.live; walk.advance()) {
        const State& s = walk.state;
        ++rep.states_scanned;

        for (std::size_t i = 0; i < s.size(); ++i) {
            Rational want = oracle_payoff(net, w, s, static_cast<PlayerId>(i));
            Rational got = hooks.payoff(net, s, static_cast<PlayerId>(i));
            if (want != got)
                note("payoff of player " + std::to_string(i) + " at " + describe_state(s) +
                     ": engine " + got.str() + ", oracle " + want.str());
        }

        std::vector<OracleMove> want_moves = oracle_moves(net, w, s);
        std::vector<OracleMove> got_moves;
        for (const Move& m : hooks.moves(net, s)) got_moves.push_back({m.player, m.to, m.gain});
        std::sort(want_moves.begin(), want_moves.end());
        std::sort(got_moves.begin(), got_moves.end());
        if (!(want_moves.size() == got_moves.size() &&
              std::equal(want_moves.begin(), want_moves.end(), got_moves.begin(),
                         [](const OracleMove& a, const OracleMove& b) {
                             return a.player == b.player && a.to == b.to && a.gain == b.gain;
                         })))
            note("improving deviations differ at " + describe_state(s) + ": engine " +
                 std::to_string(got_moves.size()) + ", oracle " +
                 std::to_string(want_moves.size()));

        bool want_eq = want_moves.empty();
        if (want_eq) ++rep.equilibria;
        bool got_eq = hooks.equilibrium(net, s);
        if (want_eq != got_eq)
            note("equilibrium flag differs at " + describe_state(s));
    }

    State start;
    for (const Player& pl : net.players)
        start.push_back(pl.available.empty() ? kRefusal : pl.available.front());
    std::vector<State> want_reach = oracle_reachable(net, w, start, budget.max_total_states);
    std::vector<State> got_reach = hooks.reachable(net, start);
    std::sort(want_reach.begin(), want_reach.end());
    std::sort(got_reach.begin(), got_reach.end());
    if (want_reach != got_reach) {
        note("reachable sets from " + describe_state(start) + " differ: engine " +
             std::to_string(got_reach.size()) + " states, oracle " +
             std::to_string(want_reach.size()));
    }

    rep.ok = rep.mismatches.empty();
    return rep;
}

Network random_network(std::mt19937& rng, int max_players, int max_products) {
    std::uniform_int_distribution<int> nplayers(2, max_players);
    std::uniform_int_distribution<int> nproducts(1, max_products);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> num(1, 8);
    std::uniform_int_distribution<int> den(1, 8);
    std::uniform_int_distribution<int> cls(0, 3);
    std::uniform_int_distribution<int> rare(0, 9);

    static const char* kProductNames[] = {"A", "B", "C", "D", "E", "F"};
    Network net;
    int np = nproducts(rng);
    for (int p = 0; p < np; ++p) net.products.push_back(kProductNames[p]);

    int players = nplayers(rng);
    for (int i = 0; i < players; ++i) {
        Player pl;
        pl.label = "v" + std::to_string(i);
        for (int p = 0; p < np; ++p)
            if (coin(rng)) {
                pl.available.push_back(p);
                pl.thresholds[p] = Rational(num(rng), den(rng));
            }
        net.players.push_back(std::move(pl));
    }

    auto edge_class = [&]() {
        switch (cls(rng)) {
            case 0: return EdgeClass::Plain;
            case 1: return EdgeClass::Control;
            case 2: return EdgeClass::Inclination;
            default: return EdgeClass::Emotional;
        }
    };
    for (int i = 0; i < players; ++i)
        for (int j = 0; j < players; ++j) {
            if (i == j) continue;
            if (coin(rng)) {
                add_edge(net, i, j, Rational(num(rng), den(rng)), edge_class());
                if (rare(rng) == 0)
                    add_edge(net, i, j, Rational(num(rng), den(rng)), edge_class());
            }
        }
    return net;
}

nlohmann::json cross_check_report_to_json(const CrossCheckReport& r) {
    nlohmann::json j;
    j["ok"] = r.ok;
    j["states-scanned"] = r.states_scanned;
    j["equilibria"] = r.equilibria;
    j["mismatches"] = r.mismatches;
    return j;
}

}  // namespace sng
