#include "sng/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

namespace sng {

PackedState pack_state(const State& s) {
    PackedState p(s.size(), '\0');
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < kRefusal || s[i] > 250)
            throw std::invalid_argument("strategy id out of packing range");
        p[i] = static_cast<char>(s[i] + 1);
    }
    return p;
}

State unpack_state(const PackedState& p) {
    State s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        s[i] = static_cast<int>(static_cast<unsigned char>(p[i])) - 1;
    return s;
}

std::size_t ImprovementGraph::arc_count() const {
    std::size_t n = 0;
    for (const auto& a : arcs) n += a.size();
    return n;
}

namespace {

// Integer mirror of the payoff data: every weight and threshold multiplied
// by the common denominator, so state expansion runs on exact int64 sums.
struct ScaledNet {
    std::int64_t scale = 1;
    int nplayers = 0;
    int nproducts = 0;
    std::vector<std::vector<std::pair<int, std::int64_t>>> in_edges;  // per dst
    std::vector<std::vector<std::pair<int, std::int64_t>>> options;   // (product, theta)
};

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    std::int64_t g = std::gcd(a, b);
    __int128 l = static_cast<__int128>(a / g) * b;
    if (l > INT64_MAX)
        throw std::overflow_error("common denominator too large for exploration");
    return static_cast<std::int64_t>(l);
}

std::int64_t scaled_value(const Rational& r, std::int64_t scale) {
    __int128 v = static_cast<__int128>(r.num()) * (scale / r.den());
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error("scaled value too large for exploration");
    return static_cast<std::int64_t>(v);
}

ScaledNet build_scaled(const Network& net) {
    ScaledNet sn;
    sn.nplayers = static_cast<int>(net.players.size());
    sn.nproducts = static_cast<int>(net.products.size());
    for (const Edge& e : net.edges) sn.scale = checked_lcm(sn.scale, e.weight.den());
    for (const Player& p : net.players)
        for (int t : p.available) sn.scale = checked_lcm(sn.scale, p.thresholds.at(t).den());
    sn.in_edges.resize(sn.nplayers);
    for (const Edge& e : net.edges)
        if (e.src != e.dst)
            sn.in_edges[e.dst].emplace_back(e.src, scaled_value(e.weight, sn.scale));
    sn.options.resize(sn.nplayers);
    for (int i = 0; i < sn.nplayers; ++i)
        for (int t : net.players[i].available)
            sn.options[i].emplace_back(t, scaled_value(net.players[i].thresholds.at(t), sn.scale));
    return sn;
}

struct ScaledMove {
    int player;
    int to;
    std::int64_t gain;
};

// Same enumeration order as improving_moves: player, refusal, product id.
void scaled_moves(const ScaledNet& sn, const PackedState& s,
                  const std::vector<char>& frozen, MoveFilter filter,
                  std::vector<std::int64_t>& sums, std::vector<ScaledMove>& out) {
    out.clear();
    for (int i = 0; i < sn.nplayers; ++i) {
        if (!frozen.empty() && frozen[i]) continue;
        if (sn.options[i].empty()) continue;
        int cur = static_cast<int>(static_cast<unsigned char>(s[i])) - 1;
        std::fill(sums.begin(), sums.end(), 0);
        for (const auto& [src, w] : sn.in_edges[i]) {
            int t = static_cast<int>(static_cast<unsigned char>(s[src])) - 1;
            if (t >= 0) sums[t] += w;
        }
        std::int64_t cur_pay = 0;
        if (cur >= 0) {
            for (const auto& [t, theta] : sn.options[i])
                if (t == cur) {
                    cur_pay = sums[t] - theta;
                    break;
                }
        }
        if (cur >= 0 && cur_pay < 0 && filter == MoveFilter::AllMoves)
            out.push_back({i, kRefusal, -cur_pay});
        for (const auto& [t, theta] : sn.options[i]) {
            if (t == cur) continue;
            std::int64_t alt = sums[t] - theta;
            if (alt > cur_pay) out.push_back({i, t, alt - cur_pay});
        }
    }
}

std::vector<char> freeze_mask(const FrozenSet& frozen, int nplayers) {
    if (frozen.empty()) return {};
    std::vector<char> mask(nplayers, 0);
    for (PlayerId p : frozen)
        if (p >= 0 && p < nplayers) mask[p] = 1;
    return mask;
}

// Depth-first search for a directed cycle; returns a node on one if found.
std::optional<std::uint32_t> find_cycle_node(const ImprovementGraph& g) {
    std::vector<char> color(g.nodes.size(), 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::pair<std::uint32_t, std::size_t>> stack;
    for (std::uint32_t root = 0; root < g.nodes.size(); ++root) {
        if (color[root] != 0) continue;
        stack.emplace_back(root, 0);
        color[root] = 1;
        while (!stack.empty()) {
            auto& [node, idx] = stack.back();
            if (idx < g.arcs[node].size()) {
                std::uint32_t next = g.arcs[node][idx++].to;
                if (color[next] == 0) {
                    color[next] = 1;
                    stack.emplace_back(next, 0);
                } else if (color[next] == 1) {
                    return next;
                }
            } else {
                color[node] = 2;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

}  // namespace

ImprovementGraph explore(const Network& net, const State& start,
                         const ExploreLimits& limits, const FrozenSet& frozen) {
    validate_state(net, start);
    if (limits.max_states < 1)
        throw std::invalid_argument("state budget must be positive");
    ScaledNet sn = build_scaled(net);
    std::vector<char> mask = freeze_mask(frozen, sn.nplayers);

    ImprovementGraph g;
    std::unordered_map<std::string_view, std::uint32_t> index;
    std::vector<std::uint32_t> depth;
    auto intern = [&](PackedState&& p) -> std::optional<std::uint32_t> {
        auto it = index.find(std::string_view(p));
        if (it != index.end()) return it->second;
        if (g.nodes.size() >= limits.max_states) return std::nullopt;
        g.nodes.push_back(std::move(p));
        std::uint32_t id = static_cast<std::uint32_t>(g.nodes.size()) - 1;
        index.emplace(std::string_view(g.nodes.back()), id);
        depth.push_back(0);
        return id;
    };

    intern(pack_state(start));
    g.start = 0;

    std::vector<std::int64_t> sums(sn.nproducts);
    std::vector<ScaledMove> moves;
    for (std::uint32_t idx = 0; idx < g.nodes.size(); ++idx) {
        scaled_moves(sn, g.nodes[idx], mask, MoveFilter::AllMoves, sums, moves);
        g.arcs.emplace_back();
        if (moves.empty()) {
            g.sinks.push_back(idx);
            continue;
        }
        if (limits.max_depth && depth[idx] >= *limits.max_depth) {
            g.truncated = true;
            continue;
        }
        for (const ScaledMove& m : moves) {
            PackedState succ = g.nodes[idx];
            succ[m.player] = static_cast<char>(m.to + 1);
            auto id = intern(std::move(succ));
            if (!id) {
                g.truncated = true;
                continue;
            }
            if (depth[*id] == 0 && *id != 0) depth[*id] = depth[idx] + 1;
            g.arcs[idx].push_back(
                Arc{Move{m.player, m.to, Rational(m.gain, sn.scale)}, *id});
        }
    }
    if (!g.truncated) g.has_cycle = find_cycle_node(g).has_value();
    return g;
}

PathClassification classify(const ImprovementGraph& g) {
    PathClassification out;
    if (g.truncated) {
        out.kind = PathClassification::Kind::Unknown;
        return out;
    }
    if (g.has_cycle) out.cycle_node = find_cycle_node(g);
    if (!g.has_cycle) {
        out.kind = PathClassification::Kind::AllFinite;
        out.sinks = g.sinks;
    } else if (g.sinks.empty()) {
        out.kind = PathClassification::Kind::AllInfinite;
    } else {
        out.kind = PathClassification::Kind::Mixed;
        out.sinks = g.sinks;
    }
    return out;
}

ChainResult unique_chain(const Network& net, const State& start,
                         const ExploreLimits& limits, const FrozenSet& frozen,
                         MoveFilter filter) {
    validate_state(net, start);
    ScaledNet sn = build_scaled(net);
    std::vector<char> mask = freeze_mask(frozen, sn.nplayers);

    ChainResult res;
    std::unordered_map<PackedState, std::uint32_t> visited;
    PackedState cur = pack_state(start);
    visited.emplace(cur, 0);
    res.visited.push_back(start);

    std::vector<std::int64_t> sums(sn.nproducts);
    std::vector<ScaledMove> moves;
    while (true) {
        scaled_moves(sn, cur, mask, filter, sums, moves);
        if (moves.empty()) {
            res.ok = true;
            res.terminal = unpack_state(cur);
            return res;
        }
        if (moves.size() > 1) {
            res.failure = ChainResult::Failure::Branch;
            res.failure_state = unpack_state(cur);
            for (const ScaledMove& m : moves)
                res.branch_moves.push_back(Move{m.player, m.to, Rational(m.gain, sn.scale)});
            return res;
        }
        const ScaledMove& m = moves.front();
        res.trace.push_back(Move{m.player, m.to, Rational(m.gain, sn.scale)});
        cur[m.player] = static_cast<char>(m.to + 1);
        if (visited.count(cur)) {
            res.failure = ChainResult::Failure::Cycle;
            res.failure_state = unpack_state(cur);
            return res;
        }
        if (res.trace.size() >= limits.max_states) {
            res.failure = ChainResult::Failure::Truncated;
            res.failure_state = unpack_state(cur);
            return res;
        }
        visited.emplace(cur, static_cast<std::uint32_t>(res.visited.size()));
        res.visited.push_back(unpack_state(cur));
    }
}

nlohmann::json trace_to_json(const std::vector<Move>& trace) {
    nlohmann::json j = nlohmann::json::array();
    for (const Move& m : trace)
        j.push_back({{"player", m.player}, {"to", m.to}, {"gain", m.gain.str()}});
    return j;
}

std::string improvement_graph_to_dot(const Network& net, const ImprovementGraph& g) {
    std::ostringstream os;
    os << "digraph improvement {\n  node [shape=box, fontname=\"monospace\"];\n";
    auto strategy_name = [&](int t) {
        return t == kRefusal ? std::string("t0") : net.products.at(t);
    };
    for (std::uint32_t i = 0; i < g.nodes.size(); ++i) {
        State s = unpack_state(g.nodes[i]);
        auto pv = payoff_vector(net, s);
        std::string label;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (k) label += ",";
            label += strategy_name(s[k]);
        }
        label += "\\n(";
        for (std::size_t k = 0; k < pv.size(); ++k) {
            if (k) label += ",";
            label += pv[k].pretty();
        }
        label += ")";
        os << "  s" << i << " [label=\"" << label << "\"";
        if (i == g.start) os << ", penwidth=2";
        if (std::find(g.sinks.begin(), g.sinks.end(), i) != g.sinks.end())
            os << ", peripheries=2";
        os << "];\n";
    }
    for (std::uint32_t i = 0; i < g.arcs.size(); ++i)
        for (const Arc& a : g.arcs[i])
            os << "  s" << i << " -> s" << a.to << " [label=\"" << a.move.player
               << "→" << strategy_name(a.move.to) << " (+" << a.move.gain.pretty()
               << ")\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace sng
