#include "sng/game.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sng {

std::string edge_class_name(EdgeClass c) {
    switch (c) {
        case EdgeClass::Control: return "control";
        case EdgeClass::Inclination: return "inclination";
        case EdgeClass::Emotional: return "emotional";
        case EdgeClass::Plain: return "plain";
    }
    throw std::logic_error("unreachable edge class");
}

EdgeClass edge_class_from_name(const std::string& name) {
    if (name == "control") return EdgeClass::Control;
    if (name == "inclination") return EdgeClass::Inclination;
    if (name == "emotional") return EdgeClass::Emotional;
    if (name == "plain") return EdgeClass::Plain;
    throw std::invalid_argument("unknown edge class \"" + name + "\"");
}

bool Player::has(int product) const {
    return std::binary_search(available.begin(), available.end(), product);
}

PlayerId add_player(Network& net, std::string label, std::vector<int> available,
                    const Rational& theta) {
    Player p;
    p.label = std::move(label);
    std::sort(available.begin(), available.end());
    available.erase(std::unique(available.begin(), available.end()), available.end());
    p.available = std::move(available);
    for (int t : p.available) p.thresholds[t] = theta;
    net.players.push_back(std::move(p));
    return static_cast<PlayerId>(net.players.size()) - 1;
}

void add_edge(Network& net, PlayerId src, PlayerId dst, const Rational& weight,
              EdgeClass cls) {
    net.edges.push_back(Edge{src, dst, weight, cls});
}

void validate_state(const Network& net, const State& s) {
    if (s.size() != net.players.size())
        throw std::invalid_argument("state length does not match player count");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == kRefusal) continue;
        if (s[i] < 0 || s[i] >= static_cast<int>(net.products.size()))
            throw std::invalid_argument("state assigns unknown product to player " +
                                        std::to_string(i));
        if (!net.players[i].has(s[i]))
            throw std::invalid_argument("state assigns unavailable product to player " +
                                        std::to_string(i));
    }
}

static const Rational& threshold_of(const Network& net, PlayerId i, int product) {
    auto it = net.players[i].thresholds.find(product);
    if (it == net.players[i].thresholds.end())
        throw std::logic_error("missing threshold for player " + std::to_string(i));
    return it->second;
}

Rational payoff(const Network& net, const State& s, PlayerId i) {
    if (i < 0 || i >= static_cast<int>(net.players.size()))
        throw std::out_of_range("player id out of range");
    validate_state(net, s);
    if (s[i] == kRefusal) return Rational(0);
    Rational sum(0);
    for (const Edge& e : net.edges)
        if (e.dst == i && e.src != i && s[e.src] == s[i]) sum += e.weight;
    return sum - threshold_of(net, i, s[i]);
}

std::vector<Rational> payoff_vector(const Network& net, const State& s) {
    validate_state(net, s);
    std::vector<Rational> out(net.players.size(), Rational(0));
    for (std::size_t i = 0; i < net.players.size(); ++i)
        if (s[i] != kRefusal) {
            Rational sum(0);
            for (const Edge& e : net.edges)
                if (e.dst == static_cast<PlayerId>(i) && s[e.src] == s[i]) sum += e.weight;
            out[i] = sum - threshold_of(net, static_cast<PlayerId>(i), s[i]);
        }
    return out;
}

std::vector<Move> improving_moves(const Network& net, const State& s) {
    validate_state(net, s);
    std::vector<Move> out;
    std::vector<Rational> sums(net.products.size());
    for (PlayerId i = 0; i < static_cast<PlayerId>(net.players.size()); ++i) {
        const Player& pl = net.players[i];
        if (pl.available.empty() && s[i] == kRefusal) continue;
        std::fill(sums.begin(), sums.end(), Rational(0));
        for (const Edge& e : net.edges)
            if (e.dst == i && s[e.src] != kRefusal) sums[s[e.src]] += e.weight;
        Rational cur = s[i] == kRefusal ? Rational(0)
                                        : sums[s[i]] - threshold_of(net, i, s[i]);
        if (s[i] != kRefusal && Rational(0) > cur)
            out.push_back(Move{i, kRefusal, -cur});
        for (int t : pl.available) {
            if (t == s[i]) continue;
            Rational alt = sums[t] - threshold_of(net, i, t);
            if (alt > cur) out.push_back(Move{i, t, alt - cur});
        }
    }
    return out;
}

bool is_equilibrium(const Network& net, const State& s) {
    return improving_moves(net, s).empty();
}

bool is_equilibrium_for(const Network& net, const State& s,
                        const std::vector<PlayerId>& players) {
    auto moves = improving_moves(net, s);
    for (const Move& m : moves)
        if (std::find(players.begin(), players.end(), m.player) != players.end())
            return false;
    return true;
}

State apply_move(const Network& net, const State& s, const Move& m) {
    validate_state(net, s);
    if (m.player < 0 || m.player >= static_cast<PlayerId>(net.players.size()))
        throw std::out_of_range("move player out of range");
    if (m.to != kRefusal && !net.players[m.player].has(m.to))
        throw std::invalid_argument("move to unavailable product");
    if (m.to == s[m.player])
        throw std::invalid_argument("move does not change the strategy");
    State next = s;
    next[m.player] = m.to;
    Rational gain = payoff(net, next, m.player) - payoff(net, s, m.player);
    if (!(gain > Rational(0)))
        throw std::invalid_argument("move is not improving (gain " + gain.str() + ")");
    return next;
}

Network expand(const Network& net, PlayerId i, int product, const Rational& theta) {
    if (i < 0 || i >= static_cast<PlayerId>(net.players.size()))
        throw std::out_of_range("player id out of range");
    if (product < 0 || product >= static_cast<int>(net.products.size()))
        throw std::invalid_argument("unknown product id");
    if (net.players[i].has(product))
        throw std::invalid_argument("product already available to player " +
                                    std::to_string(i));
    if (!(theta > Rational(0)))
        throw std::invalid_argument("use price must be positive");
    Network out = net;
    auto& avail = out.players[i].available;
    avail.insert(std::upper_bound(avail.begin(), avail.end(), product), product);
    out.players[i].thresholds[product] = theta;
    return out;
}

Network contract(const Network& net, PlayerId i, int product) {
    if (i < 0 || i >= static_cast<PlayerId>(net.players.size()))
        throw std::out_of_range("player id out of range");
    if (!net.players[i].has(product))
        throw std::invalid_argument("product not available to player " +
                                    std::to_string(i));
    Network out = net;
    auto& avail = out.players[i].available;
    avail.erase(std::find(avail.begin(), avail.end(), product));
    out.players[i].thresholds.erase(product);
    return out;
}

Network set_edge_weight(const Network& net, const EdgeSelector& sel,
                        const Rational& weight) {
    if (weight < Rational(0))
        throw std::invalid_argument("edge weight must be non-negative");
    int found = -1;
    for (std::size_t k = 0; k < net.edges.size(); ++k) {
        const Edge& e = net.edges[k];
        if (e.src != sel.src || e.dst != sel.dst) continue;
        if (sel.cls && e.cls != *sel.cls) continue;
        if (found >= 0)
            throw std::invalid_argument("edge selector is ambiguous");
        found = static_cast<int>(k);
    }
    if (found < 0) throw std::invalid_argument("edge selector matches no edge");
    Network out = net;
    out.edges[found].weight = weight;
    return out;
}

bool dominates(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("payoff vectors differ in length");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] > b[i])) return false;
    return true;
}

std::vector<Diagnostic> validate_network(const Network& net) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string m) {
        out.push_back({Diagnostic::Severity::Error, std::move(m)});
    };
    auto note = [&](std::string m) {
        out.push_back({Diagnostic::Severity::Note, std::move(m)});
    };
    int nprod = static_cast<int>(net.products.size());
    for (std::size_t i = 0; i < net.players.size(); ++i) {
        const Player& p = net.players[i];
        std::string who = "player " + std::to_string(i);
        std::set<int> seen;
        for (int t : p.available) {
            if (t < 0 || t >= nprod) {
                error(who + ": availability references unknown product " +
                      std::to_string(t));
                continue;
            }
            if (!seen.insert(t).second)
                error(who + ": duplicate availability entry " + std::to_string(t));
            auto it = p.thresholds.find(t);
            if (it == p.thresholds.end())
                error(who + ": missing threshold for product " + std::to_string(t));
            else if (!(it->second > Rational(0)))
                error(who + ": non-positive threshold for product " + std::to_string(t));
        }
        if (!std::is_sorted(p.available.begin(), p.available.end()))
            error(who + ": availability list not sorted");
        for (const auto& [t, th] : p.thresholds)
            if (!seen.count(t))
                note(who + ": threshold given for unavailable product " +
                     std::to_string(t));
        if (p.available.empty())
            note(who + ": empty availability (refusal is the only strategy)");
    }
    std::map<std::pair<PlayerId, PlayerId>, int> multiplicity;
    for (std::size_t k = 0; k < net.edges.size(); ++k) {
        const Edge& e = net.edges[k];
        std::string which = "edge " + std::to_string(k);
        if (e.src < 0 || e.src >= static_cast<int>(net.players.size()) ||
            e.dst < 0 || e.dst >= static_cast<int>(net.players.size())) {
            error(which + ": dangling endpoint");
            continue;
        }
        if (e.src == e.dst) error(which + ": self-loop");
        if (e.weight < Rational(0)) error(which + ": negative weight");
        multiplicity[{e.src, e.dst}]++;
    }
    for (const auto& [key, count] : multiplicity)
        if (count > 1)
            note("parallel edges " + std::to_string(key.first) + "->" +
                 std::to_string(key.second) + " (x" + std::to_string(count) +
                 ", weights aggregate)");
    return out;
}

nlohmann::json network_to_json(const Network& net) {
    nlohmann::json j;
    j["products"] = net.products;
    j["players"] = nlohmann::json::array();
    for (const Player& p : net.players) {
        nlohmann::json jp;
        jp["label"] = p.label;
        jp["available"] = p.available;
        nlohmann::json th = nlohmann::json::object();
        for (const auto& [t, v] : p.thresholds) th[std::to_string(t)] = v.str();
        jp["thresholds"] = th;
        j["players"].push_back(std::move(jp));
    }
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : net.edges)
        j["edges"].push_back({{"src", e.src},
                              {"dst", e.dst},
                              {"weight", e.weight.str()},
                              {"class", edge_class_name(e.cls)}});
    return j;
}

Network network_from_json(const nlohmann::json& j) {
    Network net;
    net.products = j.at("products").get<std::vector<std::string>>();
    for (const auto& jp : j.at("players")) {
        Player p;
        p.label = jp.at("label").get<std::string>();
        p.available = jp.at("available").get<std::vector<int>>();
        std::sort(p.available.begin(), p.available.end());
        for (const auto& [key, val] : jp.at("thresholds").items())
            p.thresholds[std::stoi(key)] = Rational::parse(val.get<std::string>());
        net.players.push_back(std::move(p));
    }
    if (j.contains("edges"))
        for (const auto& je : j.at("edges")) {
            Edge e;
            e.src = je.at("src").get<int>();
            e.dst = je.at("dst").get<int>();
            e.weight = Rational::parse(je.at("weight").get<std::string>());
            e.cls = edge_class_from_name(je.at("class").get<std::string>());
            net.edges.push_back(e);
        }
    return net;
}

nlohmann::json state_to_json(const State& s) { return nlohmann::json(s); }

State state_from_json(const nlohmann::json& j) { return j.get<State>(); }

static std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string network_to_dot(const Network& net,
                           const std::map<PlayerId, std::string>& roles) {
    std::ostringstream os;
    os << "digraph network {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (std::size_t i = 0; i < net.players.size(); ++i) {
        std::string label = std::to_string(i) + ":" + net.players[i].label;
        auto it = roles.find(static_cast<PlayerId>(i));
        if (it != roles.end()) label += "\\n" + it->second;
        os << "  n" << i << " [label=\"" << dot_escape(label) << "\"];\n";
    }
    for (const Edge& e : net.edges) {
        const char* style = "solid";
        switch (e.cls) {
            case EdgeClass::Control: style = "bold"; break;
            case EdgeClass::Inclination: style = "dashed"; break;
            case EdgeClass::Emotional: style = "dotted"; break;
            case EdgeClass::Plain: style = "solid"; break;
        }
        os << "  n" << e.src << " -> n" << e.dst << " [style=" << style
           << ", label=\"" << e.weight.pretty() << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace sng
