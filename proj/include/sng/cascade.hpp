#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sng/dynamics.hpp"
#include "sng/game.hpp"

namespace sng {

// Product indices are fixed for every generated construction.
constexpr int kProductA = 0;
constexpr int kProductB = 1;
constexpr int kProductC = 2;

struct CascadeParams {
    int n = 0;        // players per rank subtype; a rank holds 2n humans
    Rational theta;   // uniform use price
    Rational e;       // emotional weight
    Rational i;       // inclination weight
    Rational c;       // control weight
};

// Empty result means the parameters are admissible.
std::vector<std::string> validate_params(const CascadeParams& p);

struct CascadeAssembly {
    Network net;
    CascadeParams params;
    PlayerId input_anchor = 0;    // target of the external incoming control edge
    PlayerId output_source = 0;   // source of the external outgoing control edge
    std::map<int, std::pair<PlayerId, PlayerId>> spirits;   // product -> spirit pair
    std::map<int, std::vector<PlayerId>> rank_members;      // main product -> chain
    std::map<int, std::vector<PlayerId>> influence_targets; // main product -> receivers
    std::map<PlayerId, std::string> roles;
};

CascadeAssembly build_cascade(const CascadeParams& p);

// Adds emotional edges from every member of each listed rank to player v of
// target (which must contain the assembly's players at unchanged ids).
// Precondition: v can never use a listed rank's main product; availability
// granted later (e.g. by a planned expansion) is passed via future_products.
void attach_influence(const CascadeAssembly& assembly, Network& target, PlayerId v,
                      const std::vector<int>& rank_mains,
                      const std::vector<int>& future_products = {});

enum class CascadePhase { First, Second };

// Full assignment for the assembly's own players: First puts every rank on
// its main product, Second on the member-specific secondaries; spirits are
// pinned to their product in both.
State cascade_state(const CascadeAssembly& assembly, CascadePhase phase);

// Counts of incoming emotional edges to v grouped by the product their
// source currently uses (refusing sources count toward nothing).
std::map<int, int> emotional_profile(const Network& net, const State& s, PlayerId v);

// True iff for every pair of products available to v the emotional counts
// differ by at most one. Unavailable products are unconstrained.
bool check_emotional_invariant(const Network& net, const State& s, PlayerId v);

struct CheckItem {
    std::string name;
    bool passed = false;
    bool informational = false;  // recorded but not counted by all_passed
    std::string detail;
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool all_passed() const;
    const CheckItem* find(const std::string& name) const;
};

// Standalone closure of an assembly: a frozen driver feeds the input anchor
// and a strategy-less observer absorbs the output edge.
struct CascadeHarness {
    Network net;
    CascadeAssembly assembly;  // ids unchanged; net above supersedes its net
    PlayerId input = 0;
    PlayerId observer = 0;
};

CascadeHarness make_harness(const CascadeAssembly& assembly);

// Checks one rank in isolation (own spirits and input driver only): the
// boundary product is what the driver rewards; the report covers terminal
// agreement, chain lengths, strict single-threadedness of the walk, and the
// emotional balance along it.
CheckReport verify_rank_lemma(const CascadeAssembly& assembly, int rank_main,
                              int boundary_product);

struct GapReport {
    CheckReport checks;
    std::vector<Rational> first_payoffs;
    std::vector<Rational> second_payoffs;
    std::vector<Rational> gaps;     // second minus first, per cascade player
    Rational min_gap;
    Rational bound;                 // n*e - c - i
};

GapReport verify_payoff_gap(const CascadeAssembly& assembly);

// The eight structural and dynamic properties of the construction, checked
// on a harnessed instance.
CheckReport verify_cascade_properties(const CascadeAssembly& assembly);

nlohmann::json assembly_to_json(const CascadeAssembly& assembly);
nlohmann::json check_report_to_json(const CheckReport& report);

}  // namespace sng
