#pragma once
// Profile-to-profile subsumption matching and candidate admission.
//
// A request profile {M_1..M_t} against a candidate profile {M'_1..M'_v}:
//   Exact   - every request concept has an equivalent candidate concept and
//             every candidate concept has an equivalent request concept.
//   Plugin  - every request concept has a candidate concept subsumed by it.
//   Subsume - every candidate concept has a request concept subsumed by it.
//   Fail    - none of the above.
// Levels resolve in that order. Matching is concept-level only; interval
// values play no part until ranking.

#include "qmatch/catalog.hpp"
#include "qmatch/ontology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmatch {

enum class MatchLevel { Plugin, Subsume, Exact, Fail };

const char* match_level_name(MatchLevel level);

enum class PairingRelation { CandidateSubsumedByRequest, RequestSubsumedByCandidate, Equivalent };

const char* pairing_relation_name(PairingRelation relation);

// A request metric paired with the candidate metric that witnesses it (or
// vice versa). Ranking computes its interval distance from these.
struct MetricPairing {
    MetricConstraint request_constraint;
    MetricConstraint candidate_constraint;
    PairingRelation relation = PairingRelation::Equivalent;
};

// One admitted entry of the QoSMatch vector. weight is 2 for Plugin on a
// provided interface or Subsume on a required one, 1 for Exact.
struct InterfaceMatch {
    std::string interface_name;
    Polarity polarity = Polarity::Provided;
    MatchLevel level = MatchLevel::Exact;
    int weight = 1;
    std::vector<MetricPairing> pairings;
};

// The compacted QoSMatch vector for one candidate: failed or missing
// interfaces produce no entry.
struct MatchOutcome {
    std::string component_name;
    std::vector<InterfaceMatch> interface_matches;
    std::size_t matched_count = 0;  // == interface_matches.size()
};

struct ProfileMatch {
    MatchLevel level = MatchLevel::Fail;
    std::vector<MetricPairing> pairings;  // empty when level == Fail
};

ProfileMatch match_profiles(const Ontology& o, const QoSProfile& request,
                            const QoSProfile& candidate);

// Pairs request interfaces with same-name, same-polarity candidate
// interfaces, applies the polarity weighting, and admits the component iff
// at least r.mu interfaces matched.
std::optional<MatchOutcome> match_component(const Ontology& o, const Request& r,
                                            const Component& c);

// All admitted outcomes, in component-name order.
std::vector<MatchOutcome> match_all(const Ontology& o, const Request& r, const Catalog& catalog);

// -- diagnostics -------------------------------------------------------------

// Per-interface rule evaluation detail for one component, regardless of
// whether the component clears mu. Used by the explain command.
struct InterfaceExplanation {
    std::string interface_name;
    Polarity polarity = Polarity::Provided;
    bool correspondence_found = false;  // candidate has a same-name interface
    MatchLevel level = MatchLevel::Fail;
    bool counted = false;  // true when the level earns a vector entry
    int weight = 0;        // 0 when not counted
    std::vector<MetricPairing> pairings;
    std::vector<std::string> failure_reasons;  // unwitnessed concepts, wrong polarity
};

struct ComponentExplanation {
    std::string component_name;
    std::vector<InterfaceExplanation> interfaces;
    std::size_t matched_count = 0;
    bool admitted = false;  // matched_count >= r.mu
};

ComponentExplanation explain_component(const Ontology& o, const Request& r, const Component& c);

}  // namespace qmatch
