#include "qmatch/matcher.hpp"

#include <algorithm>

namespace qmatch {

const char* match_level_name(MatchLevel level) {
    switch (level) {
        case MatchLevel::Plugin: return "Plugin";
        case MatchLevel::Subsume: return "Subsume";
        case MatchLevel::Exact: return "Exact";
        case MatchLevel::Fail: return "Fail";
    }
    return "?";
}

const char* pairing_relation_name(PairingRelation relation) {
    switch (relation) {
        case PairingRelation::CandidateSubsumedByRequest: return "candidate_subsumed_by_request";
        case PairingRelation::RequestSubsumedByCandidate: return "request_subsumed_by_candidate";
        case PairingRelation::Equivalent: return "equivalent";
    }
    return "?";
}

namespace {

// Most specific witness among `pool` whose concept is subsumed by (below)
// `anchor`'s side of the relation: deepest class wins, ties break on concept
// name ascending. Returns nullptr when no witness exists.
const MetricConstraint* best_witness_below(const Ontology& o, const std::string& upper_concept,
                                           const std::vector<MetricConstraint>& pool) {
    const MetricConstraint* best = nullptr;
    int best_depth = -1;
    for (const MetricConstraint& candidate : pool) {
        if (!o.subsumes(candidate.concept_id, upper_concept)) continue;
        const int d = o.depth(candidate.concept_id);
        if (!best || d > best_depth || (d == best_depth && candidate.concept_id < best->concept_id)) {
            best = &candidate;
            best_depth = d;
        }
    }
    return best;
}

const MetricConstraint* equivalent_witness(const Ontology& o, const std::string& concept_id,
                                           const std::vector<MetricConstraint>& pool) {
    for (const MetricConstraint& candidate : pool) {
        if (o.equivalent(candidate.concept_id, concept_id)) return &candidate;
    }
    return nullptr;
}

PairingRelation relation_for(const Ontology& o, const MetricConstraint& request,
                             const MetricConstraint& candidate, PairingRelation fallback) {
    return o.equivalent(request.concept_id, candidate.concept_id) ? PairingRelation::Equivalent
                                                                  : fallback;
}

}  // namespace

ProfileMatch match_profiles(const Ontology& o, const QoSProfile& request,
                            const QoSProfile& candidate) {
    // Exact: mutual equivalence coverage. Profile validity (no equivalent
    // duplicates within a profile) makes the witnesses a bijection.
    bool exact = true;
    for (const MetricConstraint& rc : request.constraints) {
        if (!equivalent_witness(o, rc.concept_id, candidate.constraints)) {
            exact = false;
            break;
        }
    }
    if (exact) {
        for (const MetricConstraint& cc : candidate.constraints) {
            if (!equivalent_witness(o, cc.concept_id, request.constraints)) {
                exact = false;
                break;
            }
        }
    }
    if (exact) {
        ProfileMatch result{MatchLevel::Exact, {}};
        for (const MetricConstraint& rc : request.constraints) {
            const MetricConstraint* witness = equivalent_witness(o, rc.concept_id, candidate.constraints);
            result.pairings.push_back({rc, *witness, PairingRelation::Equivalent});
        }
        return result;
    }

    // Plugin: every request concept witnessed from below by a candidate concept.
    {
        std::vector<MetricPairing> pairings;
        bool ok = true;
        for (const MetricConstraint& rc : request.constraints) {
            const MetricConstraint* witness = best_witness_below(o, rc.concept_id, candidate.constraints);
            if (!witness) {
                ok = false;
                break;
            }
            pairings.push_back(
                {rc, *witness, relation_for(o, rc, *witness, PairingRelation::CandidateSubsumedByRequest)});
        }
        if (ok) return {MatchLevel::Plugin, std::move(pairings)};
    }

    // Subsume: every candidate concept witnessed from below by a request concept.
    {
        std::vector<MetricPairing> pairings;
        bool ok = true;
        for (const MetricConstraint& cc : candidate.constraints) {
            const MetricConstraint* witness = best_witness_below(o, cc.concept_id, request.constraints);
            if (!witness) {
                ok = false;
                break;
            }
            pairings.push_back(
                {*witness, cc, relation_for(o, *witness, cc, PairingRelation::RequestSubsumedByCandidate)});
        }
        if (ok) return {MatchLevel::Subsume, std::move(pairings)};
    }

    return {MatchLevel::Fail, {}};
}

namespace {

const Interface* find_interface(const std::vector<Interface>& pool, const std::string& name) {
    for (const Interface& iface : pool)
        if (iface.name == name) return &iface;
    return nullptr;
}

// Weight of an interface-level result, or 0 when the level earns no entry
// at this polarity (Fail, Plugin on required, Subsume on provided).
int vector_weight(MatchLevel level, Polarity polarity) {
    switch (level) {
        case MatchLevel::Exact: return 1;
        case MatchLevel::Plugin: return polarity == Polarity::Provided ? 2 : 0;
        case MatchLevel::Subsume: return polarity == Polarity::Required ? 2 : 0;
        case MatchLevel::Fail: return 0;
    }
    return 0;
}

void match_interfaces(const Ontology& o, const std::vector<Interface>& request_side,
                      const std::vector<Interface>& candidate_side, MatchOutcome& out) {
    for (const Interface& req_iface : request_side) {
        const Interface* cand_iface = find_interface(candidate_side, req_iface.name);
        if (!cand_iface) continue;
        ProfileMatch pm = match_profiles(o, req_iface.profile, cand_iface->profile);
        const int weight = vector_weight(pm.level, req_iface.polarity);
        if (weight == 0) continue;
        out.interface_matches.push_back(
            {req_iface.name, req_iface.polarity, pm.level, weight, std::move(pm.pairings)});
    }
}

}  // namespace

std::optional<MatchOutcome> match_component(const Ontology& o, const Request& r,
                                            const Component& c) {
    MatchOutcome outcome;
    outcome.component_name = c.name;
    match_interfaces(o, r.provided, c.provided, outcome);
    match_interfaces(o, r.required, c.required, outcome);
    outcome.matched_count = outcome.interface_matches.size();
    if (outcome.matched_count < static_cast<std::size_t>(r.mu)) return std::nullopt;
    return outcome;
}

std::vector<MatchOutcome> match_all(const Ontology& o, const Request& r, const Catalog& catalog) {
    std::vector<const Component*> ordered;
    ordered.reserve(catalog.components.size());
    for (const Component& c : catalog.components) ordered.push_back(&c);
    std::sort(ordered.begin(), ordered.end(),
              [](const Component* a, const Component* b) { return a->name < b->name; });

    std::vector<MatchOutcome> admitted;
    for (const Component* c : ordered) {
        if (auto outcome = match_component(o, r, *c)) admitted.push_back(std::move(*outcome));
    }
    return admitted;
}

namespace {

void explain_interfaces(const Ontology& o, const std::vector<Interface>& request_side,
                        const std::vector<Interface>& candidate_side, ComponentExplanation& out) {
    for (const Interface& req_iface : request_side) {
        InterfaceExplanation entry;
        entry.interface_name = req_iface.name;
        entry.polarity = req_iface.polarity;
        const Interface* cand_iface = find_interface(candidate_side, req_iface.name);
        if (!cand_iface) {
            entry.failure_reasons.push_back("candidate declares no " +
                                            std::string(polarity_name(req_iface.polarity)) +
                                            " interface named '" + req_iface.name + "'");
            out.interfaces.push_back(std::move(entry));
            continue;
        }
        entry.correspondence_found = true;
        ProfileMatch pm = match_profiles(o, req_iface.profile, cand_iface->profile);
        entry.level = pm.level;
        entry.pairings = std::move(pm.pairings);
        entry.weight = vector_weight(entry.level, req_iface.polarity);
        entry.counted = entry.weight != 0;
        if (entry.level == MatchLevel::Fail) {
            if (req_iface.profile.constraints.size() == 1 &&
                cand_iface->profile.constraints.size() == 1) {
                entry.failure_reasons.push_back(
                    "no subsumption between request '" +
                    req_iface.profile.constraints.front().concept_id + "' and candidate '" +
                    cand_iface->profile.constraints.front().concept_id + "'");
            } else {
                for (const MetricConstraint& rc : req_iface.profile.constraints)
                    if (!best_witness_below(o, rc.concept_id, cand_iface->profile.constraints))
                        entry.failure_reasons.push_back("request metric '" + rc.concept_id +
                                                        "' has no candidate concept below it");
                for (const MetricConstraint& cc : cand_iface->profile.constraints)
                    if (!best_witness_below(o, cc.concept_id, req_iface.profile.constraints))
                        entry.failure_reasons.push_back("candidate metric '" + cc.concept_id +
                                                        "' has no request concept below it");
            }
        } else if (!entry.counted) {
            entry.failure_reasons.push_back(std::string(match_level_name(entry.level)) + " on a " +
                                            polarity_name(req_iface.polarity) +
                                            " interface earns no vector entry");
        }
        out.interfaces.push_back(std::move(entry));
    }
}

}  // namespace

ComponentExplanation explain_component(const Ontology& o, const Request& r, const Component& c) {
    ComponentExplanation explanation;
    explanation.component_name = c.name;
    explain_interfaces(o, r.provided, c.provided, explanation);
    explain_interfaces(o, r.required, c.required, explanation);
    for (const InterfaceExplanation& entry : explanation.interfaces)
        if (entry.counted) ++explanation.matched_count;
    explanation.admitted = explanation.matched_count >= static_cast<std::size_t>(r.mu);
    return explanation;
}

}  // namespace qmatch
