#include "qmatch/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmatch {

double normalize(double value, const DomainRange& range, Warnings* warnings) {
    double clamped = std::clamp(value, range.min, range.max);
    if (warnings && clamped != value) {
        std::ostringstream msg;
        msg << "value " << value << " clamped to [" << range.min << ", " << range.max
            << "] before normalization";
        warnings->push_back(msg.str());
    }
    if (range.max == range.min) return 0.0;
    return (clamped - range.min) / (range.max - range.min);
}

NormalizedInterval normalize_interval(const MetricConstraint& c, const DomainRange& range,
                                      Warnings* warnings) {
    return {normalize(c.lo, range, warnings), normalize(c.hi, range, warnings)};
}

double delta(const NormalizedInterval& a, const NormalizedInterval& b) {
    return (std::abs(a.hi - b.hi) + std::abs(a.lo - b.lo)) / 2.0;
}

RankedCandidate crank(const Ontology& o, const Request& r, const MatchOutcome& outcome) {
    (void)r;  // outcomes already carry everything ranking needs
    RankedCandidate ranked;
    ranked.component_name = outcome.component_name;
    ranked.outcome = outcome;
    for (const InterfaceMatch& im : outcome.interface_matches) {
        InterfaceContribution entry;
        entry.interface_name = im.interface_name;
        entry.weight = im.weight;
        for (const MetricPairing& pairing : im.pairings) {
            const NormalizedInterval req = normalize_interval(
                pairing.request_constraint, o.concept_at(pairing.request_constraint.concept_id).domain);
            const NormalizedInterval cand = normalize_interval(
                pairing.candidate_constraint,
                o.concept_at(pairing.candidate_constraint.concept_id).domain);
            entry.delta_sum += delta(req, cand);
        }
        entry.contribution = entry.delta_sum / entry.weight;
        ranked.crank += entry.contribution;
        ranked.per_interface.push_back(std::move(entry));
    }
    return ranked;
}

std::vector<RankedCandidate> rank_all(const Ontology& o, const Request& r,
                                      const std::vector<MatchOutcome>& outcomes) {
    std::vector<RankedCandidate> ranked;
    ranked.reserve(outcomes.size());
    for (const MatchOutcome& outcome : outcomes) {
        RankedCandidate candidate = crank(o, r, outcome);
        if (r.rank_threshold && candidate.crank > *r.rank_threshold) continue;
        ranked.push_back(std::move(candidate));
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.crank != b.crank) return a.crank < b.crank;
        return a.component_name < b.component_name;
    });
    return ranked;
}

}  // namespace qmatch
