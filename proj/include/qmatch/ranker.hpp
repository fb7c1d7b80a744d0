#pragma once
// Interval-distance ranking of matched candidates.
//
//   normalize:  q' = (q - min) / (max - min), per-concept declared ranges
//   delta:      d(a, b) = (|a.hi - b.hi| + |a.lo - b.lo|) / 2
//   CRank:      sum over interfaces of (1 / weight) * sum of pairing deltas
//
// Smaller CRank means the candidate's intervals sit closer to the request's.

#include "qmatch/catalog.hpp"
#include "qmatch/matcher.hpp"
#include "qmatch/ontology.hpp"

#include <string>
#include <vector>

namespace qmatch {

struct NormalizedInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Min-max normalization. Values outside the range clamp first (reported via
// warnings); a degenerate range maps everything to 0.
double normalize(double value, const DomainRange& range, Warnings* warnings = nullptr);

// Normalizes both endpoints of a canonicalized constraint over its concept's
// declared domain range.
NormalizedInterval normalize_interval(const MetricConstraint& c, const DomainRange& range,
                                      Warnings* warnings = nullptr);

// Interval distance; a pseudometric with range [0, 1] on normalized inputs.
double delta(const NormalizedInterval& a, const NormalizedInterval& b);

struct InterfaceContribution {
    std::string interface_name;
    int weight = 1;
    double delta_sum = 0.0;
    double contribution = 0.0;  // delta_sum / weight
};

struct RankedCandidate {
    std::string component_name;
    double crank = 0.0;  // sum of contributions
    MatchOutcome outcome;
    std::vector<InterfaceContribution> per_interface;
};

// The dissimilarity of one matched candidate: per interface, deltas of the
// recorded metric pairings summed and divided by the interface weight.
RankedCandidate crank(const Ontology& o, const Request& r, const MatchOutcome& outcome);

// Ranks every outcome, keeps those with crank <= r.rank_threshold (all, when
// no threshold is set) and sorts ascending by (crank, component name).
std::vector<RankedCandidate> rank_all(const Ontology& o, const Request& r,
                                      const std::vector<MatchOutcome>& outcomes);

}  // namespace qmatch
