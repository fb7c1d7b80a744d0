#pragma once
// Seeded random generators for property-style tests: taxonomies, profiles,
// catalogs, normalized intervals and arithmetic expressions.

#include "qmatch/catalog.hpp"
#include "qmatch/matcher.hpp"
#include "qmatch/ontology.hpp"
#include "qmatch/ranker.hpp"

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qtest {

using nlohmann::json;

// A generated taxonomy: the raw document (for independent reachability
// checks) plus the loaded ontology and its concept names.
struct TaxonomyFixture {
    json doc;
    qmatch::Ontology ontology;
    std::vector<std::string> concept_names;
    std::vector<std::vector<std::string>> classes;  // concept names grouped by equivalence
};

inline TaxonomyFixture random_taxonomy(std::mt19937_64& rng, int max_concepts) {
    std::uniform_int_distribution<int> concept_count(1, max_concepts);
    const int n = concept_count(rng);

    TaxonomyFixture fixture;
    json concepts = json::array();
    json equivalences = json::array();

    // Group consecutive concepts into equivalence classes of size 1-3.
    int next = 0;
    while (next < n) {
        std::uniform_int_distribution<int> size_dist(1, 3);
        const int take = std::min(size_dist(rng), n - next);
        std::vector<std::string> members;
        for (int i = 0; i < take; ++i) members.push_back("K" + std::to_string(next + i));
        next += take;
        fixture.classes.push_back(members);
        if (members.size() > 1) equivalences.push_back(members);
    }

    // Each class optionally hangs under an earlier class; acyclic by
    // construction. The parent edge is declared on one random member.
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t ci = 0; ci < fixture.classes.size(); ++ci) {
        std::optional<std::string> parent;
        if (ci > 0 && coin(rng) < 0.6) {
            std::uniform_int_distribution<std::size_t> pick_class(0, ci - 1);
            const auto& parent_members = fixture.classes[pick_class(rng)];
            std::uniform_int_distribution<std::size_t> pick_member(0, parent_members.size() - 1);
            parent = parent_members[pick_member(rng)];
        }
        std::uniform_int_distribution<std::size_t> pick_carrier(0, fixture.classes[ci].size() - 1);
        const std::size_t carrier = parent ? pick_carrier(rng) : 0;
        for (std::size_t mi = 0; mi < fixture.classes[ci].size(); ++mi) {
            json jc{{"name", fixture.classes[ci][mi]},
                    {"kind", "service"},
                    {"direction", "increasing"},
                    {"canonical_unit", "u"},
                    {"domain", json{{"min", 0}, {"max", 100}}}};
            if (parent && mi == carrier) jc["parent"] = *parent;
            concepts.push_back(std::move(jc));
            fixture.concept_names.push_back(fixture.classes[ci][mi]);
        }
    }

    fixture.doc = json{{"concepts", std::move(concepts)},
                       {"equivalences", std::move(equivalences)},
                       {"units", json::array({json{{"name", "u"}, {"dimension", "d"}}})},
                       {"conversions", json::array()},
                       {"functions", json::array()}};
    fixture.ontology = qmatch::load_ontology(fixture.doc);
    return fixture;
}

// A profile over distinct equivalence classes of `fixture` (profile validity
// forbids two constraints on equivalent concepts).
inline qmatch::QoSProfile random_profile(std::mt19937_64& rng, const TaxonomyFixture& fixture,
                                         int max_metrics) {
    std::vector<std::size_t> class_ids(fixture.classes.size());
    for (std::size_t i = 0; i < class_ids.size(); ++i) class_ids[i] = i;
    std::shuffle(class_ids.begin(), class_ids.end(), rng);

    const int limit = std::min<int>(max_metrics, static_cast<int>(class_ids.size()));
    std::uniform_int_distribution<int> count_dist(1, limit);
    const int count = count_dist(rng);

    std::uniform_real_distribution<double> value(0.0, 100.0);
    qmatch::QoSProfile profile;
    for (int i = 0; i < count; ++i) {
        const auto& members = fixture.classes[class_ids[static_cast<std::size_t>(i)]];
        std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
        double a = value(rng);
        double b = value(rng);
        if (a > b) std::swap(a, b);
        profile.constraints.push_back({members[pick(rng)], a, b, "u",
                                       qmatch::ConstraintOrigin::Declared});
    }
    return profile;
}

inline qmatch::NormalizedInterval random_normalized_interval(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> value(0.0, 1.0);
    double a = value(rng);
    double b = value(rng);
    if (a > b) std::swap(a, b);
    return {a, b};
}

// Component with interfaces drawn from a shared name pool so that requests
// and candidates overlap some of the time.
inline qmatch::Component random_component(std::mt19937_64& rng, const TaxonomyFixture& fixture,
                                          const std::string& name,
                                          const std::vector<std::string>& interface_pool) {
    qmatch::Component component;
    component.name = name;
    std::uniform_int_distribution<int> coin(0, 1);
    for (const std::string& iface : interface_pool) {
        if (coin(rng)) continue;
        qmatch::Interface entry;
        entry.name = iface;
        entry.polarity = coin(rng) ? qmatch::Polarity::Provided : qmatch::Polarity::Required;
        entry.profile = random_profile(rng, fixture, 3);
        (entry.polarity == qmatch::Polarity::Provided ? component.provided : component.required)
            .push_back(std::move(entry));
    }
    if (component.provided.empty() && component.required.empty()) {
        qmatch::Interface entry;
        entry.name = interface_pool.front();
        entry.polarity = qmatch::Polarity::Provided;
        entry.profile = random_profile(rng, fixture, 3);
        component.provided.push_back(std::move(entry));
    }
    return component;
}

// -- random arithmetic expressions -------------------------------------------

// Builds a random expression as text. Divisors are parenthesized sums offset
// away from zero so evaluation stays finite.
inline std::string random_expression(std::mt19937_64& rng,
                                     const std::vector<std::string>& variables, int depth) {
    std::uniform_int_distribution<int> shape(0, depth <= 0 ? 1 : 6);
    std::uniform_real_distribution<double> literal(-10.0, 10.0);
    switch (shape(rng)) {
        case 0: {
            char buffer[32];
            std::snprintf(buffer, sizeof(buffer), "%.3f", std::abs(literal(rng)));
            return buffer;
        }
        case 1: {
            std::uniform_int_distribution<std::size_t> pick(0, variables.size() - 1);
            return variables[pick(rng)];
        }
        case 2:
            return "(" + random_expression(rng, variables, depth - 1) + " + " +
                   random_expression(rng, variables, depth - 1) + ")";
        case 3:
            return "(" + random_expression(rng, variables, depth - 1) + " - " +
                   random_expression(rng, variables, depth - 1) + ")";
        case 4:
            return random_expression(rng, variables, depth - 1) + " * " +
                   random_expression(rng, variables, depth - 1);
        case 5:
            return "-" + random_expression(rng, variables, depth - 1);
        default: {
            std::uniform_int_distribution<int> which(0, 2);
            const int w = which(rng);
            if (w == 0)
                return "min(" + random_expression(rng, variables, depth - 1) + ", " +
                       random_expression(rng, variables, depth - 1) + ")";
            if (w == 1)
                return "max(" + random_expression(rng, variables, depth - 1) + ", " +
                       random_expression(rng, variables, depth - 1) + ")";
            // Divisor stays away from zero.
            char buffer[32];
            std::snprintf(buffer, sizeof(buffer), "%.3f", 1.0 + std::abs(literal(rng)));
            return random_expression(rng, variables, depth - 1) + " / (" + std::string(buffer) +
                   " + 1)";
        }
    }
}

}  // namespace qtest
