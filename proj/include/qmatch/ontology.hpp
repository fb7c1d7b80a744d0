#pragma once
// Immutable knowledge base of metric concepts: a subsumption forest with
// equivalence classes, a unit table with multiplicative conversions, and
// derived-metric functions. Everything is validated at load; afterwards the
// ontology is read-only and safe to share across threads.

#include "qmatch/errors.hpp"
#include "qmatch/expr.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qmatch {

enum class ConceptKind { Service, Resource };
enum class Direction { Increasing, Decreasing };

// Closed numeric interval, in the concept's canonical unit. Supplies the
// bounds for min-max normalization and for closing open-ended constraints.
struct DomainRange {
    double min = 0.0;
    double max = 0.0;
};

struct MetricConcept {
    std::string name;
    std::optional<std::string> parent;  // subsumption parent; absent for roots
    ConceptKind kind = ConceptKind::Service;
    Direction direction = Direction::Increasing;
    std::string canonical_unit;
    DomainRange domain;
};

struct Unit {
    std::string name;
    std::string dimension;
};

struct Conversion {
    std::string from;
    std::string to;
    double factor = 1.0;  // strictly positive; value_to = value_from * factor
};

struct MetricFunction {
    std::string target;                  // concept the computed value belongs to
    std::vector<std::string> operands;   // concept ids, values in canonical units
    std::string expression;
    expr::NodeRef ast;                   // parsed form of `expression`
};

class Ontology {
public:
    // -- concepts ---------------------------------------------------------

    const MetricConcept* find_concept(std::string_view name) const;
    // Throws InputError naming the identifier when absent.
    const MetricConcept& concept_at(const std::string& name) const;
    const std::vector<MetricConcept>& concepts() const { return concepts_; }

    // True iff `a` reaches `b` by parent links, zero or more steps, with
    // equivalence-class members mutually subsuming (a "is-a" b).
    bool subsumes(const std::string& a, const std::string& b) const;

    // Mutual subsumption: same equivalence class (or same concept).
    bool equivalent(const std::string& a, const std::string& b) const;

    // Root distance of the concept's equivalence class; roots have depth 0.
    // Used to pick the most specific witness among several.
    int depth(const std::string& name) const;

    // Concept names from `a` up to `b`, inclusive; empty if !subsumes(a, b).
    // Intermediate hops print the class representative.
    std::vector<std::string> subsumption_chain(const std::string& a, const std::string& b) const;

    // -- units ------------------------------------------------------------

    const Unit* find_unit(std::string_view name) const;
    const Unit& unit_at(const std::string& name) const;
    const std::vector<Unit>& units() const { return units_; }
    const std::vector<Conversion>& conversions() const { return conversions_; }

    // value expressed in `from`, returned expressed in `to`. Identity when
    // from == to. Throws InputError on unknown units or dimension mismatch.
    double convert(double value, const std::string& from, const std::string& to) const;

    // -- functions --------------------------------------------------------

    const MetricFunction* function_for(std::string_view target) const;
    const std::vector<MetricFunction>& functions() const { return functions_; }

    // Evaluates `f` over operand values given in canonical units. A result
    // outside the target's domain range is reported through `warnings` and
    // still returned. Throws EvalError on a missing operand or division by
    // zero.
    double eval_function(const MetricFunction& f, const std::map<std::string, double>& operand_values,
                         Warnings* warnings = nullptr) const;

private:
    friend Ontology load_ontology(const nlohmann::json& doc);

    std::vector<MetricConcept> concepts_;
    std::map<std::string, std::size_t, std::less<>> concept_index_;
    std::vector<std::size_t> class_of_;                     // concept -> class id
    std::vector<std::optional<std::size_t>> class_parent_;  // class -> parent class
    std::vector<int> class_depth_;
    std::vector<std::string> class_repr_;  // lexicographically least member

    std::vector<Unit> units_;
    std::map<std::string, std::size_t, std::less<>> unit_index_;
    std::vector<double> unit_scale_;  // value * scale = value in dimension root unit
    std::vector<Conversion> conversions_;

    std::vector<MetricFunction> functions_;
    std::map<std::string, std::size_t, std::less<>> function_index_;  // by target

    std::size_t class_id(const std::string& name, const char* role) const;
};

// Builds and validates the ontology from its JSON document form. Unknown
// keys, dangling references, parent cycles, overlapping equivalence classes,
// inconsistent conversion factors and disconnected unit dimensions are all
// load errors naming the offending identifier.
Ontology load_ontology(const nlohmann::json& doc);
Ontology load_ontology_text(const std::string& text);
Ontology load_ontology_file(const std::filesystem::path& path);

}  // namespace qmatch
