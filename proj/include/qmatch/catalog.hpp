#pragma once
// Components, requests and their per-interface QoS profiles. Loading
// validates everything against the ontology and canonicalizes each metric
// constraint to its concept's canonical unit, clamped to the concept domain.

#include "qmatch/errors.hpp"
#include "qmatch/ontology.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qmatch {

enum class ConstraintOrigin { Declared, Derived };

// One metric requirement or offer: a closed value interval for a concept.
// After loading, `unit` is the concept's canonical unit and [lo, hi] lies
// inside the concept's domain range.
struct MetricConstraint {
    std::string concept_id;
    double lo = 0.0;
    double hi = 0.0;
    std::string unit;
    ConstraintOrigin origin = ConstraintOrigin::Declared;
};

// Conjunction of constraints attached to one interface. No two constraints
// may reference equivalent concepts.
struct QoSProfile {
    std::vector<MetricConstraint> constraints;
};

enum class Polarity { Provided, Required };

const char* polarity_name(Polarity p);

struct Interface {
    std::string name;
    Polarity polarity = Polarity::Provided;
    QoSProfile profile;
};

struct Component {
    std::string name;
    std::map<std::string, std::string> metadata;  // carried, never matched on
    std::vector<Interface> provided;
    std::vector<Interface> required;
};

struct Request {
    std::string name;
    std::vector<Interface> provided;
    std::vector<Interface> required;
    int mu = 0;  // minimum matched interfaces; defaults to interface_count()
    std::optional<double> rank_threshold;

    std::size_t interface_count() const { return provided.size() + required.size(); }
};

struct Catalog {
    std::vector<Component> components;

    const Component* find_component(std::string_view name) const;
};

// -- constraint expression grammar ---------------------------------------
//
//   <concept> (>=|<=|=) <number> [<unit>]
//   <number> <= <concept> <= <number> [<unit>]
//
// A missing unit defaults to the concept's canonical unit.

struct ConstraintExpr {
    enum class Form { AtLeast, AtMost, Equal, Range };
    Form form = Form::AtLeast;
    std::string concept_id;
    double a = 0.0;  // single bound, or the lower bound of a range
    double b = 0.0;  // upper bound of a range
    std::optional<std::string> unit;

    bool operator==(const ConstraintExpr&) const = default;
};

ConstraintExpr parse_constraint_text(std::string_view text);
std::string render_constraint(const ConstraintExpr& expr);

// Resolves a parsed expression against the ontology: open-ended forms close
// at the concept's domain bounds, values convert to the canonical unit, the
// result clamps to the domain (with a warning when it was outside).
MetricConstraint resolve_constraint(const ConstraintExpr& expr, const Ontology& o,
                                    Warnings* warnings = nullptr);
MetricConstraint parse_constraint(std::string_view text, const Ontology& o,
                                  Warnings* warnings = nullptr);

// -- document loading ------------------------------------------------------

Catalog load_catalog(const nlohmann::json& doc, const Ontology& o, Warnings* warnings = nullptr);
Catalog load_catalog_text(const std::string& text, const Ontology& o, Warnings* warnings = nullptr);
Catalog load_catalog_file(const std::filesystem::path& path, const Ontology& o,
                          Warnings* warnings = nullptr);

Request load_request(const nlohmann::json& doc, const Ontology& o, Warnings* warnings = nullptr);
Request load_request_text(const std::string& text, const Ontology& o, Warnings* warnings = nullptr);
Request load_request_file(const std::filesystem::path& path, const Ontology& o,
                          Warnings* warnings = nullptr);

// A request document may hold one request object or an array of them.
std::vector<Request> load_requests(const nlohmann::json& doc, const Ontology& o,
                                   Warnings* warnings = nullptr);
std::vector<Request> load_requests_file(const std::filesystem::path& path, const Ontology& o,
                                        Warnings* warnings = nullptr);

// Canonical serialized form; reloading it reproduces the same catalog
// bit-for-bit.
nlohmann::json catalog_to_json(const Catalog& catalog);
nlohmann::json request_to_json(const Request& request);

}  // namespace qmatch
