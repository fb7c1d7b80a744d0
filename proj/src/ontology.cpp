#include "qmatch/ontology.hpp"

#include "json_check.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace qmatch {

using nlohmann::json;

namespace {

constexpr double kConversionTolerance = 1e-12;  // relative, round-trip consistency

ConceptKind parse_kind(const std::string& text, const std::string& context) {
    if (text == "service") return ConceptKind::Service;
    if (text == "resource") return ConceptKind::Resource;
    throw InputError(context + ": unknown kind \"" + text + "\"");
}

Direction parse_direction(const std::string& text, const std::string& context) {
    if (text == "increasing") return Direction::Increasing;
    if (text == "decreasing") return Direction::Decreasing;
    throw InputError(context + ": unknown direction \"" + text + "\"");
}

}  // namespace

const MetricConcept* Ontology::find_concept(std::string_view name) const {
    auto it = concept_index_.find(name);
    return it == concept_index_.end() ? nullptr : &concepts_[it->second];
}

const MetricConcept& Ontology::concept_at(const std::string& name) const {
    const MetricConcept* c = find_concept(name);
    if (!c) throw InputError("unknown concept '" + name + "'");
    return *c;
}

std::size_t Ontology::class_id(const std::string& name, const char* role) const {
    auto it = concept_index_.find(name);
    if (it == concept_index_.end())
        throw InputError(std::string("unknown concept '") + name + "' (" + role + ")");
    return class_of_[it->second];
}

bool Ontology::subsumes(const std::string& a, const std::string& b) const {
    std::size_t current = class_id(a, "subsumption lhs");
    const std::size_t target = class_id(b, "subsumption rhs");
    for (;;) {
        if (current == target) return true;
        if (!class_parent_[current]) return false;
        current = *class_parent_[current];
    }
}

bool Ontology::equivalent(const std::string& a, const std::string& b) const {
    return class_id(a, "equivalence lhs") == class_id(b, "equivalence rhs");
}

int Ontology::depth(const std::string& name) const {
    return class_depth_[class_id(name, "depth query")];
}

std::vector<std::string> Ontology::subsumption_chain(const std::string& a, const std::string& b) const {
    std::size_t current = class_id(a, "chain start");
    const std::size_t target = class_id(b, "chain end");
    std::vector<std::string> chain{a};
    if (current == target && a != b) {
        chain.push_back(b);  // equivalent concepts, one hop within the class
        return chain;
    }
    while (current != target) {
        if (!class_parent_[current]) return {};
        current = *class_parent_[current];
        chain.push_back(current == target ? b : class_repr_[current]);
    }
    return chain;
}

const Unit* Ontology::find_unit(std::string_view name) const {
    auto it = unit_index_.find(name);
    return it == unit_index_.end() ? nullptr : &units_[it->second];
}

const Unit& Ontology::unit_at(const std::string& name) const {
    const Unit* u = find_unit(name);
    if (!u) throw InputError("unknown unit '" + name + "'");
    return *u;
}

double Ontology::convert(double value, const std::string& from, const std::string& to) const {
    if (from == to) {
        unit_at(from);
        return value;
    }
    const Unit& uf = unit_at(from);
    const Unit& ut = unit_at(to);
    if (uf.dimension != ut.dimension)
        throw InputError("cannot convert '" + from + "' (" + uf.dimension + ") to '" + to + "' (" +
                         ut.dimension + ")");
    const double sf = unit_scale_[unit_index_.find(from)->second];
    const double st = unit_scale_[unit_index_.find(to)->second];
    return value * (sf / st);
}

const MetricFunction* Ontology::function_for(std::string_view target) const {
    auto it = function_index_.find(target);
    return it == function_index_.end() ? nullptr : &functions_[it->second];
}

double Ontology::eval_function(const MetricFunction& f, const std::map<std::string, double>& operand_values,
                               Warnings* warnings) const {
    std::map<std::string, double> vars;
    for (const std::string& operand : f.operands) {
        auto it = operand_values.find(operand);
        if (it == operand_values.end())
            throw EvalError("function for '" + f.target + "': missing operand '" + operand + "'");
        vars.emplace(operand, it->second);
    }
    const double value = expr::evaluate(*f.ast, vars);
    const DomainRange& domain = concept_at(f.target).domain;
    if (warnings && (value < domain.min || value > domain.max)) {
        std::ostringstream msg;
        msg << "derived value " << value << " for '" << f.target << "' outside domain ["
            << domain.min << ", " << domain.max << "]";
        warnings->push_back(msg.str());
    }
    return value;
}

Ontology load_ontology(const json& doc) {
    using detail::expect_array;
    using detail::expect_object;
    using detail::reject_unknown_keys;
    using detail::require_key;
    using detail::require_number;
    using detail::require_string;

    expect_object(doc, "ontology document");
    reject_unknown_keys(doc, "ontology document",
                        {"concepts", "equivalences", "units", "conversions", "functions"});

    Ontology o;

    // Units first: concepts refer to them.
    if (auto it = doc.find("units"); it != doc.end()) {
        expect_array(*it, "units");
        for (const json& ju : *it) {
            expect_object(ju, "unit entry");
            reject_unknown_keys(ju, "unit entry", {"name", "dimension"});
            Unit u{require_string(ju, "unit entry", "name"),
                   require_string(ju, "unit entry", "dimension")};
            if (!o.unit_index_.emplace(u.name, o.units_.size()).second)
                throw InputError("duplicate unit '" + u.name + "'");
            o.units_.push_back(std::move(u));
        }
    }
    o.unit_scale_.assign(o.units_.size(), 1.0);

    if (auto it = doc.find("conversions"); it != doc.end()) {
        expect_array(*it, "conversions");
        for (const json& jc : *it) {
            expect_object(jc, "conversion entry");
            reject_unknown_keys(jc, "conversion entry", {"from", "to", "factor"});
            Conversion c{require_string(jc, "conversion entry", "from"),
                         require_string(jc, "conversion entry", "to"),
                         require_number(jc, "conversion entry", "factor")};
            const Unit& uf = o.unit_at(c.from);
            const Unit& ut = o.unit_at(c.to);
            if (uf.dimension != ut.dimension)
                throw InputError("conversion '" + c.from + "' -> '" + c.to +
                                 "' crosses dimensions (" + uf.dimension + " vs " + ut.dimension + ")");
            if (!(c.factor > 0.0) || !std::isfinite(c.factor))
                throw InputError("conversion '" + c.from + "' -> '" + c.to +
                                 "' must have a positive finite factor");
            o.conversions_.push_back(std::move(c));
        }
    }

    // Assign per-unit scales by flooding each dimension from its first unit.
    // A conversion edge (from, to, f) fixes scale[from] = f * scale[to]; any
    // edge between two already-scaled units must agree, which enforces the
    // unit round-trip factor of 1 within tolerance.
    {
        std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(o.units_.size());
        for (const Conversion& c : o.conversions_) {
            const std::size_t a = o.unit_index_.find(c.from)->second;
            const std::size_t b = o.unit_index_.find(c.to)->second;
            adjacency[a].emplace_back(b, c.factor);        // scale[a] = factor * scale[b]
            adjacency[b].emplace_back(a, 1.0 / c.factor);  // scale[b] = scale[a] / factor
        }
        std::vector<std::size_t> component(o.units_.size(), 0);  // 0 = unvisited
        std::size_t component_id = 0;
        for (std::size_t root = 0; root < o.units_.size(); ++root) {
            if (component[root]) continue;
            o.unit_scale_[root] = 1.0;
            component[root] = ++component_id;
            std::deque<std::size_t> queue{root};
            while (!queue.empty()) {
                const std::size_t u = queue.front();
                queue.pop_front();
                for (const auto& [v, factor] : adjacency[u]) {
                    const double implied = o.unit_scale_[u] / factor;  // scale[u] = factor*scale[v]
                    if (!component[v]) {
                        o.unit_scale_[v] = implied;
                        component[v] = component_id;
                        queue.push_back(v);
                    } else if (std::abs(o.unit_scale_[v] - implied) >
                               kConversionTolerance * std::abs(o.unit_scale_[v])) {
                        throw InputError("inconsistent conversion factors around unit '" +
                                         o.units_[v].name + "': round trip does not compose to 1");
                    }
                }
            }
        }
        // Units sharing a dimension must share a conversion component, so any
        // canonical unit is reachable from any unit of its dimension.
        std::map<std::string, std::size_t> dimension_component;
        for (std::size_t i = 0; i < o.units_.size(); ++i) {
            auto [it, inserted] = dimension_component.emplace(o.units_[i].dimension, component[i]);
            if (!inserted && it->second != component[i])
                throw InputError("unit '" + o.units_[i].name + "' is not connected to the other '" +
                                 o.units_[i].dimension + "' units by conversions");
        }
    }

    // Concepts.
    if (auto it = doc.find("concepts"); it != doc.end()) {
        expect_array(*it, "concepts");
        for (const json& jc : *it) {
            expect_object(jc, "concept entry");
            reject_unknown_keys(jc, "concept entry",
                                {"name", "parent", "kind", "direction", "canonical_unit", "domain"});
            MetricConcept c;
            c.name = require_string(jc, "concept entry", "name");
            const std::string context = "concept '" + c.name + "'";
            if (auto p = jc.find("parent"); p != jc.end()) {
                if (!p->is_string()) throw InputError(context + ": \"parent\" must be a string");
                c.parent = p->get<std::string>();
            }
            c.kind = parse_kind(require_string(jc, context, "kind"), context);
            c.direction = parse_direction(require_string(jc, context, "direction"), context);
            c.canonical_unit = require_string(jc, context, "canonical_unit");
            if (!o.find_unit(c.canonical_unit))
                throw InputError(context + ": unknown unit '" + c.canonical_unit + "'");
            const json& jd = require_key(jc, context, "domain");
            expect_object(jd, context + " domain");
            reject_unknown_keys(jd, context + " domain", {"min", "max"});
            c.domain.min = require_number(jd, context + " domain", "min");
            c.domain.max = require_number(jd, context + " domain", "max");
            if (c.domain.min > c.domain.max)
                throw InputError(context + ": domain min exceeds max");
            if (!o.concept_index_.emplace(c.name, o.concepts_.size()).second)
                throw InputError("duplicate concept '" + c.name + "'");
            o.concepts_.push_back(std::move(c));
        }
    }

    // Equivalence classes: declared axioms must be disjoint; members merge
    // into a single class whose representative is the least member name.
    std::vector<std::size_t> class_of(o.concepts_.size());
    for (std::size_t i = 0; i < class_of.size(); ++i) class_of[i] = i;
    if (auto it = doc.find("equivalences"); it != doc.end()) {
        expect_array(*it, "equivalences");
        std::vector<char> claimed(o.concepts_.size(), 0);
        for (const json& jaxiom : *it) {
            expect_array(jaxiom, "equivalence axiom");
            if (jaxiom.size() < 2) throw InputError("equivalence axiom needs at least two members");
            std::vector<std::size_t> members;
            for (const json& jm : jaxiom) {
                if (!jm.is_string()) throw InputError("equivalence member must be a concept name");
                const std::string name = jm.get<std::string>();
                auto ci = o.concept_index_.find(name);
                if (ci == o.concept_index_.end())
                    throw InputError("equivalence axiom names unknown concept '" + name + "'");
                if (claimed[ci->second])
                    throw InputError("concept '" + name + "' appears in overlapping equivalence classes");
                claimed[ci->second] = 1;
                members.push_back(ci->second);
            }
            for (std::size_t m : members) class_of[m] = members.front();
        }
    }

    // Compact class ids and pick representatives.
    {
        std::map<std::size_t, std::size_t> remap;
        for (std::size_t i = 0; i < class_of.size(); ++i) {
            auto [it2, inserted] = remap.emplace(class_of[i], remap.size());
            o.class_of_.push_back(it2->second);
            if (inserted) o.class_repr_.push_back(o.concepts_[i].name);
            else if (o.concepts_[i].name < o.class_repr_[it2->second])
                o.class_repr_[it2->second] = o.concepts_[i].name;
        }
        o.class_parent_.assign(o.class_repr_.size(), std::nullopt);
    }

    // Parent links lift to classes; the class graph must be a forest.
    for (std::size_t i = 0; i < o.concepts_.size(); ++i) {
        const MetricConcept& c = o.concepts_[i];
        if (!c.parent) continue;
        auto pi = o.concept_index_.find(*c.parent);
        if (pi == o.concept_index_.end())
            throw InputError("concept '" + c.name + "': unknown parent '" + *c.parent + "'");
        const std::size_t child_class = o.class_of_[i];
        const std::size_t parent_class = o.class_of_[pi->second];
        if (child_class == parent_class)
            throw InputError("concept '" + c.name + "': parent link forms a cycle");
        if (o.class_parent_[child_class] && *o.class_parent_[child_class] != parent_class)
            throw InputError("concept '" + c.name + "': equivalence class has conflicting parents ('" +
                             o.class_repr_[*o.class_parent_[child_class]] + "' vs '" +
                             o.class_repr_[parent_class] + "')");
        o.class_parent_[child_class] = parent_class;
    }

    // Cycle detection and depth assignment over class parents.
    o.class_depth_.assign(o.class_repr_.size(), -1);
    for (std::size_t start = 0; start < o.class_repr_.size(); ++start) {
        std::vector<std::size_t> path;
        std::size_t current = start;
        while (o.class_depth_[current] < 0) {
            path.push_back(current);
            if (!o.class_parent_[current]) {
                o.class_depth_[current] = 0;
                break;
            }
            current = *o.class_parent_[current];
            if (std::find(path.begin(), path.end(), current) != path.end())
                throw InputError("parent cycle through concept '" + o.class_repr_[current] + "'");
        }
        for (auto it2 = path.rbegin(); it2 != path.rend(); ++it2) {
            if (o.class_depth_[*it2] < 0)
                o.class_depth_[*it2] = o.class_depth_[*o.class_parent_[*it2]] + 1;
        }
    }

    // Functions.
    if (auto it = doc.find("functions"); it != doc.end()) {
        expect_array(*it, "functions");
        for (const json& jf : *it) {
            expect_object(jf, "function entry");
            reject_unknown_keys(jf, "function entry", {"target", "operands", "expr"});
            MetricFunction f;
            f.target = require_string(jf, "function entry", "target");
            const std::string context = "function for '" + f.target + "'";
            if (!o.find_concept(f.target))
                throw InputError(context + ": unknown target concept");
            const json& jops = require_key(jf, context, "operands");
            expect_array(jops, context + " operands");
            for (const json& jop : jops) {
                if (!jop.is_string()) throw InputError(context + ": operands must be concept names");
                const std::string operand = jop.get<std::string>();
                if (!o.find_concept(operand))
                    throw InputError(context + ": unknown operand concept '" + operand + "'");
                if (std::find(f.operands.begin(), f.operands.end(), operand) != f.operands.end())
                    throw InputError(context + ": duplicate operand '" + operand + "'");
                f.operands.push_back(operand);
            }
            f.expression = require_string(jf, context, "expr");
            f.ast = expr::parse(f.expression);
            for (const std::string& var : expr::free_variables(*f.ast)) {
                if (std::find(f.operands.begin(), f.operands.end(), var) == f.operands.end())
                    throw InputError(context + ": expression variable '" + var +
                                     "' is not a declared operand");
            }
            if (!o.function_index_.emplace(f.target, o.functions_.size()).second)
                throw InputError("duplicate function for target '" + f.target + "'");
            o.functions_.push_back(std::move(f));
        }
    }

    return o;
}

Ontology load_ontology_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("ontology document: ") + e.what());
    }
    return load_ontology(doc);
}

Ontology load_ontology_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read ontology file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_ontology_text(buffer.str());
}

}  // namespace qmatch
