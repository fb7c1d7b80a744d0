#include "qmatch/catalog.hpp"

#include "json_check.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qmatch {

using nlohmann::json;
using detail::expect_array;
using detail::expect_object;
using detail::reject_unknown_keys;
using detail::require_key;
using detail::require_number;
using detail::require_string;

const char* polarity_name(Polarity p) {
    return p == Polarity::Provided ? "provided" : "required";
}

const Component* Catalog::find_component(std::string_view name) const {
    for (const Component& c : components)
        if (c.name == name) return &c;
    return nullptr;
}

// -- constraint text grammar ------------------------------------------------

namespace {

struct ConstraintLexer {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("constraint \"" + std::string(text) + "\": " + what);
    }

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool done() {
        skip_space();
        return pos >= text.size();
    }

    bool looking_at_number() {
        skip_space();
        if (pos >= text.size()) return false;
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
        return (c == '+' || c == '-') && pos + 1 < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos + 1])) || text[pos + 1] == '.');
    }

    double number() {
        skip_space();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc()) fail("malformed number");
        pos = static_cast<std::size_t>(ptr - text.data());
        return value;
    }

    std::string ident() {
        skip_space();
        // '%' is accepted as shorthand for the unit named "percent".
        if (pos < text.size() && text[pos] == '%') {
            ++pos;
            return "percent";
        }
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected an identifier");
        return std::string(text.substr(start, pos - start));
    }

    // ">=", "<=" or "=".
    ConstraintExpr::Form comparator() {
        skip_space();
        if (pos < text.size() && text[pos] == '=') {
            ++pos;
            return ConstraintExpr::Form::Equal;
        }
        if (pos + 1 < text.size() && text[pos + 1] == '=') {
            char c = text[pos];
            pos += 2;
            if (c == '>') return ConstraintExpr::Form::AtLeast;
            if (c == '<') return ConstraintExpr::Form::AtMost;
        }
        fail("expected '>=', '<=' or '='");
    }

    void expect_le() {
        if (comparator() != ConstraintExpr::Form::AtMost) fail("expected '<=' in range form");
    }
};

std::string format_number(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    (void)ec;
    return std::string(buffer, ptr);
}

MetricConstraint clamp_to_domain(MetricConstraint c, const DomainRange& domain,
                                 Warnings* warnings) {
    const double lo = std::clamp(c.lo, domain.min, domain.max);
    const double hi = std::clamp(c.hi, domain.min, domain.max);
    if (warnings && (lo != c.lo || hi != c.hi)) {
        std::ostringstream msg;
        msg << "constraint on '" << c.concept_id << "': interval [" << c.lo << ", " << c.hi
            << "] clamped to domain [" << domain.min << ", " << domain.max << "]";
        warnings->push_back(msg.str());
    }
    c.lo = lo;
    c.hi = hi;
    return c;
}

}  // namespace

ConstraintExpr parse_constraint_text(std::string_view text) {
    ConstraintLexer lex{text};
    ConstraintExpr expr;
    if (lex.looking_at_number()) {
        expr.form = ConstraintExpr::Form::Range;
        expr.a = lex.number();
        lex.expect_le();
        expr.concept_id = lex.ident();
        lex.expect_le();
        expr.b = lex.number();
    } else {
        expr.concept_id = lex.ident();
        expr.form = lex.comparator();
        expr.a = lex.number();
    }
    if (!lex.done()) expr.unit = lex.ident();
    if (!lex.done()) lex.fail("trailing input");
    return expr;
}

std::string render_constraint(const ConstraintExpr& expr) {
    std::string out;
    switch (expr.form) {
        case ConstraintExpr::Form::AtLeast:
            out = expr.concept_id + " >= " + format_number(expr.a);
            break;
        case ConstraintExpr::Form::AtMost:
            out = expr.concept_id + " <= " + format_number(expr.a);
            break;
        case ConstraintExpr::Form::Equal:
            out = expr.concept_id + " = " + format_number(expr.a);
            break;
        case ConstraintExpr::Form::Range:
            out = format_number(expr.a) + " <= " + expr.concept_id + " <= " + format_number(expr.b);
            break;
    }
    if (expr.unit) out += " " + *expr.unit;
    return out;
}

MetricConstraint resolve_constraint(const ConstraintExpr& expr, const Ontology& o,
                                    Warnings* warnings) {
    if (!std::isfinite(expr.a) || (expr.form == ConstraintExpr::Form::Range && !std::isfinite(expr.b)))
        throw InputError("constraint on '" + expr.concept_id + "': bounds must be finite");
    const MetricConcept& mc = o.concept_at(expr.concept_id);
    const std::string unit = expr.unit.value_or(mc.canonical_unit);
    const Unit& given = o.unit_at(unit);
    const Unit& canonical = o.unit_at(mc.canonical_unit);
    if (given.dimension != canonical.dimension)
        throw InputError("constraint on '" + expr.concept_id + "': unit '" + unit + "' (" +
                         given.dimension + ") does not match canonical unit '" + mc.canonical_unit +
                         "' (" + canonical.dimension + ")");

    MetricConstraint c;
    c.concept_id = expr.concept_id;
    c.unit = mc.canonical_unit;
    c.origin = ConstraintOrigin::Declared;
    const double a = o.convert(expr.a, unit, mc.canonical_unit);
    switch (expr.form) {
        case ConstraintExpr::Form::AtLeast:
            c.lo = a;
            c.hi = mc.domain.max;
            break;
        case ConstraintExpr::Form::AtMost:
            c.lo = mc.domain.min;
            c.hi = a;
            break;
        case ConstraintExpr::Form::Equal:
            c.lo = a;
            c.hi = a;
            break;
        case ConstraintExpr::Form::Range: {
            if (expr.a > expr.b)
                throw InputError("constraint on '" + expr.concept_id + "': range lower bound " +
                                 format_number(expr.a) + " exceeds upper bound " +
                                 format_number(expr.b));
            c.lo = a;
            c.hi = o.convert(expr.b, unit, mc.canonical_unit);
            break;
        }
    }
    return clamp_to_domain(std::move(c), mc.domain, warnings);
}

MetricConstraint parse_constraint(std::string_view text, const Ontology& o, Warnings* warnings) {
    return resolve_constraint(parse_constraint_text(text), o, warnings);
}

// -- document loading --------------------------------------------------------

namespace {

MetricConstraint load_constraint(const json& jc, const Ontology& o, const std::string& context,
                                 Warnings* warnings) {
    expect_object(jc, context);
    if (jc.contains("expr")) {
        reject_unknown_keys(jc, context, {"expr"});
        try {
            return parse_constraint(require_string(jc, context, "expr"), o, warnings);
        } catch (const InputError& e) {
            throw InputError(context + ": " + e.what());
        }
    }
    if (jc.contains("operands")) {
        // Derived metric: the value comes from the concept's declared function
        // applied to the supplied operand values (canonical units).
        reject_unknown_keys(jc, context, {"concept", "operands"});
        const std::string concept_id = require_string(jc, context, "concept");
        const MetricConcept& mc = o.concept_at(concept_id);
        const MetricFunction* f = o.function_for(concept_id);
        if (!f) throw InputError(context + ": no function declared for concept '" + concept_id + "'");
        const json& jops = require_key(jc, context, "operands");
        expect_object(jops, context + " operands");
        std::map<std::string, double> values;
        for (auto it = jops.begin(); it != jops.end(); ++it) {
            if (std::find(f->operands.begin(), f->operands.end(), it.key()) == f->operands.end())
                throw InputError(context + ": '" + it.key() + "' is not an operand of the function for '" +
                                 concept_id + "'");
            if (!it.value().is_number())
                throw InputError(context + ": operand '" + it.key() + "' must be a number");
            values.emplace(it.key(), it.value().get<double>());
        }
        double value = 0.0;
        try {
            value = o.eval_function(*f, values, warnings);
        } catch (const EvalError& e) {
            throw InputError(context + ": " + e.what());
        }
        MetricConstraint c;
        c.concept_id = concept_id;
        c.lo = value;
        c.hi = value;
        c.unit = mc.canonical_unit;
        c.origin = ConstraintOrigin::Derived;
        return clamp_to_domain(std::move(c), mc.domain, warnings);
    }
    reject_unknown_keys(jc, context, {"concept", "min", "max", "unit"});
    ConstraintExpr expr;
    expr.form = ConstraintExpr::Form::Range;
    expr.concept_id = require_string(jc, context, "concept");
    expr.a = require_number(jc, context, "min");
    expr.b = require_number(jc, context, "max");
    if (auto it = jc.find("unit"); it != jc.end()) {
        if (!it->is_string()) throw InputError(context + ": \"unit\" must be a string");
        expr.unit = it->get<std::string>();
    }
    try {
        return resolve_constraint(expr, o, warnings);
    } catch (const InputError& e) {
        throw InputError(context + ": " + e.what());
    }
}

QoSProfile load_profile(const json& jmetrics, const Ontology& o, const std::string& context,
                        Warnings* warnings) {
    expect_array(jmetrics, context + " metrics");
    if (jmetrics.empty()) throw InputError(context + ": profile must declare at least one metric");
    QoSProfile profile;
    for (const json& jc : jmetrics) {
        MetricConstraint c = load_constraint(jc, o, context + " metric", warnings);
        for (const MetricConstraint& prior : profile.constraints) {
            if (o.equivalent(prior.concept_id, c.concept_id))
                throw InputError(context + ": constraints on '" + prior.concept_id + "' and '" +
                                 c.concept_id + "' reference equivalent concepts");
        }
        profile.constraints.push_back(std::move(c));
    }
    return profile;
}

std::vector<Interface> load_interfaces(const json& jarr, Polarity polarity, const Ontology& o,
                                       const std::string& owner, Warnings* warnings) {
    expect_array(jarr, owner + " " + polarity_name(polarity) + " interfaces");
    std::vector<Interface> interfaces;
    std::set<std::string> names;
    for (const json& ji : jarr) {
        const std::string base = owner + " " + polarity_name(polarity) + " interface";
        expect_object(ji, base);
        reject_unknown_keys(ji, base, {"name", "metrics"});
        Interface iface;
        iface.name = require_string(ji, base, "name");
        iface.polarity = polarity;
        const std::string context = owner + " " + polarity_name(polarity) + " interface '" +
                                    iface.name + "'";
        if (!names.insert(iface.name).second)
            throw InputError(context + ": duplicate interface name");
        iface.profile = load_profile(require_key(ji, context, "metrics"), o, context, warnings);
        interfaces.push_back(std::move(iface));
    }
    return interfaces;
}

Component load_component(const json& jc, const Ontology& o, Warnings* warnings) {
    expect_object(jc, "component entry");
    reject_unknown_keys(jc, "component entry", {"name", "metadata", "provided", "required"});
    Component c;
    c.name = require_string(jc, "component entry", "name");
    const std::string owner = "component '" + c.name + "'";
    if (auto it = jc.find("metadata"); it != jc.end()) {
        expect_object(*it, owner + " metadata");
        for (auto m = it->begin(); m != it->end(); ++m) {
            if (!m.value().is_string())
                throw InputError(owner + ": metadata value for \"" + m.key() + "\" must be a string");
            c.metadata.emplace(m.key(), m.value().get<std::string>());
        }
    }
    if (auto it = jc.find("provided"); it != jc.end())
        c.provided = load_interfaces(*it, Polarity::Provided, o, owner, warnings);
    if (auto it = jc.find("required"); it != jc.end())
        c.required = load_interfaces(*it, Polarity::Required, o, owner, warnings);
    if (c.provided.empty() && c.required.empty())
        throw InputError(owner + ": must declare at least one interface");
    return c;
}

json constraint_to_json(const MetricConstraint& c) {
    return json{{"concept", c.concept_id}, {"min", c.lo}, {"max", c.hi}, {"unit", c.unit}};
}

json interfaces_to_json(const std::vector<Interface>& interfaces) {
    json out = json::array();
    for (const Interface& iface : interfaces) {
        json metrics = json::array();
        for (const MetricConstraint& c : iface.profile.constraints)
            metrics.push_back(constraint_to_json(c));
        out.push_back(json{{"name", iface.name}, {"metrics", std::move(metrics)}});
    }
    return out;
}

}  // namespace

Catalog load_catalog(const json& doc, const Ontology& o, Warnings* warnings) {
    expect_object(doc, "catalog document");
    reject_unknown_keys(doc, "catalog document", {"components"});
    const json& jcomponents = require_key(doc, "catalog document", "components");
    expect_array(jcomponents, "components");
    Catalog catalog;
    std::set<std::string> names;
    for (const json& jc : jcomponents) {
        Component c = load_component(jc, o, warnings);
        if (!names.insert(c.name).second)
            throw InputError("duplicate component '" + c.name + "'");
        catalog.components.push_back(std::move(c));
    }
    return catalog;
}

Request load_request(const json& doc, const Ontology& o, Warnings* warnings) {
    expect_object(doc, "request document");
    reject_unknown_keys(doc, "request document",
                        {"name", "provided", "required", "mu", "rank_threshold"});
    Request r;
    r.name = require_string(doc, "request document", "name");
    const std::string owner = "request '" + r.name + "'";
    if (auto it = doc.find("provided"); it != doc.end())
        r.provided = load_interfaces(*it, Polarity::Provided, o, owner, warnings);
    if (auto it = doc.find("required"); it != doc.end())
        r.required = load_interfaces(*it, Polarity::Required, o, owner, warnings);
    if (r.interface_count() == 0)
        throw InputError(owner + ": must declare at least one interface");
    if (auto it = doc.find("mu"); it != doc.end()) {
        if (!it->is_number_integer())
            throw InputError(owner + ": \"mu\" must be an integer");
        r.mu = it->get<int>();
    } else {
        r.mu = static_cast<int>(r.interface_count());
    }
    if (r.mu <= 0) throw InputError(owner + ": mu must be positive");
    if (static_cast<std::size_t>(r.mu) > r.interface_count())
        throw InputError(owner + ": mu (" + std::to_string(r.mu) +
                         ") exceeds the interface count (" + std::to_string(r.interface_count()) + ")");
    if (auto it = doc.find("rank_threshold"); it != doc.end()) {
        if (!it->is_number()) throw InputError(owner + ": \"rank_threshold\" must be a number");
        const double threshold = it->get<double>();
        if (threshold < 0) throw InputError(owner + ": rank_threshold must be nonnegative");
        r.rank_threshold = threshold;
    }
    return r;
}

std::vector<Request> load_requests(const json& doc, const Ontology& o, Warnings* warnings) {
    std::vector<Request> requests;
    if (doc.is_array()) {
        std::set<std::string> names;
        for (const json& jr : doc) {
            Request r = load_request(jr, o, warnings);
            if (!names.insert(r.name).second)
                throw InputError("duplicate request '" + r.name + "'");
            requests.push_back(std::move(r));
        }
    } else {
        requests.push_back(load_request(doc, o, warnings));
    }
    return requests;
}

namespace {

json parse_document(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot read ") + what + " file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

Catalog load_catalog_text(const std::string& text, const Ontology& o, Warnings* warnings) {
    return load_catalog(parse_document(text, "catalog document"), o, warnings);
}

Catalog load_catalog_file(const std::filesystem::path& path, const Ontology& o, Warnings* warnings) {
    return load_catalog_text(read_file(path, "catalog"), o, warnings);
}

Request load_request_text(const std::string& text, const Ontology& o, Warnings* warnings) {
    return load_request(parse_document(text, "request document"), o, warnings);
}

Request load_request_file(const std::filesystem::path& path, const Ontology& o, Warnings* warnings) {
    return load_request_text(read_file(path, "request"), o, warnings);
}

std::vector<Request> load_requests_file(const std::filesystem::path& path, const Ontology& o,
                                        Warnings* warnings) {
    return load_requests(parse_document(read_file(path, "request"), "request document"), o, warnings);
}

json catalog_to_json(const Catalog& catalog) {
    json out;
    json components = json::array();
    for (const Component& c : catalog.components) {
        json jc{{"name", c.name}};
        if (!c.metadata.empty()) {
            json meta = json::object();
            for (const auto& [key, value] : c.metadata) meta[key] = value;
            jc["metadata"] = std::move(meta);
        }
        if (!c.provided.empty()) jc["provided"] = interfaces_to_json(c.provided);
        if (!c.required.empty()) jc["required"] = interfaces_to_json(c.required);
        components.push_back(std::move(jc));
    }
    out["components"] = std::move(components);
    return out;
}

json request_to_json(const Request& request) {
    json out{{"name", request.name}, {"mu", request.mu}};
    if (!request.provided.empty()) out["provided"] = interfaces_to_json(request.provided);
    if (!request.required.empty()) out["required"] = interfaces_to_json(request.required);
    if (request.rank_threshold) out["rank_threshold"] = *request.rank_threshold;
    return out;
}

}  // namespace qmatch
