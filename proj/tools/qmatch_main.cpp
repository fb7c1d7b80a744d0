// qmatch: load -> match -> rank -> report, driven entirely by flags.
//
// Exit codes: 0 success with results, 1 success with an empty result set,
// 2 input error (parse, semantics, unknown identifiers, bad overrides),
// 3 I/O error.

#include "qmatch/catalog.hpp"
#include "qmatch/evaluator.hpp"
#include "qmatch/matcher.hpp"
#include "qmatch/ontology.hpp"
#include "qmatch/ranker.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace qmatch;

constexpr int kExitResults = 0;
constexpr int kExitEmpty = 1;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;

double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

std::string fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

void print_warnings(const Warnings& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct CommonOptions {
    std::string ontology_path;
    std::string catalog_path;
    std::string request_path;
    std::string judgments_path;
    std::string format = "table";
    std::string mode;
    std::string component;
    std::optional<int> mu;
    std::optional<double> threshold;

    bool json_output() const { return format == "json"; }
};

void apply_overrides(Request& r, const CommonOptions& opt) {
    if (opt.mu) {
        if (*opt.mu <= 0) throw InputError("mu override must be positive");
        if (static_cast<std::size_t>(*opt.mu) > r.interface_count())
            throw InputError("mu override (" + std::to_string(*opt.mu) +
                             ") exceeds the request's interface count (" +
                             std::to_string(r.interface_count()) + ")");
        r.mu = *opt.mu;
    }
    if (opt.threshold) {
        if (*opt.threshold < 0) throw InputError("threshold override must be nonnegative");
        r.rank_threshold = *opt.threshold;
    }
}

// -- shared JSON fragments ---------------------------------------------------

json interval_json(double lo, double hi) { return json::array({lo, hi}); }

json normalized_json(const NormalizedInterval& interval) {
    return json::array({round_to(interval.lo, 6), round_to(interval.hi, 6)});
}

std::string pairing_chain(const Ontology& o, const MetricPairing& pairing) {
    const std::string& req = pairing.request_constraint.concept_id;
    const std::string& cand = pairing.candidate_constraint.concept_id;
    if (req == cand) return req;
    if (pairing.relation == PairingRelation::Equivalent) return req + " ~ " + cand;
    const bool upward = pairing.relation == PairingRelation::RequestSubsumedByCandidate;
    const std::vector<std::string> chain =
        upward ? o.subsumption_chain(req, cand) : o.subsumption_chain(cand, req);
    std::string out;
    for (const std::string& hop : chain) {
        if (!out.empty()) out += " -> ";
        out += hop;
    }
    return out;
}

json pairing_json(const Ontology& o, const MetricPairing& pairing) {
    const MetricConcept& req = o.concept_at(pairing.request_constraint.concept_id);
    const MetricConcept& cand = o.concept_at(pairing.candidate_constraint.concept_id);
    const NormalizedInterval nreq = normalize_interval(pairing.request_constraint, req.domain);
    const NormalizedInterval ncand = normalize_interval(pairing.candidate_constraint, cand.domain);
    return json{
        {"request_concept", req.name},
        {"candidate_concept", cand.name},
        {"relation", pairing_relation_name(pairing.relation)},
        {"chain", pairing_chain(o, pairing)},
        {"request_direction", req.direction == Direction::Increasing ? "increasing" : "decreasing"},
        {"candidate_direction",
         cand.direction == Direction::Increasing ? "increasing" : "decreasing"},
        {"request_interval", interval_json(pairing.request_constraint.lo, pairing.request_constraint.hi)},
        {"candidate_interval",
         interval_json(pairing.candidate_constraint.lo, pairing.candidate_constraint.hi)},
        {"request_normalized", normalized_json(nreq)},
        {"candidate_normalized", normalized_json(ncand)},
        {"delta", round_to(delta(nreq, ncand), 6)},
    };
}

// -- commands -----------------------------------------------------------------

int cmd_validate(const CommonOptions& opt) {
    Warnings warnings;
    const Ontology o = load_ontology_file(opt.ontology_path);
    json summary{{"command", "validate"}, {"ok", true}};
    summary["ontology"] = json{{"concepts", o.concepts().size()},
                               {"units", o.units().size()},
                               {"conversions", o.conversions().size()},
                               {"functions", o.functions().size()}};
    std::optional<Catalog> catalog;
    if (!opt.catalog_path.empty()) {
        catalog = load_catalog_file(opt.catalog_path, o, &warnings);
        std::size_t interfaces = 0;
        for (const Component& c : catalog->components)
            interfaces += c.provided.size() + c.required.size();
        summary["catalog"] =
            json{{"components", catalog->components.size()}, {"interfaces", interfaces}};
    }
    if (!opt.request_path.empty()) {
        std::vector<Request> requests = load_requests_file(opt.request_path, o, &warnings);
        json jreqs = json::array();
        for (const Request& r : requests)
            jreqs.push_back(json{{"name", r.name},
                                 {"interfaces", r.interface_count()},
                                 {"mu", r.mu}});
        summary["requests"] = std::move(jreqs);
    }
    print_warnings(warnings);
    if (opt.json_output()) {
        std::cout << summary.dump(2) << "\n";
    } else {
        std::cout << "ontology: " << o.concepts().size() << " concepts, " << o.units().size()
                  << " units, " << o.conversions().size() << " conversions, "
                  << o.functions().size() << " functions\n";
        if (catalog) {
            std::size_t interfaces = 0;
            for (const Component& c : catalog->components)
                interfaces += c.provided.size() + c.required.size();
            std::cout << "catalog: " << catalog->components.size() << " components, " << interfaces
                      << " interfaces\n";
        }
        if (summary.contains("requests")) {
            for (const json& jr : summary["requests"])
                std::cout << "request: " << jr["name"].get<std::string>() << " ("
                          << jr["interfaces"].get<std::size_t>() << " interfaces, mu "
                          << jr["mu"].get<int>() << ")\n";
        }
        std::cout << "OK\n";
    }
    return kExitResults;
}

struct LoadedInputs {
    Ontology ontology;
    Catalog catalog;
    Request request;
};

LoadedInputs load_inputs(const CommonOptions& opt) {
    Warnings warnings;
    LoadedInputs inputs{load_ontology_file(opt.ontology_path), {}, {}};
    inputs.catalog = load_catalog_file(opt.catalog_path, inputs.ontology, &warnings);
    inputs.request = load_request_file(opt.request_path, inputs.ontology, &warnings);
    apply_overrides(inputs.request, opt);
    print_warnings(warnings);
    return inputs;
}

int cmd_match(const CommonOptions& opt) {
    const LoadedInputs in = load_inputs(opt);
    const std::vector<MatchOutcome> admitted = match_all(in.ontology, in.request, in.catalog);
    if (opt.json_output()) {
        json out{{"command", "match"}, {"request", in.request.name}, {"mu", in.request.mu}};
        json results = json::array();
        for (const MatchOutcome& outcome : admitted) {
            json interfaces = json::array();
            for (const InterfaceMatch& im : outcome.interface_matches)
                interfaces.push_back(json{{"name", im.interface_name},
                                          {"polarity", polarity_name(im.polarity)},
                                          {"level", match_level_name(im.level)},
                                          {"weight", im.weight}});
            results.push_back(json{{"component", outcome.component_name},
                                   {"matched_count", outcome.matched_count},
                                   {"interfaces", std::move(interfaces)}});
        }
        out["results"] = std::move(results);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "request " << in.request.name << ", mu " << in.request.mu << ": "
                  << admitted.size() << " candidate(s)\n";
        for (const MatchOutcome& outcome : admitted) {
            std::cout << "  " << outcome.component_name << " (" << outcome.matched_count
                      << " matched)";
            for (const InterfaceMatch& im : outcome.interface_matches)
                std::cout << "  " << im.interface_name << "=" << match_level_name(im.level) << "/"
                          << im.weight;
            std::cout << "\n";
        }
    }
    return admitted.empty() ? kExitEmpty : kExitResults;
}

int cmd_select(const CommonOptions& opt) {
    const LoadedInputs in = load_inputs(opt);
    const std::vector<MatchOutcome> admitted = match_all(in.ontology, in.request, in.catalog);
    const std::vector<RankedCandidate> ranked = rank_all(in.ontology, in.request, admitted);
    if (opt.json_output()) {
        json out{{"command", "select"}, {"request", in.request.name}, {"mu", in.request.mu}};
        if (in.request.rank_threshold) out["threshold"] = *in.request.rank_threshold;
        json results = json::array();
        for (const RankedCandidate& candidate : ranked) {
            json interfaces = json::array();
            for (std::size_t i = 0; i < candidate.outcome.interface_matches.size(); ++i) {
                const InterfaceMatch& im = candidate.outcome.interface_matches[i];
                const InterfaceContribution& contribution = candidate.per_interface[i];
                json pairings = json::array();
                for (const MetricPairing& pairing : im.pairings)
                    pairings.push_back(pairing_json(in.ontology, pairing));
                interfaces.push_back(json{{"name", im.interface_name},
                                          {"polarity", polarity_name(im.polarity)},
                                          {"level", match_level_name(im.level)},
                                          {"weight", im.weight},
                                          {"delta_sum", round_to(contribution.delta_sum, 6)},
                                          {"contribution", round_to(contribution.contribution, 6)},
                                          {"pairings", std::move(pairings)}});
            }
            results.push_back(json{{"component", candidate.component_name},
                                   {"crank", round_to(candidate.crank, 6)},
                                   {"matched_count", candidate.outcome.matched_count},
                                   {"interfaces", std::move(interfaces)}});
        }
        out["results"] = std::move(results);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "request " << in.request.name << ", mu " << in.request.mu;
        if (in.request.rank_threshold)
            std::cout << ", threshold " << fixed(*in.request.rank_threshold, 2);
        std::cout << ": " << ranked.size() << " candidate(s)\n";
        int rank = 0;
        for (const RankedCandidate& candidate : ranked) {
            std::cout << ++rank << ". " << candidate.component_name << "  crank "
                      << fixed(candidate.crank, 2) << "\n";
            for (std::size_t i = 0; i < candidate.outcome.interface_matches.size(); ++i) {
                const InterfaceMatch& im = candidate.outcome.interface_matches[i];
                const InterfaceContribution& contribution = candidate.per_interface[i];
                std::cout << "     " << im.interface_name << " [" << polarity_name(im.polarity)
                          << "] " << match_level_name(im.level) << " weight " << im.weight
                          << "  delta_sum " << fixed(contribution.delta_sum, 2) << "  contribution "
                          << fixed(contribution.contribution, 2) << "\n";
            }
        }
    }
    return ranked.empty() ? kExitEmpty : kExitResults;
}

int cmd_explain(const CommonOptions& opt) {
    const LoadedInputs in = load_inputs(opt);
    const Component* component = in.catalog.find_component(opt.component);
    if (!component) throw InputError("unknown component '" + opt.component + "'");
    const ComponentExplanation explanation = explain_component(in.ontology, in.request, *component);

    std::optional<RankedCandidate> ranked;
    if (explanation.admitted) {
        if (auto outcome = match_component(in.ontology, in.request, *component))
            ranked = crank(in.ontology, in.request, *outcome);
    }

    if (opt.json_output()) {
        json out{{"command", "explain"},
                 {"component", explanation.component_name},
                 {"request", in.request.name},
                 {"mu", in.request.mu},
                 {"matched_count", explanation.matched_count},
                 {"admitted", explanation.admitted}};
        json interfaces = json::array();
        for (const InterfaceExplanation& entry : explanation.interfaces) {
            json je{{"name", entry.interface_name},
                    {"polarity", polarity_name(entry.polarity)},
                    {"correspondence_found", entry.correspondence_found},
                    {"level", match_level_name(entry.correspondence_found ? entry.level
                                                                          : MatchLevel::Fail)},
                    {"counted", entry.counted},
                    {"weight", entry.weight}};
            json pairings = json::array();
            for (const MetricPairing& pairing : entry.pairings)
                pairings.push_back(pairing_json(in.ontology, pairing));
            je["pairings"] = std::move(pairings);
            je["failure_reasons"] = entry.failure_reasons;
            interfaces.push_back(std::move(je));
        }
        out["interfaces"] = std::move(interfaces);
        if (ranked) out["crank"] = round_to(ranked->crank, 6);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "component " << explanation.component_name << " vs request " << in.request.name
                  << " (mu " << in.request.mu << ")\n";
        for (const InterfaceExplanation& entry : explanation.interfaces) {
            std::cout << "  " << entry.interface_name << " [" << polarity_name(entry.polarity)
                      << "]: ";
            if (!entry.correspondence_found) {
                std::cout << "no corresponding interface\n";
            } else {
                std::cout << match_level_name(entry.level);
                if (entry.counted) std::cout << " (weight " << entry.weight << ")";
                std::cout << "\n";
            }
            for (const MetricPairing& pairing : entry.pairings) {
                const MetricConcept& req = in.ontology.concept_at(pairing.request_constraint.concept_id);
                const MetricConcept& cand =
                    in.ontology.concept_at(pairing.candidate_constraint.concept_id);
                const NormalizedInterval nreq = normalize_interval(pairing.request_constraint, req.domain);
                const NormalizedInterval ncand =
                    normalize_interval(pairing.candidate_constraint, cand.domain);
                std::cout << "      " << pairing_chain(in.ontology, pairing) << " ("
                          << pairing_relation_name(pairing.relation) << ")\n";
                std::cout << "        request  [" << pairing.request_constraint.lo << ", "
                          << pairing.request_constraint.hi << "] " << pairing.request_constraint.unit
                          << "  normalized [" << fixed(nreq.lo, 2) << ", " << fixed(nreq.hi, 2)
                          << "]\n";
                std::cout << "        candidate [" << pairing.candidate_constraint.lo << ", "
                          << pairing.candidate_constraint.hi << "] "
                          << pairing.candidate_constraint.unit << "  normalized ["
                          << fixed(ncand.lo, 2) << ", " << fixed(ncand.hi, 2) << "]\n";
                std::cout << "        delta " << fixed(delta(nreq, ncand), 2) << "\n";
            }
            for (const std::string& reason : entry.failure_reasons)
                std::cout << "      " << reason << "\n";
        }
        std::cout << "matched " << explanation.matched_count << " of mu " << in.request.mu << " -> "
                  << (explanation.admitted ? "admitted" : "not admitted") << "\n";
        if (ranked) std::cout << "crank " << fixed(ranked->crank, 2) << "\n";
    }
    return kExitResults;
}

json report_json(const EvalReport& report) {
    json per_request = json::array();
    for (const RequestEval& entry : report.per_request) {
        per_request.push_back(json{{"name", entry.request_name},
                                   {"selected", entry.selected},
                                   {"relevant_selected", entry.relevant_selected_count},
                                   {"precision", round_to(entry.precision, 3)},
                                   {"recall", round_to(entry.recall, 3)}});
    }
    return json{{"mode", eval_mode_name(report.mode)},
                {"per_request", std::move(per_request)},
                {"average",
                 json{{"precision", round_to(report.avg_precision, 3)},
                      {"recall", round_to(report.avg_recall, 3)}}}};
}

void print_report_table(const EvalReport& report) {
    std::cout << "mode: " << eval_mode_name(report.mode) << "\n";
    std::printf("%-12s %-10s %-10s\n", "request", "precision", "recall");
    for (const RequestEval& entry : report.per_request)
        std::printf("%-12s %-10s %-10s\n", entry.request_name.c_str(),
                    fixed(entry.precision, 2).c_str(), fixed(entry.recall, 2).c_str());
    std::printf("%-12s %-10s %-10s\n", "Average", fixed(report.avg_precision, 2).c_str(),
                fixed(report.avg_recall, 2).c_str());
}

int cmd_eval(const CommonOptions& opt) {
    Warnings warnings;
    const Ontology o = load_ontology_file(opt.ontology_path);
    const Catalog catalog = load_catalog_file(opt.catalog_path, o, &warnings);
    std::vector<Request> requests = load_requests_file(opt.request_path, o, &warnings);
    for (Request& r : requests) apply_overrides(r, opt);
    const RelevanceJudgments judgments = load_judgments_file(opt.judgments_path);
    print_warnings(warnings);

    std::vector<EvalMode> modes;
    if (opt.mode.empty()) {
        modes = {EvalMode::MatchOnly, EvalMode::MatchAndRank};
    } else if (opt.mode == "match_only") {
        modes = {EvalMode::MatchOnly};
    } else if (opt.mode == "match_and_rank") {
        modes = {EvalMode::MatchAndRank};
    } else {
        throw InputError("unknown mode '" + opt.mode + "'");
    }

    std::vector<EvalReport> reports;
    for (EvalMode mode : modes) reports.push_back(run_eval(o, catalog, requests, judgments, mode));

    if (opt.json_output()) {
        if (reports.size() == 1) {
            std::cout << report_json(reports.front()).dump(2) << "\n";
        } else {
            json out;
            for (const EvalReport& report : reports)
                out[eval_mode_name(report.mode)] = report_json(report);
            std::cout << out.dump(2) << "\n";
        }
    } else {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i) std::cout << "\n";
            print_report_table(reports[i]);
        }
    }
    return kExitResults;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QoS-aware component matchmaking: subsumption matching and interval-distance ranking"};
    app.require_subcommand(1);
    CommonOptions opt;

    auto add_common = [&](CLI::App* cmd, bool needs_catalog, bool needs_request) {
        cmd->add_option("--ontology", opt.ontology_path, "ontology document (JSON)")->required();
        auto* catalog_opt = cmd->add_option("--catalog", opt.catalog_path, "catalog document (JSON)");
        auto* request_opt = cmd->add_option("--request", opt.request_path, "request document (JSON)");
        if (needs_catalog) catalog_opt->required();
        if (needs_request) request_opt->required();
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"table", "json"}));
    };

    CLI::App* validate = app.add_subcommand("validate", "load and validate documents");
    add_common(validate, false, false);

    CLI::App* match = app.add_subcommand("match", "run QoS matching and list admitted candidates");
    add_common(match, true, true);
    match->add_option("--mu", opt.mu, "override the request's minimum matched-interface count");

    CLI::App* select = app.add_subcommand("select", "match, rank and list candidates by crank");
    add_common(select, true, true);
    select->add_option("--mu", opt.mu, "override the request's minimum matched-interface count");
    select->add_option("--threshold", opt.threshold, "override the request's rank threshold");

    CLI::App* explain = app.add_subcommand("explain", "show per-interface rule evaluation for one component");
    add_common(explain, true, true);
    explain->add_option("component", opt.component, "component name")->required();
    explain->add_option("--mu", opt.mu, "override the request's minimum matched-interface count");

    CLI::App* eval = app.add_subcommand("eval", "precision/recall against relevance judgments");
    add_common(eval, true, true);
    eval->add_option("--judgments", opt.judgments_path, "relevance judgments (JSON)")->required();
    eval->add_option("--mode", opt.mode, "evaluation mode")
        ->check(CLI::IsMember({"match_only", "match_and_rank"}));
    eval->add_option("--mu", opt.mu, "override every request's mu");
    eval->add_option("--threshold", opt.threshold, "override every request's rank threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(opt);
        if (app.got_subcommand(match)) return cmd_match(opt);
        if (app.got_subcommand(select)) return cmd_select(opt);
        if (app.got_subcommand(explain)) return cmd_explain(opt);
        if (app.got_subcommand(eval)) return cmd_eval(opt);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
