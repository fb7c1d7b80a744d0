#include "qmatch/evaluator.hpp"

#include "qmatch/matcher.hpp"
#include "qmatch/ranker.hpp"

#include "json_check.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qmatch {

using nlohmann::json;

const char* eval_mode_name(EvalMode mode) {
    return mode == EvalMode::MatchOnly ? "match_only" : "match_and_rank";
}

RelevanceJudgments load_judgments(const json& doc) {
    detail::expect_object(doc, "judgments document");
    RelevanceJudgments judgments;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        detail::expect_array(it.value(), "judgments for '" + it.key() + "'");
        std::set<std::string> relevant;
        for (const json& jname : it.value()) {
            if (!jname.is_string())
                throw InputError("judgments for '" + it.key() + "': entries must be component names");
            relevant.insert(jname.get<std::string>());
        }
        judgments.emplace(it.key(), std::move(relevant));
    }
    return judgments;
}

RelevanceJudgments load_judgments_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read judgments file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return load_judgments(json::parse(buffer.str()));
    } catch (const json::parse_error& e) {
        throw InputError(std::string("judgments document: ") + e.what());
    }
}

PrecisionRecall precision_recall(const std::set<std::string>& selected,
                                 const std::set<std::string>& relevant) {
    std::size_t hit = 0;
    for (const std::string& name : selected)
        if (relevant.count(name)) ++hit;
    PrecisionRecall pr;
    pr.precision = selected.empty() ? 1.0 : static_cast<double>(hit) / selected.size();
    pr.recall = relevant.empty() ? 1.0 : static_cast<double>(hit) / relevant.size();
    return pr;
}

EvalReport run_eval(const Ontology& o, const Catalog& catalog, const std::vector<Request>& requests,
                    const RelevanceJudgments& judgments, EvalMode mode) {
    for (const auto& [request_name, relevant] : judgments) {
        for (const std::string& component : relevant)
            if (!catalog.find_component(component))
                throw InputError("judgments for '" + request_name + "' name unknown component '" +
                                 component + "'");
    }

    EvalReport report;
    report.mode = mode;
    double precision_total = 0.0;
    double recall_total = 0.0;
    for (const Request& r : requests) {
        auto judged = judgments.find(r.name);
        if (judged == judgments.end())
            throw InputError("no relevance judgment for request '" + r.name + "'");

        std::set<std::string> selected;
        std::vector<MatchOutcome> admitted = match_all(o, r, catalog);
        if (mode == EvalMode::MatchOnly) {
            for (const MatchOutcome& outcome : admitted) selected.insert(outcome.component_name);
        } else {
            for (const RankedCandidate& ranked : rank_all(o, r, admitted))
                selected.insert(ranked.component_name);
        }

        RequestEval entry;
        entry.request_name = r.name;
        entry.selected.assign(selected.begin(), selected.end());
        for (const std::string& name : selected)
            if (judged->second.count(name)) ++entry.relevant_selected_count;
        const PrecisionRecall pr = precision_recall(selected, judged->second);
        entry.precision = pr.precision;
        entry.recall = pr.recall;
        precision_total += entry.precision;
        recall_total += entry.recall;
        report.per_request.push_back(std::move(entry));
    }
    const double n = report.per_request.empty() ? 1.0 : static_cast<double>(report.per_request.size());
    report.avg_precision = precision_total / n;
    report.avg_recall = recall_total / n;
    return report;
}

}  // namespace qmatch
