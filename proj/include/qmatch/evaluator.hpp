#pragma once
// Selection-quality measurement: precision and recall per request against
// developer-supplied relevance judgments, with matching-only and
// matching-plus-ranking modes.

#include "qmatch/catalog.hpp"
#include "qmatch/errors.hpp"
#include "qmatch/ontology.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qmatch {

// request name -> set of relevant component names
using RelevanceJudgments = std::map<std::string, std::set<std::string>>;

RelevanceJudgments load_judgments(const nlohmann::json& doc);
RelevanceJudgments load_judgments_file(const std::filesystem::path& path);

struct PrecisionRecall {
    double precision = 1.0;
    double recall = 1.0;
};

// precision = |selected & relevant| / |selected|  (1 when nothing selected)
// recall    = |selected & relevant| / |relevant|  (1 when nothing relevant)
PrecisionRecall precision_recall(const std::set<std::string>& selected,
                                 const std::set<std::string>& relevant);

enum class EvalMode { MatchOnly, MatchAndRank };

const char* eval_mode_name(EvalMode mode);

struct RequestEval {
    std::string request_name;
    std::vector<std::string> selected;  // component names, ascending
    std::size_t relevant_selected_count = 0;
    double precision = 1.0;
    double recall = 1.0;
};

struct EvalReport {
    EvalMode mode = EvalMode::MatchOnly;
    std::vector<RequestEval> per_request;  // request order preserved
    double avg_precision = 0.0;
    double avg_recall = 0.0;
};

// MatchOnly selects every admitted component; MatchAndRank selects the
// ranked, threshold-filtered set. Throws InputError when a request lacks a
// judgment or a judgment names an unknown component.
EvalReport run_eval(const Ontology& o, const Catalog& catalog, const std::vector<Request>& requests,
                    const RelevanceJudgments& judgments, EvalMode mode);

}  // namespace qmatch
