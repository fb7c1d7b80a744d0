#include "qmatch/evaluator.hpp"

#include "support/oracles.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qmatch;
using qtest::fixture_path;

namespace {

struct EvalFixture {
    Ontology ontology;
    Catalog catalog;
    std::vector<Request> requests;
    RelevanceJudgments judgments;
};

const EvalFixture& eval_fixture() {
    static const EvalFixture fixture = [] {
        EvalFixture f{load_ontology_file(fixture_path("camera/ontology.json")), {}, {}, {}};
        f.catalog = load_catalog_file(fixture_path("eval/catalog.json"), f.ontology);
        f.requests = load_requests_file(fixture_path("eval/requests.json"), f.ontology);
        f.judgments = load_judgments_file(fixture_path("eval/judgments.json"));
        return f;
    }();
    return fixture;
}

const RequestEval& row(const EvalReport& report, const std::string& name) {
    for (const RequestEval& entry : report.per_request)
        if (entry.request_name == name) return entry;
    throw std::runtime_error("no row for " + name);
}

}  // namespace

TEST_CASE("precision and recall definitions") {
    CHECK(precision_recall({"a", "b", "c"}, {"a", "b", "d", "e"}).precision ==
          doctest::Approx(2.0 / 3.0));
    CHECK(precision_recall({"a", "b", "c"}, {"a", "b", "d", "e"}).recall == doctest::Approx(0.5));

    const PrecisionRecall same = precision_recall({"a", "b"}, {"a", "b"});
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);

    // Empty-set conventions.
    const PrecisionRecall empty_selected = precision_recall({}, {"a"});
    CHECK(empty_selected.precision == 1.0);
    CHECK(empty_selected.recall == 0.0);
    const PrecisionRecall empty_relevant = precision_recall({"a"}, {});
    CHECK(empty_relevant.precision == 0.0);
    CHECK(empty_relevant.recall == 1.0);
    const PrecisionRecall both_empty = precision_recall({}, {});
    CHECK(both_empty.precision == 1.0);
    CHECK(both_empty.recall == 1.0);
}

TEST_CASE("precision_recall matches direct set arithmetic on random pairs") {
    std::mt19937_64 rng(20240813);
    std::uniform_int_distribution<int> size_dist(0, 12);
    std::uniform_int_distribution<int> id_dist(0, 19);
    for (int round = 0; round < 200; ++round) {
        std::set<std::string> selected;
        std::set<std::string> relevant;
        for (int i = size_dist(rng); i > 0; --i) selected.insert("c" + std::to_string(id_dist(rng)));
        for (int i = size_dist(rng); i > 0; --i) relevant.insert("c" + std::to_string(id_dist(rng)));
        const PrecisionRecall got = precision_recall(selected, relevant);
        const auto [precision, recall] = qtest::oracle_precision_recall(selected, relevant);
        CHECK(got.precision == precision);  // exact
        CHECK(got.recall == recall);
    }
}

TEST_CASE("match-only evaluation over the shipped fixture") {
    const EvalFixture& f = eval_fixture();
    const EvalReport report =
        run_eval(f.ontology, f.catalog, f.requests, f.judgments, EvalMode::MatchOnly);
    REQUIRE(report.per_request.size() == 8);

    CHECK(row(report, "R1").selected ==
          std::vector<std::string>{"cam01", "cam02", "cam05", "cam06", "cam11", "cam12"});
    CHECK(row(report, "R1").precision == doctest::Approx(0.5));
    CHECK(row(report, "R1").recall == doctest::Approx(1.0));

    CHECK(row(report, "R2").selected.size() == 12);
    CHECK(row(report, "R2").precision == doctest::Approx(5.0 / 12.0));

    CHECK(row(report, "R3").selected.size() == 10);
    CHECK(row(report, "R3").precision == doctest::Approx(0.6));

    CHECK(row(report, "R4").selected ==
          std::vector<std::string>{"cam01", "cam02", "cam03", "cam04", "cam05", "cam06", "cam07",
                                   "cam08", "cam11", "cam12"});
    CHECK(row(report, "R4").precision == doctest::Approx(0.9));

    CHECK(row(report, "R5").selected.size() == 9);
    CHECK(row(report, "R5").precision == doctest::Approx(2.0 / 9.0));

    CHECK(row(report, "R6").selected.size() == 10);
    CHECK(row(report, "R6").precision == doctest::Approx(0.1));

    CHECK(row(report, "R7").selected ==
          std::vector<std::string>{"cam01", "cam02", "cam05", "cam06", "cam11", "cam12"});
    CHECK(row(report, "R7").precision == doctest::Approx(1.0 / 3.0));

    CHECK(row(report, "R8").selected.size() == 9);
    CHECK(row(report, "R8").precision == doctest::Approx(1.0 / 3.0));

    for (const RequestEval& entry : report.per_request) CHECK(entry.recall == doctest::Approx(1.0));
    CHECK(report.avg_recall == doctest::Approx(1.0));
    CHECK(report.avg_precision ==
          doctest::Approx((0.5 + 5.0 / 12.0 + 0.6 + 0.9 + 2.0 / 9.0 + 0.1 + 1.0 / 3.0 + 1.0 / 3.0) / 8));
}

TEST_CASE("ranking with thresholds filters false positives") {
    const EvalFixture& f = eval_fixture();
    const EvalReport match_only =
        run_eval(f.ontology, f.catalog, f.requests, f.judgments, EvalMode::MatchOnly);
    const EvalReport ranked =
        run_eval(f.ontology, f.catalog, f.requests, f.judgments, EvalMode::MatchAndRank);

    CHECK(row(ranked, "R1").selected == std::vector<std::string>{"cam01", "cam12"});
    CHECK(row(ranked, "R1").precision == doctest::Approx(1.0));
    CHECK(row(ranked, "R1").recall == doctest::Approx(2.0 / 3.0));

    CHECK(row(ranked, "R3").selected ==
          std::vector<std::string>{"cam01", "cam02", "cam05", "cam06", "cam08", "cam10", "cam11",
                                   "cam12"});
    CHECK(row(ranked, "R3").precision == doctest::Approx(0.625));
    CHECK(row(ranked, "R3").recall == doctest::Approx(5.0 / 6.0));

    CHECK(row(ranked, "R5").selected ==
          std::vector<std::string>{"cam01", "cam04", "cam07", "cam12"});
    CHECK(row(ranked, "R5").precision == doctest::Approx(0.5));

    // Requests with no threshold keep their match-only selections.
    for (const std::string name : {"R2", "R4", "R6", "R7", "R8"})
        CHECK(row(ranked, name).selected == row(match_only, name).selected);

    // Selection after ranking is always a subset of match-only selection, so
    // recall cannot rise.
    for (const RequestEval& entry : ranked.per_request) {
        const RequestEval& baseline = row(match_only, entry.request_name);
        for (const std::string& name : entry.selected)
            CHECK(std::find(baseline.selected.begin(), baseline.selected.end(), name) !=
                  baseline.selected.end());
        CHECK(entry.recall <= baseline.recall + 1e-12);
    }

    // The headline movement: precision up, recall down.
    CHECK(ranked.avg_precision > match_only.avg_precision);
    CHECK(ranked.avg_recall < match_only.avg_recall);
    CHECK(ranked.avg_precision == doctest::Approx(0.5260416666666666).epsilon(1e-9));
    CHECK(ranked.avg_recall == doctest::Approx(0.9375).epsilon(1e-12));
}

TEST_CASE("averages are the arithmetic means of the rows") {
    const EvalFixture& f = eval_fixture();
    for (EvalMode mode : {EvalMode::MatchOnly, EvalMode::MatchAndRank}) {
        const EvalReport report = run_eval(f.ontology, f.catalog, f.requests, f.judgments, mode);
        double p = 0.0, r = 0.0;
        for (const RequestEval& entry : report.per_request) {
            p += entry.precision;
            r += entry.recall;
        }
        CHECK(std::fabs(report.avg_precision - p / report.per_request.size()) <= 1e-12);
        CHECK(std::fabs(report.avg_recall - r / report.per_request.size()) <= 1e-12);
    }
}

TEST_CASE("evaluation is deterministic") {
    const EvalFixture& f = eval_fixture();
    const EvalReport a = run_eval(f.ontology, f.catalog, f.requests, f.judgments, EvalMode::MatchAndRank);
    const EvalReport b = run_eval(f.ontology, f.catalog, f.requests, f.judgments, EvalMode::MatchAndRank);
    REQUIRE(a.per_request.size() == b.per_request.size());
    for (std::size_t i = 0; i < a.per_request.size(); ++i) {
        CHECK(a.per_request[i].selected == b.per_request[i].selected);
        CHECK(a.per_request[i].precision == b.per_request[i].precision);
        CHECK(a.per_request[i].recall == b.per_request[i].recall);
    }
    CHECK(a.avg_precision == b.avg_precision);
}

TEST_CASE("eval error paths") {
    const EvalFixture& f = eval_fixture();
    SUBCASE("missing judgment names the request") {
        RelevanceJudgments incomplete = f.judgments;
        incomplete.erase("R5");
        CHECK_THROWS_WITH_AS(
            static_cast<void>(run_eval(f.ontology, f.catalog, f.requests, incomplete,
                                       EvalMode::MatchOnly)),
            doctest::Contains("R5"), InputError);
    }
    SUBCASE("judgment naming an unknown component") {
        RelevanceJudgments bad = f.judgments;
        bad["R1"].insert("cam99");
        CHECK_THROWS_WITH_AS(
            static_cast<void>(run_eval(f.ontology, f.catalog, f.requests, bad, EvalMode::MatchOnly)),
            doctest::Contains("cam99"), InputError);
    }
}

TEST_CASE("empty selection with a nonempty relevant set") {
    const EvalFixture& f = eval_fixture();
    // A request nothing satisfies: the lone DVFormat interface requires a
    // concept no candidate requires an equivalent or more general form of.
    Request hopeless;
    hopeless.name = "Rx";
    Interface iface;
    iface.name = "DVFormat";
    iface.polarity = Polarity::Required;
    iface.profile.constraints.push_back(
        {"Resolution", 72.0, 4800.0, "dpi", ConstraintOrigin::Declared});
    hopeless.required.push_back(iface);
    hopeless.mu = 1;

    RelevanceJudgments judgments{{"Rx", {"cam01"}}};
    const EvalReport report =
        run_eval(f.ontology, f.catalog, {hopeless}, judgments, EvalMode::MatchOnly);
    REQUIRE(report.per_request.size() == 1);
    CHECK(report.per_request[0].selected.empty());
    CHECK(report.per_request[0].precision == 1.0);
    CHECK(report.per_request[0].recall == 0.0);
}
