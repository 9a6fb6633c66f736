#include "greenrisk/evaluation.hpp"

#include "greenrisk/classifier.hpp"
#include "greenrisk/common.hpp"
#include "greenrisk/labeling.hpp"
#include "greenrisk/lexicon.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace greenrisk;

namespace {

RunResult run_with(double acc, double f1_score) {
    RunResult r;
    r.validation_accuracy = acc;
    r.validation_f1 = f1_score;
    return r;
}

CompanyEval eval_with(std::string company, double acc, double f1_score, int pred, int gold) {
    CompanyEval e;
    e.company = std::move(company);
    e.chunk_metrics.accuracy = acc;
    e.chunk_metrics.f1 = f1_score;
    e.report_label_predicted = pred;
    e.report_label_gold = gold;
    return e;
}

} // namespace

TEST_SUITE_BEGIN("evaluation");

TEST_CASE("accuracy is the fraction of agreeing positions") {
    CHECK(accuracy({1, 1, 0}, {1, 0, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(accuracy({1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}) == doctest::Approx(0.8).epsilon(1e-12));

    // 55 agreements out of 57.
    std::vector<int> preds(57, 1);
    std::vector<int> golds(57, 1);
    golds[10] = 0;
    golds[42] = 0;
    CHECK(accuracy(preds, golds) == doctest::Approx(55.0 / 57.0).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(accuracy({1, 0}, {1}), "prediction/gold length mismatch", Error);
    CHECK_THROWS_WITH_AS(accuracy({}, {}), "empty prediction list", Error);
}

TEST_CASE("f1 for the positive class") {
    // tp=2, fp=0, fn=1: precision 1, recall 2/3.
    CHECK(f1({1, 0, 1, 0}, {1, 1, 1, 0}) == doctest::Approx(0.8).epsilon(1e-12));
    // tp=1, fp=0, fn=1: precision 1, recall 1/2.
    CHECK(f1({1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // Degenerate cases collapse to zero instead of dividing by zero.
    CHECK(f1({0, 0, 0}, {1, 1, 0}) == 0.0);
    CHECK(f1({0, 0}, {0, 0}) == 0.0);
    CHECK(f1({1, 1}, {1, 1}) == 1.0);
}

TEST_CASE("f1 can score the negative class as positive") {
    const std::vector<int> preds{1, 0, 1, 0, 0};
    const std::vector<int> golds{1, 1, 1, 0, 0};
    std::vector<int> flipped_preds;
    std::vector<int> flipped_golds;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        flipped_preds.push_back(1 - preds[i]);
        flipped_golds.push_back(1 - golds[i]);
    }
    CHECK(f1(preds, golds, 0) == doctest::Approx(f1(flipped_preds, flipped_golds)).epsilon(1e-12));
}

TEST_CASE("f1 agrees with a direct confusion-matrix computation") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 5 + rng() % 50;
        std::vector<int> preds(n);
        std::vector<int> golds(n);
        for (std::size_t i = 0; i < n; ++i) {
            preds[i] = coin(rng);
            golds[i] = coin(rng);
        }
        double tp = 0;
        double fp = 0;
        double fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (preds[i] == 1 && golds[i] == 1) ++tp;
            if (preds[i] == 1 && golds[i] == 0) ++fp;
            if (preds[i] == 0 && golds[i] == 1) ++fn;
        }
        double expected = 0.0;
        if (tp > 0) {
            const double precision = tp / (tp + fp);
            const double recall = tp / (tp + fn);
            expected = 2.0 * precision * recall / (precision + recall);
        }
        CHECK(f1(preds, golds) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("aggregation reports means and population deviations") {
    const std::vector<RunResult> runs{run_with(0.6, 0.5), run_with(0.8, 0.5)};
    const AggregateStats stats = aggregate_runs(runs);
    CHECK(stats.mean_accuracy == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(stats.std_accuracy == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(stats.mean_f1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(stats.std_f1 == 0.0);

    const AggregateStats single = aggregate_runs({run_with(0.9, 0.4)});
    CHECK(single.mean_accuracy == 0.9);
    CHECK(single.std_accuracy == 0.0); // population convention, not n-1

    CHECK_THROWS_AS(aggregate_runs({}), Error);
}

TEST_CASE("majority vote with a configurable tie") {
    CHECK(majority_vote({0, 0, 0}) == 0);
    CHECK(majority_vote({1, 1, 0}) == 1);
    CHECK(majority_vote({1, 0, 0, 1, 1}) == 1);
    CHECK(majority_vote({1, 0}) == 1);    // tie defaults to the risky side
    CHECK(majority_vote({1, 0}, 0) == 0); // unless told otherwise
    CHECK_THROWS_WITH_AS(majority_vote({}), "no climate-related chunks", Error);
}

TEST_CASE("company table averages the per-company metrics unweighted") {
    const std::vector<CompanyEval> evals{
        eval_with("C1", 0.8246, 0.67, 1, 1), eval_with("C2", 0.8333, 0.63, 0, 0),
        eval_with("C3", 0.8514, 0.74, 1, 1), eval_with("C4", 0.8596, 0.56, 0, 0),
        eval_with("C5", 0.8947, 0.67, 0, 0), eval_with("C6", 0.9167, 0.72, 1, 1)};
    const CompanyTable table = company_table(evals);
    REQUIRE(table.rows.size() == 6);
    CHECK(std::fabs(table.mean_accuracy * 100.0 - 86.34) < 0.01);
    CHECK(round2(table.mean_f1) == doctest::Approx(0.67).epsilon(1e-12));

    const std::string csv = company_table_csv(table);
    CHECK(csv.find("MEAN,86.34,0.67,,\n") != std::string::npos);
}

TEST_CASE("company table rows come out sorted by name") {
    const std::vector<CompanyEval> evals{eval_with("Beta", 0.5, 0.0, 0, 1),
                                         eval_with("Alpha", 1.0, 1.0, 1, 1)};
    const CompanyTable table = company_table(evals);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].company == "Alpha");
    CHECK(table.rows[1].company == "Beta");
    CHECK(table.mean_accuracy == doctest::Approx(0.75).epsilon(1e-12));

    const std::string csv = company_table_csv(table);
    CHECK(csv == "Company,Accuracy,F1,ReportLabelPred,ReportLabelGold\n"
                 "Alpha,100.00,1.00,1,1\n"
                 "Beta,50.00,0.00,0,1\n"
                 "MEAN,75.00,0.50,,\n");

    const std::string text = company_table_text(table);
    CHECK(text.find("Alpha") != std::string::npos);
    CHECK(text.find("MEAN") != std::string::npos);

    CHECK_THROWS_WITH_AS(company_table({}), "company_table requires at least one company",
                         Error);
}

namespace {

// One document, three single-chunk paragraphs: a positive one, a commitment
// one, a neutral one. The model only knows the word "good".
struct ReportFixture {
    Document doc;
    LinearTextModel model;
    AttributeScorer scorer;
    RiskCoefficients gold_labeler;

    ReportFixture() {
        doc.id = "doc";
        doc.company = "Acme";
        doc.year = 2021;
        doc.paragraphs = {
            "The climate team said this was a good year for the program and the "
            "results were ahead of the plan in every region we track.",
            "Our climate pledge for the decade was restated at the annual meeting "
            "and the board asked for a timetable for the rollout.",
            "The board met four times during the year and reviewed executive pay, "
            "audit findings and the agenda for the next meeting."};

        model.feature_config.ngram_orders = {1};
        model.weights.assign(model.feature_config.hash_dimension, 0.0);
        model.weights[fnv1a64("good") & (model.feature_config.hash_dimension - 1)] = 10.0;
        model.bias = -5.0;

        scorer.hedging_lexicon = make_lexicon("hedging", {"allegedly"});
        scorer.fallbacks.sentiment = make_lexicon("sentiment", {"good"});
        scorer.fallbacks.commitment = make_lexicon("commitment", {"pledge"});
        scorer.fallbacks.specificity = make_lexicon("specificity", {"30%"});
    }
};

} // namespace

TEST_CASE("evaluating a report derives both label streams per chunk") {
    const ReportFixture fx;
    const CompanyEval eval = evaluate_report(fx.model, fx.doc, fx.scorer, fx.gold_labeler, 200);
    CHECK(eval.company == "Acme");
    REQUIRE(eval.predictions.size() == 3);
    CHECK(eval.predictions == std::vector<int>{1, 0, 0});
    CHECK(eval.golds == std::vector<int>{1, 0, 0});
    CHECK(eval.chunk_metrics.accuracy == 1.0);
    CHECK(eval.chunk_metrics.f1 == 1.0);
    CHECK(eval.report_label_predicted == 0);
    CHECK(eval.report_label_gold == 0);
}

TEST_CASE("the climate gate drops unrelated chunks before voting") {
    const ReportFixture fx;
    const Lexicon gate = make_lexicon("gate", {"climate"});
    const CompanyEval eval =
        evaluate_report(fx.model, fx.doc, fx.scorer, fx.gold_labeler, 200, &gate);
    // The neutral paragraph has no gate keyword, so two chunks remain and the
    // 1-1 vote falls to the tie label.
    REQUIRE(eval.predictions.size() == 2);
    CHECK(eval.report_label_predicted == 1);
    CHECK(eval.report_label_gold == 1);

    const CompanyEval zero_tie =
        evaluate_report(fx.model, fx.doc, fx.scorer, fx.gold_labeler, 200, &gate, 0);
    CHECK(zero_tie.report_label_predicted == 0);
    CHECK(zero_tie.report_label_gold == 0);

    const Lexicon nothing = make_lexicon("gate", {"zzzunmatched"});
    CHECK_THROWS_WITH_AS(
        evaluate_report(fx.model, fx.doc, fx.scorer, fx.gold_labeler, 200, &nothing),
        "no climate-related chunks in document doc", Error);
}

TEST_SUITE_END();
