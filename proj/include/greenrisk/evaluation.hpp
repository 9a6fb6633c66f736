#pragma once

#include "greenrisk/classifier.hpp"
#include "greenrisk/corpus.hpp"
#include "greenrisk/labeling.hpp"
#include "greenrisk/lexicon.hpp"

#include <string>
#include <vector>

namespace greenrisk {

// Fraction of positions where pred == gold. Errors on empty or mismatched input.
double accuracy(const std::vector<int>& preds, const std::vector<int>& golds);

// Harmonic mean of precision and recall for the positive class; 0 when
// precision + recall is 0.
double f1(const std::vector<int>& preds, const std::vector<int>& golds,
          int positive_class = 1);

struct MetricPair {
    double accuracy = 0.0;
    double f1 = 0.0;
};

struct AggregateStats {
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0; // population standard deviation
    double mean_f1 = 0.0;
    double std_f1 = 0.0;
};

AggregateStats aggregate_runs(const std::vector<RunResult>& runs);

// 1 if ones outnumber zeros, 0 if zeros outnumber ones, tie_label on a tie.
int majority_vote(const std::vector<int>& chunk_labels, int tie_label = 1);

struct CompanyEval {
    std::string company;
    std::vector<int> predictions;
    std::vector<int> golds;
    MetricPair chunk_metrics;
    int report_label_predicted = 0;
    int report_label_gold = 0;
};

// Chunks the document, derives gold labels through the attribute/labeling
// pipeline and predictions through the model, and majority-votes both
// streams over the climate-related chunks.
CompanyEval evaluate_report(const LinearTextModel& model, const Document& doc,
                            const AttributeScorer& scorer,
                            const RiskCoefficients& gold_labeler, std::size_t max_chars,
                            const Lexicon* climate_gate = nullptr, int tie_label = 1);

struct CompanyTable {
    struct Row {
        std::string company;
        double accuracy = 0.0; // fraction in [0,1]
        double f1 = 0.0;
        int report_label_predicted = 0;
        int report_label_gold = 0;
    };
    std::vector<Row> rows; // sorted by company name
    double mean_accuracy = 0.0;
    double mean_f1 = 0.0;
};

// Per-company rows plus unweighted means across companies.
CompanyTable company_table(const std::vector<CompanyEval>& evals);

// CSV with a footer row of means; accuracies displayed as percentages.
std::string company_table_csv(const CompanyTable& table);
std::string company_table_text(const CompanyTable& table);

} // namespace greenrisk
