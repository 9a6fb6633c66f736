#include "greenrisk/evaluation.hpp"

#include "greenrisk/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace greenrisk {

namespace {

void check_paired(const std::vector<int>& preds, const std::vector<int>& golds) {
    if (preds.size() != golds.size()) {
        throw Error("prediction/gold length mismatch");
    }
    if (preds.empty()) {
        throw Error("empty prediction list");
    }
}

double population_std(const std::vector<double>& values, double mean) {
    double sum_sq = 0.0;
    for (double v : values) {
        sum_sq += (v - mean) * (v - mean);
    }
    return std::sqrt(sum_sq / static_cast<double>(values.size()));
}

std::string format2(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", round2(value));
    return buffer;
}

} // namespace

double accuracy(const std::vector<int>& preds, const std::vector<int>& golds) {
    check_paired(preds, golds);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == golds[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double f1(const std::vector<int>& preds, const std::vector<int>& golds, int positive_class) {
    check_paired(preds, golds);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool pred_pos = preds[i] == positive_class;
        const bool gold_pos = golds[i] == positive_class;
        if (pred_pos && gold_pos) {
            ++tp;
        } else if (pred_pos && !gold_pos) {
            ++fp;
        } else if (!pred_pos && gold_pos) {
            ++fn;
        }
    }
    const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
    const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    if (precision + recall == 0.0) {
        return 0.0;
    }
    return 2.0 * precision * recall / (precision + recall);
}

AggregateStats aggregate_runs(const std::vector<RunResult>& runs) {
    if (runs.empty()) {
        throw Error("aggregate_runs requires at least one run");
    }
    std::vector<double> accs;
    std::vector<double> f1s;
    accs.reserve(runs.size());
    f1s.reserve(runs.size());
    for (const auto& run : runs) {
        accs.push_back(run.validation_accuracy);
        f1s.push_back(run.validation_f1);
    }
    AggregateStats stats;
    for (double a : accs) {
        stats.mean_accuracy += a;
    }
    stats.mean_accuracy /= static_cast<double>(accs.size());
    for (double f : f1s) {
        stats.mean_f1 += f;
    }
    stats.mean_f1 /= static_cast<double>(f1s.size());
    stats.std_accuracy = population_std(accs, stats.mean_accuracy);
    stats.std_f1 = population_std(f1s, stats.mean_f1);
    return stats;
}

int majority_vote(const std::vector<int>& chunk_labels, int tie_label) {
    if (chunk_labels.empty()) {
        throw Error("no climate-related chunks");
    }
    std::size_t ones = 0;
    for (int label : chunk_labels) {
        if (label == 1) {
            ++ones;
        }
    }
    const std::size_t zeros = chunk_labels.size() - ones;
    if (ones > zeros) {
        return 1;
    }
    if (zeros > ones) {
        return 0;
    }
    return tie_label;
}

CompanyEval evaluate_report(const LinearTextModel& model, const Document& doc,
                            const AttributeScorer& scorer,
                            const RiskCoefficients& gold_labeler, std::size_t max_chars,
                            const Lexicon* climate_gate, int tie_label) {
    std::vector<Chunk> chunks = chunk_document(doc, max_chars);
    if (climate_gate != nullptr) {
        apply_climate_gate(chunks, *climate_gate);
    }

    CompanyEval eval;
    eval.company = doc.company;
    for (const auto& chunk : chunks) {
        if (chunk.climate_related != 1) {
            continue;
        }
        const auto [attrs, source] = scorer.score(chunk.id, chunk.text);
        (void)source;
        eval.golds.push_back(apply_scheme(attrs, gold_labeler).label);
        eval.predictions.push_back(predict(model, chunk.text).label);
    }
    if (eval.golds.empty()) {
        throw Error("no climate-related chunks in document " + doc.id);
    }
    eval.chunk_metrics.accuracy = accuracy(eval.predictions, eval.golds);
    eval.chunk_metrics.f1 = f1(eval.predictions, eval.golds);
    eval.report_label_predicted = majority_vote(eval.predictions, tie_label);
    eval.report_label_gold = majority_vote(eval.golds, tie_label);
    return eval;
}

CompanyTable company_table(const std::vector<CompanyEval>& evals) {
    if (evals.empty()) {
        throw Error("company_table requires at least one company");
    }
    CompanyTable table;
    for (const auto& eval : evals) {
        CompanyTable::Row row;
        row.company = eval.company;
        row.accuracy = eval.chunk_metrics.accuracy;
        row.f1 = eval.chunk_metrics.f1;
        row.report_label_predicted = eval.report_label_predicted;
        row.report_label_gold = eval.report_label_gold;
        table.rows.push_back(std::move(row));
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const auto& a, const auto& b) { return a.company < b.company; });
    for (const auto& row : table.rows) {
        table.mean_accuracy += row.accuracy;
        table.mean_f1 += row.f1;
    }
    table.mean_accuracy /= static_cast<double>(table.rows.size());
    table.mean_f1 /= static_cast<double>(table.rows.size());
    return table;
}

std::string company_table_csv(const CompanyTable& table) {
    std::ostringstream out;
    out << "Company,Accuracy,F1,ReportLabelPred,ReportLabelGold\n";
    for (const auto& row : table.rows) {
        out << row.company << ',' << format2(row.accuracy * 100.0) << ',' << format2(row.f1)
            << ',' << row.report_label_predicted << ',' << row.report_label_gold << '\n';
    }
    out << "MEAN," << format2(table.mean_accuracy * 100.0) << ',' << format2(table.mean_f1)
        << ",,\n";
    return out.str();
}

std::string company_table_text(const CompanyTable& table) {
    std::size_t width = 7; // "Company"
    for (const auto& row : table.rows) {
        width = std::max(width, row.company.size());
    }
    std::ostringstream out;
    out << std::string(width + 2 - 7, ' ');
    out << "Company  Accuracy     F1  Pred  Gold\n";
    for (const auto& row : table.rows) {
        out << std::string(width + 2 - row.company.size(), ' ') << row.company << "  ";
        const std::string acc = format2(row.accuracy * 100.0);
        out << std::string(8 - acc.size(), ' ') << acc << "  ";
        const std::string f = format2(row.f1);
        out << std::string(5 - f.size(), ' ') << f << "  ";
        out << "   " << row.report_label_predicted << "     " << row.report_label_gold << '\n';
    }
    const std::string acc = format2(table.mean_accuracy * 100.0);
    const std::string f = format2(table.mean_f1);
    out << std::string(width + 2 - 4, ' ') << "MEAN  " << std::string(8 - acc.size(), ' ')
        << acc << "  " << std::string(5 - f.size(), ' ') << f << '\n';
    return out.str();
}

} // namespace greenrisk
