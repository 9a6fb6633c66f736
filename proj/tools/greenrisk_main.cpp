// greenrisk: weak-supervision pipeline for greenwashing-risk screening of
// sustainability reports. Subcommands cover label generation, coefficient
// fitting, classifier training, report evaluation, the emissions deviation
// table, and a standalone hedging scan.

#include "greenrisk/classifier.hpp"
#include "greenrisk/common.hpp"
#include "greenrisk/config.hpp"
#include "greenrisk/corpus.hpp"
#include "greenrisk/emissions.hpp"
#include "greenrisk/evaluation.hpp"
#include "greenrisk/labeling.hpp"
#include "greenrisk/lexicon.hpp"
#include "greenrisk/text.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace greenrisk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUserError = 2;
constexpr int kExitInternalError = 3;

// Flags shared by all subcommands; empty/unset means "keep the config value".
struct GlobalFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string scheme;
};

PipelineConfig resolve_config(const GlobalFlags& flags) {
    PipelineConfig config;
    if (!flags.config_path.empty()) {
        config = load_config(flags.config_path);
    }
    if (!flags.out_dir.empty()) {
        config.out_dir = flags.out_dir;
    }
    if (!flags.scheme.empty()) {
        config.scheme = scheme_from_name(flags.scheme);
    }
    if (flags.seed.has_value()) {
        config.training.seed = *flags.seed;
        config.split_seed = *flags.seed;
        config.seeds = {*flags.seed};
    }
    return config;
}

void require_path(const std::string& value, const std::string& key) {
    if (value.empty()) {
        throw Error("config is missing required path '" + key + "'");
    }
    if (!fs::exists(value)) {
        throw Error("path does not exist: " + value + " (config key '" + key + "')");
    }
}

RiskCoefficients resolve_coefficients(const PipelineConfig& config) {
    RiskCoefficients coeffs;
    if (!config.coefficients.empty()) {
        require_path(config.coefficients, "paths.coefficients");
        coeffs = load_coefficients(config.coefficients);
    }
    coeffs.scheme = config.scheme;
    coeffs.threshold = config.threshold;
    return coeffs;
}

AttributeScorer build_scorer(const PipelineConfig& config) {
    require_path(config.hedging_lexicon, "paths.hedging_lexicon");
    AttributeScorer scorer;
    scorer.hedging_lexicon = load_lexicon(config.hedging_lexicon);
    if (!config.sentiment_lexicon.empty()) {
        require_path(config.sentiment_lexicon, "paths.sentiment_lexicon");
        scorer.fallbacks.sentiment = load_lexicon(config.sentiment_lexicon);
    }
    if (!config.commitment_lexicon.empty()) {
        require_path(config.commitment_lexicon, "paths.commitment_lexicon");
        scorer.fallbacks.commitment = load_lexicon(config.commitment_lexicon);
    }
    if (!config.specificity_lexicon.empty()) {
        require_path(config.specificity_lexicon, "paths.specificity_lexicon");
        scorer.fallbacks.specificity = load_lexicon(config.specificity_lexicon);
    }
    if (!config.external_scores.empty()) {
        require_path(config.external_scores, "paths.external_scores");
        scorer.external = load_external_scores(config.external_scores);
    }
    return scorer;
}

std::optional<Lexicon> load_climate_gate(const PipelineConfig& config) {
    if (config.climate_keywords.empty()) {
        return std::nullopt;
    }
    require_path(config.climate_keywords, "paths.climate_keywords");
    return load_lexicon(config.climate_keywords);
}

// Reports are .txt files with a .meta.json sidecar, discovered in sorted
// order so runs are reproducible.
std::vector<Document> load_reports(const std::string& dir) {
    require_path(dir, "paths.reports_dir");
    std::vector<fs::path> texts;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            texts.push_back(entry.path());
        }
    }
    std::sort(texts.begin(), texts.end());
    if (texts.empty()) {
        throw Error("no .txt reports found in " + dir);
    }
    std::vector<Document> docs;
    docs.reserve(texts.size());
    for (const auto& path : texts) {
        fs::path meta_path = path;
        meta_path.replace_extension(".meta.json");
        if (!fs::exists(meta_path)) {
            throw Error("missing metadata sidecar: " + meta_path.string());
        }
        docs.push_back(ingest_report(path.string(), load_report_metadata(meta_path.string())));
    }
    return docs;
}

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << content;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buffer[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buffer;
}

// Chunks every report, applies the optional climate gate, scores attributes,
// and returns unlabeled records for the climate-related chunks.
std::vector<DatasetRecord> build_records(const std::vector<Document>& docs,
                                         const AttributeScorer& scorer,
                                         const std::optional<Lexicon>& gate,
                                         std::size_t max_chars) {
    std::vector<DatasetRecord> records;
    for (const auto& doc : docs) {
        std::vector<Chunk> chunks = chunk_document(doc, max_chars);
        if (gate.has_value()) {
            apply_climate_gate(chunks, *gate);
        }
        for (const auto& chunk : chunks) {
            if (chunk.climate_related == 0) {
                continue;
            }
            DatasetRecord record;
            record.id = chunk.id;
            record.document_id = chunk.document_id;
            record.index = chunk.index;
            record.text = chunk.text;
            record.attributes = scorer.score(chunk.id, chunk.text).first;
            record.climate_related = chunk.climate_related;
            records.push_back(std::move(record));
        }
    }
    return records;
}

int cmd_label(const GlobalFlags& flags) {
    const PipelineConfig config = resolve_config(flags);
    const AttributeScorer scorer = build_scorer(config);
    const std::optional<Lexicon> gate = load_climate_gate(config);
    const std::vector<Document> docs = load_reports(config.reports_dir);
    const RiskCoefficients coeffs = resolve_coefficients(config);

    std::vector<DatasetRecord> records =
        build_records(docs, scorer, gate, config.max_chars);
    records = generate_labels(std::move(records), coeffs);

    LabeledDataset all;
    all.records = std::move(records);
    const auto [train_set, validation_set] =
        split_dataset(all, config.train_fraction, config.split_seed);

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    persist_dataset(train_set, (out_dir / "train.jsonl").string());
    persist_dataset(validation_set, (out_dir / "validation.jsonl").string());

    std::size_t positives = 0;
    for (const auto& record : all.records) {
        positives += static_cast<std::size_t>(record.label);
    }
    std::printf("scheme=%s chunks=%zu positives=%zu negatives=%zu train=%zu validation=%zu\n",
                std::string(scheme_name(coeffs.scheme)).c_str(), all.records.size(),
                positives, all.records.size() - positives, train_set.records.size(),
                validation_set.records.size());
    return kExitOk;
}

int cmd_fit(const GlobalFlags& flags, const std::string& exemplars_flag) {
    const PipelineConfig config = resolve_config(flags);
    const std::string exemplars_path =
        exemplars_flag.empty() ? config.exemplars : exemplars_flag;
    require_path(exemplars_path, "paths.exemplars");

    const std::vector<AnnotatedExemplar> exemplars = load_exemplars(exemplars_path);
    const FitResult fit = fit_coefficients(exemplars, config.threshold);

    const fs::path out_path = fs::path(config.out_dir) / "coefficients.json";
    fs::create_directories(out_path.parent_path());
    save_coefficients(fit.coefficients, out_path.string());

    std::printf("exemplars=%zu residual=%.6f\n", fit.n_exemplars, fit.residual_norm);
    std::printf("w_sentiment=%.6f w_commitment=%.6f w_specificity=%.6f w_hedging=%.6f\n",
                fit.coefficients.w_sentiment, fit.coefficients.w_commitment,
                fit.coefficients.w_specificity, fit.coefficients.w_hedging);
    std::printf("wrote %s\n", out_path.string().c_str());
    return kExitOk;
}

int cmd_train(const GlobalFlags& flags) {
    const PipelineConfig config = resolve_config(flags);
    require_path(config.train_dataset, "paths.train_dataset");
    require_path(config.validation_dataset, "paths.validation_dataset");
    if (config.seeds.empty()) {
        throw Error("experiment.seeds must be non-empty for train");
    }

    const LabeledDataset train_set =
        load_dataset(config.train_dataset, SplitTag::train);
    const LabeledDataset validation_set =
        load_dataset(config.validation_dataset, SplitTag::validation);

    const std::vector<RunResult> runs = run_experiment(
        train_set, validation_set, config.features, config.training, config.seeds);
    const AggregateStats stats = aggregate_runs(runs);
    const RunResult& best = select_run(runs);

    const fs::path out_dir(config.out_dir);
    const fs::path model_path =
        config.model_path.empty() ? out_dir / "model.json" : fs::path(config.model_path);
    fs::create_directories(model_path.parent_path().empty() ? "."
                                                            : model_path.parent_path());
    save_model(*best.model, model_path.string());

    json manifest;
    manifest["meta"]["created"] = iso_timestamp();
    manifest["train_records"] = train_set.records.size();
    manifest["validation_records"] = validation_set.records.size();
    manifest["runs"] = json::array();
    for (const auto& run : runs) {
        manifest["runs"].push_back({{"seed", run.seed},
                                    {"validation_accuracy", run.validation_accuracy},
                                    {"validation_f1", run.validation_f1}});
    }
    manifest["mean_accuracy"] = stats.mean_accuracy;
    manifest["std_accuracy"] = stats.std_accuracy;
    manifest["mean_f1"] = stats.mean_f1;
    manifest["std_f1"] = stats.std_f1;
    manifest["selected_seed"] = best.seed;
    manifest["model_path"] = model_path.string();
    write_text_file(out_dir / "experiment.json", manifest.dump(2) + "\n");

    std::printf("runs=%zu mean_accuracy=%.4f std_accuracy=%.4f mean_f1=%.4f std_f1=%.4f\n",
                runs.size(), stats.mean_accuracy, stats.std_accuracy, stats.mean_f1,
                stats.std_f1);
    std::printf("selected seed=%llu accuracy=%.4f f1=%.4f\n",
                static_cast<unsigned long long>(best.seed), best.validation_accuracy,
                best.validation_f1);
    std::printf("wrote %s and %s\n", model_path.string().c_str(),
                (out_dir / "experiment.json").string().c_str());
    return kExitOk;
}

int cmd_evaluate(const GlobalFlags& flags) {
    const PipelineConfig config = resolve_config(flags);
    require_path(config.model_path, "paths.model_path");
    const LinearTextModel model = load_model(config.model_path);
    const AttributeScorer scorer = build_scorer(config);
    const std::optional<Lexicon> gate = load_climate_gate(config);
    const std::vector<Document> docs = load_reports(config.reports_dir);
    const RiskCoefficients coeffs = resolve_coefficients(config);

    std::vector<CompanyEval> evals;
    evals.reserve(docs.size());
    for (const auto& doc : docs) {
        evals.push_back(evaluate_report(model, doc, scorer, coeffs, config.max_chars,
                                        gate.has_value() ? &*gate : nullptr,
                                        config.vote_tie_label));
    }

    const CompanyTable table = company_table(evals);
    const fs::path out_dir(config.out_dir);
    write_text_file(out_dir / "company_table.csv", company_table_csv(table));
    std::fputs(company_table_text(table).c_str(), stdout);
    std::printf("wrote %s\n", (out_dir / "company_table.csv").string().c_str());
    return kExitOk;
}

int cmd_emissions(const GlobalFlags& flags) {
    const PipelineConfig config = resolve_config(flags);
    require_path(config.emissions_csv, "paths.emissions_csv");
    const EmissionsInput input = load_emissions_csv(config.emissions_csv);
    const std::vector<RelativeEmissions> relatives = to_relatives(input);
    const std::vector<OutlierFlag> flags_found = flag_outliers(relatives, config.outlier_k);

    const EmissionsReport report = emissions_report(relatives, flags_found);
    const fs::path out_dir(config.out_dir);
    write_text_file(out_dir / "emissions_report.csv", emissions_report_csv(report));
    std::fputs(emissions_report_text(report).c_str(), stdout);
    for (const auto& flag : flags_found) {
        std::printf("flag: %s %s deviation=%.4f threshold=%.4f\n", flag.company.c_str(),
                    std::string(emission_field_name(flag.field)).c_str(), flag.deviation,
                    flag.threshold);
    }
    std::printf("wrote %s\n", (out_dir / "emissions_report.csv").string().c_str());
    return kExitOk;
}

int cmd_scan_hedging(const GlobalFlags& flags, const std::string& text_path) {
    const PipelineConfig config = resolve_config(flags);
    require_path(config.hedging_lexicon, "paths.hedging_lexicon");
    const Lexicon lex = load_lexicon(config.hedging_lexicon);

    std::ifstream in(text_path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + text_path);
    }
    std::string line;
    std::size_t line_no = 0;
    std::size_t flagged = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (greenrisk::trim(line).empty()) {
            continue;
        }
        const HedgingResult result = detect_hedging(line, lex);
        if (result.flag == 1) {
            ++flagged;
            std::printf("%zu: HEDGED", line_no);
            for (const auto& phrase : result.matches) {
                std::printf(" [%s]", phrase.c_str());
            }
            std::printf("\n");
        }
    }
    std::printf("flagged %zu line(s)\n", flagged);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"greenwashing-risk screening pipeline"};
    app.require_subcommand(1);

    GlobalFlags flags;
    std::uint64_t seed_value = 0;
    app.add_option("--config", flags.config_path, "pipeline config file")
        ->expected(1);
    auto* seed_opt =
        app.add_option("--seed", seed_value, "override all seeds with one value");
    app.add_option("--out-dir", flags.out_dir, "output directory override");
    app.add_option("--scheme", flags.scheme, "labeling scheme override")
        ->check(CLI::IsMember({"eq1", "eq2"}));

    auto* label = app.add_subcommand("label", "chunk reports, score attributes, "
                                              "generate labels, write dataset splits");
    auto* fit = app.add_subcommand("fit", "fit labeling weights on expert exemplars");
    std::string exemplars_flag;
    fit->add_option("--exemplars", exemplars_flag, "exemplars JSONL (overrides config)");
    auto* train = app.add_subcommand("train", "multi-seed training with run selection");
    auto* evaluate =
        app.add_subcommand("evaluate", "per-company chunk metrics and report votes");
    auto* emissions =
        app.add_subcommand("emissions", "relative emissions table with outlier flags");
    auto* scan = app.add_subcommand("scan-hedging", "flag hedged lines in a text file");
    std::string scan_path;
    scan->add_option("file", scan_path, "text file, one candidate line per line")
        ->required();

    // Let global flags appear after the subcommand too.
    for (CLI::App* sub : {label, fit, train, evaluate, emissions, scan}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUserError;
    }

    if (seed_opt->count() > 0) {
        flags.seed = seed_value;
    }

    try {
        if (label->parsed()) {
            return cmd_label(flags);
        }
        if (fit->parsed()) {
            return cmd_fit(flags, exemplars_flag);
        }
        if (train->parsed()) {
            return cmd_train(flags);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(flags);
        }
        if (emissions->parsed()) {
            return cmd_emissions(flags);
        }
        if (scan->parsed()) {
            return cmd_scan_hedging(flags, scan_path);
        }
        std::fprintf(stderr, "error: no subcommand\n");
        return kExitUserError;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUserError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternalError;
    }
}
