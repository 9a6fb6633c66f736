#pragma once

#include "greenrisk/classifier.hpp"
#include "greenrisk/labeling.hpp"

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace greenrisk {

// Everything the CLI needs to run a pipeline stage, collected from a plain
// key = value config file with [section] headers. Paths left empty are simply
// unused; each command checks for the ones it requires.
struct PipelineConfig {
    // [paths]
    std::string hedging_lexicon;
    std::string sentiment_lexicon;
    std::string commitment_lexicon;
    std::string specificity_lexicon;
    std::string climate_keywords;
    std::string external_scores;
    std::string coefficients;
    std::string reports_dir;
    std::string exemplars;
    std::string emissions_csv;
    std::string train_dataset;
    std::string validation_dataset;
    std::string model_path;
    std::string out_dir = "out";

    // [labeling]
    Scheme scheme = Scheme::eq1;
    double threshold = 0.67;

    // [chunking]
    std::size_t max_chars = 2000;

    // [classifier]
    FeatureConfig features;
    TrainConfig training;

    // [experiment]
    std::vector<std::uint64_t> seeds;
    double train_fraction = 0.8;
    std::uint64_t split_seed = 13;

    // [evaluation]
    int vote_tie_label = 1;

    // [emissions]
    double outlier_k = 1.5;
};

// Parses the config format: [section] headers, key = value lines, blank lines
// and full-line '#' comments ignored. Unknown sections or keys are errors so
// typos surface immediately. `origin` names the source in error messages.
PipelineConfig parse_config(std::istream& in, const std::string& origin);

PipelineConfig load_config(const std::string& path);

} // namespace greenrisk
