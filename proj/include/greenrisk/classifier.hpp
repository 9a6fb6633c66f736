#pragma once

#include "greenrisk/corpus.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace greenrisk {

struct FeatureConfig {
    std::vector<int> ngram_orders{1, 2}; // subset of {1,2}
    std::size_t hash_dimension = std::size_t{1} << 18; // power of two, >= 2^10
    bool lowercase = true;
};

struct TrainConfig {
    double learning_rate = 0.1;
    int epochs = 70;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
    bool frozen_features = false; // train only the bias, weights stay at init
};

// 64-bit FNV-1a; the documented featurization hash, pinned by test vectors.
std::uint64_t fnv1a64(std::string_view s);

// Sparse bag of hashed n-grams, entries sorted by index.
using SparseCounts = std::vector<std::pair<std::uint32_t, double>>;

SparseCounts featurize(std::string_view text, const FeatureConfig& config);

struct LinearTextModel {
    std::vector<double> weights; // length hash_dimension
    double bias = 0.0;
    FeatureConfig feature_config;
    TrainConfig train_config;
    double initial_loss = 0.0; // full training loss before the first epoch
    double final_loss = 0.0;   // full training loss after the last epoch
};

// Per-example SGD logistic regression with L2 decay on active features.
// Feature weights initialize to zero (data-independent); frozen_features
// keeps them there and trains only the bias. Deterministic per seed.
// Throws Error("degenerate training set") when only one class is present.
LinearTextModel train(const LabeledDataset& train_set, const FeatureConfig& fc,
                      const TrainConfig& tc);

struct Prediction {
    int label = 0;
    double probability = 0.0;
};

// probability = sigmoid(w.x + b); label = 1 iff probability >= 0.5.
Prediction predict(const LinearTextModel& model, std::string_view text);

struct RunResult {
    std::uint64_t seed = 0;
    double validation_accuracy = 0.0;
    double validation_f1 = 0.0;
    std::shared_ptr<const LinearTextModel> model;
};

// One training run per seed, evaluated on the validation split; results are
// returned in seed order.
std::vector<RunResult> run_experiment(const LabeledDataset& train_set,
                                      const LabeledDataset& validation_set,
                                      const FeatureConfig& fc, const TrainConfig& tmpl,
                                      const std::vector<std::uint64_t>& seeds);

// Accuracies rounded to 2 decimals; restrict to values occurring at least
// twice, take the highest F1 across those runs; if no accuracy repeats, the
// highest F1 overall. Ties break toward the lowest seed.
const RunResult& select_run(const std::vector<RunResult>& runs);

// Versioned JSON with configs, bias, and sparse nonzero weights.
void save_model(const LinearTextModel& model, const std::string& path);
LinearTextModel load_model(const std::string& path);

} // namespace greenrisk
