#include "greenrisk/classifier.hpp"

#include "greenrisk/common.hpp"
#include "greenrisk/evaluation.hpp"
#include "greenrisk/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace greenrisk {

namespace {

using nlohmann::json;

constexpr char kNgramSeparator = '\x1f';

void validate_feature_config(const FeatureConfig& fc) {
    if (fc.hash_dimension < (std::size_t{1} << 10) ||
        (fc.hash_dimension & (fc.hash_dimension - 1)) != 0) {
        throw Error("hash_dimension must be a power of two >= 2^10");
    }
    if (fc.ngram_orders.empty()) {
        throw Error("ngram_orders must be non-empty");
    }
    for (int n : fc.ngram_orders) {
        if (n != 1 && n != 2) {
            throw Error("ngram_orders must be a subset of {1,2}");
        }
    }
}

double dot_sparse(const std::vector<double>& weights, const SparseCounts& x) {
    double sum = 0.0;
    for (const auto& [idx, value] : x) {
        sum += weights[idx] * value;
    }
    return sum;
}

// Mean log-loss over the dataset plus (l2/2)*||w||^2.
double full_loss(const std::vector<double>& weights, double bias,
                 const std::vector<SparseCounts>& xs, const std::vector<int>& ys,
                 double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double p = stable_sigmoid(dot_sparse(weights, xs[i]) + bias);
        const double eps = 1e-12;
        loss -= ys[i] == 1 ? std::log(std::max(p, eps)) : std::log(std::max(1.0 - p, eps));
    }
    loss /= static_cast<double>(xs.size());
    double norm_sq = 0.0;
    for (double w : weights) {
        norm_sq += w * w;
    }
    return loss + 0.5 * l2 * norm_sq;
}

json feature_config_to_json(const FeatureConfig& fc) {
    return {{"ngram_orders", fc.ngram_orders},
            {"hash_dimension", fc.hash_dimension},
            {"lowercase", fc.lowercase}};
}

FeatureConfig feature_config_from_json(const json& obj) {
    FeatureConfig fc;
    fc.ngram_orders = obj.at("ngram_orders").get<std::vector<int>>();
    fc.hash_dimension = obj.at("hash_dimension").get<std::size_t>();
    fc.lowercase = obj.at("lowercase").get<bool>();
    return fc;
}

json train_config_to_json(const TrainConfig& tc) {
    return {{"learning_rate", tc.learning_rate},
            {"epochs", tc.epochs},
            {"l2", tc.l2},
            {"seed", tc.seed},
            {"frozen_features", tc.frozen_features}};
}

TrainConfig train_config_from_json(const json& obj) {
    TrainConfig tc;
    tc.learning_rate = obj.at("learning_rate").get<double>();
    tc.epochs = obj.at("epochs").get<int>();
    tc.l2 = obj.at("l2").get<double>();
    tc.seed = obj.at("seed").get<std::uint64_t>();
    tc.frozen_features = obj.at("frozen_features").get<bool>();
    return tc;
}

} // namespace

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

SparseCounts featurize(std::string_view text, const FeatureConfig& config) {
    validate_feature_config(config);
    const auto tokens = tokenize(text, config.lowercase);
    std::vector<std::uint32_t> indices;
    const std::uint64_t mask = config.hash_dimension - 1;
    for (int n : config.ngram_orders) {
        const std::size_t order = static_cast<std::size_t>(n);
        if (tokens.size() < order) {
            continue;
        }
        for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
            std::string gram = tokens[i];
            for (std::size_t j = 1; j < order; ++j) {
                gram.push_back(kNgramSeparator);
                gram += tokens[i + j];
            }
            indices.push_back(static_cast<std::uint32_t>(fnv1a64(gram) & mask));
        }
    }
    std::sort(indices.begin(), indices.end());
    SparseCounts counts;
    for (std::size_t i = 0; i < indices.size();) {
        std::size_t j = i;
        while (j < indices.size() && indices[j] == indices[i]) {
            ++j;
        }
        counts.emplace_back(indices[i], static_cast<double>(j - i));
        i = j;
    }
    return counts;
}

LinearTextModel train(const LabeledDataset& train_set, const FeatureConfig& fc,
                      const TrainConfig& tc) {
    validate_feature_config(fc);
    if (tc.epochs < 1) {
        throw Error("epochs must be >= 1");
    }
    if (!(tc.learning_rate > 0.0)) {
        throw Error("learning_rate must be > 0");
    }
    if (tc.l2 < 0.0) {
        throw Error("l2 must be >= 0");
    }
    if (train_set.records.empty()) {
        throw Error("degenerate training set: empty");
    }
    bool saw_positive = false;
    bool saw_negative = false;
    for (const auto& record : train_set.records) {
        (record.label == 1 ? saw_positive : saw_negative) = true;
    }
    if (!saw_positive || !saw_negative) {
        throw Error("degenerate training set: only one class present");
    }

    const std::size_t n = train_set.records.size();
    std::vector<SparseCounts> xs;
    std::vector<int> ys;
    xs.reserve(n);
    ys.reserve(n);
    for (const auto& record : train_set.records) {
        xs.push_back(featurize(record.text, fc));
        ys.push_back(record.label);
    }

    LinearTextModel model;
    model.feature_config = fc;
    model.train_config = tc;
    model.weights.assign(fc.hash_dimension, 0.0);
    model.bias = 0.0;
    model.initial_loss = full_loss(model.weights, model.bias, xs, ys, tc.l2);

    std::mt19937_64 rng(tc.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t pos = 0; pos < n; ++pos) {
            const std::size_t i = order[pos];
            const double p = stable_sigmoid(dot_sparse(model.weights, xs[i]) + model.bias);
            const double g = p - static_cast<double>(ys[i]);
            model.bias -= tc.learning_rate * g;
            if (!tc.frozen_features) {
                for (const auto& [idx, value] : xs[i]) {
                    model.weights[idx] -=
                        tc.learning_rate * (g * value + tc.l2 * model.weights[idx]);
                }
            }
        }
    }
    model.final_loss = full_loss(model.weights, model.bias, xs, ys, tc.l2);
    return model;
}

Prediction predict(const LinearTextModel& model, std::string_view text) {
    const SparseCounts x = featurize(text, model.feature_config);
    Prediction pred;
    pred.probability = stable_sigmoid(dot_sparse(model.weights, x) + model.bias);
    pred.label = pred.probability >= 0.5 ? 1 : 0;
    return pred;
}

std::vector<RunResult> run_experiment(const LabeledDataset& train_set,
                                      const LabeledDataset& validation_set,
                                      const FeatureConfig& fc, const TrainConfig& tmpl,
                                      const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) {
        throw Error("run_experiment requires at least one seed");
    }
    if (validation_set.records.empty()) {
        throw Error("run_experiment requires a non-empty validation set");
    }
    std::vector<RunResult> results;
    results.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        TrainConfig tc = tmpl;
        tc.seed = seed;
        auto model = std::make_shared<LinearTextModel>(train(train_set, fc, tc));
        std::vector<int> preds;
        std::vector<int> golds;
        preds.reserve(validation_set.records.size());
        golds.reserve(validation_set.records.size());
        for (const auto& record : validation_set.records) {
            preds.push_back(predict(*model, record.text).label);
            golds.push_back(record.label);
        }
        RunResult run;
        run.seed = seed;
        run.validation_accuracy = accuracy(preds, golds);
        run.validation_f1 = f1(preds, golds);
        run.model = std::move(model);
        results.push_back(std::move(run));
    }
    return results;
}

const RunResult& select_run(const std::vector<RunResult>& runs) {
    if (runs.empty()) {
        throw Error("select_run requires at least one run");
    }
    std::vector<double> rounded(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        rounded[i] = round2(runs[i].validation_accuracy);
    }
    auto occurrences = [&](double value) {
        std::size_t count = 0;
        for (double r : rounded) {
            if (r == value) {
                ++count;
            }
        }
        return count;
    };
    bool any_modal = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (occurrences(rounded[i]) >= 2) {
            any_modal = true;
            break;
        }
    }
    const RunResult* best = nullptr;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (any_modal && occurrences(rounded[i]) < 2) {
            continue;
        }
        if (best == nullptr || runs[i].validation_f1 > best->validation_f1 ||
            (runs[i].validation_f1 == best->validation_f1 && runs[i].seed < best->seed)) {
            best = &runs[i];
        }
    }
    return *best;
}

void save_model(const LinearTextModel& model, const std::string& path) {
    json obj;
    obj["format_version"] = 1;
    obj["feature_config"] = feature_config_to_json(model.feature_config);
    obj["train_config"] = train_config_to_json(model.train_config);
    obj["bias"] = model.bias;
    obj["initial_loss"] = model.initial_loss;
    obj["final_loss"] = model.final_loss;
    json weights = json::array();
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        if (model.weights[i] != 0.0) {
            weights.push_back({i, model.weights[i]});
        }
    }
    obj["weights"] = std::move(weights);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write model file: " + path);
    }
    out << obj.dump() << '\n';
}

LinearTextModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open model file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        const json obj = json::parse(buffer.str());
        if (obj.at("format_version").get<int>() != 1) {
            throw Error("unsupported model format version in " + path);
        }
        LinearTextModel model;
        model.feature_config = feature_config_from_json(obj.at("feature_config"));
        model.train_config = train_config_from_json(obj.at("train_config"));
        model.bias = obj.at("bias").get<double>();
        model.initial_loss = obj.value("initial_loss", 0.0);
        model.final_loss = obj.value("final_loss", 0.0);
        model.weights.assign(model.feature_config.hash_dimension, 0.0);
        for (const auto& entry : obj.at("weights")) {
            const auto idx = entry.at(0).get<std::size_t>();
            if (idx >= model.weights.size()) {
                throw Error("model weight index out of range in " + path);
            }
            model.weights[idx] = entry.at(1).get<double>();
        }
        return model;
    } catch (const json::exception& e) {
        throw Error("bad model file " + path + ": " + e.what());
    }
}

} // namespace greenrisk
