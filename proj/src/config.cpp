#include "greenrisk/config.hpp"

#include "greenrisk/common.hpp"
#include "greenrisk/text.hpp"

#include <fstream>
#include <sstream>

namespace greenrisk {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line_no,
                       const std::string& what) {
    throw Error(origin + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& value, const std::string& origin,
                    std::size_t line_no) {
    std::size_t consumed = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &consumed);
    } catch (const std::exception&) {
        fail(origin, line_no, "expected a number, got '" + value + "'");
    }
    if (consumed != value.size()) {
        fail(origin, line_no, "expected a number, got '" + value + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& value, const std::string& origin,
                        std::size_t line_no) {
    std::size_t consumed = 0;
    unsigned long long out = 0;
    try {
        out = std::stoull(value, &consumed);
    } catch (const std::exception&) {
        fail(origin, line_no, "expected a non-negative integer, got '" + value + "'");
    }
    if (consumed != value.size() || value.front() == '-') {
        fail(origin, line_no, "expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& value, const std::string& origin,
                std::size_t line_no) {
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    fail(origin, line_no, "expected true or false, got '" + value + "'");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& value,
                                           const std::string& origin,
                                           std::size_t line_no) {
    std::vector<std::uint64_t> seeds;
    std::string item;
    std::istringstream stream(value);
    while (std::getline(stream, item, ',')) {
        std::istringstream inner(item);
        std::string token;
        while (inner >> token) {
            seeds.push_back(parse_u64(token, origin, line_no));
        }
    }
    return seeds;
}

} // namespace

PipelineConfig parse_config(std::istream& in, const std::string& origin) {
    PipelineConfig config;
    std::string section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        if (stripped.front() == '[') {
            if (stripped.back() != ']' || stripped.size() < 3) {
                fail(origin, line_no, "malformed section header '" + stripped + "'");
            }
            section = stripped.substr(1, stripped.size() - 2);
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail(origin, line_no, "expected key = value, got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            fail(origin, line_no, "missing key before '='");
        }

        if (section == "paths") {
            if (key == "hedging_lexicon") config.hedging_lexicon = value;
            else if (key == "sentiment_lexicon") config.sentiment_lexicon = value;
            else if (key == "commitment_lexicon") config.commitment_lexicon = value;
            else if (key == "specificity_lexicon") config.specificity_lexicon = value;
            else if (key == "climate_keywords") config.climate_keywords = value;
            else if (key == "external_scores") config.external_scores = value;
            else if (key == "coefficients") config.coefficients = value;
            else if (key == "reports_dir") config.reports_dir = value;
            else if (key == "exemplars") config.exemplars = value;
            else if (key == "emissions_csv") config.emissions_csv = value;
            else if (key == "train_dataset") config.train_dataset = value;
            else if (key == "validation_dataset") config.validation_dataset = value;
            else if (key == "model_path") config.model_path = value;
            else if (key == "out_dir") config.out_dir = value;
            else fail(origin, line_no, "unknown key 'paths." + key + "'");
        } else if (section == "labeling") {
            if (key == "scheme") {
                config.scheme = scheme_from_name(value);
            } else if (key == "threshold") {
                config.threshold = parse_double(value, origin, line_no);
            } else {
                fail(origin, line_no, "unknown key 'labeling." + key + "'");
            }
        } else if (section == "chunking") {
            if (key == "max_chars") {
                config.max_chars =
                    static_cast<std::size_t>(parse_u64(value, origin, line_no));
            } else {
                fail(origin, line_no, "unknown key 'chunking." + key + "'");
            }
        } else if (section == "classifier") {
            if (key == "hash_dimension") {
                config.features.hash_dimension =
                    static_cast<std::size_t>(parse_u64(value, origin, line_no));
            } else if (key == "ngram_orders") {
                config.features.ngram_orders.clear();
                for (std::uint64_t order : parse_seed_list(value, origin, line_no)) {
                    config.features.ngram_orders.push_back(static_cast<int>(order));
                }
            } else if (key == "lowercase") {
                config.features.lowercase = parse_bool(value, origin, line_no);
            } else if (key == "learning_rate") {
                config.training.learning_rate = parse_double(value, origin, line_no);
            } else if (key == "epochs") {
                config.training.epochs =
                    static_cast<int>(parse_u64(value, origin, line_no));
            } else if (key == "l2") {
                config.training.l2 = parse_double(value, origin, line_no);
            } else if (key == "frozen_features") {
                config.training.frozen_features = parse_bool(value, origin, line_no);
            } else {
                fail(origin, line_no, "unknown key 'classifier." + key + "'");
            }
        } else if (section == "experiment") {
            if (key == "seeds") {
                config.seeds = parse_seed_list(value, origin, line_no);
            } else if (key == "train_fraction") {
                config.train_fraction = parse_double(value, origin, line_no);
            } else if (key == "split_seed") {
                config.split_seed = parse_u64(value, origin, line_no);
            } else {
                fail(origin, line_no, "unknown key 'experiment." + key + "'");
            }
        } else if (section == "evaluation") {
            if (key == "vote_tie_label") {
                const std::uint64_t tie = parse_u64(value, origin, line_no);
                if (tie > 1) {
                    fail(origin, line_no, "vote_tie_label must be 0 or 1");
                }
                config.vote_tie_label = static_cast<int>(tie);
            } else {
                fail(origin, line_no, "unknown key 'evaluation." + key + "'");
            }
        } else if (section == "emissions") {
            if (key == "outlier_k") {
                config.outlier_k = parse_double(value, origin, line_no);
            } else {
                fail(origin, line_no, "unknown key 'emissions." + key + "'");
            }
        } else if (section.empty()) {
            fail(origin, line_no, "key '" + key + "' appears before any [section]");
        } else {
            fail(origin, line_no, "unknown section '[" + section + "]'");
        }
    }
    return config;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open config file: " + path);
    }
    return parse_config(in, path);
}

} // namespace greenrisk
