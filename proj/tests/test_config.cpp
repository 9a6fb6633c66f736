#include "greenrisk/config.hpp"

#include "greenrisk/common.hpp"

#include "doctest.h"

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

using namespace greenrisk;

namespace {

PipelineConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.conf");
}

} // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("an empty config keeps the defaults") {
    const PipelineConfig config = parse("");
    CHECK(config.out_dir == "out");
    CHECK(config.scheme == Scheme::eq1);
    CHECK(config.threshold == 0.67);
    CHECK(config.max_chars == 2000);
    CHECK(config.features.hash_dimension == (std::size_t{1} << 18));
    CHECK(config.features.ngram_orders == std::vector<int>{1, 2});
    CHECK(config.features.lowercase);
    CHECK(config.training.learning_rate == 0.1);
    CHECK(config.training.epochs == 70);
    CHECK(config.training.l2 == 1e-4);
    CHECK_FALSE(config.training.frozen_features);
    CHECK(config.seeds.empty());
    CHECK(config.train_fraction == 0.8);
    CHECK(config.split_seed == 13);
    CHECK(config.vote_tie_label == 1);
    CHECK(config.outlier_k == 1.5);
}

TEST_CASE("a full config overrides every section") {
    const PipelineConfig config = parse(R"(
# pipeline settings
[paths]
hedging_lexicon = data/hedging.txt
sentiment_lexicon = data/sent.txt
commitment_lexicon = data/commit.txt
specificity_lexicon = data/spec.txt
climate_keywords = data/climate.txt
external_scores = scores.jsonl
coefficients = coeffs.json
reports_dir = reports
exemplars = exemplars.jsonl
emissions_csv = emissions.csv
train_dataset = train.jsonl
validation_dataset = validation.jsonl
model_path = model.json
out_dir = results

[labeling]
scheme = eq2
threshold = 0.5

[chunking]
max_chars = 500

[classifier]
hash_dimension = 4096
ngram_orders = 1
lowercase = false
learning_rate = 0.2
epochs = 10
l2 = 0.001
frozen_features = true

[experiment]
seeds = 0, 1, 2
train_fraction = 0.75
split_seed = 7

[evaluation]
vote_tie_label = 0

[emissions]
outlier_k = 1.0
)");
    CHECK(config.hedging_lexicon == "data/hedging.txt");
    CHECK(config.sentiment_lexicon == "data/sent.txt");
    CHECK(config.commitment_lexicon == "data/commit.txt");
    CHECK(config.specificity_lexicon == "data/spec.txt");
    CHECK(config.climate_keywords == "data/climate.txt");
    CHECK(config.external_scores == "scores.jsonl");
    CHECK(config.coefficients == "coeffs.json");
    CHECK(config.reports_dir == "reports");
    CHECK(config.exemplars == "exemplars.jsonl");
    CHECK(config.emissions_csv == "emissions.csv");
    CHECK(config.train_dataset == "train.jsonl");
    CHECK(config.validation_dataset == "validation.jsonl");
    CHECK(config.model_path == "model.json");
    CHECK(config.out_dir == "results");
    CHECK(config.scheme == Scheme::eq2);
    CHECK(config.threshold == 0.5);
    CHECK(config.max_chars == 500);
    CHECK(config.features.hash_dimension == 4096);
    CHECK(config.features.ngram_orders == std::vector<int>{1});
    CHECK_FALSE(config.features.lowercase);
    CHECK(config.training.learning_rate == 0.2);
    CHECK(config.training.epochs == 10);
    CHECK(config.training.l2 == 0.001);
    CHECK(config.training.frozen_features);
    CHECK(config.seeds == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(config.train_fraction == 0.75);
    CHECK(config.split_seed == 7);
    CHECK(config.vote_tie_label == 0);
    CHECK(config.outlier_k == 1.0);
}

TEST_CASE("seed lists accept commas, spaces, or both") {
    CHECK(parse("[experiment]\nseeds = 1,2,3\n").seeds ==
          std::vector<std::uint64_t>{1, 2, 3});
    CHECK(parse("[experiment]\nseeds = 1 2 3\n").seeds ==
          std::vector<std::uint64_t>{1, 2, 3});
    CHECK(parse("[experiment]\nseeds = 1, 2,  3\n").seeds ==
          std::vector<std::uint64_t>{1, 2, 3});
    CHECK(parse("[experiment]\nseeds = 42\n").seeds == std::vector<std::uint64_t>{42});
}

TEST_CASE("unknown keys and sections are named in the error") {
    CHECK_THROWS_WITH_AS(parse("[paths]\nnonsense = x\n"),
                         "test.conf:2: unknown key 'paths.nonsense'", Error);
    CHECK_THROWS_WITH_AS(parse("[labeling]\nthresh = 0.5\n"),
                         "test.conf:2: unknown key 'labeling.thresh'", Error);
    CHECK_THROWS_WITH_AS(parse("[nowhere]\nkey = value\n"),
                         "test.conf:2: unknown section '[nowhere]'", Error);
}

TEST_CASE("keys need a section and lines need an equals sign") {
    CHECK_THROWS_WITH_AS(parse("out_dir = results\n"),
                         "test.conf:1: key 'out_dir' appears before any [section]", Error);
    CHECK_THROWS_WITH_AS(parse("[paths]\njust some words\n"),
                         "test.conf:2: expected key = value, got 'just some words'", Error);
    CHECK_THROWS_WITH_AS(parse("[paths\nout_dir = x\n"),
                         "test.conf:1: malformed section header '[paths'", Error);
    CHECK_THROWS_WITH_AS(parse("[paths]\n= value\n"), "test.conf:2: missing key before '='",
                         Error);
}

TEST_CASE("values are type-checked with line numbers") {
    CHECK_THROWS_WITH_AS(parse("[labeling]\nthreshold = high\n"),
                         "test.conf:2: expected a number, got 'high'", Error);
    CHECK_THROWS_WITH_AS(parse("[chunking]\nmax_chars = -5\n"),
                         "test.conf:2: expected a non-negative integer, got '-5'", Error);
    CHECK_THROWS_WITH_AS(parse("[classifier]\nlowercase = yes\n"),
                         "test.conf:2: expected true or false, got 'yes'", Error);
    CHECK_THROWS_WITH_AS(parse("[evaluation]\nvote_tie_label = 2\n"),
                         "test.conf:2: vote_tie_label must be 0 or 1", Error);
    CHECK_THROWS_WITH_AS(parse("[chunking]\nmax_chars = 200x\n"),
                         "test.conf:2: expected a non-negative integer, got '200x'", Error);
}

TEST_CASE("comments, blank lines and unknown scheme names") {
    const PipelineConfig config = parse("\n\n# leading comment\n[labeling]\n"
                                        "# explains the next line\nthreshold = 0.6\n\n");
    CHECK(config.threshold == 0.6);
    CHECK_THROWS_AS(parse("[labeling]\nscheme = eq3\n"), Error);
}

TEST_CASE("loading from a missing path fails cleanly") {
    CHECK_THROWS_WITH_AS(load_config("/nonexistent/pipeline.conf"),
                         "cannot open config file: /nonexistent/pipeline.conf", Error);
}

TEST_CASE("the shipped example config parses against the shipped data") {
    const std::string path = std::string(GREENRISK_DATA_DIR) + "/pipeline_example.conf";
    const PipelineConfig config = load_config(path);
    CHECK(!config.hedging_lexicon.empty());
    CHECK(!config.reports_dir.empty());
    CHECK(config.seeds.size() == 10);
    CHECK(config.max_chars >= 200);
}

TEST_SUITE_END();
