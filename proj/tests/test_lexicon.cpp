#include "greenrisk/lexicon.hpp"

#include "greenrisk/common.hpp"

#include "doctest.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace greenrisk;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "greenrisk_lexicon_tests";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path;
}

fs::path shipped(const std::string& name) {
    return fs::path(GREENRISK_DATA_DIR) / name;
}

} // namespace

TEST_SUITE_BEGIN("lexicon");

TEST_CASE("make_lexicon trims, case-folds, and deduplicates in first-seen order") {
    const Lexicon lex =
        make_lexicon("t", {"  Alleged ", "alleged", "Not Aware", "", "unsure", "NOT AWARE"});
    CHECK(lex.phrases == std::vector<std::string>{"alleged", "not aware", "unsure"});
    CHECK(lex.phrase_tokens[1] == std::vector<std::string>{"not", "aware"});
}

TEST_CASE("make_lexicon rejects an empty phrase list") {
    CHECK_THROWS_AS(make_lexicon("empty", {}), Error);
    CHECK_THROWS_AS(make_lexicon("blank", {"   ", ""}), Error);
}

TEST_CASE("load_lexicon reads one phrase per line and skips comments") {
    const auto path = temp_file("simple.txt", "# comment\nnot aware\nunsure\n\nNot Aware\n");
    const Lexicon lex = load_lexicon(path.string());
    CHECK(lex.name == "simple");
    CHECK(lex.phrases == std::vector<std::string>{"not aware", "unsure"});
}

TEST_CASE("load_lexicon rejects invalid UTF-8") {
    const auto path = temp_file("bad_utf8.txt", std::string("alleg\xFF\xFE") + "ed\n");
    CHECK_THROWS_AS(load_lexicon(path.string()), Error);
}

TEST_CASE("shipped deflection lexicon has the expected unique phrases") {
    const Lexicon lex = load_lexicon(shipped("deflection_phrases.txt").string());
    // 59 listed entries carry three "putatively" and two "inferred" repeats,
    // so 56 survive, plus the two seed phrases.
    CHECK(lex.phrases.size() == 58);
    auto has = [&](const std::string& p) {
        return std::find(lex.phrases.begin(), lex.phrases.end(), p) != lex.phrases.end();
    };
    CHECK(has("alleged"));
    CHECK(has("not aware"));
    CHECK(has("unsure"));
    CHECK(has("subject to interpretation"));
    CHECK(has("unconfirmed"));
}

TEST_CASE("save then load of the shipped lexicon is a fixed point") {
    const Lexicon lex = load_lexicon(shipped("deflection_phrases.txt").string());
    const auto path = temp_file("roundtrip.txt", "");
    save_lexicon(lex, path.string());
    const Lexicon again = load_lexicon(path.string());
    CHECK(again.phrases == lex.phrases);
    CHECK(again.phrase_tokens == lex.phrase_tokens);
}

TEST_CASE("match_phrases matches whole tokens only") {
    const Lexicon lex = make_lexicon("t", {"supposed", "not aware"});
    CHECK(match_phrases("It supposedly works.", lex).empty());
    CHECK(match_phrases("It is supposed to work.", lex) ==
          std::vector<std::string>{"supposed"});
    CHECK(match_phrases("we are not aware of issues", lex) ==
          std::vector<std::string>{"not aware"});
    // "not ... aware" with a token in between is not a contiguous match.
    CHECK(match_phrases("not fully aware", lex).empty());
}

TEST_CASE("match_phrases reports each phrase once, in lexicon order") {
    const Lexicon lex = make_lexicon("t", {"alleged", "unsure"});
    const auto matches = match_phrases("Unsure and alleged, alleged again.", lex);
    CHECK(matches == std::vector<std::string>{"alleged", "unsure"});
}

TEST_CASE("detect_hedging flags the evasive-language example") {
    const Lexicon lex = load_lexicon(shipped("deflection_phrases.txt").string());
    const HedgingResult r = detect_hedging(
        "The Group is not aware of any noise pollution that could negatively impact "
        "the environment.",
        lex);
    CHECK(r.flag == 1);
    CHECK(r.matches == std::vector<std::string>{"not aware"});
}

TEST_CASE("detect_hedging is case-insensitive") {
    const Lexicon lex = load_lexicon(shipped("deflection_phrases.txt").string());
    const HedgingResult r = detect_hedging("This ALLEGEDLY reduced emissions.", lex);
    CHECK(r.flag == 1);
    CHECK(r.matches == std::vector<std::string>{"allegedly"});

    const std::string text = "Reportedly, the plan is unconfirmed.";
    std::string upper = text;
    for (char& c : upper) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    CHECK(detect_hedging(text, lex).matches == detect_hedging(upper, lex).matches);
}

TEST_CASE("detect_hedging leaves clean text unflagged") {
    const Lexicon lex = load_lexicon(shipped("deflection_phrases.txt").string());
    const HedgingResult r = detect_hedging("We installed solar panels in 2021.", lex);
    CHECK(r.flag == 0);
    CHECK(r.matches.empty());
}

TEST_CASE("appending a clean sentence never changes the flag") {
    const Lexicon lex = load_lexicon(shipped("deflection_phrases.txt").string());
    const std::string clean = " We installed solar panels in 2021.";
    for (const std::string text : {std::string("The alleged spill was contained."),
                                   std::string("We expanded the recycling program.")}) {
        CHECK(detect_hedging(text, lex).flag == detect_hedging(text + clean, lex).flag);
    }
}

TEST_CASE("load_external_scores parses partial attribute records") {
    const auto path = temp_file("scores.jsonl",
                                "{\"id\":\"c1\",\"sentiment\":1}\n"
                                "{\"id\":\"c2\",\"commitment\":0,\"specificity\":1}\n");
    const ExternalScores scores = load_external_scores(path.string());
    REQUIRE(scores.size() == 2);
    CHECK(scores.at("c1").sentiment == 1);
    CHECK_FALSE(scores.at("c1").commitment.has_value());
    CHECK(scores.at("c2").commitment == 0);
    CHECK(scores.at("c2").specificity == 1);
}

TEST_CASE("load_external_scores accepts an empty file") {
    const auto path = temp_file("scores_empty.jsonl", "");
    CHECK(load_external_scores(path.string()).empty());
}

TEST_CASE("load_external_scores rejects duplicates, bad values, unknown fields") {
    const auto dup = temp_file("scores_dup.jsonl",
                               "{\"id\":\"c1\",\"sentiment\":1}\n"
                               "{\"id\":\"c1\",\"sentiment\":0}\n");
    CHECK_THROWS_WITH_AS(load_external_scores(dup.string()), "duplicate chunk id c1", Error);

    const auto bad_value = temp_file("scores_bad.jsonl", "{\"id\":\"c1\",\"sentiment\":2}\n");
    CHECK_THROWS_AS(load_external_scores(bad_value.string()), Error);

    const auto unknown = temp_file("scores_unknown.jsonl", "{\"id\":\"c1\",\"hedging\":1}\n");
    CHECK_THROWS_AS(load_external_scores(unknown.string()), Error);

    const auto malformed = temp_file("scores_malformed.jsonl", "{not json\n");
    try {
        load_external_scores(malformed.string());
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("score_attributes composes external, fallback, and hedging sources") {
    const Lexicon hedging = make_lexicon("hedging", {"alleged", "not aware"});
    FallbackLexicons fallbacks;
    fallbacks.commitment = make_lexicon("commitment", {"by 2030"});
    fallbacks.specificity = make_lexicon("specificity", {"30%"});
    ExternalScores external;
    external["c1"].sentiment = 1;

    const auto [attrs, source] = score_attributes(
        "c1", "We will cut Scope 1 emissions 30% by 2030", &external, hedging, fallbacks);
    CHECK(attrs == AttributeVector{1, 1, 1, 0});
    CHECK(source.by_attribute[0] == Provenance::external_file);
    CHECK(source.by_attribute[1] == Provenance::fallback_lexicon);
    CHECK(source.by_attribute[2] == Provenance::fallback_lexicon);
    CHECK(source.by_attribute[3] == Provenance::hedging_lexicon);
}

TEST_CASE("score_attributes passes a full external record through") {
    const Lexicon hedging = make_lexicon("hedging", {"alleged"});
    ExternalScores external;
    external["c9"].sentiment = 0;
    external["c9"].commitment = 0;
    external["c9"].specificity = 0;
    const auto [attrs, source] =
        score_attributes("c9", "Plain text with no cues.", &external, hedging, {});
    CHECK(attrs == AttributeVector{0, 0, 0, 0});
}

TEST_CASE("score_attributes fails when an attribute has no source") {
    const Lexicon hedging = make_lexicon("hedging", {"alleged"});
    try {
        score_attributes("c7", "anything", nullptr, hedging, {});
        FAIL("expected unresolvable attribute error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("unresolvable attribute 'sentiment'") != std::string::npos);
        CHECK(msg.find("'c7'") != std::string::npos);
    }
}

TEST_CASE("AttributeScorer is a faithful wrapper") {
    AttributeScorer scorer;
    scorer.hedging_lexicon = make_lexicon("hedging", {"alleged"});
    scorer.fallbacks.sentiment = make_lexicon("s", {"proud"});
    scorer.fallbacks.commitment = make_lexicon("c", {"we will"});
    scorer.fallbacks.specificity = make_lexicon("sp", {"scope 1"});
    const auto [attrs, source] =
        scorer.score("x", "We are proud and we will act on the alleged gap.");
    CHECK(attrs == AttributeVector{1, 1, 0, 1});
}

TEST_SUITE_END();
