#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace greenrisk {

// Case-folded phrase list, deduplicated, first-seen order. Phrases are
// matched as contiguous whole-token sequences; punctuation is a boundary.
struct Lexicon {
    std::string name;
    std::vector<std::string> phrases;
    std::vector<std::vector<std::string>> phrase_tokens; // parallel to phrases
};

// Builds a lexicon from raw phrases: trims, case-folds, drops duplicates and
// blanks, keeps first-seen order. Throws Error("empty lexicon ...") when
// nothing survives.
Lexicon make_lexicon(std::string name, const std::vector<std::string>& raw_phrases);

// One phrase per line; '#'-prefixed lines are comments; UTF-8 text.
Lexicon load_lexicon(const std::string& path);
void save_lexicon(const Lexicon& lex, const std::string& path);

// Four binary greenwashing attributes of a text chunk.
struct AttributeVector {
    int sentiment = 0;   // 1 = positive sentiment
    int commitment = 0;  // 1 = explicit climate commitment
    int specificity = 0; // 1 = specific language
    int hedging = 0;     // 1 = hedging phrase present

    bool operator==(const AttributeVector&) const = default;
};

inline constexpr std::array<const char*, 4> kAttributeNames{
    "sentiment", "commitment", "specificity", "hedging"};

// Every distinct lexicon phrase occurring in the text, in lexicon order.
std::vector<std::string> match_phrases(std::string_view text, const Lexicon& lex);

struct HedgingResult {
    int flag = 0;
    std::vector<std::string> matches;
};

HedgingResult detect_hedging(std::string_view text, const Lexicon& lex);

// Scores for the three model-backed attributes, ingested from a JSONL file.
struct PartialAttributes {
    std::optional<int> sentiment;
    std::optional<int> commitment;
    std::optional<int> specificity;
};

using ExternalScores = std::unordered_map<std::string, PartialAttributes>;

ExternalScores load_external_scores(const std::string& path);

enum class Provenance { external_file, fallback_lexicon, hedging_lexicon };

std::string_view provenance_name(Provenance p);

// Which source supplied each attribute, in kAttributeNames order.
struct AttributeSource {
    std::array<Provenance, 4> by_attribute{};
};

// Keyword stand-ins for the external sentiment/commitment/specificity models.
struct FallbackLexicons {
    std::optional<Lexicon> sentiment;
    std::optional<Lexicon> commitment;
    std::optional<Lexicon> specificity;
};

// Hedging always comes from the deflection lexicon; the other attributes come
// from the external map when present, else from the configured fallback.
// Throws Error when an attribute has neither source.
std::pair<AttributeVector, AttributeSource> score_attributes(
    const std::string& chunk_id, std::string_view text,
    const ExternalScores* external, const Lexicon& hedging_lexicon,
    const FallbackLexicons& fallbacks);

// Bundles everything score_attributes needs, for pipeline call sites.
struct AttributeScorer {
    Lexicon hedging_lexicon;
    FallbackLexicons fallbacks;
    std::optional<ExternalScores> external;

    std::pair<AttributeVector, AttributeSource> score(const std::string& chunk_id,
                                                      std::string_view text) const;
};

} // namespace greenrisk
