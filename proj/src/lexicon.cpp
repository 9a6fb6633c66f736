#include "greenrisk/lexicon.hpp"

#include "greenrisk/common.hpp"
#include "greenrisk/text.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <unordered_set>

namespace greenrisk {

namespace {

using nlohmann::json;

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

} // namespace

Lexicon make_lexicon(std::string name, const std::vector<std::string>& raw_phrases) {
    Lexicon lex;
    lex.name = std::move(name);
    std::unordered_set<std::string> seen;
    for (const auto& raw : raw_phrases) {
        std::string phrase = lowercase_ascii(trim(raw));
        if (phrase.empty() || !seen.insert(phrase).second) {
            continue;
        }
        auto tokens = tokenize(phrase);
        if (tokens.empty()) {
            continue;
        }
        lex.phrases.push_back(std::move(phrase));
        lex.phrase_tokens.push_back(std::move(tokens));
    }
    if (lex.phrases.empty()) {
        throw Error("empty lexicon '" + lex.name + "'");
    }
    return lex;
}

Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open lexicon file: " + path);
    }
    std::vector<std::string> raw;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        if (!is_valid_utf8(t)) {
            throw Error("lexicon file is not valid UTF-8: " + path);
        }
        raw.push_back(std::move(t));
    }
    return make_lexicon(file_stem(path), raw);
}

void save_lexicon(const Lexicon& lex, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write lexicon file: " + path);
    }
    for (const auto& phrase : lex.phrases) {
        out << phrase << '\n';
    }
}

std::vector<std::string> match_phrases(std::string_view text, const Lexicon& lex) {
    std::vector<std::string> matches;
    const auto tokens = tokenize(text);
    if (tokens.empty()) {
        return matches;
    }
    for (std::size_t p = 0; p < lex.phrases.size(); ++p) {
        const auto& needle = lex.phrase_tokens[p];
        if (needle.empty() || needle.size() > tokens.size()) {
            continue;
        }
        const std::size_t last = tokens.size() - needle.size();
        for (std::size_t i = 0; i <= last; ++i) {
            bool hit = true;
            for (std::size_t j = 0; j < needle.size(); ++j) {
                if (tokens[i + j] != needle[j]) {
                    hit = false;
                    break;
                }
            }
            if (hit) {
                matches.push_back(lex.phrases[p]);
                break;
            }
        }
    }
    return matches;
}

HedgingResult detect_hedging(std::string_view text, const Lexicon& lex) {
    if (lex.phrases.empty()) {
        throw Error("detect_hedging requires a non-empty lexicon");
    }
    HedgingResult result;
    result.matches = match_phrases(text, lex);
    result.flag = result.matches.empty() ? 0 : 1;
    return result;
}

ExternalScores load_external_scores(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open external scores file: " + path);
    }
    ExternalScores scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw Error("malformed external score line " + std::to_string(line_no) +
                        ": " + e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string()) {
            throw Error("malformed external score line " + std::to_string(line_no) +
                        ": expected object with string \"id\"");
        }
        const std::string id = obj["id"].get<std::string>();
        PartialAttributes partial;
        for (const auto& [key, value] : obj.items()) {
            if (key == "id") {
                continue;
            }
            std::optional<int>* slot = nullptr;
            if (key == "sentiment") {
                slot = &partial.sentiment;
            } else if (key == "commitment") {
                slot = &partial.commitment;
            } else if (key == "specificity") {
                slot = &partial.specificity;
            } else {
                throw Error("malformed external score line " + std::to_string(line_no) +
                            ": unknown field \"" + key + "\"");
            }
            if (!value.is_number_integer() ||
                (value.get<int>() != 0 && value.get<int>() != 1)) {
                throw Error("external score line " + std::to_string(line_no) + ": field \"" +
                            key + "\" must be 0 or 1");
            }
            *slot = value.get<int>();
        }
        if (!scores.emplace(id, partial).second) {
            throw Error("duplicate chunk id " + id);
        }
    }
    return scores;
}

std::string_view provenance_name(Provenance p) {
    switch (p) {
    case Provenance::external_file: return "external-file";
    case Provenance::fallback_lexicon: return "fallback-lexicon";
    case Provenance::hedging_lexicon: return "hedging-lexicon";
    }
    return "unknown";
}

std::pair<AttributeVector, AttributeSource> score_attributes(
    const std::string& chunk_id, std::string_view text,
    const ExternalScores* external, const Lexicon& hedging_lexicon,
    const FallbackLexicons& fallbacks) {
    AttributeVector attrs;
    AttributeSource source;

    const PartialAttributes* partial = nullptr;
    if (external != nullptr) {
        auto it = external->find(chunk_id);
        if (it != external->end()) {
            partial = &it->second;
        }
    }

    auto resolve = [&](std::size_t slot, const std::optional<int>& external_value,
                       const std::optional<Lexicon>& fallback) -> int {
        if (external_value.has_value()) {
            source.by_attribute[slot] = Provenance::external_file;
            return *external_value;
        }
        if (fallback.has_value()) {
            source.by_attribute[slot] = Provenance::fallback_lexicon;
            return match_phrases(text, *fallback).empty() ? 0 : 1;
        }
        throw Error(std::string("unresolvable attribute '") + kAttributeNames[slot] +
                    "' for chunk '" + chunk_id + "'");
    };

    const std::optional<int> no_value;
    attrs.sentiment = resolve(0, partial ? partial->sentiment : no_value, fallbacks.sentiment);
    attrs.commitment = resolve(1, partial ? partial->commitment : no_value, fallbacks.commitment);
    attrs.specificity =
        resolve(2, partial ? partial->specificity : no_value, fallbacks.specificity);

    attrs.hedging = detect_hedging(text, hedging_lexicon).flag;
    source.by_attribute[3] = Provenance::hedging_lexicon;

    return {attrs, source};
}

std::pair<AttributeVector, AttributeSource> AttributeScorer::score(
    const std::string& chunk_id, std::string_view text) const {
    return score_attributes(chunk_id, text, external ? &*external : nullptr,
                            hedging_lexicon, fallbacks);
}

} // namespace greenrisk
