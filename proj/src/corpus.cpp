#include "greenrisk/corpus.hpp"

#include "greenrisk/common.hpp"
#include "greenrisk/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace greenrisk {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Deterministic Fisher-Yates; std::shuffle is implementation-defined.
void deterministic_shuffle(std::vector<std::size_t>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(items[i - 1], items[j]);
    }
}

json record_to_json(const DatasetRecord& r) {
    json obj;
    obj["id"] = r.id;
    obj["document_id"] = r.document_id;
    obj["index"] = r.index;
    obj["text"] = r.text;
    obj["attributes"] = {{"sentiment", r.attributes.sentiment},
                         {"commitment", r.attributes.commitment},
                         {"specificity", r.attributes.specificity},
                         {"hedging", r.attributes.hedging}};
    obj["label"] = r.label;
    if (r.probability.has_value()) {
        obj["probability"] = *r.probability;
    }
    obj["climate_related"] = r.climate_related;
    return obj;
}

int require_binary(const json& value, const std::string& what, std::size_t line_no) {
    if (!value.is_number_integer() || (value.get<int>() != 0 && value.get<int>() != 1)) {
        throw Error("dataset line " + std::to_string(line_no) + ": " + what +
                    " must be 0 or 1");
    }
    return value.get<int>();
}

DatasetRecord record_from_json(const json& obj, std::size_t line_no) {
    DatasetRecord r;
    try {
        r.id = obj.at("id").get<std::string>();
        r.document_id = obj.at("document_id").get<std::string>();
        r.index = obj.at("index").get<int>();
        r.text = obj.at("text").get<std::string>();
        const json& attrs = obj.at("attributes");
        r.attributes.sentiment = require_binary(attrs.at("sentiment"), "sentiment", line_no);
        r.attributes.commitment = require_binary(attrs.at("commitment"), "commitment", line_no);
        r.attributes.specificity =
            require_binary(attrs.at("specificity"), "specificity", line_no);
        r.attributes.hedging = require_binary(attrs.at("hedging"), "hedging", line_no);
        r.label = require_binary(obj.at("label"), "label", line_no);
        if (obj.contains("probability")) {
            r.probability = obj.at("probability").get<double>();
        }
        r.climate_related = require_binary(obj.at("climate_related"), "climate_related", line_no);
    } catch (const json::exception& e) {
        throw Error("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    return r;
}

} // namespace

std::string_view sector_name(Sector s) {
    switch (s) {
    case Sector::oil_gas: return "oil-gas";
    case Sector::tech: return "tech";
    case Sector::other: return "other";
    }
    return "other";
}

Sector sector_from_name(std::string_view name) {
    if (name == "oil-gas" || name == "oil" || name == "oil_gas") {
        return Sector::oil_gas;
    }
    if (name == "tech") {
        return Sector::tech;
    }
    if (name == "other") {
        return Sector::other;
    }
    throw Error("unknown sector: " + std::string(name));
}

ReportMetadata load_report_metadata(const std::string& path) {
    json obj;
    try {
        obj = json::parse(read_file(path));
        ReportMetadata meta;
        meta.company = obj.at("company").get<std::string>();
        meta.sector = sector_from_name(obj.at("sector").get<std::string>());
        meta.year = obj.at("year").get<int>();
        return meta;
    } catch (const json::exception& e) {
        throw Error("bad report metadata " + path + ": " + e.what());
    }
}

Document ingest_report(const std::string& path, const ReportMetadata& meta,
                       const std::string& id) {
    const std::string raw = read_file(path);
    if (!is_valid_utf8(raw)) {
        throw Error("report is not valid UTF-8: " + path);
    }
    if (meta.year < 2000) {
        throw Error("report year must be >= 2000: " + path);
    }

    Document doc;
    doc.id = id.empty() ? std::filesystem::path(path).stem().string() : id;
    doc.company = meta.company;
    doc.sector = meta.sector;
    doc.year = meta.year;

    // Paragraphs are separated by blank lines (lines empty after trimming).
    std::istringstream in(raw);
    std::string line;
    std::string paragraph;
    auto flush = [&] {
        std::string p = normalize_whitespace(paragraph);
        if (!p.empty()) {
            doc.paragraphs.push_back(std::move(p));
        }
        paragraph.clear();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            flush();
        } else {
            if (!paragraph.empty()) {
                paragraph.push_back(' ');
            }
            paragraph += line;
        }
    }
    flush();

    if (doc.paragraphs.empty()) {
        throw Error("report has no paragraphs: " + path);
    }
    return doc;
}

std::vector<std::string> split_sentences(std::string_view paragraph) {
    std::vector<std::string> sentences;
    const std::size_t n = paragraph.size();
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < n) {
        const char c = paragraph[i];
        if (c == '.' || c == '?' || c == '!') {
            std::size_t j = i + 1;
            while (j < n && std::isspace(static_cast<unsigned char>(paragraph[j]))) {
                ++j;
            }
            if (j > i + 1 && j < n && std::isupper(static_cast<unsigned char>(paragraph[j]))) {
                sentences.emplace_back(trim(paragraph.substr(start, i + 1 - start)));
                start = j;
                i = j;
                continue;
            }
        }
        ++i;
    }
    if (start < n) {
        std::string tail = trim(paragraph.substr(start));
        if (!tail.empty()) {
            sentences.push_back(std::move(tail));
        }
    }
    return sentences;
}

std::vector<Chunk> chunk_document(const Document& doc, std::size_t max_chars) {
    if (max_chars < 200) {
        throw Error("max_chars must be >= 200");
    }

    std::vector<Chunk> chunks;
    std::vector<std::string> current;
    std::size_t current_len = 0;

    auto emit = [&](std::string text, int fragment_of, bool oversize) {
        Chunk c;
        c.document_id = doc.id;
        c.index = static_cast<int>(chunks.size());
        c.id = doc.id + "-" + std::to_string(c.index);
        c.text = std::move(text);
        c.fragment_of = fragment_of;
        c.oversize = oversize;
        chunks.push_back(std::move(c));
    };

    auto flush = [&] {
        if (current.empty()) {
            return;
        }
        std::string text;
        for (std::size_t i = 0; i < current.size(); ++i) {
            if (i > 0) {
                text += "\n\n";
            }
            text += current[i];
        }
        emit(std::move(text), -1, false);
        current.clear();
        current_len = 0;
    };

    for (std::size_t pi = 0; pi < doc.paragraphs.size(); ++pi) {
        const std::string& para = doc.paragraphs[pi];
        if (para.size() <= max_chars) {
            const std::size_t joined = current.empty() ? para.size() : current_len + 2 + para.size();
            if (!current.empty() && joined > max_chars) {
                flush();
                current.push_back(para);
                current_len = para.size();
            } else {
                current.push_back(para);
                current_len = joined;
            }
            continue;
        }

        // Oversize paragraph: its sentence pieces never mix with other paragraphs.
        flush();
        std::string piece;
        auto flush_piece = [&] {
            if (!piece.empty()) {
                emit(std::move(piece), static_cast<int>(pi), false);
                piece.clear();
            }
        };
        for (auto& sentence : split_sentences(para)) {
            if (sentence.size() > max_chars) {
                flush_piece();
                emit(std::move(sentence), static_cast<int>(pi), true);
                continue;
            }
            const std::size_t joined =
                piece.empty() ? sentence.size() : piece.size() + 1 + sentence.size();
            if (!piece.empty() && joined > max_chars) {
                flush_piece();
            }
            if (!piece.empty()) {
                piece.push_back(' ');
            }
            piece += sentence;
        }
        flush_piece();
    }
    flush();
    return chunks;
}

void apply_climate_gate(std::vector<Chunk>& chunks, const Lexicon& gate) {
    for (auto& chunk : chunks) {
        if (match_phrases(chunk.text, gate).empty()) {
            chunk.climate_related = 0;
        }
    }
}

std::string_view split_tag_name(SplitTag tag) {
    switch (tag) {
    case SplitTag::train: return "train";
    case SplitTag::validation: return "validation";
    case SplitTag::test: return "test";
    }
    return "train";
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& dataset,
                                                        double train_fraction,
                                                        std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error("train_fraction must be in (0,1)");
    }
    const std::size_t n = dataset.records.size();
    if (n < 2) {
        throw Error("split_dataset requires at least 2 records");
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    deterministic_shuffle(order, seed);

    // 1e-9 nudge keeps decimal-intent products (0.8*1320) exact under floor.
    const auto train_count =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 1e-9));

    LabeledDataset train;
    train.split = SplitTag::train;
    LabeledDataset validation;
    validation.split = SplitTag::validation;
    for (std::size_t i = 0; i < n; ++i) {
        const DatasetRecord& r = dataset.records[order[i]];
        if (i < train_count) {
            train.records.push_back(r);
        } else {
            validation.records.push_back(r);
        }
    }
    return {std::move(train), std::move(validation)};
}

void persist_dataset(const LabeledDataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write dataset file: " + path);
    }
    for (const auto& record : dataset.records) {
        out << record_to_json(record).dump() << '\n';
    }
}

LabeledDataset load_dataset(const std::string& path, SplitTag tag) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open dataset file: " + path);
    }
    LabeledDataset dataset;
    dataset.split = tag;
    std::unordered_set<std::string> ids;
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
            throw Error("dataset line " + std::to_string(line_no) + ": " + e.what());
        }
        DatasetRecord record = record_from_json(obj, line_no);
        if (!ids.insert(record.id).second) {
            throw Error("dataset line " + std::to_string(line_no) + ": duplicate id " +
                        record.id);
        }
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

} // namespace greenrisk
