#pragma once

#include "greenrisk/lexicon.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace greenrisk {

enum class Sector { oil_gas, tech, other };

std::string_view sector_name(Sector s);
Sector sector_from_name(std::string_view name);

// A report: ordered, whitespace-normalized paragraphs plus metadata.
struct Document {
    std::string id;
    std::string company;
    Sector sector = Sector::other;
    int year = 2000;
    std::vector<std::string> paragraphs;
};

struct ReportMetadata {
    std::string company;
    Sector sector = Sector::other;
    int year = 2000;
};

// Sidecar JSON: {"company","sector","year"}.
ReportMetadata load_report_metadata(const std::string& path);

// UTF-8 plain text, paragraphs separated by blank lines. Internal whitespace
// runs collapse to single spaces. Empty id defaults to the file stem.
Document ingest_report(const std::string& path, const ReportMetadata& meta,
                       const std::string& id = "");

// A paragraph-aligned, character-bounded piece of a document.
struct Chunk {
    std::string id;
    std::string document_id;
    int index = 0;
    std::string text;
    int climate_related = 1;
    bool oversize = false; // single sentence longer than max_chars
    int fragment_of = -1;  // paragraph index when text is a piece of a split paragraph
};

// Boundary: . ? or ! followed by whitespace and an uppercase letter.
std::vector<std::string> split_sentences(std::string_view paragraph);

// Greedy packing: whole paragraphs joined by blank lines while the chunk stays
// within max_chars. A paragraph longer than max_chars is split at sentence
// boundaries into fragment chunks of that paragraph only; a single sentence
// longer than max_chars becomes its own oversize-flagged chunk.
std::vector<Chunk> chunk_document(const Document& doc, std::size_t max_chars);

// Sets climate_related to 0 on chunks with no gate-lexicon match.
void apply_climate_gate(std::vector<Chunk>& chunks, const Lexicon& gate);

struct DatasetRecord {
    std::string id;
    std::string document_id;
    int index = 0;
    std::string text;
    AttributeVector attributes;
    int label = 0;
    std::optional<double> probability;
    int climate_related = 1;
};

enum class SplitTag { train, validation, test };

std::string_view split_tag_name(SplitTag tag);

struct LabeledDataset {
    std::vector<DatasetRecord> records;
    SplitTag split = SplitTag::train;
};

// Deterministic per seed; |train| = floor(train_fraction * n). The partition
// is disjoint and exhaustive. Throws Error when n < 2.
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& dataset,
                                                        double train_fraction,
                                                        std::uint64_t seed);

// JSONL, one record per line; round-trip is lossless.
void persist_dataset(const LabeledDataset& dataset, const std::string& path);
LabeledDataset load_dataset(const std::string& path, SplitTag tag = SplitTag::train);

} // namespace greenrisk
