// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace intentrag {

struct Document {
    std::string id;
    std::string title;
    std::string body;
    std::optional<std::string> source_uri;

    bool operator==(const Document&) const = default;
};

/// Half-open byte range [start, end) into a document body.
struct CharSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const CharSpan&) const = default;
};

/// Retrieval unit. `body` is the exact document substring at `span`.
struct Chunk {
    std::string id;
    std::string doc_id;
    std::size_t ordinal = 0;
    std::string body;
    CharSpan span;

    bool operator==(const Chunk&) const = default;
};

struct FactualUnit {
    std::string id;
    std::string statement;
    std::optional<std::string> intent_label;

    bool operator==(const FactualUnit&) const = default;
};

struct GoldAnnotation {
    std::vector<std::string> gold_answers;
    std::vector<FactualUnit> factual_units;
    std::vector<std::string> gold_passage_ids;

    bool operator==(const GoldAnnotation&) const = default;
};

struct QuestionRecord {
    std::string id;
    std::string domain;
    std::string question;
    GoldAnnotation gold;

    bool operator==(const QuestionRecord&) const = default;
};

struct ChunkingOptions {
    std::size_t max_chars = 1200;
    std::size_t overlap_chars = 200;
};

// Corpus files: one {"id","title","body","source_uri"?} object per line.
std::vector<Document> read_corpus(std::istream& in);
std::vector<Document> load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, std::span<const Document> docs);
void save_corpus(const std::filesystem::path& path, std::span<const Document> docs);

/// Deterministic chunk id: `doc_id#ordinal`.
std::string make_chunk_id(std::string_view doc_id, std::size_t ordinal);

/// Doc id of a chunk id produced by make_chunk_id (text before the last '#');
/// ids without '#' are their own document.
std::string doc_id_of(std::string_view chunk_id);

/// Splits a document into chunks of at most max_chars bytes. Paragraph breaks
/// (blank lines) always end a chunk. A paragraph longer than max_chars is
/// windowed with overlap_chars of overlap, cutting at the last sentence end
/// inside the window when there is one and hard-cutting otherwise. Cuts never
/// split a UTF-8 code point. Throws std::invalid_argument unless
/// 0 < max_chars and overlap_chars < max_chars.
std::vector<Chunk> chunk_document(const Document& doc, const ChunkingOptions& options = {});

std::vector<Chunk> chunk_corpus(std::span<const Document> docs, const ChunkingOptions& options = {});

// Chunk files: one {"id","doc_id","ordinal","start","end","body"} object per line.
std::vector<Chunk> read_chunks(std::istream& in);
std::vector<Chunk> load_chunks(const std::filesystem::path& path);
void write_chunks(std::ostream& out, std::span<const Chunk> chunks);
void save_chunks(const std::filesystem::path& path, std::span<const Chunk> chunks);

/// How load_qa_dataset treats gold annotations that fail validate_gold.
/// `deferred` keeps such records so an evaluation can report them as
/// per-question failures instead of refusing the whole dataset.
enum class GoldValidation { strict, deferred };

// QA dataset files: one {"id","domain"?,"question","gold_answers"?,
// "factual_units"?: [{"id","statement","intent"?}], "gold_passage_ids"?}
// object per line.
std::vector<QuestionRecord> read_qa_dataset(std::istream& in,
                                            GoldValidation validation = GoldValidation::strict);
std::vector<QuestionRecord> load_qa_dataset(const std::filesystem::path& path,
                                            GoldValidation validation = GoldValidation::strict);
void write_qa_dataset(std::ostream& out, std::span<const QuestionRecord> records);
void save_qa_dataset(const std::filesystem::path& path, std::span<const QuestionRecord> records);

/// Throws ValidationError when factual unit ids repeat or a statement is blank.
void validate_gold(const QuestionRecord& record);

} // namespace intentrag
