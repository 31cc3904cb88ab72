// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "intentrag/corpus.hpp"
#include "intentrag/embedding.hpp"

namespace intentrag {

/// Identifies the query a ranked list answers: hypothesis instance and intent
/// index, both 1-based. (0, 0) is reserved for the raw question.
struct QueryRef {
    int instance = 0;
    int intent = 0;

    static constexpr QueryRef raw_question() noexcept { return {0, 0}; }
    constexpr bool is_raw_question() const noexcept { return instance == 0 && intent == 0; }

    auto operator<=>(const QueryRef&) const = default;
};

struct RankedEntry {
    std::string chunk_id;
    std::size_t rank = 0;
    double score = 0.0;

    bool operator==(const RankedEntry&) const = default;
};

/// Output of one retrieval: ranks 1..n without gaps, scores non-increasing,
/// chunk ids unique.
struct RankedList {
    QueryRef query;
    std::vector<RankedEntry> entries;

    bool operator==(const RankedList&) const = default;
};

/// Throws ValidationError describing the first broken RankedList invariant.
void validate(const RankedList& list);

struct ChunkMeta {
    std::string doc_id;
    std::size_t ordinal = 0;
    /// Chunk text, kept so retrieval results can be read without the chunk file.
    std::string body;

    bool operator==(const ChunkMeta&) const = default;
};

/// Exact cosine index over float32 vectors. Immutable once built; concurrent
/// searches need no locking.
class VectorIndex {
public:
    static constexpr std::uint32_t kFormatVersion = 1;
    static constexpr std::uint32_t kMetricCosine = 1;

    explicit VectorIndex(std::size_t dim);

    /// Throws std::invalid_argument on dimension mismatch, a zero vector or a
    /// duplicate id.
    void add(std::string chunk_id, const EmbeddingVector& vector, ChunkMeta meta = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }

    const std::string& chunk_id(std::size_t i) const { return ids_.at(i); }
    std::span<const float> vector(std::size_t i) const;
    const ChunkMeta& meta(std::size_t i) const { return meta_.at(i); }
    /// nullptr when the id is unknown.
    const ChunkMeta* find(std::string_view chunk_id) const;

    /// Embedder that produced the vectors, when known.
    const std::optional<EmbeddingProviderConfig>& embedder() const noexcept { return embedder_; }
    void set_embedder(EmbeddingProviderConfig config) { embedder_ = std::move(config); }

    /// The min(top_k, size()) most cosine-similar entries, ranks from 1, ties
    /// broken by ascending chunk id. Throws std::invalid_argument on dimension
    /// mismatch, a zero query or top_k == 0.
    RankedList search(const EmbeddingVector& query, std::size_t top_k,
                      QueryRef ref = QueryRef::raw_question()) const;

    /// Cosine score of one stored entry, computed exactly as search() does.
    double score(const EmbeddingVector& query, std::size_t i) const;

    /// SHA-256 of the binary serialization.
    std::string fingerprint() const;

    /// Equal dim, ids, order, metadata and bit-identical vectors.
    bool operator==(const VectorIndex& other) const;

private:
    std::size_t dim_;
    std::vector<std::string> ids_;
    std::vector<float> data_;
    std::vector<double> norms_;
    std::vector<ChunkMeta> meta_;
    std::unordered_map<std::string, std::size_t> positions_;
    std::optional<EmbeddingProviderConfig> embedder_;
};

struct BuildResult {
    VectorIndex index;
    std::vector<std::string> warnings;
};

/// Embeds every chunk with `provider`. Duplicate ids are rejected before any
/// embedding call; blank chunks are skipped with a warning.
BuildResult build_index(std::span<const Chunk> chunks, const EmbeddingProvider& provider);

// Binary layout, little-endian: "IFIX", u32 version, u32 dim, u64 count,
// u32 metric, then per entry u32 id length, id bytes, dim float32 values.
void write_index(std::ostream& out, const VectorIndex& index);
/// Throws CorruptionError on bad magic or truncation, UnsupportedVersionError
/// on an unknown format version.
VectorIndex read_index(std::istream& in);

/// `path` holds the binary, sidecar_path(path) the JSON chunk metadata.
std::filesystem::path sidecar_path(const std::filesystem::path& index_path);
void save_index(const VectorIndex& index, const std::filesystem::path& path);
/// Without a sidecar, metadata is derived from `doc_id#ordinal` chunk ids.
VectorIndex load_index(const std::filesystem::path& path);

} // namespace intentrag
