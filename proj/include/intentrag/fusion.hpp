// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "intentrag/vector_index.hpp"

namespace intentrag {

struct Contribution {
    QueryRef query;
    std::size_t rank = 0;

    bool operator==(const Contribution&) const = default;
};

struct FusedEntry {
    std::string chunk_id;
    double score = 0.0;
    /// Sorted by (rank, query).
    std::vector<Contribution> contributions;

    bool operator==(const FusedEntry&) const = default;
};

/// Entries by score descending, then contribution count descending, then
/// chunk id ascending. Scores equal within a relative 1e-12 are ties.
struct FusedRanking {
    int smoothing = 60;
    std::vector<FusedEntry> entries;

    bool operator==(const FusedRanking&) const = default;
};

/// Reciprocal rank fusion: score(d) = sum over the lists containing d of
/// 1 / (smoothing + rank). Each score is summed in (rank, query) order, so the
/// result does not depend on the order of `lists`. Throws ValidationError
/// naming the offending list, and std::invalid_argument for empty input or
/// smoothing < 1.
FusedRanking rrf_fuse(std::span<const RankedList> lists, int smoothing);

/// The first min(depth, size) entries. Throws std::invalid_argument if depth is 0.
FusedRanking truncate(const FusedRanking& fused, std::size_t depth);

nlohmann::ordered_json to_json(const FusedRanking& fused);

} // namespace intentrag
