// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intentrag/corpus.hpp"
#include "intentrag/embedding.hpp"
#include "intentrag/fusion.hpp"
#include "intentrag/hypothesis.hpp"
#include "intentrag/llm.hpp"
#include "intentrag/vector_index.hpp"

namespace intentrag {

struct StrategyConfig {
    PoolMode kind = PoolMode::multi_intent;
    /// Report label; empty means to_string(kind).
    std::string name;
    int fusion_smoothing = 60;
    std::size_t per_query_depth = 10;
    std::size_t output_depth = 10;
    std::uint64_t seed = 0;
    bool generate_answers = true;
    PoolOptions pool;

    std::string label() const;
    /// Throws std::invalid_argument for a non-positive depth or smoothing.
    void validate() const;
};

nlohmann::ordered_json describe(const StrategyConfig& strategy);

/// Runtime services. `llm` may be null for a naive strategy that does not
/// generate answers.
struct Providers {
    std::shared_ptr<const EmbeddingProvider> embedder;
    std::shared_ptr<const LlmClient> llm;
    /// Recorded in results; the transcript itself is written by the client.
    std::string transcript_path;
};

/// Query pool plus its embeddings, reusable across fusion and depth settings.
struct PreparedQuestion {
    QueryPool pool;
    std::vector<EmbeddingVector> embeddings;
};

struct PipelineResult {
    std::string question_id;
    QueryPool query_pool;
    /// One per pool query, in pool order.
    std::vector<RankedList> ranked_lists;
    /// Truncated to the output depth.
    FusedRanking fused;
    std::optional<std::vector<std::string>> generated_answers;
    std::string transcript_path;
    /// Stage -> wall milliseconds. Not serialized.
    std::map<std::string, double> timings;
};

/// Deterministic: excludes timings.
nlohmann::ordered_json to_json(const PipelineResult& result);

/// Throws ValidationError when the embedder and index dimensions differ.
void check_dimensions(const VectorIndex& index, const EmbeddingProvider& embedder);

PreparedQuestion prepare_question(const QuestionRecord& record, const StrategyConfig& strategy,
                                  const Providers& providers);

/// Search, fusion, truncation and optional answer generation.
PipelineResult retrieve_prepared(const QuestionRecord& record, const PreparedQuestion& prepared,
                                 const VectorIndex& index, const StrategyConfig& strategy,
                                 const Providers& providers);

PipelineResult run_question(const QuestionRecord& record, const VectorIndex& index, const StrategyConfig& strategy,
                            const Providers& providers);

/// Distinct answers enumerated by the answer-synthesis prompt. Throws
/// std::invalid_argument for no passages.
std::vector<std::string> generate_answer(const LlmClient& llm, std::string_view question,
                                         std::span<const std::string> passages, std::string_view question_id = {},
                                         int max_tokens = 1024);

/// Bodies of the fused chunks, from the index metadata.
std::vector<std::string> fused_passages(const FusedRanking& fused, const VectorIndex& index);

} // namespace intentrag
