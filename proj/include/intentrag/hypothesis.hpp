// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intentrag/corpus.hpp"
#include "intentrag/llm.hpp"
#include "intentrag/vector_index.hpp"

namespace intentrag {

struct HypotheticalAnswer {
    int m = 0;
    std::string body;

    bool operator==(const HypotheticalAnswer&) const = default;
};

/// One retrieval query. ref.instance is the hypothesis index m, ref.intent the
/// statement index within it; the raw question carries QueryRef::raw_question().
struct IntentQuery {
    QueryRef ref;
    std::string statement;

    bool operator==(const IntentQuery&) const = default;
};

enum class PoolMode { naive, single_hypothetical, multi_intent, single_subject_split };

std::string_view to_string(PoolMode mode) noexcept;
PoolMode parse_pool_mode(std::string_view name);

struct QueryPool {
    std::string question_id;
    PoolMode mode = PoolMode::multi_intent;
    /// Generated statements ordered by (m, l), then the raw question last.
    std::vector<IntentQuery> queries;
    /// Set when generation failed entirely and only the raw question remains.
    bool degraded = false;
    /// Failures that were tolerated (a single instance, or the whole generation
    /// when degraded).
    std::vector<std::string> warnings;

    bool operator==(const QueryPool&) const = default;
};

nlohmann::ordered_json to_json(const QueryPool& pool);

struct PoolOptions {
    int max_instances = 5;
    double generation_temperature = 0.7;
    double decomposition_temperature = 0.0;
    int max_tokens = 1024;
    std::size_t max_statement_chars = 512;
    /// Decompose instances concurrently. The client bounds in-flight calls.
    bool parallel = true;
};

/// Items of a numbered or bulleted list ("1.", "1)", "-", "*", "•").
/// Unmarked lines continue the previous item; a blank line ends it. Text
/// before the first marker is ignored.
std::vector<std::string> parse_enumerated_list(std::string_view text);

/// [system, user] messages using the shipped system prompt.
std::vector<ChatMessage> chat_messages(std::string user_prompt);

/// A completion that must yield a list of at least `min_items` distinct items
/// (distinct by statement_key). One repair re-prompt is sent on failure; a
/// second failure raises GenerationFormatError with the last raw output.
struct ListRequest {
    std::string call_kind;
    std::string question_id;
    std::string subject;
    std::string prompt;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::size_t min_items = 1;
    /// Treat an unmarked single-line reply as a one-item list.
    bool accept_plain_line = false;
};

std::vector<std::string> request_list(const LlmClient& llm, const ListRequest& request);

/// Splits a statement longer than `limit` bytes at sentence boundaries; a
/// single over-long sentence is cut at a word boundary.
std::vector<std::string> enforce_statement_limit(std::string_view statement, std::size_t limit);

std::vector<HypotheticalAnswer> generate_hypotheses(const LlmClient& llm, std::string_view question,
                                                    int max_instances, const PoolOptions& options = {},
                                                    std::string_view question_id = {});

/// A one-sentence hypothesis is returned as is without calling the client.
std::vector<IntentQuery> decompose_hypothesis(const LlmClient& llm, std::string_view question,
                                              const HypotheticalAnswer& hypothesis,
                                              const PoolOptions& options = {},
                                              std::string_view question_id = {});

/// At least two distinct statements, all with m = 1.
std::vector<IntentQuery> split_single_subject(const LlmClient& llm, std::string_view question,
                                              const PoolOptions& options = {},
                                              std::string_view question_id = {});

/// One synthetic passage answering the question.
std::string hyde_passage(const LlmClient& llm, std::string_view question, const PoolOptions& options = {},
                         std::string_view question_id = {});

/// `llm` may be null only for PoolMode::naive.
QueryPool build_query_pool(const QuestionRecord& record, const LlmClient* llm, PoolMode mode,
                           const PoolOptions& options = {});

} // namespace intentrag
