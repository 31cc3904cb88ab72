// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intentrag/corpus.hpp"
#include "intentrag/embedding.hpp"
#include "intentrag/fusion.hpp"
#include "intentrag/llm.hpp"

namespace intentrag {

/// Shannon entropy (natural log) of the mean of the per-vector |v|/||v||_1
/// distributions. Throws std::invalid_argument for no vectors, a dimension
/// mismatch or an all-zero vector.
double vector_entropy(std::span<const EmbeddingVector> vectors);

/// The averaged distribution vector_entropy() measures.
std::vector<double> mixture_distribution(std::span<const EmbeddingVector> vectors);

enum class MatcherKind { normalized_exact, containment, llm_judge };

std::string_view to_string(MatcherKind kind) noexcept;
MatcherKind parse_matcher_kind(std::string_view name);

struct MatcherConfig {
    MatcherKind kind = MatcherKind::normalized_exact;
    /// Required for llm_judge.
    std::optional<LlmProviderConfig> judge_llm;
};

/// Decides whether a candidate text states a gold text.
class Matcher {
public:
    /// The judge kind calls `judge` at temperature 0 with the shipped judge
    /// prompt; other kinds ignore it.
    explicit Matcher(MatcherKind kind, std::shared_ptr<const LlmClient> judge = nullptr);

    /// Throws std::invalid_argument when llm_judge lacks a judge_llm.
    static Matcher from_config(const MatcherConfig& config);

    MatcherKind kind() const noexcept { return kind_; }
    bool accepts(std::string_view candidate, std::string_view gold) const;

private:
    MatcherKind kind_;
    std::shared_ptr<const LlmClient> judge_;
};

struct GoldItem {
    std::string id;
    std::string text;
};

std::vector<GoldItem> gold_items(std::span<const FactualUnit> units);
/// Ids are the answer texts themselves.
std::vector<GoldItem> gold_items(std::span<const std::string> answers);

struct CandidateVerdict {
    std::string candidate;
    std::optional<std::string> gold_id;

    bool operator==(const CandidateVerdict&) const = default;
};

struct MatchOutcome {
    std::set<std::string> matched_gold_ids;
    std::vector<CandidateVerdict> verdicts;
};

/// Greedy injective assignment in candidate order: each candidate takes the
/// first unmatched gold item it is accepted for. Throws std::invalid_argument
/// on duplicate gold ids.
MatchOutcome match_units(std::span<const std::string> candidates, std::span<const GoldItem> gold,
                         const Matcher& matcher);

struct MetricValue {
    std::string name;
    double value = 0.0;
    std::size_t numerator = 0;
    std::size_t denominator = 0;
    /// Set when the metric was defined as 0 because there was nothing to score.
    bool empty_output = false;

    bool operator==(const MetricValue&) const = default;
};

nlohmann::ordered_json to_json(const MetricValue& metric);

/// Fraction of gold units stated by at least one passage, each unit counted
/// once. Throws UndefinedMetricError for empty gold.
MetricValue information_recall_rate(std::span<const std::string> passages, std::span<const FactualUnit> gold_units,
                                    const Matcher& matcher);

struct AnswerScores {
    MetricValue accuracy;
    MetricValue coverage;
    /// |A*|, shared by both.
    std::size_t matched = 0;
};

/// AA and AC from one matching pass. Empty `generated` gives AA = 0 with
/// empty_output set. Throws UndefinedMetricError for empty gold.
AnswerScores answer_scores(std::span<const std::string> generated, std::span<const std::string> gold_answers,
                           const Matcher& matcher);
MetricValue answer_accuracy(std::span<const std::string> generated, std::span<const std::string> gold_answers,
                            const Matcher& matcher);
MetricValue answer_coverage(std::span<const std::string> generated, std::span<const std::string> gold_answers,
                            const Matcher& matcher);

/// 1 when the normalized prediction equals any normalized gold answer.
double exact_match(std::string_view prediction, std::span<const std::string> gold_answers);

/// Harmonic mean of bag-of-token precision and recall.
double token_f1(std::span<const std::string> prediction_tokens, std::span<const std::string> gold_tokens);
/// Maximum token F1 over the gold answers, after answer normalization.
double token_f1(std::string_view prediction, std::span<const std::string> gold_answers);

/// Fraction of gold ids among the top-k fused entries. A gold id matches a
/// chunk whose id or document id equals it; `doc_of` maps chunk ids to
/// document ids and defaults to doc_id_of().
double recall_at_k(const FusedRanking& fused, std::span<const std::string> gold_passage_ids, std::size_t k,
                   const std::function<std::string(std::string_view)>& doc_of = {});

} // namespace intentrag
