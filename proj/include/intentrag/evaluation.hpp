// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intentrag/corpus.hpp"
#include "intentrag/metrics.hpp"
#include "intentrag/pipeline.hpp"
#include "intentrag/vector_index.hpp"

namespace intentrag {

/// Report column order.
inline constexpr std::string_view kMetricNames[] = {"H_mix", "IRR", "AA", "AC", "EM", "F1", "R@K"};

struct EvalOptions {
    /// 0 means one worker per hardware thread.
    std::size_t workers = 0;
};

struct QuestionOutcome {
    std::string question_id;
    /// Empty when the question failed.
    std::map<std::string, MetricValue> metrics;
    bool degraded = false;
    std::optional<std::string> error;
    /// Absent for failures.
    std::optional<PipelineResult> result;

    bool failed() const noexcept { return error.has_value(); }
};

struct EvalReport {
    std::string strategy;
    nlohmann::ordered_json config;
    std::string config_fingerprint;
    /// Dataset order.
    std::vector<QuestionOutcome> per_question;
    /// Mean per metric over the questions where it is present.
    std::map<std::string, double> aggregates;
    std::size_t failures = 0;
    std::size_t degraded = 0;
};

/// Canonical report. Byte-stable for fixed inputs: no timings, no worker count.
nlohmann::ordered_json to_json(const EvalReport& report);
/// Aggregates recomputed from the per-question values.
std::map<std::string, double> recompute_aggregates(const EvalReport& report);

void write_report_json(std::ostream& out, const EvalReport& report);
/// One row per question: question_id,status,<metrics>.
void write_report_csv(std::ostream& out, const EvalReport& report);
/// Aggregate table, ratio metrics in percent.
void write_report_markdown(std::ostream& out, std::span<const EvalReport> reports);
/// Format chosen by extension: .csv, .md, otherwise JSON.
void save_report(const std::filesystem::path& path, const EvalReport& report);

/// Outcome of preparing one question, reusable across sweeps.
struct PreparedOutcome {
    std::optional<PreparedQuestion> prepared;
    std::optional<std::string> error;
};

std::vector<PreparedOutcome> prepare_dataset(std::span<const QuestionRecord> dataset, const StrategyConfig& strategy,
                                             const Providers& providers, const EvalOptions& options = {});

/// Evaluation over already prepared questions; `prepared` parallels `dataset`.
EvalReport evaluate_prepared(std::span<const QuestionRecord> dataset, std::span<const PreparedOutcome> prepared,
                             const VectorIndex& index, const StrategyConfig& strategy, const Providers& providers,
                             const Matcher& matcher, const EvalOptions& options = {});

/// Per-question failures are recorded and excluded from aggregates; an
/// embedder/index dimension mismatch throws ValidationError before any work.
EvalReport run_evaluation(std::span<const QuestionRecord> dataset, const VectorIndex& index,
                          const StrategyConfig& strategy, const Providers& providers, const Matcher& matcher,
                          const EvalOptions& options = {});

struct StrategyRun {
    StrategyConfig strategy;
    Providers providers;
};

struct ComparisonRow {
    std::string strategy;
    std::optional<EvalReport> report;
    std::optional<std::string> error;
};

struct Comparison {
    std::vector<ComparisonRow> rows;
};

/// One evaluation per strategy; a strategy that cannot run becomes an error
/// row. Throws std::invalid_argument for fewer than two strategies.
Comparison compare_strategies(std::span<const QuestionRecord> dataset, const VectorIndex& index,
                              std::span<const StrategyRun> strategies, const Matcher& matcher,
                              const EvalOptions& options = {});

nlohmann::ordered_json to_json(const Comparison& comparison);
void write_comparison_markdown(std::ostream& out, const Comparison& comparison);
void write_comparison_csv(std::ostream& out, const Comparison& comparison);

enum class SweepParameter { fusion_smoothing, output_depth, per_query_depth };

std::string_view to_string(SweepParameter parameter) noexcept;
/// Also accepts "smoothing" and "depth" (output depth).
SweepParameter parse_sweep_parameter(std::string_view name);

/// The strategy with `parameter` set to `value`.
StrategyConfig with_parameter(StrategyConfig strategy, SweepParameter parameter, std::size_t value);

struct SweepRow {
    std::size_t value = 0;
    EvalReport report;
};

struct SweepTable {
    SweepParameter parameter = SweepParameter::fusion_smoothing;
    std::vector<SweepRow> rows;
};

/// Query pools and query embeddings are computed once and reused for every
/// value. Throws std::invalid_argument for empty, repeated or zero values.
SweepTable sweep(std::span<const QuestionRecord> dataset, const VectorIndex& index, const StrategyConfig& strategy,
                 const Providers& providers, SweepParameter parameter, std::span<const std::size_t> values,
                 const Matcher& matcher, const EvalOptions& options = {});

/// parameter,value,<metrics>,evaluated,failures
void write_sweep_csv(std::ostream& out, const SweepTable& table);

} // namespace intentrag
