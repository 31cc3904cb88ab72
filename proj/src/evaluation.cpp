// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "intentrag/error.hpp"
#include "intentrag/hashing.hpp"
#include "intentrag/prompts.hpp"

namespace intentrag {

using json = nlohmann::ordered_json;

namespace {

std::size_t worker_count(const EvalOptions& options, std::size_t jobs) {
    std::size_t w = options.workers;
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(w, jobs));
}

// fn must not throw.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

MetricValue scalar(std::string name, double value) {
    return MetricValue{std::move(name), value, 0, 0, false};
}

std::string fingerprint_of(const json& config) {
    return sha256_hex(config.dump());
}

json run_config(const VectorIndex& index, const StrategyConfig& strategy, const Providers& providers,
                const Matcher& matcher) {
    json prompts = json::object();
    for (const auto& [name, hash] : prompt_template_hashes()) prompts[name] = hash;
    return json{{"strategy", describe(strategy)},
                {"embedder", providers.embedder ? describe(providers.embedder->config()) : json(nullptr)},
                {"llm", providers.llm ? describe(providers.llm->config()) : json(nullptr)},
                {"matcher", to_string(matcher.kind())},
                {"prompts", std::move(prompts)},
                {"index", index.fingerprint()}};
}

QuestionOutcome evaluate_one(const QuestionRecord& record, const PreparedOutcome& prepared,
                             const VectorIndex& index, const StrategyConfig& strategy, const Providers& providers,
                             const Matcher& matcher) {
    QuestionOutcome out;
    out.question_id = record.id;
    try {
        if (prepared.error) throw Error(*prepared.error);
        validate_gold(record);
        auto result = retrieve_prepared(record, *prepared.prepared, index, strategy, providers);
        out.degraded = result.query_pool.degraded;
        out.metrics.emplace("H_mix", scalar("H_mix", vector_entropy(prepared.prepared->embeddings)));

        const auto& gold = record.gold;
        if (!gold.factual_units.empty()) {
            const auto passages = fused_passages(result.fused, index);
            out.metrics.emplace("IRR", information_recall_rate(passages, gold.factual_units, matcher));
        }
        if (result.generated_answers && !gold.gold_answers.empty()) {
            const auto& answers = *result.generated_answers;
            auto scores = answer_scores(answers, gold.gold_answers, matcher);
            out.metrics.emplace("AA", std::move(scores.accuracy));
            out.metrics.emplace("AC", std::move(scores.coverage));
            const std::string prediction = answers.empty() ? std::string() : answers.front();
            out.metrics.emplace("EM", scalar("EM", exact_match(prediction, gold.gold_answers)));
            out.metrics.emplace("F1", scalar("F1", token_f1(prediction, gold.gold_answers)));
        }
        if (!gold.gold_passage_ids.empty()) {
            out.metrics.emplace("R@K", scalar("R@K", recall_at_k(result.fused, gold.gold_passage_ids,
                                                                 strategy.output_depth)));
        }
        out.result = std::move(result);
    } catch (const std::exception& e) {
        out.metrics.clear();
        out.result.reset();
        out.error = e.what();
    }
    return out;
}

std::map<std::string, double> means(const std::vector<QuestionOutcome>& outcomes) {
    std::map<std::string, double> out;
    for (const auto name : kMetricNames) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& q : outcomes) {
            if (auto it = q.metrics.find(std::string(name)); it != q.metrics.end()) {
                sum += it->second.value;
                ++n;
            }
        }
        if (n > 0) out.emplace(name, sum / static_cast<double>(n));
    }
    return out;
}

std::string format_number(double v, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

std::string plain_number(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string percent_cell(const std::map<std::string, double>& aggregates, std::string_view name) {
    auto it = aggregates.find(std::string(name));
    if (it == aggregates.end()) return "-";
    return name == "H_mix" ? format_number(it->second, 4) : format_number(100.0 * it->second, 3);
}

void markdown_header(std::ostream& out) {
    out << "| Strategy |";
    for (const auto name : kMetricNames) out << ' ' << name << " |";
    out << " Questions | Failures |\n|---|";
    for (std::size_t i = 0; i < std::size(kMetricNames); ++i) out << "---:|";
    out << "---:|---:|\n";
}

void markdown_row(std::ostream& out, const EvalReport& r) {
    out << "| " << r.strategy << " |";
    for (const auto name : kMetricNames) out << ' ' << percent_cell(r.aggregates, name) << " |";
    out << ' ' << r.per_question.size() << " | " << r.failures << " |\n";
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void csv_aggregates(std::ostream& out, const std::map<std::string, double>& aggregates) {
    for (const auto name : kMetricNames) {
        out << ',';
        if (auto it = aggregates.find(std::string(name)); it != aggregates.end()) out << plain_number(it->second);
    }
}

} // namespace

json to_json(const EvalReport& report) {
    json per_question = json::object();
    json failures = json::array();
    for (const auto& q : report.per_question) {
        json entry = json::object();
        if (q.failed()) {
            entry["status"] = "failed";
            entry["error"] = *q.error;
            failures.push_back({{"question_id", q.question_id}, {"error", *q.error}});
        } else {
            entry["status"] = "ok";
            entry["degraded"] = q.degraded;
            json metrics = json::object();
            for (const auto name : kMetricNames) {
                auto it = q.metrics.find(std::string(name));
                if (it == q.metrics.end()) continue;
                const auto& m = it->second;
                metrics[std::string(name)] = (m.denominator > 0 || m.empty_output) ? to_json(m) : json(m.value);
            }
            entry["metrics"] = std::move(metrics);
            if (q.result) {
                json retrieved = json::array();
                for (const auto& e : q.result->fused.entries) retrieved.push_back(e.chunk_id);
                entry["queries"] = q.result->query_pool.queries.size();
                entry["retrieved"] = std::move(retrieved);
                entry["answers"] =
                    q.result->generated_answers ? json(*q.result->generated_answers) : json(nullptr);
            }
        }
        per_question[q.question_id] = std::move(entry);
    }
    json aggregates = json::object();
    for (const auto name : kMetricNames) {
        if (auto it = report.aggregates.find(std::string(name)); it != report.aggregates.end()) {
            aggregates[std::string(name)] = it->second;
        }
    }
    return json{{"strategy", report.strategy},
                {"config_fingerprint", report.config_fingerprint},
                {"config", report.config},
                {"counts",
                 {{"questions", report.per_question.size()},
                  {"evaluated", report.per_question.size() - report.failures},
                  {"failures", report.failures},
                  {"degraded", report.degraded}}},
                {"aggregates", std::move(aggregates)},
                {"per_question", std::move(per_question)},
                {"failures", std::move(failures)}};
}

std::map<std::string, double> recompute_aggregates(const EvalReport& report) {
    return means(report.per_question);
}

void write_report_json(std::ostream& out, const EvalReport& report) {
    out << to_json(report).dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "question_id,status";
    for (const auto name : kMetricNames) out << ',' << name;
    out << '\n';
    for (const auto& q : report.per_question) {
        out << csv_field(q.question_id) << ',' << (q.failed() ? "failed" : q.degraded ? "degraded" : "ok");
        for (const auto name : kMetricNames) {
            out << ',';
            if (auto it = q.metrics.find(std::string(name)); it != q.metrics.end()) {
                out << plain_number(it->second.value);
            }
        }
        out << '\n';
    }
}

void write_report_markdown(std::ostream& out, std::span<const EvalReport> reports) {
    markdown_header(out);
    for (const auto& r : reports) markdown_row(out, r);
}

void save_report(const std::filesystem::path& path, const EvalReport& report) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    const auto ext = path.extension();
    if (ext == ".csv") {
        write_report_csv(out, report);
    } else if (ext == ".md") {
        write_report_markdown(out, std::span<const EvalReport>(&report, 1));
    } else {
        write_report_json(out, report);
    }
    if (!out) throw ValidationError("failed writing " + path.string());
}

std::vector<PreparedOutcome> prepare_dataset(std::span<const QuestionRecord> dataset, const StrategyConfig& strategy,
                                             const Providers& providers, const EvalOptions& options) {
    std::vector<PreparedOutcome> out(dataset.size());
    parallel_for(dataset.size(), worker_count(options, dataset.size()), [&](std::size_t i) {
        try {
            out[i].prepared = prepare_question(dataset[i], strategy, providers);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

EvalReport evaluate_prepared(std::span<const QuestionRecord> dataset, std::span<const PreparedOutcome> prepared,
                             const VectorIndex& index, const StrategyConfig& strategy, const Providers& providers,
                             const Matcher& matcher, const EvalOptions& options) {
    if (prepared.size() != dataset.size()) throw std::invalid_argument("prepared outcomes do not match the dataset");
    strategy.validate();
    EvalReport report;
    report.strategy = strategy.label();
    report.config = run_config(index, strategy, providers, matcher);
    report.config_fingerprint = fingerprint_of(report.config);
    report.per_question.resize(dataset.size());
    parallel_for(dataset.size(), worker_count(options, dataset.size()), [&](std::size_t i) {
        report.per_question[i] = evaluate_one(dataset[i], prepared[i], index, strategy, providers, matcher);
    });
    for (const auto& q : report.per_question) {
        if (q.failed()) ++report.failures;
        if (q.degraded) ++report.degraded;
    }
    report.aggregates = means(report.per_question);
    return report;
}

EvalReport run_evaluation(std::span<const QuestionRecord> dataset, const VectorIndex& index,
                          const StrategyConfig& strategy, const Providers& providers, const Matcher& matcher,
                          const EvalOptions& options) {
    if (!providers.embedder) throw std::invalid_argument("an embedding provider is required");
    strategy.validate();
    check_dimensions(index, *providers.embedder);
    const auto prepared = prepare_dataset(dataset, strategy, providers, options);
    return evaluate_prepared(dataset, prepared, index, strategy, providers, matcher, options);
}

Comparison compare_strategies(std::span<const QuestionRecord> dataset, const VectorIndex& index,
                              std::span<const StrategyRun> strategies, const Matcher& matcher,
                              const EvalOptions& options) {
    if (strategies.size() < 2) throw std::invalid_argument("comparison needs at least two strategies");
    Comparison out;
    for (const auto& run : strategies) {
        ComparisonRow row{run.strategy.label(), std::nullopt, std::nullopt};
        try {
            row.report = run_evaluation(dataset, index, run.strategy, run.providers, matcher, options);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

json to_json(const Comparison& comparison) {
    json rows = json::array();
    for (const auto& row : comparison.rows) {
        json r{{"strategy", row.strategy}};
        r["report"] = row.report ? to_json(*row.report) : json(nullptr);
        r["error"] = row.error ? json(*row.error) : json(nullptr);
        rows.push_back(std::move(r));
    }
    return json{{"rows", std::move(rows)}};
}

void write_comparison_markdown(std::ostream& out, const Comparison& comparison) {
    markdown_header(out);
    for (const auto& row : comparison.rows) {
        if (row.report) {
            markdown_row(out, *row.report);
        } else {
            out << "| " << row.strategy << " |";
            for (std::size_t i = 0; i < std::size(kMetricNames); ++i) out << " - |";
            out << " - | error: " << row.error.value_or("") << " |\n";
        }
    }
}

void write_comparison_csv(std::ostream& out, const Comparison& comparison) {
    out << "strategy";
    for (const auto name : kMetricNames) out << ',' << name;
    out << ",evaluated,failures,error\n";
    for (const auto& row : comparison.rows) {
        out << csv_field(row.strategy);
        if (row.report) {
            csv_aggregates(out, row.report->aggregates);
            out << ',' << row.report->per_question.size() - row.report->failures << ',' << row.report->failures
                << ",\n";
        } else {
            for (std::size_t i = 0; i < std::size(kMetricNames); ++i) out << ',';
            out << ",," << csv_field(row.error.value_or("")) << '\n';
        }
    }
}

std::string_view to_string(SweepParameter parameter) noexcept {
    switch (parameter) {
    case SweepParameter::fusion_smoothing: return "fusion_smoothing";
    case SweepParameter::output_depth: return "output_depth";
    case SweepParameter::per_query_depth: return "per_query_depth";
    }
    return "unknown";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "fusion_smoothing" || name == "smoothing") return SweepParameter::fusion_smoothing;
    if (name == "output_depth" || name == "depth") return SweepParameter::output_depth;
    if (name == "per_query_depth") return SweepParameter::per_query_depth;
    throw std::invalid_argument("unknown sweep parameter \"" + std::string(name) + "\"");
}

StrategyConfig with_parameter(StrategyConfig strategy, SweepParameter parameter, std::size_t value) {
    switch (parameter) {
    case SweepParameter::fusion_smoothing:
        if (value > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
            throw std::invalid_argument("smoothing value too large");
        }
        strategy.fusion_smoothing = static_cast<int>(value);
        break;
    case SweepParameter::output_depth: strategy.output_depth = value; break;
    case SweepParameter::per_query_depth: strategy.per_query_depth = value; break;
    }
    return strategy;
}

SweepTable sweep(std::span<const QuestionRecord> dataset, const VectorIndex& index, const StrategyConfig& strategy,
                 const Providers& providers, SweepParameter parameter, std::span<const std::size_t> values,
                 const Matcher& matcher, const EvalOptions& options) {
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    std::set<std::size_t> distinct;
    for (auto v : values) {
        if (v == 0) throw std::invalid_argument("sweep values must be positive");
        if (!distinct.insert(v).second) throw std::invalid_argument("sweep value " + std::to_string(v) + " repeats");
    }
    if (!providers.embedder) throw std::invalid_argument("an embedding provider is required");
    strategy.validate();
    check_dimensions(index, *providers.embedder);

    const auto prepared = prepare_dataset(dataset, strategy, providers, options);
    SweepTable table{parameter, {}};
    for (auto v : values) {
        const auto variant = with_parameter(strategy, parameter, v);
        table.rows.push_back({v, evaluate_prepared(dataset, prepared, index, variant, providers, matcher, options)});
    }
    return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << "parameter,value";
    for (const auto name : kMetricNames) out << ',' << name;
    out << ",evaluated,failures\n";
    for (const auto& row : table.rows) {
        out << to_string(table.parameter) << ',' << row.value;
        csv_aggregates(out, row.report.aggregates);
        out << ',' << row.report.per_question.size() - row.report.failures << ',' << row.report.failures << '\n';
    }
}

} // namespace intentrag
