// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/pipeline.hpp"

#include <chrono>
#include <stdexcept>

#include "intentrag/error.hpp"
#include "intentrag/prompts.hpp"
#include "intentrag/text.hpp"

namespace intentrag {

using json = nlohmann::ordered_json;

namespace {

class StageTimer {
public:
    StageTimer(std::map<std::string, double>& sink, std::string stage)
        : sink_(sink), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        sink_[stage_] += std::chrono::duration<double, std::milli>(elapsed).count();
    }

private:
    std::map<std::string, double>& sink_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

json ranked_list_json(const RankedList& list) {
    json entries = json::array();
    for (const auto& e : list.entries) {
        entries.push_back({{"chunk_id", e.chunk_id}, {"rank", e.rank}, {"score", e.score}});
    }
    return json{{"m", list.query.instance}, {"l", list.query.intent}, {"entries", std::move(entries)}};
}

} // namespace

std::string StrategyConfig::label() const {
    return name.empty() ? std::string(to_string(kind)) : name;
}

void StrategyConfig::validate() const {
    if (fusion_smoothing < 1) throw std::invalid_argument("fusion smoothing must be positive");
    if (per_query_depth == 0) throw std::invalid_argument("per-query depth must be positive");
    if (output_depth == 0) throw std::invalid_argument("output depth must be positive");
    if (pool.max_instances < 1) throw std::invalid_argument("max_instances must be positive");
}

json describe(const StrategyConfig& s) {
    return json{{"name", s.label()},
                {"kind", to_string(s.kind)},
                {"fusion_smoothing", s.fusion_smoothing},
                {"per_query_depth", s.per_query_depth},
                {"output_depth", s.output_depth},
                {"seed", s.seed},
                {"generate_answers", s.generate_answers},
                {"max_instances", s.pool.max_instances},
                {"generation_temperature", s.pool.generation_temperature},
                {"decomposition_temperature", s.pool.decomposition_temperature},
                {"max_tokens", s.pool.max_tokens},
                {"max_statement_chars", s.pool.max_statement_chars}};
}

json to_json(const PipelineResult& r) {
    json lists = json::array();
    for (const auto& l : r.ranked_lists) lists.push_back(ranked_list_json(l));
    json j{{"question_id", r.question_id},
           {"query_pool", to_json(r.query_pool)},
           {"ranked_lists", std::move(lists)},
           {"fused", to_json(r.fused)}};
    j["generated_answers"] = r.generated_answers ? json(*r.generated_answers) : json(nullptr);
    j["transcript_path"] = r.transcript_path;
    return j;
}

void check_dimensions(const VectorIndex& index, const EmbeddingProvider& embedder) {
    if (index.dim() != embedder.dim()) {
        throw ValidationError("index dimension " + std::to_string(index.dim()) + " does not match embedder \"" +
                              embedder.config().model_name + "\" dimension " + std::to_string(embedder.dim()));
    }
}

PreparedQuestion prepare_question(const QuestionRecord& record, const StrategyConfig& strategy,
                                  const Providers& providers) {
    strategy.validate();
    if (!providers.embedder) throw std::invalid_argument("an embedding provider is required");
    PreparedQuestion out{build_query_pool(record, providers.llm.get(), strategy.kind, strategy.pool), {}};
    std::vector<std::string> texts;
    texts.reserve(out.pool.queries.size());
    for (const auto& q : out.pool.queries) texts.push_back(q.statement);
    out.embeddings = providers.embedder->embed_batch(texts);
    return out;
}

PipelineResult retrieve_prepared(const QuestionRecord& record, const PreparedQuestion& prepared,
                                 const VectorIndex& index, const StrategyConfig& strategy,
                                 const Providers& providers) {
    strategy.validate();
    if (prepared.embeddings.size() != prepared.pool.queries.size()) {
        throw std::invalid_argument("prepared question has " + std::to_string(prepared.embeddings.size()) +
                                    " embeddings for " + std::to_string(prepared.pool.queries.size()) + " queries");
    }
    PipelineResult result;
    result.question_id = record.id;
    result.query_pool = prepared.pool;
    result.transcript_path = providers.transcript_path;
    {
        StageTimer timer(result.timings, "retrieve");
        for (std::size_t i = 0; i < prepared.embeddings.size(); ++i) {
            result.ranked_lists.push_back(
                index.search(prepared.embeddings[i], strategy.per_query_depth, prepared.pool.queries[i].ref));
        }
    }
    {
        StageTimer timer(result.timings, "fuse");
        result.fused = truncate(rrf_fuse(result.ranked_lists, strategy.fusion_smoothing), strategy.output_depth);
    }
    if (strategy.generate_answers) {
        if (!providers.llm) throw std::invalid_argument("answer generation needs an LLM client");
        StageTimer timer(result.timings, "answer");
        const auto passages = fused_passages(result.fused, index);
        result.generated_answers =
            generate_answer(*providers.llm, record.question, passages, record.id, strategy.pool.max_tokens);
    }
    return result;
}

PipelineResult run_question(const QuestionRecord& record, const VectorIndex& index, const StrategyConfig& strategy,
                            const Providers& providers) {
    if (!providers.embedder) throw std::invalid_argument("an embedding provider is required");
    check_dimensions(index, *providers.embedder);
    std::map<std::string, double> timings;
    PreparedQuestion prepared;
    {
        StageTimer timer(timings, "prepare");
        prepared = prepare_question(record, strategy, providers);
    }
    auto result = retrieve_prepared(record, prepared, index, strategy, providers);
    result.timings.merge(timings);
    return result;
}

std::vector<std::string> generate_answer(const LlmClient& llm, std::string_view question,
                                         std::span<const std::string> passages, std::string_view question_id,
                                         int max_tokens) {
    if (passages.empty()) throw std::invalid_argument("answer generation needs at least one passage");
    std::string joined;
    for (std::size_t i = 0; i < passages.size(); ++i) {
        if (i > 0) joined += "\n\n";
        joined += "[" + std::to_string(i + 1) + "] " + text::collapse_whitespace(passages[i]);
    }
    const std::vector<std::pair<std::string_view, std::string>> vars{{"question", std::string(question)},
                                                                     {"passages", joined}};
    ListRequest req{"answer",
                    std::string(question_id),
                    std::string(question),
                    render_prompt(text::trim(prompt_template("answer_synthesis").text), vars),
                    0.0,
                    max_tokens,
                    1,
                    true};
    return request_list(llm, req);
}

std::vector<std::string> fused_passages(const FusedRanking& fused, const VectorIndex& index) {
    std::vector<std::string> out;
    out.reserve(fused.entries.size());
    for (const auto& e : fused.entries) {
        const auto* meta = index.find(e.chunk_id);
        out.push_back(meta ? meta->body : std::string());
    }
    return out;
}

} // namespace intentrag
