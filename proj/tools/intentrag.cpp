// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: ingest, index, ask, eval, compare, sweep.
// Exit codes: 0 success, 1 usage, 2 data or validation, 3 provider failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "intentrag/corpus.hpp"
#include "intentrag/embedding.hpp"
#include "intentrag/error.hpp"
#include "intentrag/evaluation.hpp"
#include "intentrag/llm.hpp"
#include "intentrag/metrics.hpp"
#include "intentrag/pipeline.hpp"
#include "intentrag/text.hpp"
#include "intentrag/vector_index.hpp"

namespace {

using namespace intentrag;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;

struct EmbedderOptions {
    std::string backend;
    std::string model;
    std::size_t dim = 0;
    std::string endpoint;
    std::optional<std::uint64_t> seed;
    std::size_t batch_size = 0;
};

struct LlmOptions {
    std::string backend = "mock";
    std::string model;
    std::string endpoint;
    std::vector<std::string> scripts;
    std::string transcript;
    std::string cache_dir;
    double temperature = 0.7;
};

struct RunOptions {
    std::string index_path;
    std::string strategy = "multi_intent";
    int smoothing = 60;
    std::size_t depth = 10;
    std::size_t per_query_depth = 10;
    std::size_t max_instances = 5;
    std::uint64_t seed = 0;
    bool no_answers = false;
    std::size_t workers = 0;
    std::string matcher = "containment";
};

void add_embedder_options(CLI::App* cmd, EmbedderOptions& o) {
    cmd->add_option("--embedder", o.backend, "Embedding backend: mock or remote");
    cmd->add_option("--embed-model", o.model, "Embedding model name");
    cmd->add_option("--embed-dim", o.dim, "Embedding dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--embed-endpoint", o.endpoint, "Embedding base URL (default EMBED_BASE_URL)");
    cmd->add_option("--embed-seed", o.seed, "Hashing salt of the mock embedder");
    cmd->add_option("--embed-batch", o.batch_size, "Texts per embedding request")->check(CLI::PositiveNumber);
}

void add_llm_options(CLI::App* cmd, LlmOptions& o) {
    cmd->add_option("--llm", o.backend, "LLM backend: mock or remote")->capture_default_str();
    cmd->add_option("--llm-model", o.model, "Chat model name");
    cmd->add_option("--llm-endpoint", o.endpoint, "Chat base URL (default LLM_BASE_URL)");
    cmd->add_option("--llm-script", o.scripts, "JSONL script or transcript for the mock LLM");
    cmd->add_option("--transcript", o.transcript, "Append every LLM call to this JSONL file");
    cmd->add_option("--cache-dir", o.cache_dir, "Reuse LLM responses cached in this directory");
    cmd->add_option("--temperature", o.temperature, "Hypothesis generation temperature")
        ->check(CLI::Range(0.0, 2.0))
        ->capture_default_str();
}

void add_run_options(CLI::App* cmd, RunOptions& o, bool strategy_option) {
    cmd->add_option("--index", o.index_path, "Index file written by `index`")->required();
    if (strategy_option) {
        cmd->add_option("--strategy", o.strategy, "naive, single_hypothetical, multi_intent or single_subject_split")
            ->capture_default_str();
    }
    cmd->add_option("--smoothing", o.smoothing, "Fusion smoothing constant")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--depth", o.depth, "Output depth after fusion")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--per-query-depth", o.per_query_depth, "Retrieval depth of each query")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-instances", o.max_instances, "Hypothetical answers per question")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Run seed")->capture_default_str();
    cmd->add_flag("--no-answers", o.no_answers, "Skip answer generation");
}

EmbeddingProviderConfig embedder_config(const EmbedderOptions& o, const std::optional<EmbeddingProviderConfig>& base) {
    EmbeddingProviderConfig c = base.value_or(EmbeddingProviderConfig{});
    if (!o.backend.empty()) c.backend = parse_embedding_backend(o.backend);
    if (!o.model.empty()) c.model_name = o.model;
    if (o.dim > 0) c.dim = o.dim;
    if (!o.endpoint.empty()) c.endpoint = o.endpoint;
    if (o.seed) c.seed = *o.seed;
    if (o.batch_size > 0) c.batch_size = o.batch_size;
    return c;
}

std::shared_ptr<const LlmClient> make_llm(const LlmOptions& o, std::uint64_t seed) {
    LlmProviderConfig config;
    config.backend = parse_llm_backend(o.backend);
    config.temperature = o.temperature;
    if (!o.model.empty()) config.model_name = o.model;
    if (!o.endpoint.empty()) config.endpoint = o.endpoint;

    std::shared_ptr<const LlmClient> client;
    if (config.backend == LlmBackend::scripted_mock) {
        auto scripted = std::make_shared<ScriptedLlm>(config);
        for (const auto& path : o.scripts) scripted->load_script(path);
        client = scripted;
    } else {
        client = make_llm_client(config);
    }
    if (!o.cache_dir.empty()) client = std::make_shared<CachingLlm>(client, o.cache_dir, seed);
    if (!o.transcript.empty()) {
        client = std::make_shared<RecordingLlm>(client, std::make_shared<TranscriptWriter>(o.transcript));
    }
    return client;
}

StrategyConfig strategy_config(const RunOptions& o, const LlmOptions& llm, PoolMode kind) {
    StrategyConfig s;
    s.kind = kind;
    s.fusion_smoothing = o.smoothing;
    s.output_depth = o.depth;
    s.per_query_depth = o.per_query_depth;
    s.seed = o.seed;
    s.generate_answers = !o.no_answers;
    s.pool.max_instances = static_cast<int>(o.max_instances);
    s.pool.generation_temperature = llm.temperature;
    s.validate();
    return s;
}

Providers providers_for(const VectorIndex& index, const EmbedderOptions& eo, const LlmOptions& lo,
                        const RunOptions& ro, PoolMode kind) {
    Providers p;
    p.embedder = make_embedding_provider(embedder_config(eo, index.embedder()));
    if (kind != PoolMode::naive || !ro.no_answers || ro.matcher == "llm_judge") p.llm = make_llm(lo, ro.seed);
    p.transcript_path = lo.transcript;
    return p;
}

Matcher make_matcher(const std::string& name, const std::shared_ptr<const LlmClient>& llm) {
    const auto kind = parse_matcher_kind(name);
    return kind == MatcherKind::llm_judge ? Matcher(kind, llm) : Matcher(kind);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path);
    return out;
}

std::string extension_of(const std::string& path) {
    const auto dot = path.find_last_of('.');
    return dot == std::string::npos ? std::string() : path.substr(dot);
}

void print_summary(const EvalReport& r) {
    std::cerr << r.strategy << ": " << r.per_question.size() - r.failures << "/" << r.per_question.size()
              << " questions evaluated";
    if (r.degraded > 0) std::cerr << ", " << r.degraded << " degraded";
    std::cerr << '\n';
    for (const auto& q : r.per_question) {
        if (q.failed()) std::cerr << "  failed " << q.question_id << ": " << *q.error << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intent-aware retrieval and evaluation over dense vector indices"};
    app.require_subcommand(1);

    std::string corpus_path, chunks_out;
    ChunkingOptions chunking;
    auto* ingest = app.add_subcommand("ingest", "Split a JSONL corpus into chunks");
    ingest->add_option("corpus", corpus_path, "Corpus JSONL: {\"id\",\"title\"?,\"body\",\"source_uri\"?}")
        ->required();
    ingest->add_option("--out", chunks_out, "Chunk JSONL output")->required();
    ingest->add_option("--max-chars", chunking.max_chars, "Maximum chunk size in bytes")->capture_default_str();
    ingest->add_option("--overlap", chunking.overlap_chars, "Overlap between windows of a long paragraph")
        ->capture_default_str();

    std::string chunks_path, index_out;
    EmbedderOptions index_embedder;
    auto* index_cmd = app.add_subcommand("index", "Embed chunks and write an index");
    index_cmd->add_option("chunks", chunks_path, "Chunk JSONL written by `ingest`")->required();
    index_cmd->add_option("--out", index_out, "Index output path")->required();
    add_embedder_options(index_cmd, index_embedder);

    std::string question;
    bool ask_json = false;
    RunOptions ask_run;
    EmbedderOptions ask_embedder;
    LlmOptions ask_llm;
    auto* ask = app.add_subcommand("ask", "Retrieve evidence (and answers) for one question");
    ask->add_option("question", question, "Question text")->required();
    ask->add_flag("--json", ask_json, "Print the full pipeline result as JSON");
    add_run_options(ask, ask_run, true);
    add_embedder_options(ask, ask_embedder);
    add_llm_options(ask, ask_llm);

    std::string dataset_path, report_out;
    RunOptions eval_run;
    EmbedderOptions eval_embedder;
    LlmOptions eval_llm;
    auto* eval = app.add_subcommand("eval", "Evaluate one strategy on a QA dataset");
    eval->add_option("dataset", dataset_path, "QA dataset JSONL")->required();
    eval->add_option("--out", report_out, "Report path (.json, .csv or .md)")->required();
    eval->add_option("--matcher", eval_run.matcher, "normalized_exact, containment or llm_judge")
        ->capture_default_str();
    eval->add_option("--workers", eval_run.workers, "Concurrent questions (0: one per processor)");
    add_run_options(eval, eval_run, true);
    add_embedder_options(eval, eval_embedder);
    add_llm_options(eval, eval_llm);

    std::string compare_dataset, compare_out, strategies_arg = "naive,multi_intent";
    RunOptions compare_run;
    EmbedderOptions compare_embedder;
    LlmOptions compare_llm;
    auto* compare = app.add_subcommand("compare", "Evaluate several strategies side by side");
    compare->add_option("dataset", compare_dataset, "QA dataset JSONL")->required();
    compare->add_option("--strategies", strategies_arg, "Comma-separated strategies")->capture_default_str();
    compare->add_option("--out", compare_out, "Table path (.md, .csv or .json)")->required();
    compare->add_option("--matcher", compare_run.matcher, "normalized_exact, containment or llm_judge")
        ->capture_default_str();
    compare->add_option("--workers", compare_run.workers, "Concurrent questions (0: one per processor)");
    add_run_options(compare, compare_run, false);
    add_embedder_options(compare, compare_embedder);
    add_llm_options(compare, compare_llm);

    std::string sweep_dataset, sweep_out, sweep_param = "smoothing", sweep_values;
    RunOptions sweep_run;
    EmbedderOptions sweep_embedder;
    LlmOptions sweep_llm;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate one strategy across values of a parameter");
    sweep_cmd->add_option("dataset", sweep_dataset, "QA dataset JSONL")->required();
    sweep_cmd->add_option("--param", sweep_param, "smoothing, depth or per_query_depth")->capture_default_str();
    sweep_cmd->add_option("--values", sweep_values, "Comma-separated positive integers")->required();
    sweep_cmd->add_option("--out", sweep_out, "CSV output")->required();
    sweep_cmd->add_option("--matcher", sweep_run.matcher, "normalized_exact, containment or llm_judge")
        ->capture_default_str();
    sweep_cmd->add_option("--workers", sweep_run.workers, "Concurrent questions (0: one per processor)");
    add_run_options(sweep_cmd, sweep_run, true);
    add_embedder_options(sweep_cmd, sweep_embedder);
    add_llm_options(sweep_cmd, sweep_llm);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ingest) {
            const auto docs = load_corpus(corpus_path);
            const auto chunks = chunk_corpus(docs, chunking);
            save_chunks(chunks_out, chunks);
            std::cerr << docs.size() << " documents -> " << chunks.size() << " chunks\n";
        } else if (*index_cmd) {
            const auto chunks = load_chunks(chunks_path);
            const auto provider = make_embedding_provider(embedder_config(index_embedder, std::nullopt));
            auto built = build_index(chunks, *provider);
            for (const auto& w : built.warnings) std::cerr << "warning: " << w << '\n';
            save_index(built.index, index_out);
            std::cerr << built.index.size() << " vectors of dimension " << built.index.dim() << '\n';
        } else if (*ask) {
            const auto index = load_index(ask_run.index_path);
            const auto kind = parse_pool_mode(ask_run.strategy);
            const auto strategy = strategy_config(ask_run, ask_llm, kind);
            const auto providers = providers_for(index, ask_embedder, ask_llm, ask_run, kind);
            const QuestionRecord record{"ask", "", question, {}};
            const auto result = run_question(record, index, strategy, providers);
            if (ask_json) {
                std::cout << to_json(result).dump(2) << '\n';
            } else {
                if (result.query_pool.degraded) std::cout << "(query generation failed; raw question only)\n";
                std::cout << "queries:\n";
                for (const auto& q : result.query_pool.queries) {
                    std::cout << "  [" << q.ref.instance << "," << q.ref.intent << "] " << q.statement << '\n';
                }
                std::cout << "passages:\n";
                for (std::size_t i = 0; i < result.fused.entries.size(); ++i) {
                    const auto& e = result.fused.entries[i];
                    const auto* meta = index.find(e.chunk_id);
                    std::cout << "  " << i + 1 << ". " << e.chunk_id << "  " << e.score;
                    if (meta) std::cout << "  " << text::truncate_at_word(text::collapse_whitespace(meta->body), 100);
                    std::cout << '\n';
                }
                if (result.generated_answers) {
                    std::cout << "answers:\n";
                    for (const auto& a : *result.generated_answers) std::cout << "  - " << a << '\n';
                }
            }
        } else if (*eval) {
            const auto index = load_index(eval_run.index_path);
            const auto dataset = load_qa_dataset(dataset_path, GoldValidation::deferred);
            const auto kind = parse_pool_mode(eval_run.strategy);
            const auto strategy = strategy_config(eval_run, eval_llm, kind);
            const auto providers = providers_for(index, eval_embedder, eval_llm, eval_run, kind);
            const auto matcher = make_matcher(eval_run.matcher, providers.llm);
            const auto report = run_evaluation(dataset, index, strategy, providers, matcher, {eval_run.workers});
            save_report(report_out, report);
            print_summary(report);
        } else if (*compare) {
            const auto index = load_index(compare_run.index_path);
            const auto dataset = load_qa_dataset(compare_dataset, GoldValidation::deferred);
            std::vector<StrategyRun> runs;
            std::shared_ptr<const LlmClient> judge;
            for (const auto& name : text::split(strategies_arg, ',')) {
                const auto kind = parse_pool_mode(text::trim(name));
                StrategyRun run{strategy_config(compare_run, compare_llm, kind),
                                providers_for(index, compare_embedder, compare_llm, compare_run, kind)};
                if (!judge) judge = run.providers.llm;
                runs.push_back(std::move(run));
            }
            const auto matcher = make_matcher(compare_run.matcher, judge);
            const auto table = compare_strategies(dataset, index, runs, matcher, {compare_run.workers});
            auto out = open_out(compare_out);
            const auto ext = extension_of(compare_out);
            if (ext == ".csv") {
                write_comparison_csv(out, table);
            } else if (ext == ".json") {
                out << to_json(table).dump(2) << '\n';
            } else {
                write_comparison_markdown(out, table);
            }
            for (const auto& row : table.rows) {
                if (row.report) print_summary(*row.report);
                if (row.error) std::cerr << row.strategy << ": " << *row.error << '\n';
            }
        } else if (*sweep_cmd) {
            const auto index = load_index(sweep_run.index_path);
            const auto dataset = load_qa_dataset(sweep_dataset, GoldValidation::deferred);
            const auto kind = parse_pool_mode(sweep_run.strategy);
            const auto strategy = strategy_config(sweep_run, sweep_llm, kind);
            const auto providers = providers_for(index, sweep_embedder, sweep_llm, sweep_run, kind);
            const auto matcher = make_matcher(sweep_run.matcher, providers.llm);
            std::vector<std::size_t> values;
            for (const auto& v : text::split(sweep_values, ',')) {
                const auto t = std::string(text::trim(v));
                std::size_t used = 0;
                unsigned long long parsed = 0;
                try {
                    parsed = std::stoull(t, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (t.empty() || used != t.size() || t.front() == '-') {
                    std::cerr << "--values: \"" << t << "\" is not a positive integer\n";
                    return kExitUsage;
                }
                values.push_back(static_cast<std::size_t>(parsed));
            }
            const auto table = sweep(dataset, index, strategy, providers, parse_sweep_parameter(sweep_param), values,
                                     matcher, {sweep_run.workers});
            auto out = open_out(sweep_out);
            write_sweep_csv(out, table);
        }
        return kExitOk;
    } catch (const ProviderError& e) {
        std::cerr << "provider error: " << e.what() << '\n';
        return kExitProvider;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
