// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic corpus with known evidence locations, plus scripted LLM
// responses for it. Five planted drug documents, each one chunk holding the
// three statements about that drug; 195 distractors built from question
// words, one statement template's vocabulary and pseudo-word filler.

#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "intentrag/corpus.hpp"
#include "intentrag/embedding.hpp"
#include "intentrag/llm.hpp"
#include "intentrag/vector_index.hpp"

namespace intentrag::testkit {

struct PlantedDrug {
    std::string name;
    std::string molecule;
    std::string target;
    std::string effect_a;
    std::string effect_b;

    std::string doc_id() const;
    std::string chunk_id() const;
    /// Use, active molecule, adverse reactions.
    std::array<std::string, 3> statements() const;
    std::string hypothesis() const;
};

const std::vector<PlantedDrug>& planted_drugs();

inline constexpr const char* kMultiIntentQuestion =
    "What drugs can treat Alzheimer's disease and what are their active molecule and side effects?";
inline constexpr const char* kMultiIntentId = "alz-multi";

struct PlantedSuite {
    std::vector<Document> documents;
    std::vector<Chunk> chunks;
    /// kMultiIntentId first, then one single-drug question per planted drug.
    std::vector<QuestionRecord> questions;
    EmbeddingProviderConfig embedder;
};

PlantedSuite make_planted_suite();

std::shared_ptr<const EmbeddingProvider> planted_embedder(const PlantedSuite& suite);
/// Index over every suite chunk, built with planted_embedder().
VectorIndex planted_index(const PlantedSuite& suite);

/// Keyed responses for every generation and decomposition call of the suite,
/// and a fixed answer list per question.
void script_planted_suite(ScriptedLlm& llm, const PlantedSuite& suite);
/// The same responses as JSONL for --llm-script.
void write_planted_script(const std::filesystem::path& path, const PlantedSuite& suite);

/// Delegates everything except answer synthesis, which it answers by listing
/// the planted drug names present in the prompt's passages.
class ExtractiveAnswerLlm final : public LlmClient {
public:
    explicit ExtractiveAnswerLlm(std::shared_ptr<const LlmClient> inner) : inner_(std::move(inner)) {}

    const LlmProviderConfig& config() const noexcept override { return inner_->config(); }
    std::string complete(const ChatRequest& request) const override;

private:
    std::shared_ptr<const LlmClient> inner_;
};

/// Scripted client for the suite with extractive answers.
std::shared_ptr<const LlmClient> planted_llm(const PlantedSuite& suite);

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace intentrag::testkit
