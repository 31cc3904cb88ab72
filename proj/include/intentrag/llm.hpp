// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intentrag/http.hpp"

namespace intentrag {

enum class LlmBackend { remote_http, scripted_mock };

std::string_view to_string(LlmBackend backend) noexcept;
LlmBackend parse_llm_backend(std::string_view name);

struct LlmProviderConfig {
    LlmBackend backend = LlmBackend::scripted_mock;
    std::string model_name = "scripted";
    /// Remote only. Empty means LLM_BASE_URL.
    std::string endpoint;
    /// Remote only. Empty means LLM_API_KEY.
    std::string api_key;
    /// Default sampling temperature; individual calls may override it.
    double temperature = 0.0;
    int max_output_tokens = 1024;
    std::size_t max_in_flight = 4;
    std::chrono::seconds timeout{120};
    RetryPolicy retry;
    /// Scripted mock only: prompt hash -> canned response.
    std::map<std::string, std::string> script;

    /// Throws std::invalid_argument when temperature is outside [0, 2] or a
    /// bound is not positive.
    void validate() const;
};

/// backend and model, for fingerprints.
nlohmann::ordered_json describe(const LlmProviderConfig& config);

struct ChatMessage {
    std::string role;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

/// One chat-completion call. `call_kind` names the protocol step
/// ("generate", "decompose", ...; repairs append "_repair"), `subject` is the
/// main variable of the prompt (question or hypothesis text) so scripted
/// backends can answer without knowing prompt hashes.
struct ChatRequest {
    std::string call_kind;
    std::string question_id;
    std::string subject;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_tokens = 1024;
};

/// Canonical text of the messages; what prompt_hash() digests.
std::string prompt_text(const std::vector<ChatMessage>& messages);
std::string prompt_hash(const std::vector<ChatMessage>& messages);

/// Chat-completion contract. Implementations are safe for concurrent calls.
class LlmClient {
public:
    virtual ~LlmClient() = default;

    virtual const LlmProviderConfig& config() const noexcept = 0;
    /// Generated text. Throws ProviderError on transport failure.
    virtual std::string complete(const ChatRequest& request) const = 0;
};

/// Offline backend answering from a script. Lookup order: prompt hash, then
/// (call_kind, subject). A miss raises a non-retryable ProviderError.
class ScriptedLlm final : public LlmClient {
public:
    explicit ScriptedLlm(LlmProviderConfig config = {});

    const LlmProviderConfig& config() const noexcept override { return config_; }
    std::string complete(const ChatRequest& request) const override;

    void add_response(std::string prompt_hash, std::string response);
    void add_keyed_response(std::string call_kind, std::string subject, std::string response);

    /// Reads a JSONL script. Each line carries "response" plus either
    /// "prompt_hash" (transcript lines qualify) or "call_kind" and "subject".
    void load_script(const std::filesystem::path& path);

    std::size_t size() const noexcept { return config_.script.size() + keyed_.size(); }

private:
    LlmProviderConfig config_;
    std::map<std::pair<std::string, std::string>, std::string> keyed_;
};

/// Chat-completions JSON over HTTP: POST {endpoint}/chat/completions with
/// {"model","messages","temperature","max_tokens"}; reads
/// choices[0].message.content.
class RemoteLlm final : public LlmClient {
public:
    explicit RemoteLlm(LlmProviderConfig config);

    const LlmProviderConfig& config() const noexcept override { return config_; }
    std::string complete(const ChatRequest& request) const override;

private:
    LlmProviderConfig config_;
    mutable RequestGate gate_;
};

/// Appends {"question_id","call_kind","prompt_hash","prompt","response",
/// "timestamp"} lines to a transcript file. Thread-safe.
class TranscriptWriter {
public:
    explicit TranscriptWriter(const std::filesystem::path& path);

    void append(const ChatRequest& request, const std::string& response);
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::mutex mutex_;
    std::ofstream out_;
};

/// Forwards to an inner client and records every successful call.
class RecordingLlm final : public LlmClient {
public:
    RecordingLlm(std::shared_ptr<const LlmClient> inner, std::shared_ptr<TranscriptWriter> transcript);

    const LlmProviderConfig& config() const noexcept override { return inner_->config(); }
    std::string complete(const ChatRequest& request) const override;

private:
    std::shared_ptr<const LlmClient> inner_;
    std::shared_ptr<TranscriptWriter> transcript_;
};

/// On-disk response cache keyed by (question id, prompt hash, model, seed),
/// so repeated runs neither re-bill nor re-sample the backend.
class CachingLlm final : public LlmClient {
public:
    CachingLlm(std::shared_ptr<const LlmClient> inner, std::filesystem::path directory, std::uint64_t seed);

    const LlmProviderConfig& config() const noexcept override { return inner_->config(); }
    std::string complete(const ChatRequest& request) const override;

    std::filesystem::path entry_path(const ChatRequest& request) const;

private:
    std::shared_ptr<const LlmClient> inner_;
    std::filesystem::path directory_;
    std::uint64_t seed_;
};

std::shared_ptr<LlmClient> make_llm_client(const LlmProviderConfig& config);

} // namespace intentrag
