// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/llm.hpp"

#include <atomic>
#include <ctime>
#include <stdexcept>

#include "intentrag/error.hpp"
#include "intentrag/hashing.hpp"

namespace intentrag {

using json = nlohmann::ordered_json;

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string_view to_string(LlmBackend backend) noexcept {
    switch (backend) {
    case LlmBackend::remote_http: return "remote_http";
    case LlmBackend::scripted_mock: return "scripted_mock";
    }
    return "unknown";
}

LlmBackend parse_llm_backend(std::string_view name) {
    if (name == "remote_http" || name == "remote") return LlmBackend::remote_http;
    if (name == "scripted_mock" || name == "mock") return LlmBackend::scripted_mock;
    throw std::invalid_argument("unknown LLM backend \"" + std::string(name) + "\"");
}

void LlmProviderConfig::validate() const {
    if (!(temperature >= 0.0 && temperature <= 2.0)) throw std::invalid_argument("temperature must lie in [0, 2]");
    if (max_output_tokens <= 0) throw std::invalid_argument("max_output_tokens must be positive");
    if (max_in_flight == 0) throw std::invalid_argument("max_in_flight must be positive");
}

json describe(const LlmProviderConfig& config) {
    return json{{"backend", to_string(config.backend)}, {"model", config.model_name}};
}

std::string prompt_text(const std::vector<ChatMessage>& messages) {
    std::string out;
    for (const auto& m : messages) {
        out.append("<|").append(m.role).append("|>\n").append(m.content).append("\n");
    }
    return out;
}

std::string prompt_hash(const std::vector<ChatMessage>& messages) {
    return sha256_hex(prompt_text(messages));
}

ScriptedLlm::ScriptedLlm(LlmProviderConfig config) : config_(std::move(config)) {
    config_.backend = LlmBackend::scripted_mock;
    config_.validate();
}

std::string ScriptedLlm::complete(const ChatRequest& request) const {
    if (!config_.script.empty()) {
        if (auto it = config_.script.find(prompt_hash(request.messages)); it != config_.script.end()) {
            return it->second;
        }
    }
    if (auto it = keyed_.find({request.call_kind, request.subject}); it != keyed_.end()) return it->second;
    throw ProviderError("scripted LLM has no response for " + request.call_kind + " call (question \"" +
                            request.question_id + "\")",
                        false);
}

void ScriptedLlm::add_response(std::string hash, std::string response) {
    config_.script.insert_or_assign(std::move(hash), std::move(response));
}

void ScriptedLlm::add_keyed_response(std::string call_kind, std::string subject, std::string response) {
    keyed_.insert_or_assign({std::move(call_kind), std::move(subject)}, std::move(response));
}

void ScriptedLlm::load_script(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open LLM script " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON in LLM script: ") + e.what(), line_no);
        }
        if (!j.is_object() || !j.contains("response") || !j["response"].is_string()) {
            throw ParseError("LLM script line lacks a string \"response\"", line_no);
        }
        auto response = j["response"].get<std::string>();
        if (j.contains("prompt_hash") && j["prompt_hash"].is_string()) {
            add_response(j["prompt_hash"].get<std::string>(), std::move(response));
        } else if (j.contains("call_kind") && j.contains("subject")) {
            add_keyed_response(j["call_kind"].get<std::string>(), j["subject"].get<std::string>(),
                               std::move(response));
        } else {
            throw ParseError("LLM script line needs \"prompt_hash\" or \"call_kind\" + \"subject\"", line_no);
        }
    }
}

RemoteLlm::RemoteLlm(LlmProviderConfig config) : config_(std::move(config)), gate_(config_.max_in_flight) {
    config_.backend = LlmBackend::remote_http;
    if (config_.endpoint.empty()) config_.endpoint = env_or("LLM_BASE_URL", "");
    if (config_.api_key.empty()) config_.api_key = env_or("LLM_API_KEY", "");
    config_.validate();
    if (config_.endpoint.empty()) throw std::invalid_argument("remote LLM needs an endpoint (LLM_BASE_URL)");
}

std::string RemoteLlm::complete(const ChatRequest& request) const {
    json body{{"model", config_.model_name}, {"messages", json::array()}};
    for (const auto& m : request.messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    const std::string payload = body.dump();

    const std::string response = with_retries(config_.retry, [&] {
        RequestGate::Permit permit(gate_);
        return post_json(config_.endpoint, "/chat/completions", payload, config_.api_key, config_.timeout);
    });
    try {
        const auto j = json::parse(response);
        if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
            const auto& choice = j["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content") &&
                choice["message"]["content"].is_string()) {
                return choice["message"]["content"].get<std::string>();
            }
            if (choice.contains("text") && choice["text"].is_string()) return choice["text"].get<std::string>();
        }
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("chat completion response is not valid JSON: ") + e.what());
    }
    throw ContractViolation("chat completion response has no choices[0].message.content");
}

TranscriptWriter::TranscriptWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::app) {
    if (!out_) throw ValidationError("cannot open transcript " + path.string());
}

void TranscriptWriter::append(const ChatRequest& request, const std::string& response) {
    json j{{"question_id", request.question_id},
           {"call_kind", request.call_kind},
           {"prompt_hash", prompt_hash(request.messages)},
           {"prompt", prompt_text(request.messages)},
           {"response", response},
           {"timestamp", utc_timestamp()}};
    const std::string line = j.dump();
    std::lock_guard lock(mutex_);
    out_ << line << '\n';
    out_.flush();
}

RecordingLlm::RecordingLlm(std::shared_ptr<const LlmClient> inner, std::shared_ptr<TranscriptWriter> transcript)
    : inner_(std::move(inner)), transcript_(std::move(transcript)) {}

std::string RecordingLlm::complete(const ChatRequest& request) const {
    auto response = inner_->complete(request);
    transcript_->append(request, response);
    return response;
}

CachingLlm::CachingLlm(std::shared_ptr<const LlmClient> inner, std::filesystem::path directory, std::uint64_t seed)
    : inner_(std::move(inner)), directory_(std::move(directory)), seed_(seed) {
    std::filesystem::create_directories(directory_);
}

std::filesystem::path CachingLlm::entry_path(const ChatRequest& request) const {
    const std::string key = request.question_id + '\n' + prompt_hash(request.messages) + '\n' +
                            inner_->config().model_name + '\n' + std::to_string(seed_);
    return directory_ / (sha256_hex(key) + ".json");
}

std::string CachingLlm::complete(const ChatRequest& request) const {
    const auto path = entry_path(request);
    if (std::ifstream in(path, std::ios::binary); in) {
        try {
            const auto j = json::parse(in);
            return j.at("response").get<std::string>();
        } catch (const json::exception&) {
            // unreadable entry: fall through and overwrite it
        }
    }
    auto response = inner_->complete(request);
    static std::atomic<std::uint64_t> counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << json{{"call_kind", request.call_kind}, {"response", response}}.dump() << '\n';
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
    return response;
}

std::shared_ptr<LlmClient> make_llm_client(const LlmProviderConfig& config) {
    switch (config.backend) {
    case LlmBackend::scripted_mock: return std::make_shared<ScriptedLlm>(config);
    case LlmBackend::remote_http: return std::make_shared<RemoteLlm>(config);
    }
    throw std::invalid_argument("unknown LLM backend");
}

} // namespace intentrag
