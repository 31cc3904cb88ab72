// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "intentrag/error.hpp"
#include "intentrag/hashing.hpp"
#include "intentrag/text.hpp"

namespace intentrag {

using json = nlohmann::ordered_json;

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("embedding vector must have at least one component");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("embedding vector has a non-finite component");
    }
}

double EmbeddingVector::norm() const noexcept {
    return std::sqrt(dot(values_, values_));
}

bool EmbeddingVector::is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

EmbeddingVector EmbeddingVector::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] / n;
    return EmbeddingVector(std::move(out));
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("cosine_similarity: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()) + ")");
    }
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine_similarity: zero vector");
    return std::clamp(dot(a.values(), b.values()) / (na * nb), -1.0, 1.0);
}

TokenSlot mock_token_slot(std::string_view token, std::size_t dim, std::uint64_t seed) noexcept {
    const std::uint64_t h = mix64(fnv1a64(token) ^ mix64(seed));
    return {static_cast<std::size_t>(h % dim), (h >> 63) != 0 ? -1 : 1};
}

EmbeddingVector mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
    if (dim < 2) throw std::invalid_argument("mock_embed: dim must be at least 2");
    const auto tokens = text::lexical_tokens(text);
    if (tokens.empty()) throw std::invalid_argument("mock_embed: text has no tokens");
    std::vector<double> acc(dim, 0.0);
    for (const auto& token : tokens) {
        const auto slot = mock_token_slot(token, dim, seed);
        acc[slot.position] += slot.sign;
    }
    EmbeddingVector raw(std::move(acc));
    if (raw.is_zero()) throw ContractViolation("mock_embed: token hashes cancel to the zero vector");
    return raw.normalized();
}

std::string_view to_string(EmbeddingBackend backend) noexcept {
    switch (backend) {
    case EmbeddingBackend::remote_http: return "remote_http";
    case EmbeddingBackend::deterministic_mock: return "deterministic_mock";
    }
    return "unknown";
}

EmbeddingBackend parse_embedding_backend(std::string_view name) {
    if (name == "remote_http" || name == "remote") return EmbeddingBackend::remote_http;
    if (name == "deterministic_mock" || name == "mock") return EmbeddingBackend::deterministic_mock;
    throw std::invalid_argument("unknown embedding backend \"" + std::string(name) + "\"");
}

void EmbeddingProviderConfig::validate() const {
    if (dim < 2) throw std::invalid_argument("embedding dim must be at least 2");
    if (max_in_flight == 0 || batch_size == 0) throw std::invalid_argument("embedding bounds must be positive");
}

json describe(const EmbeddingProviderConfig& config) {
    json j{{"backend", to_string(config.backend)}, {"model", config.model_name}, {"dim", config.dim}};
    if (config.backend == EmbeddingBackend::deterministic_mock) {
        j["seed"] = config.seed;
    } else {
        j["endpoint"] = config.endpoint;
    }
    return j;
}

EmbeddingProviderConfig embedding_config_from_json(const json& j) {
    EmbeddingProviderConfig c;
    if (j.contains("backend")) c.backend = parse_embedding_backend(j.at("backend").get<std::string>());
    if (j.contains("model")) c.model_name = j.at("model").get<std::string>();
    if (j.contains("dim")) c.dim = j.at("dim").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("endpoint")) c.endpoint = j.at("endpoint").get<std::string>();
    return c;
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(std::span<const std::string> texts) const {
    if (texts.empty()) throw std::invalid_argument("embed_batch: no texts");
    for (const auto& t : texts) {
        if (text::trim(t).empty()) throw std::invalid_argument("embed_batch: blank text");
    }
    auto out = embed_checked(texts);
    if (out.size() != texts.size()) {
        throw ContractViolation("embedding backend returned " + std::to_string(out.size()) + " vectors for " +
                                std::to_string(texts.size()) + " inputs");
    }
    return out;
}

EmbeddingVector EmbeddingProvider::embed(const std::string& text) const {
    return embed_batch(std::span<const std::string>(&text, 1)).front();
}

MockEmbeddingProvider::MockEmbeddingProvider(EmbeddingProviderConfig config) : config_(std::move(config)) {
    config_.backend = EmbeddingBackend::deterministic_mock;
    config_.validate();
}

std::vector<EmbeddingVector> MockEmbeddingProvider::embed_checked(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(mock_embed(t, config_.dim, config_.seed));
    return out;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(EmbeddingProviderConfig config)
    : config_(std::move(config)), gate_(config_.max_in_flight) {
    config_.backend = EmbeddingBackend::remote_http;
    if (config_.endpoint.empty()) config_.endpoint = env_or("EMBED_BASE_URL", "");
    if (config_.api_key.empty()) config_.api_key = env_or("EMBED_API_KEY", "");
    config_.validate();
    if (config_.endpoint.empty()) throw std::invalid_argument("remote embedder needs an endpoint (EMBED_BASE_URL)");
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_checked(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); i += config_.batch_size) {
        auto batch = texts.subspan(i, std::min(config_.batch_size, texts.size() - i));
        auto part = request(batch);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::request(std::span<const std::string> texts) const {
    json body{{"model", config_.model_name}, {"input", json::array()}};
    for (const auto& t : texts) body["input"].push_back(t);
    const std::string payload = body.dump();

    const std::string response = with_retries(config_.retry, [&] {
        RequestGate::Permit permit(gate_);
        return post_json(config_.endpoint, "/embeddings", payload, config_.api_key, config_.timeout);
    });

    json parsed;
    try {
        parsed = json::parse(response);
    } catch (const json::parse_error& e) {
        throw ContractViolation(std::string("embedding response is not JSON: ") + e.what());
    }
    std::vector<json> rows;
    if (parsed.is_object() && parsed.contains("data") && parsed["data"].is_array()) {
        std::vector<std::pair<std::size_t, json>> indexed;
        for (std::size_t i = 0; i < parsed["data"].size(); ++i) {
            const auto& item = parsed["data"][i];
            if (!item.is_object() || !item.contains("embedding")) {
                throw ContractViolation("embedding response item lacks \"embedding\"");
            }
            const std::size_t pos = item.contains("index") ? item["index"].get<std::size_t>() : i;
            indexed.emplace_back(pos, item["embedding"]);
        }
        std::stable_sort(indexed.begin(), indexed.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [pos, row] : indexed) rows.push_back(std::move(row));
    } else if (parsed.is_object() && parsed.contains("embeddings") && parsed["embeddings"].is_array()) {
        for (const auto& row : parsed["embeddings"]) rows.push_back(row);
    } else {
        throw ContractViolation("embedding response has neither \"data\" nor \"embeddings\"");
    }
    if (rows.size() != texts.size()) {
        throw ContractViolation("embedding backend returned " + std::to_string(rows.size()) + " vectors for " +
                                std::to_string(texts.size()) + " inputs");
    }

    std::vector<EmbeddingVector> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (!row.is_array()) throw ContractViolation("embedding row is not an array");
        if (row.size() != config_.dim) {
            throw ContractViolation("embedding backend returned dim " + std::to_string(row.size()) +
                                    " but the configuration says " + std::to_string(config_.dim));
        }
        std::vector<double> values;
        values.reserve(row.size());
        for (const auto& v : row) {
            if (!v.is_number()) throw ContractViolation("embedding component is not a number");
            values.push_back(v.get<double>());
        }
        try {
            out.push_back(EmbeddingVector(std::move(values)).normalized());
        } catch (const std::invalid_argument& e) {
            throw ContractViolation(std::string("embedding backend returned an invalid vector: ") + e.what());
        }
    }
    return out;
}

std::shared_ptr<EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& config) {
    switch (config.backend) {
    case EmbeddingBackend::deterministic_mock: return std::make_shared<MockEmbeddingProvider>(config);
    case EmbeddingBackend::remote_http: return std::make_shared<RemoteEmbeddingProvider>(config);
    }
    throw std::invalid_argument("unknown embedding backend");
}

} // namespace intentrag
