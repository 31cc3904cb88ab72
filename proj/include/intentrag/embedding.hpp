// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intentrag/http.hpp"

namespace intentrag {

/// Dense embedding. Values are finite; dim() >= 1.
class EmbeddingVector {
public:
    EmbeddingVector() = default;
    /// Throws std::invalid_argument on an empty or non-finite input.
    explicit EmbeddingVector(std::vector<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    double norm() const noexcept;
    bool is_zero() const noexcept;

    /// Unit-length copy. Throws std::invalid_argument for the zero vector.
    EmbeddingVector normalized() const;

    bool operator==(const EmbeddingVector&) const = default;

private:
    std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// dot(a,b) / (|a||b|), clamped to [-1, 1]. Throws std::invalid_argument on
/// dimension mismatch or a zero vector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// Token-hash bag of words: every lowercase token of `text` is hashed with
/// `seed` to a (position, sign) pair, signed counts are accumulated and the
/// result is L2-normalized. Bit-stable across platforms for fixed inputs.
/// Throws std::invalid_argument when dim < 2 or `text` has no tokens, and
/// ContractViolation when the signed counts cancel out to zero.
EmbeddingVector mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

/// (position, sign) that mock_embed assigns to an already-lowercased token.
struct TokenSlot {
    std::size_t position;
    int sign;
};
TokenSlot mock_token_slot(std::string_view token, std::size_t dim, std::uint64_t seed) noexcept;

enum class EmbeddingBackend { remote_http, deterministic_mock };

std::string_view to_string(EmbeddingBackend backend) noexcept;
EmbeddingBackend parse_embedding_backend(std::string_view name);

struct EmbeddingProviderConfig {
    EmbeddingBackend backend = EmbeddingBackend::deterministic_mock;
    std::string model_name = "hash-bow-v1";
    std::size_t dim = 256;
    /// Remote only. Empty means EMBED_BASE_URL.
    std::string endpoint;
    /// Remote only. Empty means EMBED_API_KEY.
    std::string api_key;
    /// Mock only.
    std::uint64_t seed = 0;
    std::size_t max_in_flight = 8;
    std::size_t batch_size = 64;
    std::chrono::seconds timeout{60};
    RetryPolicy retry;

    /// Throws std::invalid_argument when dim < 2 or a bound is zero.
    void validate() const;
};

/// Identity of an embedder as stored next to an index and hashed into report
/// fingerprints: backend, model, dim, seed, endpoint. Never credentials.
nlohmann::ordered_json describe(const EmbeddingProviderConfig& config);

/// Inverse of describe(); fields absent from `j` keep their defaults.
EmbeddingProviderConfig embedding_config_from_json(const nlohmann::ordered_json& j);

/// Text-to-vector contract. Implementations are safe for concurrent calls and
/// always return L2-normalized vectors of dimension dim().
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual const EmbeddingProviderConfig& config() const noexcept = 0;
    std::size_t dim() const noexcept { return config().dim; }

    /// One vector per text, same order. Throws std::invalid_argument when
    /// `texts` is empty or any text is blank.
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const;
    EmbeddingVector embed(const std::string& text) const;

protected:
    virtual std::vector<EmbeddingVector> embed_checked(std::span<const std::string> texts) const = 0;
};

class MockEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit MockEmbeddingProvider(EmbeddingProviderConfig config);

    const EmbeddingProviderConfig& config() const noexcept override { return config_; }

protected:
    std::vector<EmbeddingVector> embed_checked(std::span<const std::string> texts) const override;

private:
    EmbeddingProviderConfig config_;
};

/// Embeddings-style JSON over HTTP: POST {endpoint}/embeddings with
/// {"model","input":[...]}. Accepts {"data":[{"embedding":[...]}]} and
/// {"embeddings":[[...]]} responses.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(EmbeddingProviderConfig config);

    const EmbeddingProviderConfig& config() const noexcept override { return config_; }

protected:
    std::vector<EmbeddingVector> embed_checked(std::span<const std::string> texts) const override;

private:
    std::vector<EmbeddingVector> request(std::span<const std::string> texts) const;

    EmbeddingProviderConfig config_;
    mutable RequestGate gate_;
};

std::shared_ptr<EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& config);

} // namespace intentrag
