// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "intentrag/error.hpp"

namespace intentrag {

/// Bounded exponential backoff for retryable provider errors.
struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    double multiplier = 2.0;
};

/// Runs fn until it returns, retrying on ProviderError::retryable() up to
/// policy.max_attempts attempts. The last error is rethrown.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
    auto backoff = policy.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            return fn();
        } catch (const ProviderError& e) {
            if (!e.retryable() || attempt >= policy.max_attempts) throw;
        }
        std::this_thread::sleep_for(backoff);
        backoff = std::chrono::milliseconds(
            static_cast<std::chrono::milliseconds::rep>(static_cast<double>(backoff.count()) * policy.multiplier));
    }
}

/// Caps the number of concurrent requests a provider has in flight.
class RequestGate {
public:
    explicit RequestGate(std::size_t max_in_flight) : available_(max_in_flight == 0 ? 1 : max_in_flight) {}

    class Permit {
    public:
        explicit Permit(RequestGate& gate) : gate_(gate) { gate_.acquire(); }
        ~Permit() { gate_.release(); }
        Permit(const Permit&) = delete;
        Permit& operator=(const Permit&) = delete;

    private:
        RequestGate& gate_;
    };

private:
    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [this] { return available_ > 0; });
        --available_;
    }
    void release() {
        {
            std::lock_guard lock(mutex_);
            ++available_;
        }
        cv_.notify_one();
    }

    std::mutex mutex_;
    std::condition_variable cv_;
    std::size_t available_;
};

/// Splits "http://host:port/v1" into the origin and the path prefix "/v1".
struct HttpEndpoint {
    std::string origin;
    std::string path_prefix;
};

HttpEndpoint parse_endpoint(std::string_view url);

/// POSTs a JSON body to endpoint + path and returns the response body.
/// Connection failures, 408, 429 and 5xx raise a retryable ProviderError;
/// other non-2xx statuses raise a non-retryable one.
std::string post_json(const std::string& endpoint, const std::string& path, const std::string& body,
                      const std::string& bearer_token, std::chrono::seconds timeout);

/// Value of an environment variable, or fallback when unset or empty.
std::string env_or(const char* name, std::string fallback);

} // namespace intentrag
