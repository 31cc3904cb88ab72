// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "intentrag/http.hpp"

#include <cstdlib>

namespace intentrag {

HttpEndpoint parse_endpoint(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) {
        throw ProviderError("endpoint \"" + std::string(url) + "\" lacks a scheme", false);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    HttpEndpoint ep;
    ep.origin = std::string(url.substr(0, path_start));
    if (path_start != std::string_view::npos) ep.path_prefix = std::string(url.substr(path_start));
    while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
    return ep;
}

std::string post_json(const std::string& endpoint, const std::string& path, const std::string& body,
                      const std::string& bearer_token, std::chrono::seconds timeout) {
    const auto ep = parse_endpoint(endpoint);
    httplib::Client client(ep.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);
    auto res = client.Post(ep.path_prefix + path, headers, body, "application/json");
    if (!res) {
        throw ProviderError("POST " + endpoint + path + " failed: " + httplib::to_string(res.error()), true);
    }
    const int status = res->status;
    if (status >= 200 && status < 300) return res->body;
    const bool retryable = status == 408 || status == 429 || status >= 500;
    throw ProviderError("POST " + endpoint + path + " returned HTTP " + std::to_string(status) + ": " +
                            res->body.substr(0, 200),
                        retryable);
}

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return fallback;
    return v;
}

} // namespace intentrag
