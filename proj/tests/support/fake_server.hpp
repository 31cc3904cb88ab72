// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <httplib.h>

#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

namespace intentrag::testkit {

/// Loopback HTTP server on an ephemeral port, stopped on destruction.
class FakeServer {
public:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    FakeServer(const std::string& path, Handler handler) {
        server_.Post(path, std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw std::runtime_error("cannot bind loopback port");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }
    FakeServer(const FakeServer&) = delete;
    FakeServer& operator=(const FakeServer&) = delete;

    std::string url(const std::string& prefix = "") const {
        return "http://127.0.0.1:" + std::to_string(port_) + prefix;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

} // namespace intentrag::testkit
