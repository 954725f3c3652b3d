// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "deepscan/experts/types.hpp"

namespace httplib {
class Server;
}

namespace deepscan::testing {

/// In-process HTTP adapter speaking the wire protocol over an expert
/// bundle. Listens on 127.0.0.1 with an ephemeral port.
class StubServer {
public:
    explicit StubServer(ExpertBundle experts, std::size_t max_body = 16u << 20);
    ~StubServer();
    StubServer(const StubServer&) = delete;
    StubServer& operator=(const StubServer&) = delete;

    std::string url() const;
    int port() const noexcept { return port_; }
    long requests() const noexcept { return requests_.load(); }

private:
    ExpertBundle experts_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<long> requests_{0};
};

}  // namespace deepscan::testing
