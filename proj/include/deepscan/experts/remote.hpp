// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "deepscan/experts/wire.hpp"

namespace deepscan {

struct RemoteEndpoint {
    std::string host;
    int port = 80;
    std::string prefix;  // path before /v1, without trailing slash

    /// Parses http://host[:port][/prefix]. Throws InvalidInput otherwise.
    static RemoteEndpoint parse(const std::string& url);
    std::string url() const;
};

/// Plain-HTTP transport. Opens a fresh connection per call, so concurrent
/// calls never share client state.
class HttpTransport final : public wire::Transport {
public:
    explicit HttpTransport(RemoteEndpoint endpoint, double timeout_seconds = 120.0);

    nlohmann::json call(const wire::Request& req) const override;

    /// Raw POST used by the conformance probe; returns (status, body).
    std::pair<int, std::string> post_raw(const std::string& path, const std::string& body) const;
    std::pair<int, std::string> get_raw(const std::string& path) const;

    const RemoteEndpoint& endpoint() const noexcept { return endpoint_; }

private:
    RemoteEndpoint endpoint_;
    double timeout_seconds_;
};

ExpertBundle make_remote_experts(const std::string& url, double timeout_seconds = 120.0);

}  // namespace deepscan
