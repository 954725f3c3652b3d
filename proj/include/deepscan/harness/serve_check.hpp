// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace deepscan {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ServeCheckReport {
    std::string url;
    std::vector<CheckResult> checks;

    bool passed() const noexcept;
    nlohmann::json to_json() const;
};

/// Wire-protocol conformance probe against an adapter server: health,
/// schema and dimension echo for every endpoint, RLE run sums, and the
/// {error} shape of 4xx answers to malformed bodies.
ServeCheckReport serve_check(const std::string& url, double timeout_s = 30.0);

}  // namespace deepscan
