// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "deepscan/experts/wire.hpp"

namespace deepscan {

// Fixtures are JSON files named <endpoint>-<key>.json holding
// {"endpoint", "request", "response"}. The key hashes the endpoint, the
// scalar request fields and the raw pixels of every image, so it does not
// depend on PNG encoder output.

std::uint64_t fixture_key(const wire::Request& req);
std::filesystem::path fixture_path(const std::filesystem::path& dir, const wire::Request& req);

/// Answers requests from recorded fixtures; a miss raises FixtureMissing.
class ReplayTransport final : public wire::Transport {
public:
    explicit ReplayTransport(std::filesystem::path dir);
    nlohmann::json call(const wire::Request& req) const override;

private:
    std::filesystem::path dir_;
};

/// Wraps a bundle and writes one fixture per expert call, keyed exactly as
/// a ReplayTransport will look it up.
class RecordingExperts final : public SearchExpert, public VisualExpert, public LvlmClient {
public:
    RecordingExperts(ExpertBundle inner, std::filesystem::path dir);

    GrayMap search(const FramedImage& patch, const Question& q) const override;
    BitMask segment(const FramedImage& image, Point point) const override;
    std::vector<BBox> detect(const FramedImage& view, const Question& q) const override;
    std::string complete(const CompletionRequest& request) const override;

    static ExpertBundle bundle(ExpertBundle inner, std::filesystem::path dir);

private:
    void store(const wire::Request& req, const nlohmann::json& response) const;

    ExpertBundle inner_;
    std::filesystem::path dir_;
};

/// Runs a decoded wire request against `experts` and returns the response
/// JSON. Throws InvalidInput on a malformed request body.
nlohmann::json serve_request(const ExpertBundle& experts, std::string_view endpoint,
                             const nlohmann::json& body);

ExpertBundle make_replay_experts(const std::filesystem::path& dir);

}  // namespace deepscan
