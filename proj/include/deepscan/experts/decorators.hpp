// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepscan/experts/types.hpp"

namespace deepscan {

struct CallCounts {
    long search = 0;
    long segment = 0;
    long detect = 0;
    long decomposition = 0;
    long evidence_judgment = 0;
    long view_completeness = 0;
    long reasoning = 0;

    nlohmann::json to_json() const;
    friend bool operator==(const CallCounts&, const CallCounts&) = default;
};

/// Counts every call that passes through. One instance per pipeline run.
class CountingExperts final : public SearchExpert, public VisualExpert, public LvlmClient {
public:
    explicit CountingExperts(ExpertBundle inner);

    GrayMap search(const FramedImage& patch, const Question& q) const override;
    BitMask segment(const FramedImage& image, Point point) const override;
    std::vector<BBox> detect(const FramedImage& view, const Question& q) const override;
    std::string complete(const CompletionRequest& request) const override;

    CallCounts counts() const;
    ExpertBundle bundle() const;

private:
    ExpertBundle inner_;
    mutable std::atomic<long> search_{0}, segment_{0}, detect_{0};
    mutable std::array<std::atomic<long>, 4> by_purpose_{};
};

/// Sleeps before forwarding LVLM calls of the listed purposes. Models a slow
/// judge when measuring the effect of the candidate budget.
class DelayedLvlm final : public LvlmClient {
public:
    DelayedLvlm(std::shared_ptr<const LvlmClient> inner, std::vector<Purpose> purposes,
                std::chrono::milliseconds delay);
    std::string complete(const CompletionRequest& request) const override;

private:
    std::shared_ptr<const LvlmClient> inner_;
    std::vector<Purpose> purposes_;
    std::chrono::milliseconds delay_;
};

/// Replies with a constant text to reasoning calls and forwards the rest.
class FixedAnswerLvlm final : public LvlmClient {
public:
    FixedAnswerLvlm(std::shared_ptr<const LvlmClient> inner, std::string text);
    std::string complete(const CompletionRequest& request) const override;

private:
    std::shared_ptr<const LvlmClient> inner_;
    std::string text_;
};

}  // namespace deepscan
