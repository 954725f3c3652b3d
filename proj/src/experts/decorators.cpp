// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/experts/decorators.hpp"

#include <algorithm>
#include <thread>

#include "deepscan/error.hpp"

namespace deepscan {

nlohmann::json CallCounts::to_json() const {
    return {{"search", search},
            {"segment", segment},
            {"detect", detect},
            {"decomposition", decomposition},
            {"evidence_judgment", evidence_judgment},
            {"view_completeness", view_completeness},
            {"reasoning", reasoning}};
}

CountingExperts::CountingExperts(ExpertBundle inner) : inner_(std::move(inner)) {
    inner_.validate();
}

GrayMap CountingExperts::search(const FramedImage& patch, const Question& q) const {
    ++search_;
    return inner_.search->search(patch, q);
}

BitMask CountingExperts::segment(const FramedImage& image, Point point) const {
    ++segment_;
    return inner_.visual->segment(image, point);
}

std::vector<BBox> CountingExperts::detect(const FramedImage& view, const Question& q) const {
    ++detect_;
    return inner_.visual->detect(view, q);
}

std::string CountingExperts::complete(const CompletionRequest& request) const {
    ++by_purpose_[static_cast<std::size_t>(request.purpose)];
    return inner_.lvlm->complete(request);
}

CallCounts CountingExperts::counts() const {
    CallCounts c;
    c.search = search_;
    c.segment = segment_;
    c.detect = detect_;
    c.decomposition = by_purpose_[static_cast<std::size_t>(Purpose::Decomposition)];
    c.evidence_judgment = by_purpose_[static_cast<std::size_t>(Purpose::EvidenceJudgment)];
    c.view_completeness = by_purpose_[static_cast<std::size_t>(Purpose::ViewCompleteness)];
    c.reasoning = by_purpose_[static_cast<std::size_t>(Purpose::Reasoning)];
    return c;
}

ExpertBundle CountingExperts::bundle() const {
    // Non-owning aliases: the counter must outlive the bundle it hands out.
    std::shared_ptr<const CountingExperts> self(std::shared_ptr<const CountingExperts>{}, this);
    return {self, self, self};
}

DelayedLvlm::DelayedLvlm(std::shared_ptr<const LvlmClient> inner, std::vector<Purpose> purposes,
                         std::chrono::milliseconds delay)
    : inner_(std::move(inner)), purposes_(std::move(purposes)), delay_(delay) {
    if (!inner_) throw InvalidInput("delayed lvlm needs an inner client");
}

std::string DelayedLvlm::complete(const CompletionRequest& request) const {
    if (std::find(purposes_.begin(), purposes_.end(), request.purpose) != purposes_.end())
        std::this_thread::sleep_for(delay_);
    return inner_->complete(request);
}

FixedAnswerLvlm::FixedAnswerLvlm(std::shared_ptr<const LvlmClient> inner, std::string text)
    : inner_(std::move(inner)), text_(std::move(text)) {
    if (!inner_) throw InvalidInput("fixed-answer lvlm needs an inner client");
}

std::string FixedAnswerLvlm::complete(const CompletionRequest& request) const {
    if (request.purpose == Purpose::Reasoning) return text_;
    return inner_->complete(request);
}

}  // namespace deepscan
