// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/experts/operations.hpp"

#include <cmath>

#include "deepscan/error.hpp"
#include "deepscan/experts/parsing.hpp"
#include "deepscan/experts/prompts.hpp"
#include "deepscan/imaging/geometry.hpp"

namespace deepscan {
namespace {

const RasterImage& pixels_of(const FramedImage& img, const char* op) {
    if (!img.pixels || img.pixels->empty())
        throw InvalidInput(std::string(op) + ": image is empty");
    return *img.pixels;
}

void require_question(const Question& q, const char* op) {
    if (q.text.empty()) throw InvalidInput(std::string(op) + ": question text is empty");
}

}  // namespace

const char* to_string(Purpose p) noexcept {
    switch (p) {
        case Purpose::Decomposition: return "decomposition";
        case Purpose::EvidenceJudgment: return "evidence_judgment";
        case Purpose::ViewCompleteness: return "view_completeness";
        case Purpose::Reasoning: return "reasoning";
    }
    return "unknown";
}

void ExpertBundle::validate() const {
    if (!search || !visual || !lvlm) throw InvalidInput("expert bundle is incomplete");
}

GrayMap search(const SearchExpert& expert, const FramedImage& patch, const Question& q) {
    const auto& img = pixels_of(patch, "search");
    require_question(q, "search");
    GrayMap map = expert.search(patch, q);
    if (map.width() != img.width() || map.height() != img.height())
        throw ProtocolError("search: attention map is " + std::to_string(map.width()) + "x" +
                            std::to_string(map.height()) + ", patch is " +
                            std::to_string(img.width()) + "x" + std::to_string(img.height()));
    for (double v : map.values())
        if (!std::isfinite(v) || v < 0.0)
            throw ProtocolError("search: attention values must be finite and non-negative");
    return map;
}

BitMask segment(const VisualExpert& expert, const FramedImage& image, Point point) {
    const auto& img = pixels_of(image, "segment");
    if (!img.bounds().contains(point)) throw InvalidInput("segment: point outside image");
    BitMask mask = expert.segment(image, point);
    if (mask.width() != img.width() || mask.height() != img.height())
        throw ProtocolError("segment: mask dimensions differ from image");
    return mask;
}

std::vector<BBox> detect(const VisualExpert& expert, const FramedImage& view, const Question& q) {
    const auto& img = pixels_of(view, "detect");
    require_question(q, "detect");
    std::vector<BBox> out;
    for (const BBox& b : expert.detect(view, q)) {
        if (auto clipped = intersect(b, img.bounds())) out.push_back(*clipped);
    }
    return out;
}

const std::vector<std::string>& decompose(const LvlmClient& lvlm, Question& q,
                                          const GenerationSettings& gen) {
    require_question(q, "decompose");
    if (q.decomposed_targets) return *q.decomposed_targets;
    CompletionRequest req;
    req.prompt = prompts::decomposition(q);
    req.system = std::string(prompts::kSystem);
    req.max_tokens = gen.short_max_tokens;
    req.temperature = gen.temperature;
    req.seed = gen.seed;
    req.purpose = Purpose::Decomposition;
    auto parsed = parse_object_list(lvlm.complete(req));
    q.decomposed_targets = parsed ? std::move(*parsed) : std::vector<std::string>{q.text};
    return *q.decomposed_targets;
}

JudgeVerdict judge(const LvlmClient& lvlm, const FramedImage& image, const std::string& prompt,
                   Purpose purpose, const GenerationSettings& gen) {
    pixels_of(image, "judge");
    CompletionRequest req;
    req.images = {image};
    req.prompt = prompt;
    req.system = std::string(prompts::kSystem);
    req.max_tokens = gen.short_max_tokens;
    req.temperature = gen.temperature;
    req.seed = gen.seed;
    req.purpose = purpose;
    return parse_verdict(lvlm.complete(req));
}

std::string answer(const LvlmClient& lvlm, std::span<const FramedImage> images, const Question& q,
                   const GenerationSettings& gen) {
    require_question(q, "answer");
    if (images.empty()) throw InvalidInput("answer: at least one image is required");
    for (const auto& img : images) pixels_of(img, "answer");
    CompletionRequest req;
    req.images.assign(images.begin(), images.end());
    req.prompt = prompts::reasoning(q);
    req.system = std::string(prompts::kSystem);
    req.max_tokens = gen.reasoning_max_tokens;
    req.temperature = gen.temperature;
    req.seed = gen.seed;
    req.purpose = Purpose::Reasoning;
    return lvlm.complete(req);
}

}  // namespace deepscan
