// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deepscan/imaging/raster.hpp"

namespace deepscan {

struct Question {
    std::string text;
    /// Multiple-choice options in presentation order; empty for open questions.
    std::vector<std::string> options;
    /// Filled by decompose() the first time it runs.
    std::optional<std::vector<std::string>> decomposed_targets;
};

/// Pixels plus the rectangle they occupy in the source image.
///
/// Real backends only look at the pixels; oracle backends use the frame to
/// relate a crop back to scene ground truth.
struct FramedImage {
    const RasterImage* pixels = nullptr;
    BBox frame;

    static FramedImage whole(const RasterImage& img) { return {&img, img.bounds()}; }
    static FramedImage at(const RasterImage& img, Point origin) {
        return {&img, {origin.x, origin.y, origin.x + img.width(), origin.y + img.height()}};
    }
};

/// Why the LVLM is being queried. Never sent on the wire.
enum class Purpose { Decomposition, EvidenceJudgment, ViewCompleteness, Reasoning };

const char* to_string(Purpose p) noexcept;

struct CompletionRequest {
    std::vector<FramedImage> images;
    std::string prompt;
    std::string system;
    int max_tokens = 50;
    double temperature = 0.0;
    int seed = 13;
    Purpose purpose = Purpose::Reasoning;
};

struct JudgeVerdict {
    bool affirmed = false;
    bool malformed = false;
    std::string rationale;
};

struct GenerationSettings {
    double temperature = 0.0;
    int seed = 13;
    int short_max_tokens = 50;       // decomposition and both judgments
    int reasoning_max_tokens = 1024;
};

// Expert implementations must be safe to call concurrently from many threads.

class SearchExpert {
public:
    virtual ~SearchExpert() = default;
    /// Attention map over the patch, same width/height, finite and >= 0.
    virtual GrayMap search(const FramedImage& patch, const Question& q) const = 0;
};

class VisualExpert {
public:
    virtual ~VisualExpert() = default;
    /// Mask (image-sized) of the object under a point prompt; may be empty.
    virtual BitMask segment(const FramedImage& image, Point point) const = 0;
    /// Boxes in view-local coordinates for objects matching the question.
    virtual std::vector<BBox> detect(const FramedImage& view, const Question& q) const = 0;
};

class LvlmClient {
public:
    virtual ~LvlmClient() = default;
    virtual std::string complete(const CompletionRequest& request) const = 0;
};

struct ExpertBundle {
    std::shared_ptr<const SearchExpert> search;
    std::shared_ptr<const VisualExpert> visual;
    std::shared_ptr<const LvlmClient> lvlm;

    /// Throws InvalidInput if any expert is missing.
    void validate() const;
};

}  // namespace deepscan
