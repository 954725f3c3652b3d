// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepscan/experts/types.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/scanning/scanning.hpp"

namespace deepscan {

struct RefocusConfig {
    double scale_s = 1.5;
    int detect_pad = 28;
    int workers = 1;  // threads for the reward judgments

    void validate() const;
};

struct View {
    BBox bbox;
    RasterImage crop;
    std::string tag;  // V1..V4, or a lattice path such as In(Out(V1))
    double reward = 0.0;
    bool affirmed = false;
    std::optional<Extent> extent;  // sub-pixel box, set by zoom_out
};

/// V1: crop of the box enclosing all evidence. Throws PreconditionError
/// when `evidence` is empty.
View init_view(std::span<const EvidenceItem> evidence, const RasterImage& image);

/// Crops to the padded union of detections inside the view; returns the
/// view unchanged when nothing is detected.
View zoom_in(const View& view, const RasterImage& image, const Question& q, const VisualExpert& visual,
             const RefocusConfig& cfg);

/// Scales the view about its center and clips it to the image. The
/// unrounded extent is kept so that Out(Out(V, a), b) = Out(V, a * b).
View zoom_out(const View& view, double s, const RasterImage& image);

/// (H*W)/(h*w) if the view is judged to contain every target, else 0.
/// Updates view.reward and view.affirmed.
double reward(View& view, std::span<const std::string> targets, const LvlmClient& lvlm,
              const RasterImage& image, const GenerationSettings& gen);

struct RefocusResult {
    std::vector<View> views;  // traversal order
    std::size_t chosen = 0;   // index into views
    int search_length = 0;    // 1-based position of the chosen view

    const View& best() const { return views.at(chosen); }
    nlohmann::json to_json() const;
};

/// Pruned search over V1 = init, V2 = In(V1), V3 = Out(V1, s), V4 = In(V3).
/// Exactly four judgments; ties go to the earliest view.
RefocusResult refocus(const RasterImage& image, const Question& q, std::span<const std::string> targets,
                      std::span<const EvidenceItem> evidence, const ExpertBundle& experts,
                      const RefocusConfig& cfg, const GenerationSettings& gen);

/// Breadth-first enumeration of all seven states reachable from V1 in at
/// most two In/Out moves, scored exhaustively.
RefocusResult exhaustive_depth2(const RasterImage& image, const Question& q,
                                std::span<const std::string> targets,
                                std::span<const EvidenceItem> evidence, const ExpertBundle& experts,
                                const RefocusConfig& cfg, const GenerationSettings& gen);

}  // namespace deepscan
