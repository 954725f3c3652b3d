// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepscan/experts/decorators.hpp"
#include "deepscan/experts/types.hpp"
#include "deepscan/refocusing/refocusing.hpp"
#include "deepscan/scanning/scanning.hpp"

namespace deepscan {

struct PipelineConfig {
    ScanConfig scan;
    RefocusConfig refocus;
    GenerationSettings gen;
    bool record_timing = false;  // timing makes traces non-reproducible

    void validate() const;
};

/// Where each memory image came from.
struct MemoryProvenance {
    std::vector<BBox> fine;  // evidence boxes, discovery order
    BBox coarse;
    std::string coarse_tag;  // V1..V4, or "full" for the fallback
    bool fallback = false;

    nlohmann::json to_json() const;
    static MemoryProvenance from_json(const nlohmann::json& j);
    friend bool operator==(const MemoryProvenance&, const MemoryProvenance&) = default;
};

struct HybridMemory {
    std::vector<RasterImage> fine_crops;
    RasterImage coarse_view;
    MemoryProvenance provenance;

    /// Fine crops in order, then the coarse view. The images point into
    /// this memory, which must outlive the returned list.
    std::vector<FramedImage> prompt_images() const;
    std::size_t size() const noexcept { return fine_crops.size() + 1; }
};

/// Fine crops from `evidence` plus V*; with no evidence, just the full image.
HybridMemory build_memory(std::span<const EvidenceItem> evidence, const View* v_star,
                          const RasterImage& image);

std::string reason(const HybridMemory& memory, const Question& q, const LvlmClient& lvlm,
                   const GenerationSettings& gen);

struct StageTiming {
    double scan_ms = 0, refocus_ms = 0, reason_ms = 0, total_ms = 0;
};

struct RunTrace {
    std::string question;
    std::vector<std::string> options;
    std::vector<std::string> targets;
    nlohmann::json scan;     // null when the scan did not finish
    nlohmann::json refocus;  // null when skipped
    std::optional<MemoryProvenance> memory;
    bool fallback = false;
    std::string answer;
    std::optional<char> letter;
    std::optional<BBox> grounding;
    CallCounts calls;
    std::optional<StageTiming> timing;
    std::optional<std::string> error_kind;
    std::optional<std::string> error_message;

    /// Keys come out sorted, so identical runs serialize byte-identically.
    nlohmann::json to_json() const;
};

struct RunResult {
    std::string answer;
    std::optional<char> letter;
    std::vector<EvidenceItem> evidence;
    std::optional<View> v_star;
    /// Box enclosing the affirmed evidence and the chosen view.
    std::optional<BBox> grounding;
    RunTrace trace;

    bool ok() const noexcept { return !trace.error_kind.has_value(); }
};

/// Scan, refocus when there is evidence, build memory, reason. Expert
/// failures are caught and reported through trace.error_*.
RunResult run_pipeline(const RasterImage& image, Question q, const ExpertBundle& experts,
                       const PipelineConfig& cfg);

}  // namespace deepscan
