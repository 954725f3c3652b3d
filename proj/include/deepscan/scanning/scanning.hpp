// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepscan/experts/types.hpp"
#include "deepscan/imaging/components.hpp"
#include "deepscan/imaging/raster.hpp"

namespace deepscan {

/// How a cue is reduced to a single point prompt.
enum class ProxyRule {
    Fused,          // argmax of normalized attention x normalized boundary distance
    Centroid,       // rounded pixel centroid, may fall outside the cue
    Chebyshev,      // deepest pixel (max boundary distance)
    AttentionPeak,  // max attention
};

const char* to_string(ProxyRule r) noexcept;
/// Throws InvalidInput on an unknown name.
ProxyRule proxy_rule_from_string(const std::string& name);

struct ScanConfig {
    int tau_area = 50;
    double theta_iou = 0.3;
    std::optional<int> k = 10;  // nullopt: no candidate budget
    int patch_single = 576;
    int patch_multi = 768;
    int close_kernel = 5;
    int dilate_radius = 20;
    int min_tile = 32;
    ProxyRule proxy_rule = ProxyRule::Fused;
    bool one_shot = false;  // single image-level cue exploration, no partition
    int workers = 1;        // threads for cue exploration and judging

    /// Throws InvalidInput when a field is out of range.
    void validate() const;
};

struct Patch {
    RasterImage pixels;
    Point offset;

    BBox bounds() const {
        return {offset.x, offset.y, offset.x + pixels.width(), offset.y + pixels.height()};
    }
};

struct Proxy {
    Point point;  // image coordinates
    double score = 0.0;
    int source_patch = 0;
};

struct EvidenceItem {
    BBox bbox;
    RasterImage crop;
    long long mask_area = 0;  // pixels in the dilated mask
    bool affirmed = false;
};

struct ExtractionStep {
    int proxy = 0;             // index into the processing order
    std::string status;        // kept | duplicate | empty | visited
    std::optional<BBox> bbox;  // bbox of the dilated mask when segmented
    long long mask_area = 0;
};

struct ScanTrace {
    int patch_size = 0;
    bool one_shot = false;
    std::vector<BBox> patches;
    std::vector<Proxy> proxies;  // processing order
    std::vector<ExtractionStep> extraction;
    std::vector<BBox> candidates;
    std::vector<JudgeVerdict> verdicts;  // parallel to candidates

    nlohmann::json to_json() const;
};

struct ScanResult {
    std::vector<EvidenceItem> evidence;  // affirmed candidates in judged order
    std::vector<EvidenceItem> all;       // every kept item, discovery order
    std::vector<EvidenceItem> candidates;  // judged items with their verdicts
    BitMask visited;
    int judge_calls = 0;
    ScanTrace trace;
};

/// Runs decomposition (cached on q) and picks the patch side from the
/// number of targets.
int select_patch_size(Question& q, const LvlmClient& lvlm, const ScanConfig& cfg,
                      const GenerationSettings& gen);

/// Tiles of side l in raster order. Edge remainders keep their size, except
/// that one thinner than min_tile is merged into the neighbouring tile.
std::vector<Patch> partition(const RasterImage& image, int l, int min_tile = 32);
std::vector<BBox> partition_boxes(int width, int height, int l, int min_tile = 32);

/// One proxy point for a cue. `attention` is the patch map already
/// min-max normalized to [0, 1]. Returned point is patch-local.
Proxy select_proxy(const Component& cue, const GrayMap& attention, ProxyRule rule);

/// Attention search on one patch, Otsu binarization, cue filtering by area
/// and proxy selection. Proxies come back in image coordinates.
std::vector<Proxy> explore_cues(const Patch& patch, int patch_index, const Question& q,
                                const SearchExpert& search, const ScanConfig& cfg);

struct ExtractionResult {
    std::vector<EvidenceItem> items;
    BitMask visited;
    std::vector<Proxy> order;
    std::vector<ExtractionStep> steps;
};

/// Greedy evidence extraction with the visited mask and IoU dedup.
ExtractionResult extract_evidence(const RasterImage& image, std::vector<Proxy> proxies,
                                  const VisualExpert& visual, const ScanConfig& cfg);

/// Ascending bbox area, stable in discovery order, truncated to k.
std::vector<EvidenceItem> take_k_smallest(std::vector<EvidenceItem> items, std::optional<int> k);

ScanResult hierarchical_scan(const RasterImage& image, Question& q, const ExpertBundle& experts,
                             const ScanConfig& cfg, const GenerationSettings& gen);

}  // namespace deepscan
