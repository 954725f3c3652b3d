// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/scanning/scanning.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "deepscan/error.hpp"
#include "deepscan/experts/operations.hpp"
#include "deepscan/experts/prompts.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/imaging/morphology.hpp"
#include "deepscan/imaging/threshold.hpp"
#include "deepscan/parallel.hpp"
#include "deepscan/serialize.hpp"

namespace deepscan {
namespace {

// Segment boundaries along one axis.
std::vector<int> cuts(int extent, int l, int min_tile) {
    std::vector<int> out{0};
    while (out.back() + l < extent) out.push_back(out.back() + l);
    out.push_back(extent);
    if (out.size() > 2 && extent - out[out.size() - 2] < min_tile) out.erase(out.end() - 2);
    return out;
}

bool proxy_before(const Proxy& a, const Proxy& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.point.y != b.point.y) return a.point.y < b.point.y;
    return a.point.x < b.point.x;
}

// Zeroes `img` and sets `visited` wherever the window-local `mask` is set.
void mark_visited(RasterImage& img, BitMask& visited, const BitMask& mask, const BBox& window) {
    for (int y = window.y0; y < window.y1; ++y)
        for (int x = window.x0; x < window.x1; ++x)
            if (mask.at(x - window.x0, y - window.y0)) {
                std::uint8_t* px = img.pixel(x, y);
                px[0] = px[1] = px[2] = 0;
                visited.set(x, y);
            }
}

}  // namespace

const char* to_string(ProxyRule r) noexcept {
    switch (r) {
        case ProxyRule::Fused: return "fused";
        case ProxyRule::Centroid: return "centroid";
        case ProxyRule::Chebyshev: return "chebyshev";
        case ProxyRule::AttentionPeak: return "attention_peak";
    }
    return "unknown";
}

ProxyRule proxy_rule_from_string(const std::string& name) {
    for (auto r : {ProxyRule::Fused, ProxyRule::Centroid, ProxyRule::Chebyshev, ProxyRule::AttentionPeak})
        if (name == to_string(r)) return r;
    throw InvalidInput("unknown proxy rule: " + name);
}

void ScanConfig::validate() const {
    if (tau_area < 1) throw InvalidInput("tau_area must be >= 1");
    if (!(theta_iou > 0.0 && theta_iou < 1.0)) throw InvalidInput("theta_iou must lie in (0, 1)");
    if (k && *k < 1) throw InvalidInput("k must be >= 1");
    if (patch_single < 1 || patch_multi < 1) throw InvalidInput("patch sizes must be >= 1");
    if (close_kernel < 1 || close_kernel % 2 == 0) throw InvalidInput("close_kernel must be odd and >= 1");
    if (dilate_radius < 0) throw InvalidInput("dilate_radius must be >= 0");
    if (min_tile < 1) throw InvalidInput("min_tile must be >= 1");
    if (workers < 1) throw InvalidInput("workers must be >= 1");
}

nlohmann::json ScanTrace::to_json() const {
    nlohmann::json j;
    j["patch_size"] = patch_size;
    j["one_shot"] = one_shot;
    j["patches"] = nlohmann::json::array();
    for (const auto& b : patches) j["patches"].push_back(bbox_json(b));
    j["proxies"] = nlohmann::json::array();
    for (const auto& p : proxies)
        j["proxies"].push_back({{"point", point_json(p.point)}, {"score", p.score}, {"patch", p.source_patch}});
    j["extraction"] = nlohmann::json::array();
    for (const auto& s : extraction) {
        nlohmann::json e = {{"proxy", s.proxy}, {"status", s.status}, {"mask_area", s.mask_area}};
        e["bbox"] = s.bbox ? bbox_json(*s.bbox) : nlohmann::json(nullptr);
        j["extraction"].push_back(std::move(e));
    }
    j["judgments"] = nlohmann::json::array();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        nlohmann::json e = {{"bbox", bbox_json(candidates[i])}};
        if (i < verdicts.size()) {
            e["affirmed"] = verdicts[i].affirmed;
            e["malformed"] = verdicts[i].malformed;
            e["response"] = verdicts[i].rationale;
        }
        j["judgments"].push_back(std::move(e));
    }
    j["judge_calls"] = verdicts.size();
    return j;
}

int select_patch_size(Question& q, const LvlmClient& lvlm, const ScanConfig& cfg,
                      const GenerationSettings& gen) {
    return decompose(lvlm, q, gen).size() == 1 ? cfg.patch_single : cfg.patch_multi;
}

std::vector<BBox> partition_boxes(int width, int height, int l, int min_tile) {
    if (l < 1) throw InvalidInput("patch size must be >= 1");
    if (width < 1 || height < 1) throw InvalidInput("cannot partition an empty image");
    const auto xs = cuts(width, l, min_tile);
    const auto ys = cuts(height, l, min_tile);
    std::vector<BBox> out;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j)
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) out.push_back({xs[i], ys[j], xs[i + 1], ys[j + 1]});
    return out;
}

std::vector<Patch> partition(const RasterImage& image, int l, int min_tile) {
    std::vector<Patch> out;
    for (const BBox& b : partition_boxes(image.width(), image.height(), l, min_tile))
        out.push_back({crop(image, b), {b.x0, b.y0}});
    return out;
}

Proxy select_proxy(const Component& cue, const GrayMap& attention, ProxyRule rule) {
    if (cue.pixels.empty()) throw InvalidInput("select_proxy: empty cue");
    const auto& px = cue.pixels;
    auto attn = [&](const Point& p) { return attention.at(p.x, p.y); };

    if (rule == ProxyRule::AttentionPeak) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < px.size(); ++i)
            if (attn(px[i]) > attn(px[best])) best = i;
        return {px[best], attn(px[best]), 0};
    }
    if (rule == ProxyRule::Centroid) {
        long long sx = 0, sy = 0;
        double mean = 0.0;
        for (const auto& p : px) {
            sx += p.x;
            sy += p.y;
            mean += attn(p);
        }
        const auto n = static_cast<long long>(px.size());
        const Point c{static_cast<int>((2 * sx + n) / (2 * n)), static_cast<int>((2 * sy + n) / (2 * n))};
        return {c, mean / static_cast<double>(n), 0};
    }

    const BBox local{0, 0, attention.width(), attention.height()};
    const auto d = distance_to_boundary(cue, local);
    const auto [dmin_it, dmax_it] = std::minmax_element(d.begin(), d.end());
    const double dmin = *dmin_it, dmax = *dmax_it;
    auto dnorm = [&](std::size_t i) { return dmax > dmin ? (d[i] - dmin) / (dmax - dmin) : 1.0; };

    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < px.size(); ++i) {
        const double s = rule == ProxyRule::Chebyshev ? d[i] : attn(px[i]) * dnorm(i);
        if (s > best_score) {
            best_score = s;
            best = i;
        }
    }
    return {px[best], attn(px[best]) * dnorm(best), 0};
}

std::vector<Proxy> explore_cues(const Patch& patch, int patch_index, const Question& q,
                                const SearchExpert& search_expert, const ScanConfig& cfg) {
    const BBox frame = patch.bounds();
    GrayMap s = search(search_expert, FramedImage{&patch.pixels, frame}, q);
    const auto [lo_it, hi_it] = std::minmax_element(s.values().begin(), s.values().end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) return {};

    const BitMask fg = binarize(s, otsu_threshold(s));
    for (double& v : s.values()) v = (v - lo) / (hi - lo);

    std::vector<Proxy> out;
    for (const Component& cue : connected_components(fg)) {
        if (cue.area() < static_cast<std::size_t>(cfg.tau_area)) continue;
        Proxy p = select_proxy(cue, s, cfg.proxy_rule);
        if (!(p.score > 0.0)) continue;
        p.point.x += patch.offset.x;
        p.point.y += patch.offset.y;
        p.source_patch = patch_index;
        out.push_back(p);
    }
    return out;
}

ExtractionResult extract_evidence(const RasterImage& image, std::vector<Proxy> proxies,
                                  const VisualExpert& visual, const ScanConfig& cfg) {
    std::stable_sort(proxies.begin(), proxies.end(), proxy_before);
    const auto closing = StructuringElement::flat_square(cfg.close_kernel);
    const auto disk = StructuringElement::disk(cfg.dilate_radius);

    ExtractionResult res;
    res.visited = BitMask(image.width(), image.height());
    res.order = proxies;
    RasterImage masked = image;
    const FramedImage framed{&masked, image.bounds()};

    for (std::size_t i = 0; i < proxies.size(); ++i) {
        const Point c = proxies[i].point;
        ExtractionStep step;
        step.proxy = static_cast<int>(i);
        if (res.visited.at(c)) {
            step.status = "visited";
            res.steps.push_back(std::move(step));
            continue;
        }
        const BitMask m = segment(visual, framed, c);
        if (m.none()) {
            spdlog::debug("segment at ({}, {}) returned an empty mask", c.x, c.y);
            step.status = "empty";
            res.steps.push_back(std::move(step));
            continue;
        }
        // Closing then dilation cannot reach further than `reach` pixels from
        // the mask, so both run on a window around it with identical results.
        const int reach = 2 * (cfg.close_kernel / 2) + cfg.dilate_radius + 1;
        const BBox window = pad_bbox(bbox_of_mask(m), reach, image.bounds());
        const BitMask local = crop(m, window);
        BitMask sealed = close(local, closing);
        {
            auto dst = sealed.bits();
            auto src = local.bits();
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] |= src[j];
        }
        const BitMask grown = dilate(sealed, disk);
        const BBox b = translate(bbox_of_mask(grown), window.x0, window.y0);
        step.bbox = b;
        step.mask_area = static_cast<long long>(grown.count());

        const bool distinct = std::all_of(res.items.begin(), res.items.end(),
                                          [&](const EvidenceItem& it) { return iou(b, it.bbox) <= cfg.theta_iou; });
        if (distinct) res.items.push_back({b, crop(image, b), step.mask_area, false});
        step.status = distinct ? "kept" : "duplicate";
        res.steps.push_back(std::move(step));
        mark_visited(masked, res.visited, grown, window);
    }
    return res;
}

std::vector<EvidenceItem> take_k_smallest(std::vector<EvidenceItem> items, std::optional<int> k) {
    std::stable_sort(items.begin(), items.end(),
                     [](const EvidenceItem& a, const EvidenceItem& b) { return a.bbox.area() < b.bbox.area(); });
    if (k && items.size() > static_cast<std::size_t>(*k)) items.resize(static_cast<std::size_t>(*k));
    return items;
}

ScanResult hierarchical_scan(const RasterImage& image, Question& q, const ExpertBundle& experts,
                             const ScanConfig& cfg, const GenerationSettings& gen) {
    cfg.validate();
    experts.validate();
    if (image.empty()) throw InvalidInput("hierarchical_scan: image is empty");

    ScanResult res;
    const int l = select_patch_size(q, *experts.lvlm, cfg, gen);
    res.trace.patch_size = l;
    res.trace.one_shot = cfg.one_shot;

    std::vector<BBox> tiles = cfg.one_shot ? std::vector<BBox>{image.bounds()}
                                           : partition_boxes(image.width(), image.height(), l, cfg.min_tile);
    res.trace.patches = tiles;

    std::vector<std::vector<Proxy>> per_patch(tiles.size());
    parallel_for(tiles.size(), cfg.workers, [&](std::size_t i) {
        const Patch patch{crop(image, tiles[i]), {tiles[i].x0, tiles[i].y0}};
        per_patch[i] = explore_cues(patch, static_cast<int>(i), q, *experts.search, cfg);
    });
    std::vector<Proxy> proxies;
    for (auto& v : per_patch) proxies.insert(proxies.end(), v.begin(), v.end());

    ExtractionResult ex = extract_evidence(image, std::move(proxies), *experts.visual, cfg);
    res.trace.proxies = std::move(ex.order);
    res.trace.extraction = std::move(ex.steps);
    res.visited = std::move(ex.visited);
    res.all = std::move(ex.items);

    res.candidates = take_k_smallest(res.all, cfg.k);
    const std::string prompt = prompts::evidence_judgment(q);
    std::vector<JudgeVerdict> verdicts(res.candidates.size());
    parallel_for(res.candidates.size(), cfg.workers, [&](std::size_t i) {
        const auto& c = res.candidates[i];
        verdicts[i] = judge(*experts.lvlm, FramedImage{&c.crop, c.bbox}, prompt, Purpose::EvidenceJudgment, gen);
    });
    for (std::size_t i = 0; i < res.candidates.size(); ++i) {
        res.candidates[i].affirmed = verdicts[i].affirmed;
        res.trace.candidates.push_back(res.candidates[i].bbox);
        if (verdicts[i].affirmed) res.evidence.push_back(res.candidates[i]);
    }
    res.judge_calls = static_cast<int>(verdicts.size());
    res.trace.verdicts = std::move(verdicts);
    return res;
}

}  // namespace deepscan
