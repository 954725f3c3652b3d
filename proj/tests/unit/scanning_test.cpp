// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <gtest/gtest.h>

#include "deepscan/error.hpp"
#include "deepscan/experts/decorators.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/scanning/scanning.hpp"
#include "deepscan/synth/oracle.hpp"
#include "fakes.hpp"
#include "oracles.hpp"

namespace deepscan {
namespace {

using testing::FnSearch;
using testing::FnVisual;
using testing::ScriptedLvlm;

GrayMap block_attention(const FramedImage& p, const BBox& hot) {
    GrayMap m(p.pixels->width(), p.pixels->height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (hot.contains(Point{p.frame.x0 + x, p.frame.y0 + y})) m.at(x, y) = 1.0;
    return m;
}

// Segmenter that returns the first listed rectangle containing the point.
std::shared_ptr<FnVisual> rect_segmenter(std::vector<BBox> rects) {
    return std::make_shared<FnVisual>(
        [rects](const FramedImage& img, Point p) {
            BitMask m(img.pixels->width(), img.pixels->height());
            for (const auto& r : rects) {
                if (!r.contains(p)) continue;
                for (int y = r.y0; y < r.y1; ++y)
                    for (int x = r.x0; x < r.x1; ++x) m.set(x, y);
                break;
            }
            return m;
        },
        [](const FramedImage&, const Question&) { return std::vector<BBox>{}; });
}

TEST(PatchSize, FollowsTargetCount) {
    const ScanConfig cfg;
    Question one{"What color is the red cap?", {}, {}};
    EXPECT_EQ(select_patch_size(one, ScriptedLvlm("[\"red cap\"]"), cfg, {}), 576);
    Question two{"Is the dog left of the umbrella?", {}, {}};
    EXPECT_EQ(select_patch_size(two, ScriptedLvlm("[\"dog\", \"umbrella\"]"), cfg, {}), 768);
    Question odd{"Anything?", {}, {}};
    EXPECT_EQ(select_patch_size(odd, ScriptedLvlm("no list here"), cfg, {}), 576);
}

TEST(Partition, TilingArithmetic) {
    EXPECT_EQ(partition_boxes(1152, 1152, 576).size(), 4u);
    for (const auto& b : partition_boxes(1152, 1152, 576)) EXPECT_EQ(b.width() * b.height(), 576 * 576);
    EXPECT_EQ(partition_boxes(600, 576, 576), (std::vector<BBox>{{0, 0, 600, 576}}));
    EXPECT_EQ(partition_boxes(300, 200, 576), (std::vector<BBox>{{0, 0, 300, 200}}));
    EXPECT_EQ(partition_boxes(1024, 1024, 576),
              (std::vector<BBox>{{0, 0, 576, 576}, {576, 0, 1024, 576}, {0, 576, 576, 1024}, {576, 576, 1024, 1024}}));
}

TEST(Partition, PropertyTilesCoverImageExactly) {
    testing::Gen gen(41);
    for (int i = 0; i < 300; ++i) {
        const int w = gen.uniform(1, 2000), h = gen.uniform(1, 2000), l = gen.uniform(16, 800);
        const auto boxes = partition_boxes(w, h, l);
        long long area = 0;
        for (const auto& b : boxes) {
            ASSERT_TRUE(b.valid());
            ASSERT_TRUE(b.x1 <= w && b.y1 <= h);
            area += static_cast<long long>(b.width()) * b.height();
            if (b.width() < l) ASSERT_TRUE(b.width() >= 32 || b.width() == w);
        }
        for (std::size_t a = 0; a < boxes.size(); ++a)
            for (std::size_t b = a + 1; b < boxes.size(); ++b) ASSERT_FALSE(intersect(boxes[a], boxes[b]));
        ASSERT_EQ(area, static_cast<long long>(w) * h);
    }
}

TEST(Proxy, DiskCenter) {
    BitMask m(41, 41);
    for (int y = 0; y < 41; ++y)
        for (int x = 0; x < 41; ++x)
            if ((x - 20) * (x - 20) + (y - 20) * (y - 20) <= 81) m.set(x, y);
    const auto cue = connected_components(m).at(0);
    const GrayMap attn(41, 41, 1.0);
    EXPECT_EQ(select_proxy(cue, attn, ProxyRule::Fused).point, (Point{20, 20}));
    EXPECT_EQ(select_proxy(cue, attn, ProxyRule::Chebyshev).point, (Point{20, 20}));
    EXPECT_EQ(select_proxy(cue, attn, ProxyRule::Centroid).point, (Point{20, 20}));
}

TEST(Proxy, UShapeStaysOnThickestArm) {
    // Two 9-wide arms joined by a 3-high base; the centroid lies in the gap.
    BitMask m(60, 60);
    auto fill = [&](BBox r) {
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x) m.set(x, y);
    };
    fill({5, 5, 14, 50});
    fill({35, 5, 44, 50});
    fill({5, 47, 44, 50});
    const auto cue = connected_components(m).at(0);
    const GrayMap attn(60, 60, 1.0);
    const Proxy p = select_proxy(cue, attn, ProxyRule::Fused);
    EXPECT_TRUE(m.at(p.point));
    const auto d = distance_to_boundary(cue, m.bounds());
    const double dmax = *std::max_element(d.begin(), d.end());
    const auto it = std::find(cue.pixels.begin(), cue.pixels.end(), p.point);
    EXPECT_EQ(d[static_cast<std::size_t>(it - cue.pixels.begin())], dmax);
    const Proxy c = select_proxy(cue, attn, ProxyRule::Centroid);
    EXPECT_FALSE(m.at(c.point));
}

TEST(Proxy, FusedIsBruteForceArgmax) {
    testing::Gen gen(43);
    for (int i = 0; i < 200; ++i) {
        const BitMask m = gen.mask(40);
        GrayMap attn(m.width(), m.height());
        for (double& v : attn.values()) v = gen.real(0, 1);
        for (const auto& cue : connected_components(m)) {
            const auto d = distance_to_boundary(cue, m.bounds());
            const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
            double best = -1;
            Point bp{};
            for (std::size_t k = 0; k < cue.pixels.size(); ++k) {
                const double dn = *hi > *lo ? (d[k] - *lo) / (*hi - *lo) : 1.0;
                const double s = attn.at(cue.pixels[k].x, cue.pixels[k].y) * dn;
                if (s > best) {
                    best = s;
                    bp = cue.pixels[k];
                }
            }
            ASSERT_EQ(select_proxy(cue, attn, ProxyRule::Fused).point, bp);
        }
    }
}

TEST(ExploreCues, AreaThreshold) {
    const RasterImage img(100, 100);
    const Patch patch{img, {0, 0}};
    const ScanConfig cfg;
    const Question q{"q", {}, {}};
    FnSearch small([](const FramedImage& p, const Question&) { return block_attention(p, {10, 10, 17, 17}); });
    EXPECT_TRUE(explore_cues(patch, 0, q, small, cfg).empty());
    FnSearch fifty([](const FramedImage& p, const Question&) { return block_attention(p, {10, 10, 15, 20}); });
    EXPECT_EQ(explore_cues(patch, 0, q, fifty, cfg).size(), 1u);
    FnSearch zero([](const FramedImage& p, const Question&) { return block_attention(p, {0, 0, 0, 0}); });
    EXPECT_TRUE(explore_cues(patch, 0, q, zero, cfg).empty());
}

TEST(ExploreCues, ProxiesInImageCoordinates) {
    RasterImage img(64, 64);
    const Patch patch{img, {200, 300}};
    FnSearch s([](const FramedImage& p, const Question&) { return block_attention(p, {211, 311, 220, 320}); });
    const auto proxies = explore_cues(patch, 3, Question{"q", {}, {}}, s, ScanConfig{});
    ASSERT_EQ(proxies.size(), 1u);
    EXPECT_EQ(proxies[0].point, (Point{215, 315}));
    EXPECT_EQ(proxies[0].source_patch, 3);
}

TEST(Extract, TwoProxiesOneObject) {
    const RasterImage img(300, 300);
    const auto seg = rect_segmenter({{100, 100, 140, 140}});
    std::vector<Proxy> proxies{{{110, 110}, 0.9, 0}, {{130, 130}, 0.5, 0}};
    const auto res = extract_evidence(img, proxies, *seg, ScanConfig{});
    ASSERT_EQ(res.items.size(), 1u);
    EXPECT_EQ(res.items[0].bbox, (BBox{80, 80, 160, 160}));
    ASSERT_EQ(res.steps.size(), 2u);
    EXPECT_EQ(res.steps[0].status, "kept");
    EXPECT_EQ(res.steps[1].status, "visited");
}

TEST(Extract, HoleIsSealedAndBoxGrows) {
    const RasterImage img(200, 200);
    auto seg = std::make_shared<FnVisual>(
        [](const FramedImage& i, Point) {
            BitMask m(i.pixels->width(), i.pixels->height());
            for (int y = 60; y < 100; ++y)
                for (int x = 60; x < 100; ++x)
                    if (!(x >= 79 && x <= 80 && y >= 79 && y <= 80)) m.set(x, y);
            return m;
        },
        [](const FramedImage&, const Question&) { return std::vector<BBox>{}; });
    const auto res = extract_evidence(img, {{{65, 65}, 1.0, 0}}, *seg, ScanConfig{});
    ASSERT_EQ(res.items.size(), 1u);
    EXPECT_EQ(res.items[0].bbox, (BBox{40, 40, 120, 120}));
    EXPECT_EQ(res.items[0].crop.width(), 80);
    EXPECT_TRUE(res.visited.at(79, 79));
    EXPECT_TRUE(res.visited.at(40, 80));
}

TEST(Extract, OverlappingBoxesDeduplicated) {
    // Dilated boxes (80,80,170,170) and (110,80,200,170): IoU 0.5.
    const RasterImage img(300, 300);
    const auto seg = rect_segmenter({{100, 100, 150, 150}, {130, 100, 180, 150}});
    std::vector<Proxy> proxies{{{120, 120}, 0.9, 0}, {{175, 120}, 0.8, 0}};
    const auto res = extract_evidence(img, proxies, *seg, ScanConfig{});
    EXPECT_DOUBLE_EQ(iou({80, 80, 170, 170}, {110, 80, 200, 170}), 0.5);
    ASSERT_EQ(res.items.size(), 1u);
    EXPECT_EQ(res.items[0].bbox, (BBox{80, 80, 170, 170}));
    EXPECT_EQ(res.steps[1].status, "duplicate");
}

TEST(Extract, EmptyMaskSkipped) {
    const RasterImage img(50, 50);
    const auto seg = rect_segmenter({});
    const auto res = extract_evidence(img, {{{5, 5}, 1.0, 0}}, *seg, ScanConfig{});
    EXPECT_TRUE(res.items.empty());
    EXPECT_EQ(res.steps.at(0).status, "empty");
}

TEST(Extract, OrderIndependent) {
    const RasterImage img(400, 400);
    const auto seg = rect_segmenter({{20, 20, 60, 60}, {200, 200, 260, 230}, {300, 40, 330, 90}});
    std::vector<Proxy> proxies{{{30, 30}, 0.5, 0}, {{210, 210}, 0.9, 1}, {{310, 50}, 0.5, 2}, {{40, 40}, 0.7, 0}};
    const auto a = extract_evidence(img, proxies, *seg, ScanConfig{});
    std::reverse(proxies.begin(), proxies.end());
    const auto b = extract_evidence(img, proxies, *seg, ScanConfig{});
    ASSERT_EQ(a.items.size(), b.items.size());
    for (std::size_t i = 0; i < a.items.size(); ++i) EXPECT_EQ(a.items[i].bbox, b.items[i].bbox);
    EXPECT_EQ(a.visited, b.visited);
}

EvidenceItem item_of_area(int side) {
    EvidenceItem e;
    e.bbox = {0, 0, side, side};
    return e;
}

TEST(TakeK, SmallestFirst) {
    const std::vector<EvidenceItem> items{item_of_area(10), item_of_area(30), item_of_area(20)};
    const auto one = take_k_smallest(items, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].bbox.width(), 10);
    const auto all = take_k_smallest(items, std::nullopt);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[1].bbox.width(), 20);
    EXPECT_EQ(take_k_smallest(items, 10).size(), 3u);
}

synth::SceneSpec squares_scene() {
    return testing::make_spec(1024, 1024,
                              {testing::object("red square", {300, 200, 324, 224}),
                               testing::object("blue square", {700, 300, 760, 360}, synth::Shape::Rect, "similar"),
                               testing::object("green square", {200, 700, 270, 770}, synth::Shape::Rect, "similar"),
                               testing::object("yellow ball", {800, 800, 850, 850}, synth::Shape::Disk, "dissimilar")},
                              "What color is the red square?", {"red", "blue", "green", "white"});
}

TEST(HierarchicalScan, FindsSmallTargetAmongDistractors) {
    const auto spec = squares_scene();
    const RasterImage image = synth::render_scene(spec);
    CountingExperts counting(synth::make_oracle_experts(spec));
    Question q{spec.question.text, spec.question.options, {}};
    const ScanResult r = hierarchical_scan(image, q, counting.bundle(), ScanConfig{}, {});
    EXPECT_EQ(r.all.size(), 3u);
    EXPECT_EQ(r.judge_calls, 3);
    EXPECT_EQ(counting.counts().evidence_judgment, 3);
    ASSERT_EQ(r.evidence.size(), 1u);
    // The dilated mask of a 24x24 target grows 20 px per side.
    EXPECT_EQ(r.evidence[0].bbox, (BBox{280, 180, 344, 244}));
    EXPECT_NEAR(iou(r.evidence[0].bbox, spec.gt_bbox), 576.0 / 4096.0, 1e-12);
    EXPECT_EQ(r.trace.patch_size, 576);
}

TEST(HierarchicalScan, BlankImageHasNoEvidence) {
    auto spec = squares_scene();
    spec.question.text = "What color is the purple kite?";
    const RasterImage image = synth::render_scene(spec);
    CountingExperts counting(synth::make_oracle_experts(spec));
    Question q{spec.question.text, {}, {}};
    const ScanResult r = hierarchical_scan(image, q, counting.bundle(), ScanConfig{}, {});
    EXPECT_TRUE(r.evidence.empty());
    EXPECT_EQ(r.judge_calls, 0);
    EXPECT_EQ(counting.counts().evidence_judgment, 0);
}

TEST(HierarchicalScan, PropertiesOnGeneratedScenes) {
    testing::Gen gen(47);
    for (int s = 0; s < 12; ++s) {
        synth::SceneParams params;
        params.kind = s % 3 == 0 ? synth::QuestionKind::Spatial : synth::QuestionKind::Attribute;
        params.n_similar = gen.uniform(1, 5);
        auto [image, spec] = synth::generate_scene(1000 + s, params);
        ScanConfig cfg;
        cfg.k = gen.coin(0.3) ? std::nullopt : std::optional<int>(gen.uniform(1, 4));
        cfg.workers = gen.uniform(1, 3);
        Question q{spec.question.text, spec.question.options, {}};
        const ScanResult a = hierarchical_scan(image, q, synth::make_oracle_experts(spec), cfg, {});
        if (cfg.k) ASSERT_LE(a.judge_calls, *cfg.k);
        ASSERT_EQ(static_cast<std::size_t>(a.judge_calls), a.candidates.size());
        ASSERT_EQ(a.candidates.size(), std::min(a.all.size(), static_cast<std::size_t>(cfg.k.value_or(1 << 30))));
        for (std::size_t i = 0; i < a.all.size(); ++i)
            for (std::size_t j = i + 1; j < a.all.size(); ++j) ASSERT_LE(iou(a.all[i].bbox, a.all[j].bbox), 0.3);
        for (std::size_t i = 0; i < a.trace.extraction.size(); ++i) {
            const auto& step = a.trace.extraction[i];
            if (step.status == "visited") ASSERT_TRUE(a.visited.at(a.trace.proxies[i].point));
        }
        // Every object mask whose point was segmented sits inside the visited region.
        for (const auto& o : spec.objects) {
            const BitMask gt = o.mask(spec.width, spec.height);
            bool touched = false;
            for (const auto& p : a.trace.proxies) touched = touched || gt.at(p.point);
            if (!touched) continue;
            for (std::size_t k = 0; k < gt.bits().size(); ++k)
                if (gt.bits()[k]) ASSERT_TRUE(a.visited.bits()[k]);
        }
        Question q2{spec.question.text, spec.question.options, {}};
        const ScanResult b = hierarchical_scan(image, q2, synth::make_oracle_experts(spec), cfg, {});
        ASSERT_EQ(a.trace.to_json().dump(), b.trace.to_json().dump());
    }
}

TEST(ScanConfig, Validation) {
    ScanConfig c;
    EXPECT_NO_THROW(c.validate());
    c.close_kernel = 4;
    EXPECT_THROW(c.validate(), InvalidInput);
    c = ScanConfig{};
    c.k = 0;
    EXPECT_THROW(c.validate(), InvalidInput);
    EXPECT_EQ(proxy_rule_from_string("chebyshev"), ProxyRule::Chebyshev);
    EXPECT_THROW(proxy_rule_from_string("nope"), InvalidInput);
}

}  // namespace
}  // namespace deepscan
