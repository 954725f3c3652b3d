// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "deepscan/error.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/reasoning/pipeline.hpp"
#include "deepscan/synth/oracle.hpp"
#include "fakes.hpp"

namespace deepscan {
namespace {

using testing::ScriptedLvlm;

EvidenceItem item(const RasterImage& image, BBox b) {
    EvidenceItem e;
    e.bbox = b;
    e.crop = crop(image, b);
    return e;
}

TEST(Memory, EvidenceThenCoarseView) {
    const RasterImage image(100, 100);
    const EvidenceItem ev[] = {item(image, {0, 0, 10, 10}), item(image, {50, 50, 70, 60})};
    const View v{{0, 0, 80, 80}, crop(image, {0, 0, 80, 80}), "V3", 1.5, true};
    const HybridMemory m = build_memory(ev, &v, image);
    const auto imgs = m.prompt_images();
    ASSERT_EQ(imgs.size(), 3u);
    EXPECT_EQ(imgs[0].frame, (BBox{0, 0, 10, 10}));
    EXPECT_EQ(imgs[1].frame, (BBox{50, 50, 70, 60}));
    EXPECT_EQ(imgs[2].frame, (BBox{0, 0, 80, 80}));
    EXPECT_EQ(imgs[2].pixels->width(), 80);
    EXPECT_EQ(m.provenance.coarse_tag, "V3");
    EXPECT_FALSE(m.provenance.fallback);
    EXPECT_EQ(MemoryProvenance::from_json(m.provenance.to_json()), m.provenance);
}

TEST(Memory, EmptyEvidenceFallsBackToFullImage) {
    const RasterImage image(30, 20);
    const HybridMemory m = build_memory({}, nullptr, image);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m.prompt_images()[0].frame, image.bounds());
    EXPECT_TRUE(m.provenance.fallback);
    EXPECT_EQ(m.provenance.coarse_tag, "full");
}

TEST(Reason, ExtractsLetterFromReply) {
    const RasterImage image(10, 10);
    const HybridMemory m = build_memory({}, nullptr, image);
    ScriptedLvlm lvlm("B) red");
    const Question q{"What color?", {"blue", "red"}, {}};
    EXPECT_EQ(reason(m, q, lvlm, {}), "B) red");
    const auto req = lvlm.seen().at(0);
    EXPECT_EQ(req.images.size(), 1u);
    EXPECT_EQ(req.prompt, "Question: What color?\n(A) blue\n(B) red\nAnswer with the option letter.");
}

class PipelineTest : public ::testing::Test {
protected:
    PipelineTest() {
        auto generated = synth::generate_scene(21, synth::SceneParams{});
        image_ = std::move(generated.first);
        spec_ = std::move(generated.second);
    }
    Question question() const { return {spec_.question.text, spec_.question.options, {}}; }

    RasterImage image_;
    synth::SceneSpec spec_;
};

TEST_F(PipelineTest, OracleSceneEndToEnd) {
    const RunResult r = run_pipeline(image_, question(), synth::make_oracle_experts(spec_), {});
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.letter, spec_.question.answer);
    EXPECT_EQ(r.evidence.size(), 1u);
    ASSERT_TRUE(r.v_star);
    const std::string tag = r.v_star->tag;
    EXPECT_TRUE(tag == "V1" || tag == "V2" || tag == "V3" || tag == "V4") << tag;
    const auto& calls = r.trace.calls;
    EXPECT_EQ(calls.reasoning, 1);
    EXPECT_EQ(calls.view_completeness, 4);
    EXPECT_EQ(r.trace.memory->fine.size() + 1, 2u);
    ASSERT_TRUE(r.grounding);
    const BBox g = *r.grounding;
    const BBox gt = spec_.gt_bbox;
    EXPECT_TRUE(g.x0 <= gt.x0 && g.y0 <= gt.y0 && g.x1 >= gt.x1 && g.y1 >= gt.y1);
}

TEST_F(PipelineTest, RunsAreByteIdentical) {
    PipelineConfig cfg;
    cfg.scan.workers = 3;
    const auto a = run_pipeline(image_, question(), synth::make_oracle_experts(spec_), cfg);
    cfg.scan.workers = 1;
    const auto b = run_pipeline(image_, question(), synth::make_oracle_experts(spec_), cfg);
    EXPECT_EQ(a.trace.to_json().dump(), b.trace.to_json().dump());
    EXPECT_FALSE(a.trace.to_json().contains("timing_ms"));
}

TEST_F(PipelineTest, NoEvidenceSkipsRefocus) {
    Question q{"What color is the purple kite?", {"red", "blue", "green", "white"}, {}};
    const RunResult r = run_pipeline(image_, q, synth::make_oracle_experts(spec_), {});
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r.evidence.empty());
    EXPECT_TRUE(r.trace.fallback);
    EXPECT_TRUE(r.trace.refocus.is_null());
    EXPECT_EQ(r.trace.calls.view_completeness, 0);
    EXPECT_EQ(r.trace.calls.reasoning, 1);
    EXPECT_FALSE(r.grounding);
    EXPECT_EQ(r.trace.memory->coarse_tag, "full");
}

TEST_F(PipelineTest, TimingOnlyWhenRequested) {
    PipelineConfig cfg;
    cfg.record_timing = true;
    const auto r = run_pipeline(image_, question(), synth::make_oracle_experts(spec_), cfg);
    EXPECT_TRUE(r.trace.to_json().contains("timing_ms"));
}

TEST_F(PipelineTest, RejectsBadInput) {
    EXPECT_THROW(run_pipeline(image_, Question{"", {}, {}}, synth::make_oracle_experts(spec_), {}), InvalidInput);
    EXPECT_THROW(run_pipeline(image_, question(), ExpertBundle{}, {}), InvalidInput);
}

TEST_F(PipelineTest, ExpertFailureIsReportedNotThrown) {
    auto oracle = synth::make_oracle_experts(spec_);
    auto failing = std::make_shared<ScriptedLvlm>([](const CompletionRequest& r) -> std::string {
        if (r.purpose == Purpose::Reasoning) throw TransportError("connection reset");
        return "[\"x\"]";
    });
    const auto r = run_pipeline(image_, question(), ExpertBundle{oracle.search, oracle.visual, failing}, {});
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.trace.error_kind, "transport");
    EXPECT_EQ(r.trace.to_json()["error"]["message"], "connection reset");
}

}  // namespace
}  // namespace deepscan
