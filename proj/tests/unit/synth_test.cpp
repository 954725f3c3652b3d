// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>

#include <gtest/gtest.h>

#include "deepscan/error.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/imaging/png_io.hpp"
#include "deepscan/synth/oracle.hpp"
#include "deepscan/synth/scene.hpp"

namespace deepscan {
namespace {

TEST(Scene, TargetAreaFromRatio) {
    synth::SceneParams p;
    p.target_area_ratio = 0.0005;
    const auto [image, spec] = synth::generate_scene(13, p);
    const long long area = static_cast<long long>(spec.gt_bbox.width()) * spec.gt_bbox.height();
    EXPECT_GE(area, 400);
    EXPECT_LE(area, 650);
    EXPECT_EQ(image.width(), 1024);
    EXPECT_EQ(spec.targets.size(), 1u);
}

TEST(Scene, SameSeedSameBytes) {
    const auto a = synth::generate_scene(99, {});
    const auto b = synth::generate_scene(99, {});
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second.to_json(), b.second.to_json());
    EXPECT_EQ(synth::render_scene(a.second), a.first);
    EXPECT_NE(synth::generate_scene(100, {}).first, a.first);
}

TEST(Scene, SpatialQuestionHasTwoTargets) {
    synth::SceneParams p;
    p.kind = synth::QuestionKind::Spatial;
    const auto [image, spec] = synth::generate_scene(4, p);
    EXPECT_EQ(spec.targets.size(), 2u);
    EXPECT_EQ(spec.question.options.size(), 2u);
    EXPECT_NE(spec.question.text.find(spec.targets[0]), std::string::npos);
}

TEST(Scene, InvariantsAcrossSeeds) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        synth::SceneParams p;
        p.kind = seed % 2 ? synth::QuestionKind::Spatial : synth::QuestionKind::Attribute;
        p.target_area_ratio = seed % 4 == 0 ? 0.005 : 0.0005;
        const auto [image, spec] = synth::generate_scene(seed, p);
        ASSERT_GE(spec.objects.size(), 4u);
        int correct = 0;
        for (std::size_t i = 0; i < spec.question.options.size(); ++i)
            correct += spec.question.options[i] == spec.question.answer_text();
        ASSERT_EQ(correct, 1);
        for (std::size_t a = 0; a < spec.objects.size(); ++a) {
            const auto& o = spec.objects[a];
            ASSERT_FALSE(o.label.empty());
            ASSERT_TRUE(spec.bounds().x0 <= o.bbox.x0 && o.bbox.x1 <= spec.width && o.bbox.y1 <= spec.height);
            ASSERT_EQ(bbox_of_mask(o.mask(spec.width, spec.height)), o.bbox);
            for (std::size_t b = a + 1; b < spec.objects.size(); ++b)
                ASSERT_FALSE(intersect(o.bbox, spec.objects[b].bbox));
        }
        ASSERT_EQ(synth::SceneSpec::from_json(spec.to_json()).to_json(), spec.to_json());
    }
}

TEST(Scene, InfeasibleParamsFail) {
    synth::SceneParams p;
    p.width = 120;
    p.height = 120;
    p.n_similar = 8;
    p.max_attempts = 50;
    EXPECT_THROW(synth::generate_scene(1, p), GenerationError);
    p = synth::SceneParams{};
    p.target_area_ratio = 0.3;
    EXPECT_THROW(p.validate(), InvalidInput);
}

TEST(Scene, DecoyStraddlesTileBoundary) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto [image, spec] = synth::generate_decoy_scene(seed, {});
        const synth::SceneObject* target = nullptr;
        const synth::SceneObject* decoy = nullptr;
        for (const auto& o : spec.objects) {
            if (o.role == "target") target = &o;
            if (o.role == "decoy") decoy = &o;
        }
        ASSERT_TRUE(target && decoy);
        EXPECT_DOUBLE_EQ(decoy->attention_gain, 1.5);
        EXPECT_EQ(target->bbox.width(), decoy->bbox.width());
        const bool split_x = (target->bbox.x1 <= 576) != (decoy->bbox.x1 <= 576);
        const bool split_y = (target->bbox.y1 <= 576) != (decoy->bbox.y1 <= 576);
        EXPECT_TRUE(split_x || split_y);
    }
}

TEST(Scene, WriteAndReadBack) {
    const auto dir = std::filesystem::temp_directory_path() / "deepscan-test-scene-io";
    std::filesystem::remove_all(dir);
    const auto [image, spec] = synth::generate_scene(8, {});
    synth::write_scene(dir, spec, image);
    EXPECT_EQ(read_png(dir / (spec.id + ".png")), image);
    EXPECT_EQ(synth::read_scene_spec(dir / (spec.id + ".json")).to_json(), spec.to_json());
    EXPECT_THROW(synth::read_scene_spec(dir / "absent.json"), InvalidInput);
    std::filesystem::remove_all(dir);
}

TEST(Oracle, ContentTokens) {
    EXPECT_EQ(synth::content_tokens("What color is the Small disk?"), (std::vector<std::string>{"small", "disk"}));
}

}  // namespace
}  // namespace deepscan
