// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "deepscan/error.hpp"
#include "deepscan/experts/decorators.hpp"
#include "deepscan/experts/operations.hpp"
#include "deepscan/experts/parsing.hpp"
#include "deepscan/experts/prompts.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/synth/oracle.hpp"
#include "fakes.hpp"
#include "oracles.hpp"

namespace deepscan {
namespace {

using testing::FnSearch;
using testing::FnVisual;
using testing::ScriptedLvlm;

TEST(Prompts, TemplatesMatchSourceText) {
    EXPECT_EQ(prompts::kSystem,
              "You are an advanced image understanding assistant. You will be given an image and a question about it.");
    const Question q{"What color is the red cap?", {}, {}};
    EXPECT_EQ(prompts::evidence_judgment(q),
              "I will provide you an image and a **question**:\nWhat color is the red cap?, please firstly "
              "determine whether the image contains the clues for answering the question or not (answer with "
              "**Yes** or **No**); then give the evidence of your decision.");
    const std::string d = prompts::decomposition(q);
    EXPECT_EQ(d.substr(0, d.find("Action")),
              "Task: List objects mentioned in text in List format.\nInput text: What color is the red cap?\n");
    EXPECT_NE(d.find("What objects are mentioned in original text? List separated by commas."), std::string::npos);
    EXPECT_NE(d.find("output \"[\"person with white trousers\", \"person in blue\"]\"."), std::string::npos);
    const std::vector<std::string> targets{"dog", "red umbrella"};
    const std::string v = prompts::view_completeness(targets);
    EXPECT_EQ(v.substr(0, 73), "Question: Does the image fully contain every object in the list ['dog', '");
    EXPECT_NE(v.find("(e.g., object: bbox [x1, y1, x2, y2] or a clear region description)"), std::string::npos);
}

TEST(Prompts, ReasoningListsOptions) {
    const Question q{"What color is the cap?", {"red", "blue"}, {}};
    EXPECT_EQ(prompts::reasoning(q), "Question: What color is the cap?\n(A) red\n(B) blue\nAnswer with the option letter.");
}

TEST(Prompts, RenderReplacesEverySlot) {
    EXPECT_EQ(prompts::render("{x}-{x}-{y}", "x", "1"), "1-1-{y}");
}

TEST(Parsing, ObjectList) {
    const auto two = parse_object_list("[\"person with white trousers\", \"person in blue\"]");
    ASSERT_TRUE(two);
    EXPECT_EQ(*two, (std::vector<std::string>{"person with white trousers", "person in blue"}));
    EXPECT_EQ(*parse_object_list("Sure: ['a' , ` b `]"), (std::vector<std::string>{"a", "b"}));
    EXPECT_FALSE(parse_object_list("person, dog"));
    EXPECT_FALSE(parse_object_list("[]"));
}

TEST(Parsing, Verdicts) {
    EXPECT_TRUE(parse_verdict("**Yes**, the red cap is visible").affirmed);
    const auto no = parse_verdict("No. The object is absent.");
    EXPECT_FALSE(no.affirmed);
    EXPECT_FALSE(no.malformed);
    const auto odd = parse_verdict("The image shows a street scene.");
    EXPECT_FALSE(odd.affirmed);
    EXPECT_TRUE(odd.malformed);
    EXPECT_TRUE(parse_verdict("").malformed);
    EXPECT_TRUE(parse_verdict("one two three four five six seven eight nine ten yes").malformed);
}

TEST(Parsing, VerdictIsTotal) {
    testing::Gen gen(17);
    const std::string alphabet = "yesnoYESNO *.,!\n\t abc";
    for (int i = 0; i < 2000; ++i) {
        std::string s;
        const int n = gen.uniform(0, 40);
        for (int k = 0; k < n; ++k) s += alphabet[gen.uniform(0, static_cast<int>(alphabet.size()) - 1)];
        const auto v = parse_verdict(s);
        if (v.malformed) ASSERT_FALSE(v.affirmed) << s;
    }
}

TEST(Parsing, OptionLetter) {
    EXPECT_EQ(extract_option_letter("B) red"), 'B');
    EXPECT_EQ(extract_option_letter("the answer is (c)."), 'C');
    EXPECT_EQ(extract_option_letter("Answer: D"), 'D');
    EXPECT_FALSE(extract_option_letter("Eventually E"));
    EXPECT_EQ(extract_option_letter("E", 5), 'E');
    EXPECT_FALSE(extract_option_letter("nothing here"));
}

GrayMap flat(const FramedImage& p, double v) { return GrayMap(p.pixels->width(), p.pixels->height(), v); }

TEST(Operations, SearchChecksDimensionsAndValues) {
    const RasterImage img(8, 6);
    const Question q{"q", {}, {}};
    FnSearch wrong([](const FramedImage&, const Question&) { return GrayMap(3, 3); });
    EXPECT_THROW(search(wrong, FramedImage::whole(img), q), ProtocolError);
    FnSearch negative([](const FramedImage& p, const Question&) { return flat(p, -1.0); });
    EXPECT_THROW(search(negative, FramedImage::whole(img), q), ProtocolError);
    FnSearch fine([](const FramedImage& p, const Question&) { return flat(p, 0.5); });
    EXPECT_EQ(search(fine, FramedImage::whole(img), q).size(), 48u);
}

TEST(Operations, SegmentChecksPointAndSize) {
    const RasterImage img(8, 6);
    FnVisual v([](const FramedImage& i, Point) { return BitMask(i.pixels->width(), i.pixels->height()); },
               [](const FramedImage&, const Question&) { return std::vector<BBox>{}; });
    EXPECT_THROW(segment(v, FramedImage::whole(img), {8, 0}), InvalidInput);
    EXPECT_TRUE(segment(v, FramedImage::whole(img), {7, 5}).none());
    FnVisual bad([](const FramedImage&, Point) { return BitMask(2, 2); },
                 [](const FramedImage&, const Question&) { return std::vector<BBox>{}; });
    EXPECT_THROW(segment(bad, FramedImage::whole(img), {1, 1}), ProtocolError);
}

TEST(Operations, DetectClipsAndDropsBoxes) {
    const RasterImage img(20, 20);
    FnVisual v([](const FramedImage&, Point) { return BitMask(); },
               [](const FramedImage&, const Question&) {
                   return std::vector<BBox>{{-5, -5, 5, 5}, {30, 30, 40, 40}, {10, 10, 25, 12}};
               });
    EXPECT_EQ(detect(v, FramedImage::whole(img), Question{"q", {}, {}}),
              (std::vector<BBox>{{0, 0, 5, 5}, {10, 10, 20, 12}}));
}

TEST(Operations, DecomposeParsesCachesAndFallsBack) {
    ScriptedLvlm lvlm("[\"person with white trousers\", \"person in blue\"]");
    Question q{"Is the person with white trousers left of the person in blue?", {}, {}};
    EXPECT_EQ(decompose(lvlm, q, {}).size(), 2u);
    decompose(lvlm, q, {});
    EXPECT_EQ(lvlm.seen().size(), 1u);
    EXPECT_EQ(lvlm.seen()[0].purpose, Purpose::Decomposition);
    EXPECT_EQ(lvlm.seen()[0].max_tokens, 50);
    EXPECT_TRUE(lvlm.seen()[0].images.empty());

    ScriptedLvlm prose("The objects are a cap and a dog.");
    Question q2{"what about the cap", {}, {}};
    EXPECT_EQ(decompose(prose, q2, {}), (std::vector<std::string>{"what about the cap"}));
}

TEST(Operations, JudgeAndAnswerRequests) {
    const RasterImage img(4, 4);
    ScriptedLvlm lvlm("Yes, clearly.");
    const auto v = judge(lvlm, FramedImage::whole(img), "prompt", Purpose::EvidenceJudgment, {});
    EXPECT_TRUE(v.affirmed);
    const auto r = lvlm.seen().at(0);
    EXPECT_EQ(r.system, prompts::kSystem);
    EXPECT_EQ(r.temperature, 0.0);
    EXPECT_EQ(r.seed, 13);

    const FramedImage imgs[] = {FramedImage::whole(img)};
    answer(lvlm, imgs, Question{"Which?", {"x", "y"}, {}}, {});
    EXPECT_EQ(lvlm.seen().at(1).max_tokens, 1024);
    EXPECT_EQ(lvlm.seen().at(1).purpose, Purpose::Reasoning);
    EXPECT_THROW(answer(lvlm, imgs, Question{"", {"x"}, {}}, {}), InvalidInput);
}

class OracleTest : public ::testing::Test {
protected:
    OracleTest()
        : spec_(testing::make_spec(200, 200,
                                   {testing::object("small disk", {40, 40, 60, 60}, synth::Shape::Disk),
                                    testing::object("large disk", {120, 40, 180, 100}, synth::Shape::Disk, "similar"),
                                    testing::object("green box", {20, 140, 60, 180}, synth::Shape::Rect, "dissimilar")},
                                   "What color is the small disk?", {"red", "blue", "green", "white"})),
          oracle_(spec_),
          canvas_(synth::render_scene(spec_)) {}

    synth::SceneSpec spec_;
    synth::OracleExperts oracle_;
    RasterImage canvas_;
};

TEST_F(OracleTest, SearchIsZeroWithoutMatch) {
    const RasterImage patch = crop(canvas_, {0, 100, 100, 200});
    const GrayMap m = oracle_.search(FramedImage::at(patch, {0, 100}), Question{"What color is the small disk?", {}, {}});
    for (double v : m.values()) EXPECT_EQ(v, 0.0);
}

TEST_F(OracleTest, SearchPeaksInsideMatchingObject) {
    const RasterImage patch = crop(canvas_, {0, 0, 100, 100});
    const GrayMap m = oracle_.search(FramedImage::at(patch, {0, 0}), Question{"What color is the small disk?", {}, {}});
    const auto it = std::max_element(m.values().begin(), m.values().end());
    const auto idx = static_cast<int>(it - m.values().begin());
    EXPECT_TRUE(spec_.objects[0].covers(idx % 100, idx / 100));
}

TEST_F(OracleTest, SegmentReturnsGroundTruth) {
    const BitMask m = oracle_.segment(FramedImage::whole(canvas_), {50, 50});
    EXPECT_EQ(m, spec_.objects[0].mask(200, 200));
    EXPECT_TRUE(oracle_.segment(FramedImage::whole(canvas_), {100, 10}).none());
}

TEST_F(OracleTest, DetectMatchesFullLabels) {
    const auto both = oracle_.detect(FramedImage::whole(canvas_), Question{"the small disk and the large disk", {}, {}});
    EXPECT_EQ(both, (std::vector<BBox>{{40, 40, 60, 60}, {120, 40, 180, 100}}));
    const RasterImage view = crop(canvas_, {50, 0, 200, 120});
    const auto clipped = oracle_.detect(FramedImage::at(view, {50, 0}), Question{"small disk", {}, {}});
    EXPECT_EQ(clipped, (std::vector<BBox>{{0, 40, 10, 60}}));
    EXPECT_TRUE(oracle_.detect(FramedImage::whole(canvas_), Question{"a purple cat", {}, {}}).empty());
}

TEST_F(OracleTest, DecomposesSyntheticQuestion) {
    Question q{"what color is the small disk", {}, {}};
    EXPECT_EQ(decompose(oracle_, q, {}), (std::vector<std::string>{"small disk"}));
}

TEST_F(OracleTest, JudgeRejectsTruncatedTarget) {
    // Rect target 40x40 at x 40..80: a region keeping 32 columns covers 80%.
    auto spec = testing::make_spec(200, 200, {testing::object("red cap", {40, 40, 80, 80})}, "What color is the red cap?",
                                   {"red", "blue"});
    const synth::OracleExperts o(spec);
    EXPECT_DOUBLE_EQ(synth::coverage(spec.objects[0], {0, 0, 72, 200}), 0.8);
    EXPECT_FALSE(o.judge_evidence("What color is the red cap?", {0, 0, 72, 200}));
    EXPECT_TRUE(o.judge_evidence("What color is the red cap?", {0, 0, 80, 200}));
    EXPECT_FALSE(o.judge_complete({"red cap"}, {0, 0, 72, 200}));
}

TEST_F(OracleTest, AnswersFromGroundedImagesOnly) {
    const Question q{spec_.question.text, spec_.question.options, {}};
    const RasterImage tight = crop(canvas_, {30, 30, 70, 70});
    const FramedImage good[] = {FramedImage::at(tight, {30, 30})};
    EXPECT_EQ(extract_option_letter(answer(oracle_, good, q, {})), 'A');
    const RasterImage off = crop(canvas_, {100, 100, 200, 200});
    const FramedImage bad[] = {FramedImage::at(off, {100, 100})};
    EXPECT_NE(extract_option_letter(answer(oracle_, bad, q, {})), 'A');
}

TEST_F(OracleTest, JudgeIsMonotoneInRegion) {
    testing::Gen gen(23);
    for (int i = 0; i < 500; ++i) {
        const BBox a = gen.box_in(200, 200);
        const BBox b{gen.uniform(0, a.x0), gen.uniform(0, a.y0), gen.uniform(a.x1, 200), gen.uniform(a.y1, 200)};
        if (oracle_.judge_evidence(spec_.question.text, a)) ASSERT_TRUE(oracle_.judge_evidence(spec_.question.text, b));
        if (oracle_.judge_complete(spec_.targets, a)) ASSERT_TRUE(oracle_.judge_complete(spec_.targets, b));
    }
}

TEST_F(OracleTest, CallsArePure) {
    const Question q{"What color is the small disk?", {}, {}};
    EXPECT_EQ(oracle_.search(FramedImage::whole(canvas_), q), oracle_.search(FramedImage::whole(canvas_), q));
    EXPECT_EQ(oracle_.detect(FramedImage::whole(canvas_), q), oracle_.detect(FramedImage::whole(canvas_), q));
}

TEST(Decorators, CountingAndFixedAnswer) {
    auto inner = std::make_shared<ScriptedLvlm>("No.");
    ExpertBundle b{std::make_shared<FnSearch>([](const FramedImage& p, const Question&) { return flat(p, 0.0); }),
                   std::make_shared<FnVisual>([](const FramedImage&, Point) { return BitMask(); },
                                              [](const FramedImage&, const Question&) { return std::vector<BBox>{}; }),
                   std::make_shared<FixedAnswerLvlm>(inner, "A")};
    CountingExperts counting(b);
    const RasterImage img(2, 2);
    const auto bundle = counting.bundle();
    judge(*bundle.lvlm, FramedImage::whole(img), "p", Purpose::ViewCompleteness, {});
    const FramedImage imgs[] = {FramedImage::whole(img)};
    EXPECT_EQ(answer(*bundle.lvlm, imgs, Question{"q", {"x", "y"}, {}}, {}), "A");
    const CallCounts c = counting.counts();
    EXPECT_EQ(c.view_completeness, 1);
    EXPECT_EQ(c.reasoning, 1);
    EXPECT_EQ(c.evidence_judgment, 0);
    EXPECT_EQ(inner->seen().size(), 1u);
}

}  // namespace
}  // namespace deepscan
