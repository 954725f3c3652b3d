// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/refocusing/refocusing.hpp"

#include "deepscan/error.hpp"
#include "deepscan/experts/operations.hpp"
#include "deepscan/experts/prompts.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/parallel.hpp"
#include "deepscan/serialize.hpp"

namespace deepscan {
namespace {

View make_view(const RasterImage& image, const BBox& b, std::string tag) {
    return {b, crop(image, b), std::move(tag), 0.0, false, std::nullopt};
}

void score_all(std::vector<View>& views, std::span<const std::string> targets, const LvlmClient& lvlm,
               const RasterImage& image, const RefocusConfig& cfg, const GenerationSettings& gen) {
    parallel_for(views.size(), cfg.workers, [&](std::size_t i) { reward(views[i], targets, lvlm, image, gen); });
}

std::size_t first_max(const std::vector<View>& views) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < views.size(); ++i)
        if (views[i].reward > views[best].reward) best = i;
    return best;
}

void check_inputs(std::span<const std::string> targets, const ExpertBundle& experts, const RefocusConfig& cfg) {
    cfg.validate();
    experts.validate();
    if (targets.empty()) throw InvalidInput("refocus: target list is empty");
}

}  // namespace

void RefocusConfig::validate() const {
    if (!(scale_s > 1.0)) throw InvalidInput("scale_s must be > 1");
    if (detect_pad < 0) throw InvalidInput("detect_pad must be >= 0");
    if (workers < 1) throw InvalidInput("workers must be >= 1");
}

View init_view(std::span<const EvidenceItem> evidence, const RasterImage& image) {
    if (evidence.empty()) throw PreconditionError("init_view: evidence set is empty");
    std::vector<BBox> boxes;
    boxes.reserve(evidence.size());
    for (const auto& e : evidence) boxes.push_back(e.bbox);
    return make_view(image, union_bbox(boxes), "V1");
}

View zoom_in(const View& view, const RasterImage& image, const Question& q, const VisualExpert& visual,
             const RefocusConfig& cfg) {
    const auto boxes = detect(visual, FramedImage{&view.crop, view.bbox}, q);
    if (boxes.empty()) return view;
    const BBox local{0, 0, view.bbox.width(), view.bbox.height()};
    const BBox padded = pad_bbox(union_bbox(boxes), cfg.detect_pad, local);
    return make_view(image, translate(padded, view.bbox.x0, view.bbox.y0), view.tag);
}

View zoom_out(const View& view, double s, const RasterImage& image) {
    if (!(s > 1.0)) throw InvalidInput("zoom_out: scale must be > 1");
    if (!view.bbox.valid() || !image.bounds().contains(view.bbox)) throw InvalidInput("zoom_out: view outside image");
    const Extent e = scale_extent(view.extent.value_or(Extent::of(view.bbox)), s, image.bounds());
    View out = make_view(image, snap_outward(e), view.tag);
    out.extent = e;
    return out;
}

double reward(View& view, std::span<const std::string> targets, const LvlmClient& lvlm,
              const RasterImage& image, const GenerationSettings& gen) {
    const JudgeVerdict v = judge(lvlm, FramedImage{&view.crop, view.bbox}, prompts::view_completeness(targets),
                                 Purpose::ViewCompleteness, gen);
    view.affirmed = v.affirmed;
    view.reward = v.affirmed ? static_cast<double>(image.bounds().area()) / static_cast<double>(view.bbox.area())
                             : 0.0;
    return view.reward;
}

nlohmann::json RefocusResult::to_json() const {
    nlohmann::json j;
    j["views"] = nlohmann::json::array();
    for (const auto& v : views)
        j["views"].push_back(
            {{"tag", v.tag}, {"bbox", bbox_json(v.bbox)}, {"affirmed", v.affirmed}, {"reward", v.reward}});
    j["chosen"] = views.empty() ? nlohmann::json(nullptr) : nlohmann::json(best().tag);
    j["search_length"] = search_length;
    return j;
}

RefocusResult refocus(const RasterImage& image, const Question& q, std::span<const std::string> targets,
                      std::span<const EvidenceItem> evidence, const ExpertBundle& experts,
                      const RefocusConfig& cfg, const GenerationSettings& gen) {
    check_inputs(targets, experts, cfg);
    RefocusResult res;
    View v1 = init_view(evidence, image);
    View v2 = zoom_in(v1, image, q, *experts.visual, cfg);
    View v3 = zoom_out(v1, cfg.scale_s, image);
    View v4 = zoom_in(v3, image, q, *experts.visual, cfg);
    v2.tag = "V2";
    v3.tag = "V3";
    v4.tag = "V4";
    res.views = {std::move(v1), std::move(v2), std::move(v3), std::move(v4)};
    score_all(res.views, targets, *experts.lvlm, image, cfg, gen);
    res.chosen = first_max(res.views);
    res.search_length = static_cast<int>(res.chosen) + 1;
    return res;
}

RefocusResult exhaustive_depth2(const RasterImage& image, const Question& q,
                                std::span<const std::string> targets,
                                std::span<const EvidenceItem> evidence, const ExpertBundle& experts,
                                const RefocusConfig& cfg, const GenerationSettings& gen) {
    check_inputs(targets, experts, cfg);
    auto in = [&](const View& v, const std::string& tag) {
        View out = zoom_in(v, image, q, *experts.visual, cfg);
        out.tag = tag;
        return out;
    };
    auto out = [&](const View& v, const std::string& tag) {
        View o = zoom_out(v, cfg.scale_s, image);
        o.tag = tag;
        return o;
    };
    RefocusResult res;
    View v1 = init_view(evidence, image);
    View i1 = in(v1, "In(V1)");
    View o1 = out(v1, "Out(V1)");
    View ii = in(i1, "In(In(V1))");
    View oi = out(i1, "Out(In(V1))");
    View io = in(o1, "In(Out(V1))");
    View oo = out(o1, "Out(Out(V1))");
    res.views = {std::move(v1), std::move(i1), std::move(o1), std::move(ii),
                 std::move(oi), std::move(io), std::move(oo)};
    score_all(res.views, targets, *experts.lvlm, image, cfg, gen);
    res.chosen = first_max(res.views);
    res.search_length = static_cast<int>(res.chosen) + 1;
    return res;
}

}  // namespace deepscan
