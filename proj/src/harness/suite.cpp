// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/harness/suite.hpp"

#include "deepscan/error.hpp"

namespace deepscan {

BenchItem scene_item(const synth::SceneSpec& spec, const std::filesystem::path& image, std::string subset) {
    BenchItem item;
    item.id = spec.id;
    item.image_path = image;
    item.question = spec.question.text;
    item.options = spec.question.options;
    item.answer = spec.question.answer;
    item.gt_bbox = spec.gt_bbox;
    item.subset = std::move(subset);
    return item;
}

std::vector<BenchItem> write_suite(const std::filesystem::path& out, std::uint64_t seed, int count,
                                   const SuiteParams& params) {
    if (count < 0) throw InvalidInput("scene count must be >= 0");
    std::vector<BenchItem> items;
    items.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        auto [image, spec] = params.decoy ? synth::generate_decoy_scene(s, params.decoy_scene)
                                          : synth::generate_scene(s, params.scene);
        synth::write_scene(out, spec, image);
        const char* subset = params.decoy                                              ? "decoy"
                             : spec.question.kind == synth::QuestionKind::Spatial ? "spatial"
                                                                                  : "attribute";
        items.push_back(scene_item(spec, out / (spec.id + ".png"), subset));
    }
    write_bench(out / "bench.jsonl", items);
    return items;
}

}  // namespace deepscan
