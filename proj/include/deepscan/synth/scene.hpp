// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "deepscan/imaging/raster.hpp"

namespace deepscan::synth {

enum class Shape { Rect, Disk };
enum class QuestionKind { Attribute, Spatial };

struct SceneObject {
    std::string label;  // "<modifier> <noun>"
    std::string role;   // target | similar | dissimilar | decoy
    Shape shape = Shape::Rect;
    std::string color_name;
    std::array<std::uint8_t, 3> color{};
    BBox bbox;
    /// Attention multiplier applied when the search frame is the whole canvas.
    double attention_gain = 1.0;

    bool covers(int x, int y) const noexcept;
    long long mask_area() const noexcept;
    /// Mask pixels inside `region`.
    long long area_inside(const BBox& region) const noexcept;
    /// Canvas-sized ground-truth mask.
    BitMask mask(int width, int height) const;
};

struct SceneQuestion {
    QuestionKind kind = QuestionKind::Attribute;
    std::string text;
    std::vector<std::string> options;
    char answer = 'A';

    const std::string& answer_text() const { return options.at(static_cast<std::size_t>(answer - 'A')); }
};

struct SceneSpec {
    std::string id;
    std::uint64_t seed = 0;
    int width = 0;
    int height = 0;
    std::uint64_t noise_seed = 0;
    std::array<std::uint8_t, 3> background{};
    int noise_amplitude = 24;
    std::vector<SceneObject> objects;
    SceneQuestion question;
    std::vector<std::string> targets;
    BBox gt_bbox;

    BBox bounds() const noexcept { return {0, 0, width, height}; }
    const SceneObject* find(const std::string& label) const noexcept;

    nlohmann::json to_json() const;
    /// Throws InvalidInput on schema violations.
    static SceneSpec from_json(const nlohmann::json& j);
};

struct SceneParams {
    int width = 1024;
    int height = 1024;
    double target_area_ratio = 0.0005;
    int n_similar = 3;     // share the target noun, larger than the target
    int n_dissimilar = 1;  // share no question word
    QuestionKind kind = QuestionKind::Attribute;
    int min_gap = 64;      // free space between any two objects
    int margin = 40;       // free space along the canvas edge
    int max_attempts = 4000;

    void validate() const;
};

/// Deterministic scene for (seed, params). Throws GenerationError when the
/// objects cannot be placed.
std::pair<RasterImage, SceneSpec> generate_scene(std::uint64_t seed, const SceneParams& params);

struct DecoyParams {
    int width = 1024;
    int height = 1024;
    int tile = 576;          // tile boundary the pair straddles
    int min_side = 110;
    int max_side = 140;
    int min_pair_gap = 2;
    int max_pair_gap = 16;
    double decoy_gain = 1.5;
    int n_dissimilar = 3;
    int max_attempts = 4000;
};

/// Attribute scene whose target has a same-size, same-noun decoy just across
/// a tile boundary. The decoy draws more attention at whole-image scale.
std::pair<RasterImage, SceneSpec> generate_decoy_scene(std::uint64_t seed, const DecoyParams& params);

/// Integer-only rendering of the spec; bit-identical across platforms.
RasterImage render_scene(const SceneSpec& spec);

/// Writes <dir>/<id>.png and <dir>/<id>.json.
void write_scene(const std::filesystem::path& dir, const SceneSpec& spec, const RasterImage& image);
SceneSpec read_scene_spec(const std::filesystem::path& json_path);

}  // namespace deepscan::synth
