// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/synth/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "deepscan/error.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/imaging/png_io.hpp"
#include "deepscan/serialize.hpp"

namespace deepscan::synth {
namespace {

struct NamedColor {
    const char* name;
    std::array<std::uint8_t, 3> rgb;
};

constexpr NamedColor kColors[] = {
    {"red", {220, 40, 40}},     {"green", {40, 180, 60}},  {"blue", {40, 80, 220}},
    {"yellow", {235, 215, 40}}, {"purple", {140, 60, 190}}, {"orange", {240, 140, 30}},
    {"white", {245, 245, 245}}, {"black", {15, 15, 15}},
};

constexpr const char* kNouns[] = {"cap", "cup", "ball", "box", "kite", "lamp", "sign", "bag", "vase", "book"};
constexpr const char* kModifiers[] = {"striped", "dotted", "shiny", "wooden", "plastic",
                                      "metal",   "paper",  "woolen", "folded", "broken"};

using Rng = std::mt19937_64;

// Inclusive range; modulo keeps the draw sequence identical on every platform.
int uniform(Rng& rng, int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng() % span);
}

template <class T, std::size_t N>
std::vector<int> shuffled_indices(Rng& rng, const T (&)[N]) {
    std::vector<int> idx(N);
    for (std::size_t i = 0; i < N; ++i) idx[i] = static_cast<int>(i);
    for (std::size_t i = N - 1; i > 0; --i) std::swap(idx[i], idx[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(i)))]);
    return idx;
}

template <class T>
void shuffle(Rng& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(i - 1)))]);
}

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

const char* shape_name(Shape s) { return s == Shape::Rect ? "rect" : "disk"; }
const char* kind_name(QuestionKind k) { return k == QuestionKind::Attribute ? "attribute" : "spatial"; }

bool clear_of(const BBox& b, const std::vector<SceneObject>& objs, int gap) {
    const BBox grown{b.x0 - gap, b.y0 - gap, b.x1 + gap, b.y1 + gap};
    return std::none_of(objs.begin(), objs.end(), [&](const SceneObject& o) { return intersect(grown, o.bbox).has_value(); });
}

// Random placement of a side x side box, clear of every placed object.
BBox place(Rng& rng, const SceneParams& p, int side, const std::vector<SceneObject>& objs) {
    const int lo = p.margin, hi_x = p.width - p.margin - side, hi_y = p.height - p.margin - side;
    if (hi_x < lo || hi_y < lo) throw GenerationError("object of side " + std::to_string(side) + " does not fit");
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
        const int x = uniform(rng, lo, hi_x), y = uniform(rng, lo, hi_y);
        const BBox b{x, y, x + side, y + side};
        if (clear_of(b, objs, p.min_gap)) return b;
    }
    throw GenerationError("could not place object after " + std::to_string(p.max_attempts) + " attempts");
}

SceneObject make_object(Rng& rng, std::string label, std::string role, const BBox& b) {
    SceneObject o;
    o.label = std::move(label);
    o.role = std::move(role);
    o.shape = uniform(rng, 0, 1) ? Shape::Disk : Shape::Rect;
    const auto& c = kColors[uniform(rng, 0, static_cast<int>(std::size(kColors)) - 1)];
    o.color_name = c.name;
    o.color = c.rgb;
    o.bbox = b;
    return o;
}

void set_background(Rng& rng, SceneSpec& spec) {
    spec.noise_seed = rng();
    spec.background = {static_cast<std::uint8_t>(uniform(rng, 70, 150)), static_cast<std::uint8_t>(uniform(rng, 70, 150)),
                       static_cast<std::uint8_t>(uniform(rng, 70, 150))};
}

// Four color options with the target's color among them.
void color_question(Rng& rng, SceneSpec& spec, const SceneObject& target) {
    std::vector<std::string> opts{target.color_name};
    for (int i : shuffled_indices(rng, kColors)) {
        if (opts.size() == 4) break;
        if (kColors[i].name != target.color_name) opts.emplace_back(kColors[i].name);
    }
    shuffle(rng, opts);
    spec.question.kind = QuestionKind::Attribute;
    spec.question.text = "What color is the " + target.label + "?";
    spec.question.options = opts;
    spec.question.answer = static_cast<char>('A' + (std::find(opts.begin(), opts.end(), target.color_name) - opts.begin()));
    spec.targets = {target.label};
    spec.gt_bbox = target.bbox;
}

std::array<std::uint8_t, 3> rgb_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw InvalidInput("color must be [r, g, b]");
    std::array<std::uint8_t, 3> c{};
    for (int i = 0; i < 3; ++i) {
        const int v = j[i].get<int>();
        if (v < 0 || v > 255) throw InvalidInput("color component out of range");
        c[i] = static_cast<std::uint8_t>(v);
    }
    return c;
}

}  // namespace

bool SceneObject::covers(int x, int y) const noexcept {
    if (!bbox.contains(Point{x, y})) return false;
    if (shape == Shape::Rect) return true;
    // Doubled coordinates keep the disk test in integers.
    const long long w = bbox.width(), h = bbox.height();
    const long long dx = 2LL * (x - bbox.x0) + 1 - w;
    const long long dy = 2LL * (y - bbox.y0) + 1 - h;
    return dx * dx * h * h + dy * dy * w * w <= w * w * h * h;
}

long long SceneObject::area_inside(const BBox& region) const noexcept {
    const auto clip = intersect(bbox, region);
    if (!clip) return 0;
    if (shape == Shape::Rect) return clip->area();
    long long n = 0;
    for (int y = clip->y0; y < clip->y1; ++y)
        for (int x = clip->x0; x < clip->x1; ++x) n += covers(x, y);
    return n;
}

long long SceneObject::mask_area() const noexcept { return area_inside(bbox); }

BitMask SceneObject::mask(int width, int height) const {
    BitMask m(width, height);
    const auto clip = intersect(bbox, BBox{0, 0, width, height});
    if (!clip) return m;
    for (int y = clip->y0; y < clip->y1; ++y)
        for (int x = clip->x0; x < clip->x1; ++x)
            if (covers(x, y)) m.set(x, y);
    return m;
}

const SceneObject* SceneSpec::find(const std::string& label) const noexcept {
    for (const auto& o : objects)
        if (o.label == label) return &o;
    return nullptr;
}

nlohmann::json SceneSpec::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["seed"] = seed;
    j["width"] = width;
    j["height"] = height;
    j["background"] = {{"noise_seed", noise_seed},
                       {"base", {background[0], background[1], background[2]}},
                       {"amplitude", noise_amplitude}};
    j["objects"] = nlohmann::json::array();
    for (const auto& o : objects)
        j["objects"].push_back({{"label", o.label},
                                {"role", o.role},
                                {"shape", shape_name(o.shape)},
                                {"color_name", o.color_name},
                                {"color", {o.color[0], o.color[1], o.color[2]}},
                                {"bbox", bbox_json(o.bbox)},
                                {"attention_gain", o.attention_gain}});
    j["question"] = {{"kind", kind_name(question.kind)},
                     {"text", question.text},
                     {"options", question.options},
                     {"answer", std::string(1, question.answer)}};
    j["targets"] = targets;
    j["gt_bbox"] = bbox_json(gt_bbox);
    return j;
}

SceneSpec SceneSpec::from_json(const nlohmann::json& j) {
    try {
        SceneSpec s;
        s.id = j.at("id").get<std::string>();
        s.seed = j.at("seed").get<std::uint64_t>();
        s.width = j.at("width").get<int>();
        s.height = j.at("height").get<int>();
        if (s.width < 1 || s.height < 1) throw InvalidInput("scene dimensions must be positive");
        const auto& bg = j.at("background");
        s.noise_seed = bg.at("noise_seed").get<std::uint64_t>();
        s.background = rgb_from_json(bg.at("base"));
        s.noise_amplitude = bg.at("amplitude").get<int>();
        for (const auto& o : j.at("objects")) {
            SceneObject obj;
            obj.label = o.at("label").get<std::string>();
            obj.role = o.value("role", std::string("dissimilar"));
            const auto shape = o.at("shape").get<std::string>();
            if (shape != "rect" && shape != "disk") throw InvalidInput("unknown shape: " + shape);
            obj.shape = shape == "rect" ? Shape::Rect : Shape::Disk;
            obj.color_name = o.at("color_name").get<std::string>();
            obj.color = rgb_from_json(o.at("color"));
            obj.bbox = bbox_from_json(o.at("bbox"));
            if (!obj.bbox.valid() || !s.bounds().contains(obj.bbox)) throw InvalidInput("object bbox outside canvas");
            obj.attention_gain = o.value("attention_gain", 1.0);
            if (obj.label.empty()) throw InvalidInput("object label is empty");
            s.objects.push_back(std::move(obj));
        }
        if (s.objects.empty()) throw InvalidInput("scene has no objects");
        const auto& q = j.at("question");
        const auto kind = q.at("kind").get<std::string>();
        s.question.kind = kind == "spatial" ? QuestionKind::Spatial : QuestionKind::Attribute;
        s.question.text = q.at("text").get<std::string>();
        s.question.options = q.at("options").get<std::vector<std::string>>();
        const auto ans = q.at("answer").get<std::string>();
        if (ans.size() != 1 || ans[0] < 'A' || ans[0] >= 'A' + static_cast<int>(s.question.options.size()))
            throw InvalidInput("answer must be an option letter");
        s.question.answer = ans[0];
        s.targets = j.at("targets").get<std::vector<std::string>>();
        for (const auto& t : s.targets)
            if (!s.find(t)) throw InvalidInput("target '" + t + "' is not a scene object");
        s.gt_bbox = bbox_from_json(j.at("gt_bbox"));
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("scene spec: ") + e.what());
    }
}

void SceneParams::validate() const {
    if (width < 1 || height < 1) throw InvalidInput("canvas dimensions must be positive");
    if (!(target_area_ratio > 0.0 && target_area_ratio <= 0.25))
        throw InvalidInput("target_area_ratio must lie in (0, 0.25]");
    if (n_similar < 0 || n_dissimilar < 0) throw InvalidInput("distractor counts must be >= 0");
    if (n_similar > static_cast<int>(std::size(kModifiers)) - 2) throw InvalidInput("too many similar distractors");
    if (min_gap < 0 || margin < 0 || max_attempts < 1) throw InvalidInput("bad placement parameters");
}

std::pair<RasterImage, SceneSpec> generate_scene(std::uint64_t seed, const SceneParams& p) {
    p.validate();
    Rng rng(seed);
    SceneSpec spec;
    spec.seed = seed;
    spec.id = "scene-" + std::to_string(seed);
    spec.width = p.width;
    spec.height = p.height;
    set_background(rng, spec);

    const auto side = std::max(4, static_cast<int>(std::lround(std::sqrt(p.target_area_ratio * p.width * p.height))));
    const auto nouns = shuffled_indices(rng, kNouns);
    const auto mods = shuffled_indices(rng, kModifiers);
    std::size_t next_mod = 0;

    // Question subjects: one for attribute questions, two for spatial ones.
    const int n_subjects = p.kind == QuestionKind::Spatial ? 2 : 1;
    std::vector<int> subject_nouns;
    for (int i = 0; i < n_subjects; ++i) {
        const std::string label = std::string(kModifiers[mods[next_mod++]]) + " " + kNouns[nouns[i]];
        subject_nouns.push_back(nouns[i]);
        spec.objects.push_back(make_object(rng, label, "target", place(rng, p, side, spec.objects)));
    }
    for (int i = 0; i < p.n_similar; ++i) {
        const int noun = subject_nouns[static_cast<std::size_t>(i % n_subjects)];
        const int dside = side * uniform(rng, 160, 250) / 100;
        const std::string label = std::string(kModifiers[mods[next_mod++]]) + " " + kNouns[noun];
        spec.objects.push_back(make_object(rng, label, "similar", place(rng, p, dside, spec.objects)));
    }
    // Dissimilar distractors reuse no word from the question.
    const std::size_t first_free_mod = next_mod;
    for (int i = 0; i < p.n_dissimilar; ++i) {
        const int noun = nouns[static_cast<std::size_t>(n_subjects + i % (static_cast<int>(std::size(kNouns)) - n_subjects))];
        const int mod = mods[first_free_mod + static_cast<std::size_t>(i) % (std::size(kModifiers) - first_free_mod)];
        const int dside = uniform(rng, side, 3 * side);
        std::string label = std::string(kModifiers[mod]) + " " + kNouns[noun];
        for (int dup = 2; spec.find(label); ++dup) label = std::string(kModifiers[mod]) + " " + kNouns[noun] + std::to_string(dup);
        spec.objects.push_back(make_object(rng, label, "dissimilar", place(rng, p, dside, spec.objects)));
    }

    if (p.kind == QuestionKind::Attribute) {
        color_question(rng, spec, spec.objects[0]);
    } else {
        const SceneObject& a = spec.objects[0];
        const SceneObject& b = spec.objects[1];
        const bool a_left = a.bbox.x0 + a.bbox.x1 < b.bbox.x0 + b.bbox.x1;
        std::vector<std::string> opts{"left", "right"};
        shuffle(rng, opts);
        spec.question.kind = QuestionKind::Spatial;
        spec.question.text = "Is the " + a.label + " on the left or right side of the " + b.label + "?";
        spec.question.options = opts;
        const std::string truth = a_left ? "left" : "right";
        spec.question.answer = opts[0] == truth ? 'A' : 'B';
        spec.targets = {a.label, b.label};
        const BBox boxes[] = {a.bbox, b.bbox};
        spec.gt_bbox = union_bbox(boxes);
    }
    RasterImage img = render_scene(spec);
    return {std::move(img), std::move(spec)};
}

std::pair<RasterImage, SceneSpec> generate_decoy_scene(std::uint64_t seed, const DecoyParams& p) {
    if (p.min_side < 4 || p.max_side < p.min_side || p.min_pair_gap < 0 || p.max_pair_gap < p.min_pair_gap)
        throw InvalidInput("bad decoy parameters");
    Rng rng(seed);
    SceneSpec spec;
    spec.seed = seed;
    spec.id = "decoy-" + std::to_string(seed);
    spec.width = p.width;
    spec.height = p.height;
    set_background(rng, spec);

    const auto nouns = shuffled_indices(rng, kNouns);
    const auto mods = shuffled_indices(rng, kModifiers);
    const int side = uniform(rng, p.min_side, p.max_side);
    const int gap = uniform(rng, p.min_pair_gap, p.max_pair_gap);
    const bool vertical = uniform(rng, 0, 1) == 1;      // pair straddles y = tile instead of x = tile
    const bool target_first = uniform(rng, 0, 1) == 1;  // target on the low side of the boundary
    const int extent_across = vertical ? p.height : p.width;
    const int extent_along = vertical ? p.width : p.height;

    // Across the boundary: the gap is split around the tile edge.
    const int left_gap = uniform(rng, 1, std::max(1, gap - 1));
    const int lo_end = p.tile - left_gap;
    const int hi_start = lo_end + gap;
    if (lo_end - side < 0 || hi_start + side > extent_across) throw GenerationError("decoy pair does not fit");
    // Along the boundary: keep the pair inside one tile row/column.
    const int along_hi = std::min(p.tile, extent_along) - side - 24;
    if (along_hi < 24) throw GenerationError("decoy pair does not fit along the boundary");
    const int along = uniform(rng, 24, along_hi);

    auto box = [&](int across0) {
        return vertical ? BBox{along, across0, along + side, across0 + side}
                        : BBox{across0, along, across0 + side, along + side};
    };
    const BBox lo_box = box(lo_end - side), hi_box = box(hi_start);
    const std::string noun = kNouns[nouns[0]];
    const std::string target_label = std::string(kModifiers[mods[0]]) + " " + noun;
    const std::string decoy_label = std::string(kModifiers[mods[1]]) + " " + noun;
    spec.objects.push_back(make_object(rng, target_label, "target", target_first ? lo_box : hi_box));
    SceneObject decoy = make_object(rng, decoy_label, "decoy", target_first ? hi_box : lo_box);
    decoy.attention_gain = p.decoy_gain;
    spec.objects.push_back(decoy);

    SceneParams place_params;
    place_params.width = p.width;
    place_params.height = p.height;
    place_params.max_attempts = p.max_attempts;
    for (int i = 0; i < p.n_dissimilar; ++i) {
        const int dside = uniform(rng, 24, 96);
        const std::string label = std::string(kModifiers[mods[2 + static_cast<std::size_t>(i)]]) + " " +
                                  kNouns[nouns[1 + static_cast<std::size_t>(i)]];
        spec.objects.push_back(make_object(rng, label, "dissimilar", place(rng, place_params, dside, spec.objects)));
    }
    color_question(rng, spec, spec.objects[0]);
    RasterImage img = render_scene(spec);
    return {std::move(img), std::move(spec)};
}

RasterImage render_scene(const SceneSpec& spec) {
    RasterImage img(spec.width, spec.height);
    const int amp = spec.noise_amplitude;
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            const std::uint64_t h = mix(spec.noise_seed ^ (static_cast<std::uint64_t>(y) << 32 | static_cast<std::uint32_t>(x)));
            std::uint8_t* px = img.pixel(x, y);
            for (int c = 0; c < 3; ++c) {
                const int noise = amp > 0 ? static_cast<int>((h >> (16 * c)) % static_cast<std::uint64_t>(2 * amp + 1)) - amp : 0;
                px[c] = static_cast<std::uint8_t>(std::clamp(spec.background[c] + noise, 0, 255));
            }
        }
    for (const auto& o : spec.objects) {
        const auto clip = intersect(o.bbox, spec.bounds());
        if (!clip) continue;
        for (int y = clip->y0; y < clip->y1; ++y)
            for (int x = clip->x0; x < clip->x1; ++x)
                if (o.covers(x, y)) std::copy(o.color.begin(), o.color.end(), img.pixel(x, y));
    }
    return img;
}

void write_scene(const std::filesystem::path& dir, const SceneSpec& spec, const RasterImage& image) {
    std::filesystem::create_directories(dir);
    write_png(dir / (spec.id + ".png"), image);
    std::ofstream out(dir / (spec.id + ".json"));
    out << spec.to_json().dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write scene spec for " + spec.id);
}

SceneSpec read_scene_spec(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw InvalidInput("cannot open scene spec " + json_path.string());
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("scene spec is not JSON: " + json_path.string());
    return SceneSpec::from_json(j);
}

}  // namespace deepscan::synth
