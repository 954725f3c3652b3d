// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/synth/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "deepscan/error.hpp"
#include "deepscan/experts/parsing.hpp"
#include "deepscan/imaging/geometry.hpp"

namespace deepscan::synth {
namespace {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words{
        "a",     "an",   "the", "is",  "are", "of",   "on",    "in",   "to",    "or",  "and",
        "what",  "which", "color", "colour", "does", "do", "left", "right", "side", "there",
        "image", "this", "that", "it", "its", "with"};
    return words;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::string_view between(std::string_view s, std::string_view open, std::string_view close) {
    const auto a = s.find(open);
    if (a == std::string_view::npos) return {};
    const auto start = a + open.size();
    const auto b = s.find(close, start);
    return s.substr(start, b == std::string_view::npos ? std::string_view::npos : b - start);
}

// "(A) text" lines of a reasoning prompt.
std::vector<std::string> parse_options(std::string_view prompt) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < prompt.size()) {
        auto eol = prompt.find('\n', pos);
        if (eol == std::string_view::npos) eol = prompt.size();
        const auto line = prompt.substr(pos, eol - pos);
        const char expect = static_cast<char>('A' + out.size());
        if (line.size() >= 4 && line[0] == '(' && line[1] == expect && line[2] == ')' && line[3] == ' ')
            out.emplace_back(line.substr(4));
        pos = eol + 1;
    }
    return out;
}

std::string verdict(bool yes, const std::vector<std::string>& subjects) {
    std::string names;
    for (const auto& s : subjects) names += (names.empty() ? "" : ", ") + s;
    return yes ? "Yes. The image shows: " + names + "." : "No. Not fully visible: " + names + ".";
}

constexpr std::string_view kDecompositionLead = "Task: List objects mentioned in text";
constexpr std::string_view kEvidenceLead = "I will provide you an image and a **question**";
constexpr std::string_view kCompletenessLead = "Question: Does the image fully contain every object in the list";

}  // namespace

std::vector<std::string> content_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !stopwords().count(cur)) out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else
            flush();
    }
    flush();
    return out;
}

std::vector<std::string> labels_in(const SceneSpec& spec, std::string_view text) {
    const std::string hay = lower(text);
    std::vector<std::pair<std::size_t, std::string>> hits;
    for (const auto& o : spec.objects) {
        const std::string needle = lower(o.label);
        for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
            const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(hay[pos - 1]));
            const auto end = pos + needle.size();
            const bool right_ok = end == hay.size() || !std::isalnum(static_cast<unsigned char>(hay[end]));
            if (left_ok && right_ok) {
                hits.emplace_back(pos, o.label);
                break;
            }
        }
    }
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    for (auto& h : hits) out.push_back(std::move(h.second));
    return out;
}

double coverage(const SceneObject& obj, const BBox& region) {
    const long long total = obj.mask_area();
    return total > 0 ? static_cast<double>(obj.area_inside(region)) / static_cast<double>(total) : 0.0;
}

OracleExperts::OracleExperts(SceneSpec spec) : spec_(std::move(spec)) {
    if (spec_.objects.empty()) throw InvalidInput("oracle scene has no objects");
}

std::vector<std::string> OracleExperts::subjects_of(std::string_view question) const {
    auto found = labels_in(spec_, question);
    return found.empty() ? spec_.targets : found;
}

GrayMap OracleExperts::search(const FramedImage& patch, const Question& q) const {
    const BBox f = patch.frame;
    GrayMap map(patch.pixels->width(), patch.pixels->height());
    if (f.width() != map.width() || f.height() != map.height())
        throw InvalidInput("oracle search: frame size differs from patch size");
    const auto query = content_tokens(q.text);
    const bool whole = f == spec_.bounds();
    for (const auto& o : spec_.objects) {
        const auto words = content_tokens(o.label);
        const bool relevant = std::any_of(words.begin(), words.end(), [&](const std::string& w) {
            return std::find(query.begin(), query.end(), w) != query.end();
        });
        if (!relevant || !intersect(o.bbox, f)) continue;
        const double cx = 0.5 * (o.bbox.x0 + o.bbox.x1), cy = 0.5 * (o.bbox.y0 + o.bbox.y1);
        const double radius = 0.5 * std::hypot(o.bbox.width(), o.bbox.height());
        const double sigma = radius / 2.0, cut = 3.0 * sigma;
        const double amp = whole ? o.attention_gain : 1.0;
        const BBox reach{static_cast<int>(std::floor(cx - cut)), static_cast<int>(std::floor(cy - cut)),
                         static_cast<int>(std::ceil(cx + cut)) + 1, static_cast<int>(std::ceil(cy + cut)) + 1};
        const auto clip = intersect(reach, f);
        if (!clip) continue;
        for (int y = clip->y0; y < clip->y1; ++y)
            for (int x = clip->x0; x < clip->x1; ++x) {
                const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
                const double r2 = dx * dx + dy * dy;
                if (r2 <= cut * cut) map.at(x - f.x0, y - f.y0) += amp * std::exp(-r2 / (2.0 * sigma * sigma));
            }
    }
    return map;
}

BitMask OracleExperts::segment(const FramedImage& image, Point point) const {
    const BBox f = image.frame;
    BitMask out(image.pixels->width(), image.pixels->height());
    const int gx = f.x0 + point.x, gy = f.y0 + point.y;
    for (const auto& o : spec_.objects) {
        if (!o.covers(gx, gy)) continue;
        const auto clip = intersect(o.bbox, f);
        for (int y = clip->y0; y < clip->y1; ++y)
            for (int x = clip->x0; x < clip->x1; ++x)
                if (o.covers(x, y)) out.set(x - f.x0, y - f.y0);
        break;
    }
    return out;
}

std::vector<BBox> OracleExperts::detect(const FramedImage& view, const Question& q) const {
    const BBox f = view.frame;
    std::vector<BBox> out;
    for (const auto& label : labels_in(spec_, q.text)) {
        if (auto clip = intersect(spec_.find(label)->bbox, f)) out.push_back(translate(*clip, -f.x0, -f.y0));
    }
    return out;
}

bool OracleExperts::judge_evidence(const std::string& question, const BBox& region) const {
    const auto subjects = subjects_of(question);
    return std::any_of(subjects.begin(), subjects.end(), [&](const std::string& s) {
        const auto* o = spec_.find(s);
        return o && coverage(*o, region) >= kFullCoverage;
    });
}

bool OracleExperts::judge_complete(const std::vector<std::string>& targets, const BBox& region) const {
    std::vector<std::string> known;
    for (const auto& t : targets)
        if (spec_.find(t)) known.push_back(t);
    if (known.empty()) known = spec_.targets;
    return std::all_of(known.begin(), known.end(),
                       [&](const std::string& t) { return coverage(*spec_.find(t), region) >= kFullCoverage; });
}

char OracleExperts::answer_letter(const std::vector<std::string>& options, const std::vector<BBox>& regions) const {
    const std::string& truth = spec_.question.answer_text();
    const bool grounded = std::all_of(spec_.targets.begin(), spec_.targets.end(), [&](const std::string& t) {
        const auto* o = spec_.find(t);
        return std::any_of(regions.begin(), regions.end(),
                           [&](const BBox& r) { return coverage(*o, r) >= kFullCoverage; });
    });
    for (std::size_t i = 0; i < options.size(); ++i) {
        if ((options[i] == truth) == grounded) return static_cast<char>('A' + i);
    }
    return 'A';
}

std::string OracleExperts::complete(const CompletionRequest& request) const {
    const std::string_view prompt = request.prompt;
    if (starts_with(prompt, kDecompositionLead)) {
        const auto question = between(prompt, "Input text: ", "\nAction:");
        std::string out = "[";
        for (const auto& label : labels_in(spec_, question)) out += (out.size() > 1 ? ", \"" : "\"") + label + "\"";
        return out + "]";
    }
    if (request.images.empty()) throw InvalidInput("oracle: completion without an image");
    const BBox region = request.images.front().frame;
    if (starts_with(prompt, kEvidenceLead)) {
        const std::string question(between(prompt, "**question**:\n", ", please firstly determine"));
        return verdict(judge_evidence(question, region), subjects_of(question));
    }
    if (starts_with(prompt, kCompletenessLead)) {
        const auto listed = between(prompt, "in the list ", "? Please");
        const auto targets = parse_object_list(listed).value_or(std::vector<std::string>{});
        return verdict(judge_complete(targets, region), targets.empty() ? spec_.targets : targets);
    }
    std::vector<BBox> regions;
    for (const auto& img : request.images) regions.push_back(img.frame);
    auto options = parse_options(prompt);
    if (options.empty()) options = spec_.question.options;
    return std::string(1, answer_letter(options, regions));
}

ExpertBundle make_oracle_experts(SceneSpec spec) {
    auto o = std::make_shared<const OracleExperts>(std::move(spec));
    return {o, o, o};
}

}  // namespace deepscan::synth
