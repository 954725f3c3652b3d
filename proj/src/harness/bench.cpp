// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/harness/bench.hpp"

#include <fstream>
#include <set>

#include "deepscan/error.hpp"
#include "deepscan/serialize.hpp"

namespace deepscan {
namespace {

const std::set<std::string> kKeys{"id", "image", "question", "options", "answer", "gt_bbox", "subset"};

std::string need_string(const nlohmann::json& j, const char* key, std::size_t line) {
    if (!j.contains(key)) throw SchemaError(line, std::string("missing '") + key + "'");
    if (!j[key].is_string()) throw SchemaError(line, std::string("'") + key + "' must be a string");
    return j[key].get<std::string>();
}

}  // namespace

nlohmann::json BenchItem::to_json(const std::filesystem::path& base_dir) const {
    nlohmann::json j;
    j["id"] = id;
    j["image"] = image_path.lexically_relative(base_dir).generic_string();
    j["question"] = question;
    j["options"] = options;
    j["answer"] = std::string(1, answer);
    if (gt_bbox) j["gt_bbox"] = bbox_json(*gt_bbox);
    if (!subset.empty()) j["subset"] = subset;
    return j;
}

BenchItem parse_bench_line(const std::string& line, std::size_t line_no, const std::filesystem::path& base_dir) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw SchemaError(line_no, "not valid JSON");
    if (!j.is_object()) throw SchemaError(line_no, "item must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kKeys.count(key)) throw SchemaError(line_no, "unknown key '" + key + "'");

    BenchItem item;
    item.id = j.contains("id") ? need_string(j, "id", line_no) : "item-" + std::to_string(line_no);
    if (item.id.empty()) throw SchemaError(line_no, "'id' is empty");
    const std::filesystem::path image = need_string(j, "image", line_no);
    if (image.empty()) throw SchemaError(line_no, "'image' is empty");
    item.image_path = image.is_absolute() ? image : base_dir / image;
    item.question = need_string(j, "question", line_no);
    if (item.question.empty()) throw SchemaError(line_no, "'question' is empty");

    if (!j.contains("options")) throw SchemaError(line_no, "missing 'options'");
    const auto& opts = j["options"];
    if (!opts.is_array() || opts.size() < 2 || opts.size() > 4)
        throw SchemaError(line_no, "'options' must be an array of 2 to 4 strings");
    for (const auto& o : opts) {
        if (!o.is_string() || o.get<std::string>().empty())
            throw SchemaError(line_no, "'options' entries must be non-empty strings");
        item.options.push_back(o.get<std::string>());
    }
    const std::string answer = need_string(j, "answer", line_no);
    if (answer.size() != 1 || answer[0] < 'A' || answer[0] >= 'A' + static_cast<int>(item.options.size()))
        throw SchemaError(line_no, "'answer' must be one of the option letters");
    item.answer = answer[0];

    if (j.contains("gt_bbox")) {
        try {
            item.gt_bbox = bbox_from_json(j["gt_bbox"]);
        } catch (const InvalidInput& e) {
            throw SchemaError(line_no, std::string("'gt_bbox': ") + e.what());
        }
        if (!item.gt_bbox->valid()) throw SchemaError(line_no, "'gt_bbox' is not a valid box");
    }
    if (j.contains("subset")) item.subset = need_string(j, "subset", line_no);
    return item;
}

std::vector<BenchItem> load_bench(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open bench file " + path.string());
    const auto base = path.parent_path();
    std::vector<BenchItem> items;
    std::set<std::string> ids;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        items.push_back(parse_bench_line(line, n, base));
        if (!ids.insert(items.back().id).second) throw SchemaError(n, "duplicate id '" + items.back().id + "'");
    }
    return items;
}

void write_bench(const std::filesystem::path& path, const std::vector<BenchItem>& items) {
    std::ofstream out(path);
    const auto base = path.parent_path();
    for (const auto& item : items) out << item.to_json(base).dump() << '\n';
    if (!out) throw std::runtime_error("cannot write bench file " + path.string());
}

}  // namespace deepscan
