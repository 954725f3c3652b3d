// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepscan/imaging/raster.hpp"

namespace deepscan {

/// One multiple-choice item. JSONL schema, one object per line:
///   id        string, optional (defaults to "item-<line>")
///   image     string, path relative to the bench file
///   question  string, non-empty
///   options   array of 2 to 4 strings
///   answer    option letter
///   gt_bbox   [x0, y0, x1, y1], optional
///   subset    string, optional
struct BenchItem {
    std::string id;
    std::filesystem::path image_path;
    std::string question;
    std::vector<std::string> options;
    char answer = 'A';
    std::optional<BBox> gt_bbox;
    std::string subset;

    nlohmann::json to_json(const std::filesystem::path& base_dir) const;
};

/// Parses and validates a bench file. Blank lines are skipped; any other
/// malformed line raises SchemaError carrying its 1-based line number.
std::vector<BenchItem> load_bench(const std::filesystem::path& path);

BenchItem parse_bench_line(const std::string& line, std::size_t line_no, const std::filesystem::path& base_dir);

void write_bench(const std::filesystem::path& path, const std::vector<BenchItem>& items);

}  // namespace deepscan
