// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "deepscan/harness/bench.hpp"
#include "deepscan/reasoning/pipeline.hpp"

namespace deepscan {

enum class EvalMode { Plain, Cyclic };

const char* to_string(EvalMode m) noexcept;
EvalMode eval_mode_from_string(const std::string& name);

/// Produces one pipeline run for an item whose options have already been
/// rotated. Implementations must be safe to call concurrently.
using ItemRunner = std::function<RunResult(const BenchItem& item, const Question& q)>;

struct EvalOptions {
    EvalMode mode = EvalMode::Plain;
    int jobs = 1;
    std::optional<std::filesystem::path> trace_dir;
    bool resume = false;       // reuse traces already in trace_dir
    bool with_timing = false;  // wall time in the report
};

struct ItemOutcome {
    std::string id;
    std::string subset;
    bool correct = false;
    int runs = 0;
    std::optional<double> iou;  // only for items with gt_bbox
    long judge_calls = 0;       // evidence judgments over all runs
    std::string error;
};

struct EvalReport {
    EvalMode mode = EvalMode::Plain;
    std::size_t n = 0;
    double accuracy = 0.0;
    std::map<std::string, std::pair<std::size_t, double>> subsets;  // name -> (n, accuracy)
    std::size_t n_grounded = 0;
    std::optional<double> miou;
    std::optional<double> hit_at_05;
    double mean_judge_calls = 0.0;  // per pipeline run
    std::size_t errors = 0;
    std::optional<double> wall_time_s;
    std::vector<ItemOutcome> items;

    nlohmann::json to_json() const;
};

/// Item options rotated left by `r`, with the answer letter remapped.
BenchItem rotate_item(const BenchItem& item, int r);

class ExpertProvider;

/// Runner that loads the item image and runs the full pipeline with the
/// provider's experts. Rejects items whose gt_bbox leaves the image.
ItemRunner make_pipeline_runner(const ExpertProvider& provider, const PipelineConfig& cfg);

EvalReport evaluate(const std::vector<BenchItem>& items, const ItemRunner& runner, const EvalOptions& opts);

/// Reduces per-item outcomes into a report (order-independent).
EvalReport summarize(std::vector<ItemOutcome> outcomes, EvalMode mode, long total_runs);

}  // namespace deepscan
