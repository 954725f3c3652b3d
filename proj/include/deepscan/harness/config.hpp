// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "deepscan/reasoning/pipeline.hpp"

namespace deepscan {

/// Structured configuration. File keys:
///   scan:       tau_area, theta_iou, k (integer or null for no budget),
///               patch_single, patch_multi, close_kernel, dilate_radius,
///               min_tile, proxy_rule, one_shot, workers
///   refocus:    scale_s, detect_pad, workers
///   generation: temperature, seed, short_max_tokens, reasoning_max_tokens
///   experts:    "oracle:<dir>" | "remote:<url>" | "replay:<dir>"
///   remote_timeout_s
struct AppConfig {
    PipelineConfig pipeline;
    std::optional<std::string> experts;
    double remote_timeout_s = 120.0;

    nlohmann::json to_json() const;
};

/// Overlays `j` onto `base`. Unknown keys and wrong types raise InvalidInput.
AppConfig apply_config(AppConfig base, const nlohmann::json& j);
AppConfig load_config(const std::filesystem::path& path);

}  // namespace deepscan
