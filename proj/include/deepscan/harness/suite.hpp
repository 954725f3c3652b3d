// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "deepscan/harness/bench.hpp"
#include "deepscan/synth/scene.hpp"

namespace deepscan {

BenchItem scene_item(const synth::SceneSpec& spec, const std::filesystem::path& image, std::string subset);

struct SuiteParams {
    synth::SceneParams scene;
    bool decoy = false;
    synth::DecoyParams decoy_scene;
};

/// Scenes for seeds seed, seed+1, ... written as <id>.png + <id>.json under
/// `out`, plus out/bench.jsonl. Returns the bench items.
std::vector<BenchItem> write_suite(const std::filesystem::path& out, std::uint64_t seed, int count,
                                   const SuiteParams& params = {});

}  // namespace deepscan
