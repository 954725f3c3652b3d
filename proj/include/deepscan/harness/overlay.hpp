// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "deepscan/reasoning/pipeline.hpp"

namespace deepscan {

/// Copy of `image` with box outlines drawn in place: evidence boxes in
/// green, the chosen view in red. The run result is not touched.
RasterImage draw_overlay(const RasterImage& image, const RunResult& result, int thickness = 2);

void draw_box(RasterImage& img, const BBox& b, std::array<std::uint8_t, 3> color, int thickness);

}  // namespace deepscan
