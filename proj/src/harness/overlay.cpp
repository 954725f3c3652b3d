// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/harness/overlay.hpp"

#include <algorithm>

#include "deepscan/imaging/geometry.hpp"

namespace deepscan {

void draw_box(RasterImage& img, const BBox& b, std::array<std::uint8_t, 3> color, int thickness) {
    const auto clip = intersect(b, img.bounds());
    if (!clip) return;
    const BBox c = *clip;
    const int t = std::max(1, thickness);
    for (int y = c.y0; y < c.y1; ++y)
        for (int x = c.x0; x < c.x1; ++x) {
            const bool edge = x < c.x0 + t || x >= c.x1 - t || y < c.y0 + t || y >= c.y1 - t;
            if (edge) std::copy(color.begin(), color.end(), img.pixel(x, y));
        }
}

RasterImage draw_overlay(const RasterImage& image, const RunResult& result, int thickness) {
    RasterImage out = image;
    for (const auto& e : result.evidence) draw_box(out, e.bbox, {40, 220, 60}, thickness);
    if (result.v_star) draw_box(out, result.v_star->bbox, {230, 30, 30}, thickness);
    return out;
}

}  // namespace deepscan
