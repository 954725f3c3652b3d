// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "deepscan/imaging/raster.hpp"

namespace deepscan {

/// A maximal 4-connected set of foreground pixels.
struct Component {
    int label = 0;              // 1-based, raster order of first pixel
    std::vector<Point> pixels;  // raster order
    BBox bounds;

    std::size_t area() const noexcept { return pixels.size(); }
};

/// 4-connected labelling. Labels follow the raster-scan order in which each
/// component's first pixel is met.
std::vector<Component> connected_components(const BitMask& mask);

/// Euclidean distance from every component pixel to the nearest pixel that
/// is not part of the component; pixels outside `patch_bounds` count as
/// background. Values are parallel to `component.pixels` and always >= 1.
std::vector<double> distance_to_boundary(const Component& component, const BBox& patch_bounds);

}  // namespace deepscan
