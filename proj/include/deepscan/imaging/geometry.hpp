// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>

#include "deepscan/imaging/raster.hpp"

namespace deepscan {

/// Intersection over union of two boxes; 0 when they are disjoint.
double iou(const BBox& a, const BBox& b);

std::optional<BBox> intersect(const BBox& a, const BBox& b);

BBox translate(const BBox& b, int dx, int dy);

/// Scales `b` by `s` about its center, rounds outward to whole pixels and
/// clips to `bounds`. The result always contains `b`. Throws InvalidInput
/// when s < 1 or when `b` is not inside `bounds`.
BBox scale_bbox(const BBox& b, double s, const BBox& bounds);

/// Sub-pixel box. Repeated scaling of an extent composes exactly, where
/// repeated scaling of rounded boxes does not.
struct Extent {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    static Extent of(const BBox& b) noexcept { return {double(b.x0), double(b.y0), double(b.x1), double(b.y1)}; }
    friend bool operator==(const Extent&, const Extent&) = default;
};

/// Scales about the center and clips to `bounds`.
Extent scale_extent(const Extent& e, double s, const BBox& bounds);

/// Smallest whole-pixel box containing `e`.
BBox snap_outward(const Extent& e);

/// Smallest box enclosing every input box. Throws InvalidInput when empty.
BBox union_bbox(std::span<const BBox> boxes);

/// Grows `b` by `pad` pixels on every side, clipped to `bounds`.
BBox pad_bbox(const BBox& b, int pad, const BBox& bounds);

RasterImage crop(const RasterImage& img, const BBox& b);
BitMask crop(const BitMask& mask, const BBox& b);

/// Tight box around the set pixels. Throws EmptyMaskError on an empty mask.
BBox bbox_of_mask(const BitMask& mask);

/// Copy of `img` with all three channels zeroed wherever `mask` is set.
RasterImage apply_visited(const RasterImage& img, const BitMask& mask);

}  // namespace deepscan
