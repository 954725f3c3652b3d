// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "deepscan/imaging/raster.hpp"

namespace deepscan {

struct StructuringElement {
    enum class Kind { FlatSquare, Disk };

    Kind kind = Kind::FlatSquare;
    int size = 1;  // side length for FlatSquare, radius for Disk

    /// Throws InvalidInput unless `side` is odd and >= 1.
    static StructuringElement flat_square(int side);
    /// Throws InvalidInput when `radius` < 0.
    static StructuringElement disk(int radius);

    /// Offset (dx, dy) belongs to the element.
    bool contains(int dx, int dy) const noexcept;
};

// Out-of-image pixels are background for every operation below.

BitMask dilate(const BitMask& mask, const StructuringElement& se);
BitMask erode(const BitMask& mask, const StructuringElement& se);

/// Dilation followed by erosion. Only flat square elements are accepted.
BitMask close(const BitMask& mask, const StructuringElement& k);

}  // namespace deepscan
