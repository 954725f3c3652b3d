// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "deepscan/imaging/raster.hpp"

namespace deepscan {

inline constexpr int kOtsuBins = 256;

/// Histogram bin of `v` after min-max scaling [lo, hi] onto kOtsuBins bins.
int otsu_bin(double v, double lo, double hi) noexcept;

/// Otsu's threshold over a 256-bin histogram of the min-max scaled map.
///
/// The winning bin t splits the data into bins [0, t) and [t, 255]; the
/// returned threshold is the smallest map value that falls into the upper
/// class, so `binarize(map, otsu_threshold(map))` selects exactly that class.
/// Ties between bins resolve to the lowest bin. A constant map returns its
/// value. Throws InvalidInput on an empty map or non-finite values.
double otsu_threshold(const GrayMap& map);

/// Bit set where value >= threshold.
BitMask binarize(const GrayMap& map, double threshold);

}  // namespace deepscan
