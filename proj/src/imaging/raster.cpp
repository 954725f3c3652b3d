// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/imaging/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deepscan/error.hpp"

namespace deepscan {
namespace {

void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw InvalidInput("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                           std::to_string(height));
    }
}

}  // namespace

RasterImage::RasterImage(int width, int height)
    : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * height * channels, 0);
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
        throw InvalidInput("RGB buffer length does not match dimensions");
    }
}

GrayMap::GrayMap(int width, int height, double fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    values_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayMap::GrayMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    check_dims(width, height);
    if (values_.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidInput("map length does not match dimensions");
    }
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
        throw InvalidInput("map contains non-finite values");
    }
}

BitMask::BitMask(int width, int height, bool fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

bool BitMask::none() const noexcept {
    return std::none_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

std::size_t BitMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

}  // namespace deepscan
