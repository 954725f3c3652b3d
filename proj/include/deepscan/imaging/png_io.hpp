// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "deepscan/imaging/raster.hpp"

namespace deepscan {

// PNG codec for RGB rasters. Inputs with alpha or gray are converted to RGB.
// Failures raise std::runtime_error with the libpng message.

std::vector<std::uint8_t> encode_png(const RasterImage& img);
RasterImage decode_png(std::span<const std::uint8_t> bytes);

RasterImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RasterImage& img);

}  // namespace deepscan
