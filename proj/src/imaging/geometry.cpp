// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/imaging/geometry.hpp"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <cstring>

#include "deepscan/error.hpp"

namespace deepscan {
namespace {

// Outward rounding that ignores floating-point noise around whole pixels,
// so that e.g. 1.2 * 1.25 and 1.5 give the same box when both are exact.
constexpr double kSnap = 1e-9;

int floor_snapped(double v) { return static_cast<int>(std::floor(v + kSnap)); }
int ceil_snapped(double v) { return static_cast<int>(std::ceil(v - kSnap)); }

}  // namespace

std::optional<BBox> intersect(const BBox& a, const BBox& b) {
    BBox r{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
    if (r.x0 >= r.x1 || r.y0 >= r.y1) return std::nullopt;
    return r;
}

double iou(const BBox& a, const BBox& b) {
    const auto inter = intersect(a, b);
    if (!inter) return 0.0;
    const double i = static_cast<double>(inter->area());
    const double u = static_cast<double>(a.area()) + static_cast<double>(b.area()) - i;
    return u > 0.0 ? i / u : 0.0;
}

BBox translate(const BBox& b, int dx, int dy) {
    return {b.x0 + dx, b.y0 + dy, b.x1 + dx, b.y1 + dy};
}

Extent scale_extent(const Extent& e, double s, const BBox& bounds) {
    const double cx = 0.5 * (e.x0 + e.x1);
    const double cy = 0.5 * (e.y0 + e.y1);
    const double hw = 0.5 * s * (e.x1 - e.x0);
    const double hh = 0.5 * s * (e.y1 - e.y0);
    return {std::max<double>(bounds.x0, cx - hw), std::max<double>(bounds.y0, cy - hh),
            std::min<double>(bounds.x1, cx + hw), std::min<double>(bounds.y1, cy + hh)};
}

BBox snap_outward(const Extent& e) {
    return {floor_snapped(e.x0), floor_snapped(e.y0), ceil_snapped(e.x1), ceil_snapped(e.y1)};
}

BBox scale_bbox(const BBox& b, double s, const BBox& bounds) {
    if (!(s >= 1.0) || !std::isfinite(s)) throw InvalidInput("scale factor must be >= 1");
    if (!b.valid() || !bounds.contains(b)) throw InvalidInput("box must lie inside bounds");
    BBox r = snap_outward(scale_extent(Extent::of(b), s, bounds));
    // Rounding snaps can never shrink below the source box.
    r.x0 = std::min(r.x0, b.x0);
    r.y0 = std::min(r.y0, b.y0);
    r.x1 = std::max(r.x1, b.x1);
    r.y1 = std::max(r.y1, b.y1);
    return r;
}

BBox union_bbox(std::span<const BBox> boxes) {
    if (boxes.empty()) throw InvalidInput("union of an empty box list");
    BBox r = boxes.front();
    for (const auto& b : boxes.subspan(1)) {
        r.x0 = std::min(r.x0, b.x0);
        r.y0 = std::min(r.y0, b.y0);
        r.x1 = std::max(r.x1, b.x1);
        r.y1 = std::max(r.y1, b.y1);
    }
    return r;
}

BBox pad_bbox(const BBox& b, int pad, const BBox& bounds) {
    if (pad < 0) throw InvalidInput("padding must be non-negative");
    const BBox grown{b.x0 - pad, b.y0 - pad, b.x1 + pad, b.y1 + pad};
    const auto r = intersect(grown, bounds);
    if (!r) throw InvalidInput("padded box lies outside bounds");
    return *r;
}

RasterImage crop(const RasterImage& img, const BBox& b) {
    if (!b.valid() || !img.bounds().contains(b)) throw InvalidInput("crop box outside image");
    RasterImage out(b.width(), b.height());
    const std::size_t row_bytes = static_cast<std::size_t>(b.width()) * RasterImage::channels;
    for (int y = b.y0; y < b.y1; ++y) {
        std::memcpy(out.pixel(0, y - b.y0), img.pixel(b.x0, y), row_bytes);
    }
    return out;
}

BitMask crop(const BitMask& mask, const BBox& b) {
    if (!b.valid() || !mask.bounds().contains(b)) throw InvalidInput("crop box outside mask");
    BitMask out(b.width(), b.height());
    auto dst = out.bits();
    auto src = mask.bits();
    for (int y = b.y0; y < b.y1; ++y) {
        const auto from = src.begin() + static_cast<std::ptrdiff_t>(y) * mask.width() + b.x0;
        std::copy(from, from + b.width(), dst.begin() + static_cast<std::ptrdiff_t>(y - b.y0) * b.width());
    }
    return out;
}

BBox bbox_of_mask(const BitMask& mask) {
    const auto bits = mask.bits();
    const int w = mask.width();
    int x0 = w, y0 = -1, x1 = -1, y1 = -1;
    for (int y = 0; y < mask.height(); ++y) {
        const auto* row = bits.data() + static_cast<std::size_t>(y) * w;
        const auto* first = std::find_if(row, row + w, [](auto b) { return b != 0; });
        if (first == row + w) continue;
        const auto last = std::find_if(std::make_reverse_iterator(row + w), std::make_reverse_iterator(row),
                                        [](auto b) { return b != 0; });
        if (y0 < 0) y0 = y;
        y1 = y;
        x0 = std::min(x0, static_cast<int>(first - row));
        x1 = std::max(x1, static_cast<int>(last.base() - row) - 1);
    }
    if (x1 < 0) throw EmptyMaskError();
    return {x0, y0, x1 + 1, y1 + 1};
}

RasterImage apply_visited(const RasterImage& img, const BitMask& mask) {
    if (mask.width() != img.width() || mask.height() != img.height()) {
        throw InvalidInput("visited mask dimensions differ from image");
    }
    RasterImage out = img;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (mask.at(x, y)) std::fill_n(out.pixel(x, y), RasterImage::channels, std::uint8_t{0});
        }
    }
    return out;
}

}  // namespace deepscan
