// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/imaging/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "deepscan/error.hpp"
#include "deepscan/imaging/geometry.hpp"

namespace deepscan {
namespace {

int isqrt(int v) {
    int r = static_cast<int>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Horizontal half-width of the element on row offset dy, or -1 if the row is empty.
int row_half_width(const StructuringElement& se, int dy) {
    if (se.kind == StructuringElement::Kind::FlatSquare) {
        const int h = se.size / 2;
        return std::abs(dy) <= h ? h : -1;
    }
    const int r2 = se.size * se.size - dy * dy;
    return r2 >= 0 ? isqrt(r2) : -1;
}

int vertical_reach(const StructuringElement& se) {
    return se.kind == StructuringElement::Kind::FlatSquare ? se.size / 2 : se.size;
}

// half_widths[dy + reach] for every row offset of the element.
std::vector<int> half_widths(const StructuringElement& se) {
    const int reach = vertical_reach(se);
    std::vector<int> hw(2 * reach + 1);
    for (int dy = -reach; dy <= reach; ++dy) hw[dy + reach] = row_half_width(se, dy);
    return hw;
}

std::optional<BBox> set_bounds(const BitMask& mask) {
    if (mask.none()) return std::nullopt;
    return bbox_of_mask(mask);
}

BBox grow_clipped(const BBox& b, int by, const BBox& bounds) {
    return {std::max(bounds.x0, b.x0 - by), std::max(bounds.y0, b.y0 - by),
            std::min(bounds.x1, b.x1 + by), std::min(bounds.y1, b.y1 + by)};
}

// Row-wise prefix counts of set pixels inside `roi`.
std::vector<int> row_prefix(const BitMask& mask, const BBox& roi) {
    const int w = roi.width();
    std::vector<int> pre(static_cast<std::size_t>(roi.height()) * (w + 1), 0);
    for (int y = roi.y0; y < roi.y1; ++y) {
        int* row = &pre[static_cast<std::size_t>(y - roi.y0) * (w + 1)];
        for (int x = roi.x0; x < roi.x1; ++x) row[x - roi.x0 + 1] = row[x - roi.x0] + (mask.at(x, y) ? 1 : 0);
    }
    return pre;
}

// Count of set pixels in row `y` over [xa, xb] (inclusive), clipped to roi.
int row_count(const std::vector<int>& pre, const BBox& roi, int y, int xa, int xb) {
    xa = std::max(xa, roi.x0);
    xb = std::min(xb, roi.x1 - 1);
    if (xa > xb) return 0;
    const int* row = &pre[static_cast<std::size_t>(y - roi.y0) * (roi.width() + 1)];
    return row[xb - roi.x0 + 1] - row[xa - roi.x0];
}

// Both operations only read and write inside `roi`; everything outside it is
// background by construction of the callers' ROI.
BitMask dilate_in(const BitMask& mask, const StructuringElement& se, const BBox& roi) {
    BitMask out(mask.width(), mask.height());
    const auto pre = row_prefix(mask, roi);
    const int reach = vertical_reach(se);
    const auto hws = half_widths(se);
    for (int y = roi.y0; y < roi.y1; ++y) {
        for (int x = roi.x0; x < roi.x1; ++x) {
            bool hit = false;
            for (int dy = -reach; dy <= reach && !hit; ++dy) {
                const int sy = y - dy;
                if (sy < roi.y0 || sy >= roi.y1) continue;
                const int hw = hws[dy + reach];
                if (hw < 0) continue;
                hit = row_count(pre, roi, sy, x - hw, x + hw) > 0;
            }
            if (hit) out.set(x, y);
        }
    }
    return out;
}

BitMask erode_in(const BitMask& mask, const StructuringElement& se, const BBox& roi) {
    BitMask out(mask.width(), mask.height());
    const auto pre = row_prefix(mask, roi);
    const int reach = vertical_reach(se);
    const auto hws = half_widths(se);
    for (int y = roi.y0; y < roi.y1; ++y) {
        for (int x = roi.x0; x < roi.x1; ++x) {
            if (!mask.at(x, y)) continue;
            bool all = true;
            for (int dy = -reach; dy <= reach && all; ++dy) {
                const int hw = hws[dy + reach];
                if (hw < 0) continue;
                const int sy = y + dy;
                if (sy < roi.y0 || sy >= roi.y1 || x - hw < roi.x0 || x + hw >= roi.x1) {
                    all = false;
                    break;
                }
                all = row_count(pre, roi, sy, x - hw, x + hw) == 2 * hw + 1;
            }
            if (all) out.set(x, y);
        }
    }
    return out;
}

}  // namespace

StructuringElement StructuringElement::flat_square(int side) {
    if (side < 1 || side % 2 == 0) throw InvalidInput("flat element side must be odd and >= 1");
    return {Kind::FlatSquare, side};
}

StructuringElement StructuringElement::disk(int radius) {
    if (radius < 0) throw InvalidInput("disk radius must be >= 0");
    return {Kind::Disk, radius};
}

bool StructuringElement::contains(int dx, int dy) const noexcept {
    if (kind == Kind::FlatSquare) return std::abs(dx) <= size / 2 && std::abs(dy) <= size / 2;
    return dx * dx + dy * dy <= size * size;
}

BitMask dilate(const BitMask& mask, const StructuringElement& se) {
    const auto b = set_bounds(mask);
    if (!b) return BitMask(mask.width(), mask.height());
    const int reach = std::max(vertical_reach(se), row_half_width(se, 0));
    return dilate_in(mask, se, grow_clipped(*b, reach, mask.bounds()));
}

BitMask erode(const BitMask& mask, const StructuringElement& se) {
    const auto b = set_bounds(mask);
    if (!b) return BitMask(mask.width(), mask.height());
    return erode_in(mask, se, mask.bounds());
}

BitMask close(const BitMask& mask, const StructuringElement& k) {
    if (k.kind != StructuringElement::Kind::FlatSquare) {
        throw InvalidInput("closing requires a flat square element");
    }
    const auto b = set_bounds(mask);
    if (!b) return BitMask(mask.width(), mask.height());
    const int h = k.size / 2;
    const BBox roi = grow_clipped(*b, 2 * h, mask.bounds());
    return erode_in(dilate_in(mask, k, roi), k, roi);
}

}  // namespace deepscan
