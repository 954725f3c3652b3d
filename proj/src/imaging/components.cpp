// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/imaging/components.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deepscan/error.hpp"

namespace deepscan {
namespace {

// 1-D squared distance transform: lower envelope of parabolas rooted at f.
void squared_distance_1d(std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                         std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto intersection = [&](int q, int r) {
        return ((f[q] + double(q) * q) - (f[r] + double(r) * r)) / (2.0 * (q - r));
    };
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        double s = intersection(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = intersection(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
    std::copy(d.begin(), d.begin() + n, f.begin());
}

}  // namespace

std::vector<Component> connected_components(const BitMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    std::vector<int> labels(static_cast<std::size_t>(w) * h, 0);
    std::vector<Component> out;
    std::vector<Point> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y) || labels[static_cast<std::size_t>(y) * w + x] != 0) continue;
            Component comp;
            comp.label = static_cast<int>(out.size()) + 1;
            comp.bounds = {x, y, x + 1, y + 1};
            labels[static_cast<std::size_t>(y) * w + x] = comp.label;
            stack.assign(1, Point{x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                comp.pixels.push_back(p);
                comp.bounds.x0 = std::min(comp.bounds.x0, p.x);
                comp.bounds.y0 = std::min(comp.bounds.y0, p.y);
                comp.bounds.x1 = std::max(comp.bounds.x1, p.x + 1);
                comp.bounds.y1 = std::max(comp.bounds.y1, p.y + 1);
                const Point nbrs[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
                for (const Point& q : nbrs) {
                    if (q.x < 0 || q.y < 0 || q.x >= w || q.y >= h) continue;
                    auto& l = labels[static_cast<std::size_t>(q.y) * w + q.x];
                    if (l != 0 || !mask.at(q.x, q.y)) continue;
                    l = comp.label;
                    stack.push_back(q);
                }
            }
            std::sort(comp.pixels.begin(), comp.pixels.end(),
                      [](Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
            out.push_back(std::move(comp));
        }
    }
    return out;
}

std::vector<double> distance_to_boundary(const Component& component, const BBox& patch_bounds) {
    if (component.pixels.empty()) throw InvalidInput("distance_to_boundary: empty component");
    for (const Point& p : component.pixels) {
        if (!patch_bounds.contains(p)) throw InvalidInput("component pixel outside patch bounds");
    }
    // A one-pixel ring around the component's box is always background, and
    // the nearest non-component pixel is never farther out than that ring.
    const BBox& b = component.bounds;
    const int ox = b.x0 - 1;
    const int oy = b.y0 - 1;
    const int w = b.width() + 2;
    const int h = b.height() + 2;
    // Finite stand-in for "no background yet"; every row and column of the
    // ringed grid holds background, so it never survives both passes.
    const double far = 4.0 * (double(w) * w + double(h) * h) + 1.0;
    std::vector<double> grid(static_cast<std::size_t>(w) * h, 0.0);
    for (const Point& p : component.pixels) grid[static_cast<std::size_t>(p.y - oy) * w + (p.x - ox)] = far;

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    for (int x = 0; x < w; ++x) {
        f.resize(h);
        for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
        squared_distance_1d(f, d, v, z);
        for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = f[y];
    }
    for (int y = 0; y < h; ++y) {
        f.assign(grid.begin() + static_cast<std::ptrdiff_t>(y) * w,
                 grid.begin() + static_cast<std::ptrdiff_t>(y + 1) * w);
        squared_distance_1d(f, d, v, z);
        std::copy(f.begin(), f.end(), grid.begin() + static_cast<std::ptrdiff_t>(y) * w);
    }

    std::vector<double> out;
    out.reserve(component.pixels.size());
    for (const Point& p : component.pixels) {
        out.push_back(std::sqrt(grid[static_cast<std::size_t>(p.y - oy) * w + (p.x - ox)]));
    }
    return out;
}

}  // namespace deepscan
