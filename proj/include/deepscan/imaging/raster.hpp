// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace deepscan {

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Half-open integer pixel rectangle [x0, x1) x [y0, y1).
struct BBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const noexcept { return x1 - x0; }
    int height() const noexcept { return y1 - y0; }
    long long area() const noexcept {
        return x1 > x0 && y1 > y0 ? static_cast<long long>(x1 - x0) * (y1 - y0) : 0;
    }
    bool valid() const noexcept { return x0 >= 0 && y0 >= 0 && x0 < x1 && y0 < y1; }
    bool contains(Point p) const noexcept { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
    bool contains(const BBox& o) const noexcept {
        return o.x0 >= x0 && o.y0 >= y0 && o.x1 <= x1 && o.y1 <= y1;
    }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Row-major interleaved RGB, 8 bits per sample.
class RasterImage {
public:
    static constexpr int channels = 3;

    RasterImage() = default;
    RasterImage(int width, int height);
    RasterImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return width_ == 0 || height_ == 0; }
    BBox bounds() const noexcept { return {0, 0, width_, height_}; }

    std::uint8_t* pixel(int x, int y) noexcept { return &data_[offset(x, y)]; }
    const std::uint8_t* pixel(int x, int y) const noexcept { return &data_[offset(x, y)]; }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    std::size_t offset(int x, int y) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * channels;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Row-major real-valued map (attention scores, distances).
class GrayMap {
public:
    GrayMap() = default;
    GrayMap(int width, int height, double fill = 0.0);
    GrayMap(int width, int height, std::vector<double> values);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& at(int x, int y) noexcept { return values_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int x, int y) const noexcept { return values_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    friend bool operator==(const GrayMap&, const GrayMap&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

class BitMask {
public:
    BitMask() = default;
    BitMask(int width, int height, bool fill = false);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    BBox bounds() const noexcept { return {0, 0, width_, height_}; }

    bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool v = true) noexcept { bits_[index(x, y)] = v ? 1 : 0; }
    bool at(Point p) const noexcept { return at(p.x, p.y); }

    std::size_t count() const noexcept;
    bool none() const noexcept;

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::span<std::uint8_t> bits() noexcept { return bits_; }

    friend bool operator==(const BitMask&, const BitMask&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

}  // namespace deepscan
