// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/imaging/threshold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "deepscan/error.hpp"

namespace deepscan {
namespace {

// diff^2 / den held as quotient and remainder so that two scores compare
// exactly without overflowing 128 bits.
struct Score {
    __int128 quot = 0;
    __int128 rem = 0;
    __int128 den = 0;

    Score() = default;
    Score(std::int64_t diff, std::int64_t d) : den(d) {
        const __int128 sq = static_cast<__int128>(diff) * diff;
        quot = sq / den;
        rem = sq % den;
    }

    friend bool operator<(const Score& a, const Score& b) {
        if (a.quot != b.quot) return a.quot < b.quot;
        return a.rem * b.den < b.rem * a.den;
    }
};

}  // namespace

int otsu_bin(double v, double lo, double hi) noexcept {
    const double scaled = (v - lo) / (hi - lo) * kOtsuBins;
    return std::clamp(static_cast<int>(scaled), 0, kOtsuBins - 1);
}

double otsu_threshold(const GrayMap& map) {
    const auto values = map.values();
    if (values.empty()) throw InvalidInput("otsu_threshold: empty map");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidInput("otsu_threshold: non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) return lo;

    std::array<std::int64_t, kOtsuBins> hist{};
    std::vector<std::uint8_t> bins(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        bins[i] = static_cast<std::uint8_t>(otsu_bin(values[i], lo, hi));
        ++hist[bins[i]];
    }

    const std::int64_t n = static_cast<std::int64_t>(values.size());
    std::int64_t total_sum = 0;
    for (int b = 0; b < kOtsuBins; ++b) total_sum += hist[b] * b;

    // sigma_b^2 * n^2 = (n1*s0 - n0*s1)^2 / (n0*n1); n^2 is constant across t.
    // Scores are compared as exact fractions so ties resolve to the lowest bin.
    std::int64_t n0 = 0, s0 = 0;
    Score best;
    int best_bin = 1;
    for (int t = 1; t < kOtsuBins; ++t) {
        n0 += hist[t - 1];
        s0 += hist[t - 1] * (t - 1);
        const std::int64_t n1 = n - n0;
        if (n0 == 0 || n1 == 0) continue;
        const std::int64_t s1 = total_sum - s0;
        const Score score(n1 * s0 - n0 * s1, n0 * n1);
        if (best.den == 0 || best < score) {
            best = score;
            best_bin = t;
        }
    }

    double threshold = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (bins[i] >= best_bin) threshold = std::min(threshold, values[i]);
    }
    return threshold;
}

BitMask binarize(const GrayMap& map, double threshold) {
    BitMask out(map.width(), map.height());
    auto bits = out.bits();
    const auto values = map.values();
    for (std::size_t i = 0; i < values.size(); ++i) bits[i] = values[i] >= threshold ? 1 : 0;
    return out;
}

}  // namespace deepscan
