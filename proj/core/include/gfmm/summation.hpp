#pragma once

#include <cstddef>
#include <span>

namespace gfmm {

namespace detail {
inline constexpr std::size_t kPairwiseBlock = 64;
}

/// Pairwise (cascade) sum. Rounding error grows as O(log n) instead of O(n).
/// The reduction tree depends only on the length, so results are reproducible.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= detail::kPairwiseBlock) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

/// Pairwise dot product sum_i a[i] * b[i]; a and b must have equal length.
inline double pairwise_dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() <= detail::kPairwiseBlock) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }
    const std::size_t half = a.size() / 2;
    return pairwise_dot(a.first(half), b.first(half)) +
           pairwise_dot(a.subspan(half), b.subspan(half));
}

/// Pairwise sum of squares.
inline double pairwise_sum_squares(std::span<const double> x) {
    return pairwise_dot(x, x);
}

}  // namespace gfmm
