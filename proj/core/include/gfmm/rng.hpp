#pragma once

#include <array>
#include <cstdint>

namespace gfmm {

/// Philox4x32-10 block cipher used as a counter-based generator.
/// Output depends only on (key, counter), so any stream position is O(1) to reach.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t key) noexcept
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

    Block operator()(std::uint64_t counter_hi, std::uint64_t counter_lo) const noexcept;

private:
    std::array<std::uint32_t, 2> key_;
};

/// SplitMix64 finaliser; derives independent keys from (master_seed, index).
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Standard normal stream keyed by seed. Draw i is a pure function of (seed, i).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) noexcept : gen_(seed) {}

    /// Normals number 2*pair and 2*pair + 1.
    std::array<double, 2> pair(std::uint64_t pair_index) const noexcept;

    /// Fills out[0..n) with draws first .. first + n - 1.
    void fill(double* out, std::uint64_t n, std::uint64_t first = 0) const noexcept;

private:
    Philox4x32 gen_;
};

}  // namespace gfmm
