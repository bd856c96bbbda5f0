#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gfmm/spectral.hpp"

namespace gfmm {

/// Samples X(origin + i*dt), i = 0..size-1.
struct SampledSeries {
    std::vector<double> values;
    double dt = 1.0;
    double origin = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return values.size(); }
    std::span<const double> view() const noexcept { return values; }
    /// First n samples with the same metadata. Throws DomainError unless 1 <= n <= size().
    SampledSeries prefix(std::size_t n) const;
};

struct SimulateOptions {
    /// n_terms above this switches to FFT overlap-save convolution.
    std::size_t direct_max_terms = 2048;
    /// Working memory allowed for innovations, coefficients and FFT buffers.
    std::size_t memory_budget_bytes = std::size_t{4} << 30;
};

/// Truncated MA realisation X(t) = sum_{n < n_terms} C_n eps(t - n), t = 0..length-1,
/// with Gaussian eps of standard deviation spec.sigma_eps drawn from NormalStream(seed).
/// Every output uses a full coefficient window (n_terms burn-in innovations).
/// Throws CapacityError when the working set exceeds options.memory_budget_bytes.
SampledSeries simulate(const GegenbauerSpec& spec, std::size_t length, std::uint64_t seed,
                       const SimulateOptions& options = {});

/// Same, with coefficients precomputed by gegenbauer_coeffs(spec, n_terms - 1).
SampledSeries simulate(const GegenbauerSpec& spec, std::span<const double> coeffs, std::size_t length,
                       std::uint64_t seed, const SimulateOptions& options = {});

/// Reinterprets the samples on a grid of spacing new_dt. Values are untouched.
SampledSeries rescale(const SampledSeries& series, double new_dt);

}  // namespace gfmm
