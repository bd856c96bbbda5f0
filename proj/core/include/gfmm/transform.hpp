#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gfmm/filter.hpp"

namespace gfmm {

struct SampledSeries;

/// Scale a, shift b, truncation half-width theta and sampling step delta of
/// one discrete transform d^(theta, delta)(a, b).
struct TransformRequest {
    double a = 1.0;
    double b = 0.0;
    double theta = 1.0;
    double delta = 1.0;

    /// Throws DomainError unless a > 0, theta > 0 and 0 < delta <= theta.
    void validate() const;

    /// Grid indices l covered by the window: floor(-theta/delta) .. floor(theta/delta).
    std::int64_t first_cell() const;
    std::int64_t last_cell() const;
    std::size_t cell_count() const { return static_cast<std::size_t>(last_cell() - first_cell() + 1); }
};

/// Exact integral of psi((t - b)/a) over [t_lo, t_hi] = [lo(l), hi(l)] clipped to [-theta, theta].
struct CellWeight {
    std::int64_t l = 0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double w = 0.0;
};

/// Weights for every cell l = floor(-theta/delta) .. floor(theta/delta).
/// Uses the closed-form antiderivative when the filter has one, otherwise
/// adaptive quadrature of psi at 1e-10 relative tolerance. Empty cells get w = 0.
std::vector<CellWeight> cell_weights(const FilterSpec& filter, const TransformRequest& req);

/// (1/sqrt(a)) sum_l w_l X(delta l), where samples[first_index + i] holds X(delta (first_cell + i)).
/// Samples are window-local: index first_index sits at physical time delta * floor(-theta/delta).
/// Throws CoverageError if the window runs past the end of samples.
double discrete_transform(std::span<const double> samples, const FilterSpec& filter,
                          const TransformRequest& req, std::size_t first_index = 0);

/// Series overload: additionally requires series.dt == req.delta.
double discrete_transform(const SampledSeries& series, const FilterSpec& filter,
                          const TransformRequest& req, std::size_t first_index = 0);

/// The delta -> 0 proxy of d^(theta)(a, b): the discrete transform at the
/// finest grid the series carries (delta = series.dt).
double truncated_continuous_oracle(const SampledSeries& series, const FilterSpec& filter, double a,
                                   double b, double theta, std::size_t first_index = 0);

/// Debug dump of a weight table; columns l,t_lo,t_hi,w.
void write_weight_table(std::ostream& out, std::span<const CellWeight> weights);

}  // namespace gfmm
