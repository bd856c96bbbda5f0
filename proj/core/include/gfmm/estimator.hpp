#pragma once

#include <cstdint>

#include "gfmm/filter.hpp"
#include "gfmm/schedule.hpp"

namespace gfmm {

struct SampledSeries;

/// (y1, y2): estimates of s0^(-4 alpha) and alpha s0^(-4 alpha - 2).
struct MomentPair {
    double y1 = 0.0;
    double y2 = 0.0;
};

/// Which clamps of the truncation map fired.
struct ClampFlags {
    bool y1_low = false;
    bool y1_high = false;
    bool y2_low = false;
    bool y2_high = false;

    bool any() const noexcept { return y1_low || y1_high || y2_low || y2_high; }
    /// bit 0 y1_low, bit 1 y1_high, bit 2 y2_low, bit 3 y2_high.
    std::uint32_t bits() const noexcept {
        return (y1_low ? 1u : 0u) | (y1_high ? 2u : 0u) | (y2_low ? 4u : 0u) | (y2_high ? 8u : 0u);
    }
};

struct Estimate {
    double s0_hat = 0.0;
    double alpha_hat = 0.0;
    ClampFlags clamps;
    double epsilon = 0.0;
};

/// Phi(s0, alpha) = (s0^(-4 alpha), alpha s0^(-4 alpha - 2)).
MomentPair moment_map(double s0, double alpha);

/// Clamp into D with margin eps:
///   y1' = max(eps, min(y1, 1 - eps)),
///   y2' = max(eps^2/4, min(y2, y1'^2/2 - eps^2/4)).
/// Throws DomainError unless 0 < eps < 1.
MomentPair truncate(const MomentPair& y, double eps, ClampFlags* fired = nullptr);

/// Phi^-1: G = W0(-y1 ln y1 / (2 y2)), s0 = e^(G/2), alpha = (y2/y1) e^G.
/// Throws DomainError unless 0 < y1 < 1 and 0 < y2 < y1^2/2.
Estimate invert(const MomentPair& y);

/// Normalisers mapping the statistics to (y1, y2): y1 = stat1 / c2, y2 = stat2 / kappa.
struct EstimatorConstants {
    double c2 = 0.0;
    double kappa = 0.0;

    static EstimatorConstants of(const FilterSpec& filter);
};

/// Truncate-then-invert from the first statistics at levels j and j+1, eps = 1/m_j.
/// Throws ConfigError if m_j < 2, DegenerateScheduleError if a_j == a_j1.
Estimate estimate_from_statistics(double stat_j, double stat_j1, const Level& level_j, const Level& level_j1,
                                  const EstimatorConstants& constants);

/// Same, computing both first statistics from the series.
Estimate estimate(const SampledSeries& series, const FilterSpec& filter, const LevelSchedule& schedule, int j);

}  // namespace gfmm
