#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gfmm/filter.hpp"
#include "gfmm/schedule.hpp"

namespace gfmm {

struct SampledSeries;

/// Index of the series sample that sits at the start of the level-j window when
/// the window is centred in the series. Throws CoverageError if it does not fit.
std::size_t centred_first_index(std::size_t series_length, const Level& level);

/// d^(theta_j, delta_j)(a_j, b_jk) for k = 1..m_j, window starting at samples[first_index].
std::vector<double> level_transforms(std::span<const double> samples, const FilterSpec& filter, const Level& level,
                                     std::size_t first_index);

/// (1/m_j) sum_k d^2 over the level-j shifts, window centred in the series.
/// Throws CoverageError if series.dt differs from delta_j or the window does not fit.
double first_statistic(const SampledSeries& series, const FilterSpec& filter, const LevelSchedule& schedule, int j);

/// (stat_j - stat_j1) / (a_j^-2 - a_j1^-2). Throws DegenerateScheduleError if a_j == a_j1,
/// DomainError unless both scales are positive.
double second_statistic(double stat_j, double stat_j1, double a_j, double a_j1);

}  // namespace gfmm
