#include "gfmm/statistics.hpp"

#include "gfmm/error.hpp"
#include "gfmm/simulator.hpp"
#include "gfmm/summation.hpp"
#include "gfmm/transform.hpp"

#include <cmath>
#include <sstream>

namespace gfmm {

namespace {

TransformRequest request_for(const Level& level, double b) { return {level.a, b, level.theta, level.delta}; }

}  // namespace

std::size_t centred_first_index(std::size_t series_length, const Level& level) {
    const std::size_t need = request_for(level, 0.0).cell_count();
    if (need > series_length) {
        std::ostringstream msg;
        msg << "level " << level.j << " window needs " << need << " samples, series has " << series_length;
        throw CoverageError(msg.str());
    }
    return (series_length - need) / 2;
}

std::vector<double> level_transforms(std::span<const double> samples, const FilterSpec& filter, const Level& level,
                                     std::size_t first_index) {
    std::vector<double> d(level.m);
    for (std::size_t k = 1; k <= level.m; ++k)
        d[k - 1] = discrete_transform(samples, filter, request_for(level, level.shift(k)), first_index);
    return d;
}

double first_statistic(const SampledSeries& series, const FilterSpec& filter, const LevelSchedule& schedule, int j) {
    const Level& level = schedule.level(j);
    if (std::abs(series.dt - level.delta) > 1e-12 * level.delta) {
        std::ostringstream msg;
        msg << "level " << j << " needs resolution delta = " << level.delta << ", series has dt = " << series.dt;
        throw CoverageError(msg.str());
    }
    const auto d = level_transforms(series.view(), filter, level, centred_first_index(series.size(), level));
    return pairwise_sum_squares(d) / static_cast<double>(d.size());
}

double second_statistic(double stat_j, double stat_j1, double a_j, double a_j1) {
    if (!(a_j > 0.0) || !(a_j1 > 0.0)) throw DomainError("second_statistic: scales must be positive");
    if (a_j == a_j1) throw DegenerateScheduleError("second_statistic: consecutive levels share the scale a");
    return (stat_j - stat_j1) / (1.0 / (a_j * a_j) - 1.0 / (a_j1 * a_j1));
}

}  // namespace gfmm
