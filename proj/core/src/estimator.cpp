#include "gfmm/estimator.hpp"

#include "gfmm/error.hpp"
#include "gfmm/lambert_w.hpp"
#include "gfmm/spectral.hpp"
#include "gfmm/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gfmm {

MomentPair moment_map(double s0, double alpha) {
    const double y1 = std::pow(s0, -4.0 * alpha);
    return {y1, alpha * y1 / (s0 * s0)};
}

MomentPair truncate(const MomentPair& y, double eps, ClampFlags* fired) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("truncate: epsilon must lie in (0, 1)");
    ClampFlags f;
    double y1 = y.y1;
    if (!(y1 >= eps)) {
        y1 = eps;
        f.y1_low = true;
    } else if (y1 > 1.0 - eps) {
        y1 = 1.0 - eps;
        f.y1_high = true;
    }
    const double lo = 0.25 * eps * eps;
    const double edge = 0.5 * y1 * y1;
    double hi = edge - lo;
    // Keep the point strictly inside D when eps^2/4 is below the rounding of y1^2/2.
    if (!(hi < edge)) hi = std::nextafter(edge, 0.0);
    double y2 = y.y2;
    if (!(y2 >= lo)) {
        y2 = lo;
        f.y2_low = true;
    } else if (y2 > hi) {
        y2 = hi;
        f.y2_high = true;
    }
    if (fired) *fired = f;
    return {y1, y2};
}

Estimate invert(const MomentPair& y) {
    if (!(y.y1 > 0.0 && y.y1 < 1.0 && y.y2 > 0.0 && y.y2 < 0.5 * y.y1 * y.y1)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "invert: (" << y.y1 << ", " << y.y2 << ") outside D";
        throw DomainError(msg.str());
    }
    const double g = lambert_w0(-y.y1 * std::log(y.y1) / (2.0 * y.y2));
    Estimate e;
    e.s0_hat = std::exp(0.5 * g);
    e.alpha_hat = y.y2 / y.y1 * std::exp(g);
    return e;
}

EstimatorConstants EstimatorConstants::of(const FilterSpec& filter) {
    return {constant_c2(filter), curvature_constant(filter)};
}

Estimate estimate_from_statistics(double stat_j, double stat_j1, const Level& level_j, const Level& level_j1,
                                  const EstimatorConstants& constants) {
    if (level_j.m < 2) {
        std::ostringstream msg;
        msg << "estimate: level " << level_j.j << " has m_j = " << level_j.m << ", need at least 2 for eps = 1/m_j";
        throw ConfigError(msg.str());
    }
    const double eps = 1.0 / static_cast<double>(level_j.m);
    const MomentPair raw{stat_j / constants.c2,
                         second_statistic(stat_j, stat_j1, level_j.a, level_j1.a) / constants.kappa};
    ClampFlags fired;
    const MomentPair y = truncate(raw, eps, &fired);
    Estimate e = invert(y);
    e.clamps = fired;
    e.epsilon = eps;
    return e;
}

Estimate estimate(const SampledSeries& series, const FilterSpec& filter, const LevelSchedule& schedule, int j) {
    const Level& lj = schedule.level(j);
    const Level& lj1 = schedule.level(j + 1);
    const double s_j = first_statistic(series, filter, schedule, j);
    const double s_j1 = first_statistic(series, filter, schedule, j + 1);
    return estimate_from_statistics(s_j, s_j1, lj, lj1, EstimatorConstants::of(filter));
}

}  // namespace gfmm
