#include "gfmm/transform.hpp"

#include "gfmm/error.hpp"
#include "gfmm/quadrature.hpp"
#include "gfmm/simulator.hpp"
#include "gfmm/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace gfmm {

void TransformRequest::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("TransformRequest: a must be positive");
    if (!std::isfinite(b)) throw DomainError("TransformRequest: b must be finite");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("TransformRequest: theta must be positive");
    if (!(delta > 0.0 && delta <= theta)) throw DomainError("TransformRequest: delta must lie in (0, theta]");
}

std::int64_t TransformRequest::first_cell() const { return static_cast<std::int64_t>(std::floor(-theta / delta)); }
std::int64_t TransformRequest::last_cell() const { return static_cast<std::int64_t>(std::floor(theta / delta)); }

namespace {

CellWeight weight_of(const FilterSpec& filter, const TransformRequest& req, std::int64_t l) {
    const double ld = static_cast<double>(l);
    CellWeight c{l, std::max(-req.theta, ld * req.delta), std::min(req.theta, (ld + 1.0) * req.delta), 0.0};
    if (!(c.t_hi > c.t_lo)) return c;
    if (filter.psi_antideriv) {
        const auto& Psi = filter.psi_antideriv;
        c.w = req.a * (Psi((c.t_hi - req.b) / req.a) - Psi((c.t_lo - req.b) / req.a));
    } else {
        const auto r = integrate_adaptive([&](double t) { return filter.psi((t - req.b) / req.a); }, c.t_lo, c.t_hi,
                                          1e-12);
        c.w = r.value;
    }
    return c;
}

// Cells whose weight can be non-zero: with a closed-form Psi that is exactly 0
// beyond zero_radius_time, cells entirely outside b +- a*R contribute exactly 0.
std::pair<std::int64_t, std::int64_t> active_cells(const FilterSpec& filter, const TransformRequest& req) {
    std::int64_t lo = req.first_cell();
    std::int64_t hi = req.last_cell();
    if (filter.psi_antideriv && filter.zero_radius_time) {
        const double reach = req.a * *filter.zero_radius_time;
        lo = std::max(lo, static_cast<std::int64_t>(std::floor((req.b - reach) / req.delta)) - 1);
        hi = std::min(hi, static_cast<std::int64_t>(std::floor((req.b + reach) / req.delta)) + 1);
    }
    return {lo, hi};
}

}  // namespace

std::vector<CellWeight> cell_weights(const FilterSpec& filter, const TransformRequest& req) {
    req.validate();
    std::vector<CellWeight> out;
    out.reserve(req.cell_count());
    for (std::int64_t l = req.first_cell(); l <= req.last_cell(); ++l) out.push_back(weight_of(filter, req, l));
    return out;
}

double discrete_transform(std::span<const double> samples, const FilterSpec& filter, const TransformRequest& req,
                          std::size_t first_index) {
    req.validate();
    const std::size_t n = req.cell_count();
    if (first_index > samples.size() || samples.size() - first_index < n) {
        std::ostringstream msg;
        msg << "discrete_transform: window needs " << n << " samples from index " << first_index << ", series has "
            << samples.size();
        throw CoverageError(msg.str());
    }
    const auto [lo, hi] = active_cells(filter, req);
    if (hi < lo) return 0.0;
    const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> w(count);
    for (std::size_t i = 0; i < count; ++i) w[i] = weight_of(filter, req, lo + static_cast<std::int64_t>(i)).w;
    const std::size_t start = first_index + static_cast<std::size_t>(lo - req.first_cell());
    return pairwise_dot(w, samples.subspan(start, count)) / std::sqrt(req.a);
}

double discrete_transform(const SampledSeries& series, const FilterSpec& filter, const TransformRequest& req,
                          std::size_t first_index) {
    if (std::abs(series.dt - req.delta) > 1e-12 * req.delta) {
        std::ostringstream msg;
        msg << "discrete_transform: series spacing " << series.dt << " does not match delta " << req.delta;
        throw CoverageError(msg.str());
    }
    return discrete_transform(series.view(), filter, req, first_index);
}

double truncated_continuous_oracle(const SampledSeries& series, const FilterSpec& filter, double a, double b,
                                   double theta, std::size_t first_index) {
    return discrete_transform(series, filter, TransformRequest{a, b, theta, series.dt}, first_index);
}

void write_weight_table(std::ostream& out, std::span<const CellWeight> weights) {
    out << "l,t_lo,t_hi,w\n";
    char buf[128];
    for (const auto& c : weights) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(c.l), c.t_lo, c.t_hi, c.w);
        out << buf;
    }
}

}  // namespace gfmm
