#include "gfmm/spectral.hpp"

#include "gfmm/error.hpp"
#include "gfmm/filter.hpp"
#include "gfmm/quadrature.hpp"
#include "gfmm/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>

namespace gfmm {

SpectralModel::SpectralModel(double s0, double alpha, Shape h)
    : s0_(s0), alpha_(alpha), h_(std::move(h)) {
    if (!(s0 > 1.0)) {
        std::ostringstream msg;
        msg << "SpectralModel: s0 must exceed 1, got " << s0;
        throw DomainError(msg.str());
    }
    if (!(alpha > 0.0 && alpha < 0.5)) {
        std::ostringstream msg;
        msg << "SpectralModel: alpha must lie in (0, 1/2), got " << alpha;
        throw DomainError(msg.str());
    }
}

void GegenbauerSpec::validate() const {
    if (!(mu > 0.0 && mu < 0.5)) throw DomainError("GegenbauerSpec: mu must lie in (0, 1/2)");
    if (!(eta > -1.0 && eta < 1.0)) throw DomainError("GegenbauerSpec: eta must lie in (-1, 1)");
    if (!(sigma_eps >= 0.0) || !std::isfinite(sigma_eps))
        throw DomainError("GegenbauerSpec: sigma_eps must be finite and non-negative");
    if (n_terms < 1) throw DomainError("GegenbauerSpec: n_terms must be at least 1");
}

double GegenbauerSpec::pole_frequency() const { return std::acos(eta); }

double density(const SpectralModel& model, double lambda) {
    const double s0 = model.s0();
    // |l^2 - s0^2| factored to avoid cancellation next to the pole.
    const double gap = std::abs(lambda - s0) * std::abs(lambda + s0);
    if (gap == 0.0) {
        std::ostringstream msg;
        msg << "density: evaluation at the pole lambda = " << lambda;
        throw SingularityError(msg.str());
    }
    return model.h(lambda) * std::pow(gap, -2.0 * model.alpha());
}

double gegenbauer_density(double s0, double alpha, double lambda) {
    const double gap = 2.0 * std::abs(std::cos(lambda) - std::cos(s0));
    if (gap == 0.0) throw SingularityError("gegenbauer_density: evaluation at the pole");
    const double c = std::pow(2.0 * (1.0 - std::cos(s0)), 2.0 * alpha) * std::pow(s0, -4.0 * alpha);
    return c * std::pow(gap, -2.0 * alpha);
}

std::vector<double> gegenbauer_coeffs(const GegenbauerSpec& spec, std::size_t n_max) {
    std::vector<double> c(n_max + 1);
    c[0] = 1.0;
    if (n_max == 0) return c;
    const double mu = spec.mu;
    const double two_eta = 2.0 * spec.eta;
    c[1] = mu * two_eta;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const double nd = static_cast<double>(n);
        c[n] = (two_eta * (nd + mu - 1.0) * c[n - 1] - (nd + 2.0 * mu - 2.0) * c[n - 2]) / nd;
    }
    return c;
}

namespace {

double autocovariance_from(std::span<const double> coeffs, double sigma_eps, std::size_t lag) {
    if (lag >= coeffs.size()) return 0.0;
    const std::size_t len = coeffs.size() - lag;
    return sigma_eps * sigma_eps * pairwise_dot(coeffs.first(len), coeffs.subspan(lag, len));
}

}  // namespace

double theoretical_autocovariance(const GegenbauerSpec& spec, std::size_t lag) {
    spec.validate();
    if (lag >= spec.n_terms) return 0.0;
    const auto coeffs = gegenbauer_coeffs(spec, spec.n_terms - 1);
    return autocovariance_from(coeffs, spec.sigma_eps, lag);
}

std::vector<double> theoretical_autocovariances(const GegenbauerSpec& spec, std::size_t max_lag) {
    spec.validate();
    const auto coeffs = gegenbauer_coeffs(spec, spec.n_terms - 1);
    std::vector<double> out(max_lag + 1);
    for (std::size_t lag = 0; lag <= max_lag; ++lag)
        out[lag] = autocovariance_from(coeffs, spec.sigma_eps, lag);
    return out;
}

double normalized_sigma(const GegenbauerSpec& spec, double dt) {
    spec.validate();
    if (!(dt > 0.0)) throw DomainError("normalized_sigma: dt must be positive");
    const double s0 = spec.pole_frequency() / dt;
    const double var = 2.0 * std::numbers::pi * std::pow(s0, -4.0 * spec.mu) *
                       std::pow(2.0 * (1.0 - spec.eta), 2.0 * spec.mu) / dt;
    return std::sqrt(var);
}

namespace {

// Breakpoints in frequency for a filter dilated by a: around the spectral peak.
void add_peak_breaks(std::vector<double>& breaks, const FilterSpec& filter, double a, double upper) {
    if (!filter.peak_frequency) return;
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double x = k * *filter.peak_frequency / a;
        if (x > 0.0 && x < upper) breaks.push_back(x);
    }
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

double spectral_second_moment(double a, const SpectralModel& model, const FilterSpec& filter, double rel_tol) {
    if (!(a > 0.0)) throw DomainError("spectral_second_moment: scale a must be positive");
    const double s0 = model.s0();
    const double upper = filter.support_radius_freq / a;

    std::vector<double> breaks{0.0, upper};
    if (s0 < upper) breaks.push_back(s0);
    add_peak_breaks(breaks, filter, a, upper);
    breaks = sorted_unique(std::move(breaks));

    auto integrand = [&](double lambda) {
        const double p = filter.psi_hat(a * lambda);
        if (p == 0.0) return 0.0;
        return a * p * p * density(model, lambda);
    };

    // Even integrand: twice the positive half-line.
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const bool touches_pole = breaks[i] == s0 || breaks[i + 1] == s0;
        total += touches_pole ? integrate_open(integrand, breaks[i], breaks[i + 1], rel_tol)
                              : integrate_adaptive(integrand, breaks[i], breaks[i + 1], rel_tol);
    }
    total.value *= 2.0;
    total.error *= 2.0;
    require_converged(total, rel_tol, "spectral_second_moment");
    return total.value;
}

namespace {

double half_line_moment(const FilterSpec& filter, int power, double rel_tol) {
    std::vector<double> breaks{0.0, filter.support_radius_freq};
    add_peak_breaks(breaks, filter, 1.0, filter.support_radius_freq);
    breaks = sorted_unique(std::move(breaks));
    auto integrand = [&](double lambda) {
        const double p = filter.psi_hat(lambda);
        return std::pow(lambda, power) * p * p;
    };
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        total += integrate_adaptive(integrand, breaks[i], breaks[i + 1], rel_tol);
    require_converged(total, rel_tol, "filter moment");
    return total.value;
}

}  // namespace

double constant_c2(const FilterSpec& filter) { return 2.0 * half_line_moment(filter, 0, 1e-12); }

double constant_c3(const FilterSpec& filter) {
    const double hi = filter.peak_frequency ? 2.0 * *filter.peak_frequency : filter.support_radius_freq;
    auto sq = [&](double lambda) {
        const double p = filter.psi_hat(lambda);
        return p * p;
    };
    return sq(golden_section_maximize(sq, 0.0, hi));
}

double curvature_constant(const FilterSpec& filter) { return 4.0 * half_line_moment(filter, 2, 1e-12); }

}  // namespace gfmm
