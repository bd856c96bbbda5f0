#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gfmm {

struct FilterSpec;

/// Semiparametric spectral density f(l) = h(l) / |l^2 - s0^2|^(2 alpha)
/// with a pole at +-s0 (cyclic frequency) and long-memory exponent alpha.
class SpectralModel {
public:
    using Shape = std::function<double(double)>;

    /// Throws DomainError unless s0 > 1 and 0 < alpha < 1/2. h defaults to 1.
    SpectralModel(double s0, double alpha, Shape h = {});

    double s0() const noexcept { return s0_; }
    double alpha() const noexcept { return alpha_; }
    double h(double lambda) const { return h_ ? h_(lambda) : 1.0; }

private:
    double s0_;
    double alpha_;
    Shape h_;
};

/// Gegenbauer MA process X(t) = sum_{n < n_terms} C_n^mu(2 eta) eps(t - n).
struct GegenbauerSpec {
    double mu = 0.1;          // long-memory exponent, in (0, 1/2)
    double eta = 0.3;         // cos of the pole frequency, in (-1, 1)
    double sigma_eps = 1.0;   // innovation standard deviation
    std::size_t n_terms = 10000;

    /// Throws DomainError on out-of-range fields.
    void validate() const;

    /// Pole frequency in native (per-sample) units, arccos(eta).
    double pole_frequency() const;
};

/// f(lambda) for the semiparametric model. Throws SingularityError at lambda = +-s0.
double density(const SpectralModel& model, double lambda);

/// Gegenbauer-form density C (2|cos l - cos s0|)^(-2 alpha), with C chosen so that
/// it equals the semiparametric form s0^(-4 alpha) at l = 0.
double gegenbauer_density(double s0, double alpha, double lambda);

/// C_n^mu(2 eta) for n = 0..n_max via the three-term recurrence.
std::vector<double> gegenbauer_coeffs(const GegenbauerSpec& spec, std::size_t n_max);

/// sigma_eps^2 * sum_n C_n C_{n+lag} over the truncated MA; 0 for lag >= n_terms.
double theoretical_autocovariance(const GegenbauerSpec& spec, std::size_t lag);

/// Same as above for lags 0..max_lag, sharing one coefficient table.
std::vector<double> theoretical_autocovariances(const GegenbauerSpec& spec, std::size_t max_lag);

/// Innovation standard deviation that makes the Gegenbauer process, read on a
/// grid of spacing dt, have spectral density s0^(-4 mu) at frequency 0 (h(0) = 1).
double normalized_sigma(const GegenbauerSpec& spec, double dt = 1.0);

/// J(a) = a * int |psi_hat(a l)|^2 f(l) dl, the second moment of the filter
/// transform at scale a. Adaptive quadrature split at +-s0 and at the filter's
/// effective spectral support; throws NumericError if rel_tol is not reached.
double spectral_second_moment(double a, const SpectralModel& model, const FilterSpec& filter,
                              double rel_tol = 1e-8);

/// c2 = int |psi_hat|^2.
double constant_c2(const FilterSpec& filter);

/// c3 = max |psi_hat|^2.
double constant_c3(const FilterSpec& filter);

/// kappa = 2 int l^2 |psi_hat(l)|^2 dl. The first statistic satisfies
/// J(a) = c2 s0^(-4 alpha) + a^(-2) kappa alpha s0^(-4 alpha - 2) + O(a^(-4)),
/// so kappa is the normaliser that maps the second statistic onto alpha s0^(-4 alpha - 2).
double curvature_constant(const FilterSpec& filter);

}  // namespace gfmm
