#pragma once

#include <functional>
#include <optional>

namespace gfmm {

/// A real, even, zero-mean filter psi together with the quantities the
/// transform and the spectral integrals need.
struct FilterSpec {
    std::function<double(double)> psi;
    /// Antiderivative Psi with Psi(+-inf) = 0. Empty: weights fall back to quadrature.
    std::function<double(double)> psi_antideriv;
    std::function<double(double)> psi_hat;
    double l2_norm = 0.0;
    double l1_bound = 0.0;
    /// |Psi(+-support_radius_time)| < 1e-12.
    double support_radius_time = 0.0;
    /// |psi_hat(l)|^2 < 1e-16 max|psi_hat|^2 beyond this radius.
    double support_radius_freq = 0.0;
    double sigma = 1.0;
    /// Location of max |psi_hat| on the positive half-line, if known.
    std::optional<double> peak_frequency;
    /// psi_antideriv evaluates to exactly 0.0 for |t| beyond this radius.
    std::optional<double> zero_radius_time;
};

/// Mexican hat psi(t) = 2/(sqrt(3 sigma) pi^(1/4)) (1 - (t/sigma)^2) exp(-t^2/(2 sigma^2)),
/// unit L2 norm. Throws DomainError unless sigma > 0.
FilterSpec mexican_hat(double sigma = 1.0);

}  // namespace gfmm
