#include "gfmm/filter.hpp"

#include "gfmm/error.hpp"

#include <cmath>
#include <numbers>

namespace gfmm {

namespace {

// Largest root of a decreasing-beyond-lo function crossing the threshold, by bisection.
template <class F>
double crossing_radius(F&& g, double threshold, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < threshold ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

FilterSpec mexican_hat(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("mexican_hat: sigma must be positive");
    using std::numbers::pi;
    const double amp = 2.0 / (std::sqrt(3.0 * sigma) * std::pow(pi, 0.25));
    const double amp_hat = std::sqrt(8.0) * std::pow(pi, 0.25) * std::pow(sigma, 2.5) / std::sqrt(3.0);
    const double inv_two_var = 1.0 / (2.0 * sigma * sigma);

    FilterSpec f;
    f.sigma = sigma;
    f.psi = [=](double t) {
        const double u = t / sigma;
        return amp * (1.0 - u * u) * std::exp(-t * t * inv_two_var);
    };
    f.psi_antideriv = [=](double t) { return amp * t * std::exp(-t * t * inv_two_var); };
    f.psi_hat = [=](double lambda) {
        return amp_hat * lambda * lambda * std::exp(-0.5 * sigma * sigma * lambda * lambda);
    };
    f.l2_norm = 1.0;
    // psi > 0 on (-sigma, sigma) and negative outside; Psi(+-inf) = 0.
    f.l1_bound = 4.0 * amp * sigma * std::exp(-0.5);
    f.peak_frequency = std::sqrt(2.0) / sigma;

    const auto& Psi = f.psi_antideriv;
    f.support_radius_time = crossing_radius([&](double t) { return std::abs(Psi(t)); }, 1e-12, sigma, 100.0 * sigma);
    const double c3 = std::pow(f.psi_hat(*f.peak_frequency), 2);
    f.support_radius_freq = crossing_radius(
        [&](double l) { return std::pow(f.psi_hat(l), 2); }, 1e-16 * c3, *f.peak_frequency, 100.0 / sigma);
    // exp(-x) underflows to exactly 0 for x > 745.2; 39^2/2 = 760.5.
    f.zero_radius_time = 39.0 * sigma;
    return f;
}

}  // namespace gfmm
