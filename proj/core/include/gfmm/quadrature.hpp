#pragma once

#include <functional>
#include <string_view>

namespace gfmm {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error

    QuadratureResult& operator+=(const QuadratureResult& other) {
        value += other.value;
        error += other.error;
        return *this;
    }
};

using RealFunction = std::function<double(double)>;

/// Double-exponential (tanh-sinh) rule on [lo, hi], targeting rel_tol. Endpoints
/// are never evaluated, so integrable endpoint singularities are fine.
/// Throws NumericError only on a non-finite result; use require_converged for the tolerance.
QuadratureResult integrate_open(const RealFunction& f, double lo, double hi, double rel_tol);

/// Adaptive 61-point Gauss-Kronrod on [lo, hi] for smooth integrands.
QuadratureResult integrate_adaptive(const RealFunction& f, double lo, double hi, double rel_tol);

/// Throws NumericError (carrying the achieved error) if r.error > rel_tol * |r.value|.
void require_converged(const QuadratureResult& r, double rel_tol, std::string_view what);

/// Golden-section search for the maximiser of a unimodal f on [lo, hi].
double golden_section_maximize(const RealFunction& f, double lo, double hi, double x_tol = 1e-12);

}  // namespace gfmm
