#include "gfmm/lambert_w.hpp"

#include "gfmm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gfmm {

namespace {

double initial_guess(double x) {
    using std::numbers::e;
    if (x < -0.25) {
        const double p = std::sqrt(std::max(0.0, 2.0 * (e * x + 1.0)));
        return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
    }
    if (x <= 0.3) return x * (1.0 + x * (-1.0 + x * (1.5 + x * (-8.0 / 3.0))));
    if (x <= std::numbers::e) {
        const double l = std::log1p(x);
        return l * (1.0 - std::log1p(l) / (2.0 + l));
    }
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
    constexpr double inv_e = 0.36787944117144233;
    if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
    if (x < -inv_e) {
        // -1/e itself is not representable; accept arguments within rounding of it.
        if (x >= -inv_e * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) return -1.0;
        std::ostringstream msg;
        msg.precision(17);
        msg << "lambert_w0: argument " << x << " below -1/e";
        throw DomainError(msg.str());
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;

    double w = initial_guess(x);
    // Next to the branch point Halley's denominator vanishes; the series is already exact there.
    if (w + 1.0 < 1e-3) return w;
    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) return w;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) return w;
    }
    const double residual = w * std::exp(w) - x;
    if (std::abs(residual) <= 1e-13 * std::max(1.0, std::abs(x))) return w;
    throw NumericError("lambert_w0: Halley iteration did not converge", std::abs(residual));
}

}  // namespace gfmm
