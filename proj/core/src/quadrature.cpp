#include "gfmm/quadrature.hpp"

#include "gfmm/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace gfmm {

namespace {

void require_finite(const char* rule, const QuadratureResult& r, double lo, double hi) {
    if (!std::isfinite(r.value) || !std::isfinite(r.error)) {
        std::ostringstream msg;
        msg << rule << ": non-finite result on [" << lo << ", " << hi << "]";
        throw NumericError(msg.str(), std::numeric_limits<double>::infinity());
    }
}

}  // namespace

QuadratureResult integrate_open(const RealFunction& f, double lo, double hi, double rel_tol) {
    if (!(hi > lo)) return {};
    // Boost 1.74 declares integrate() const but defines it non-const; one rule per thread.
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    QuadratureResult r;
    double l1 = 0.0;
    try {
        r.value = rule.integrate(f, lo, hi, rel_tol * 0.1, &r.error, &l1);
    } catch (const std::domain_error& e) {
        throw NumericError(std::string("tanh-sinh: ") + e.what(), std::numeric_limits<double>::infinity());
    } catch (const std::overflow_error& e) {
        throw NumericError(std::string("tanh-sinh: ") + e.what(), std::numeric_limits<double>::infinity());
    }
    // Boost reports the error relative to the L1 norm of the integrand.
    r.error *= l1;
    require_finite("tanh-sinh", r, lo, hi);
    return r;
}

QuadratureResult integrate_adaptive(const RealFunction& f, double lo, double hi, double rel_tol) {
    if (!(hi > lo)) return {};
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    QuadratureResult r;
    double l1 = 0.0;
    r.value = GK::integrate(f, lo, hi, 20, rel_tol * 0.1, &r.error, &l1);
    r.error *= l1;
    require_finite("gauss-kronrod", r, lo, hi);
    return r;
}

void require_converged(const QuadratureResult& r, double rel_tol, std::string_view what) {
    if (r.error > rel_tol * std::abs(r.value) && r.error > std::numeric_limits<double>::min()) {
        std::ostringstream msg;
        msg << what << ": quadrature did not converge, estimated error " << r.error << " for value "
            << r.value << " (requested relative tolerance " << rel_tol << ")";
        throw NumericError(msg.str(), r.error);
    }
}

double golden_section_maximize(const RealFunction& f, double lo, double hi, double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 500 && (b - a) > x_tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace gfmm
