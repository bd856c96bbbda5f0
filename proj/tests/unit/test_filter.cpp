#include <gfmm/error.hpp>
#include <gfmm/filter.hpp>
#include <gfmm/quadrature.hpp>

#include <gtest/gtest.h>

#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace gfmm;

TEST(MexicanHat, PeakValue) {
    const auto f = mexican_hat(1.0);
    EXPECT_NEAR(f.psi(0.0), 2.0 / (std::sqrt(3.0) * std::pow(std::numbers::pi, 0.25)), 1e-15);
    EXPECT_NEAR(f.psi(0.0), 0.8673, 1e-4);
}

TEST(MexicanHat, RejectsBadSigma) {
    EXPECT_THROW(mexican_hat(0.0), DomainError);
    EXPECT_THROW(mexican_hat(-1.0), DomainError);
}

TEST(MexicanHat, EvenFilterOddAntiderivative) {
    for (double s : {0.5, 1.0, 3.0}) {
        const auto f = mexican_hat(s);
        EXPECT_EQ(f.psi_hat(0.0), 0.0);
        EXPECT_EQ(f.psi_antideriv(0.0), 0.0);
        for (double t = 0.05; t < 10.0; t += 0.173) {
            EXPECT_EQ(f.psi(t), f.psi(-t));
            EXPECT_EQ(f.psi_antideriv(-t), -f.psi_antideriv(t));
        }
    }
}

TEST(MexicanHat, AntiderivativeDifferentiatesToFilter) {
    const auto f = mexican_hat(1.3);
    const double h = 1e-5;
    for (double t = -6.0; t <= 6.0; t += 0.11) {
        const double fd = (f.psi_antideriv(t + h) - f.psi_antideriv(t - h)) / (2.0 * h);
        EXPECT_NEAR(fd, f.psi(t), 1e-6) << t;
    }
}

TEST(MexicanHat, UnitNormAndSupport) {
    for (double s : {0.5, 1.0, 2.0}) {
        const auto f = mexican_hat(s);
        const double l2 = oracle::riemann([&](double t) { return f.psi(t) * f.psi(t); }, -40 * s, 40 * s, 400000);
        EXPECT_NEAR(l2, 1.0, 1e-9);
        EXPECT_EQ(f.l2_norm, 1.0);
        const double l1 = oracle::riemann([&](double t) { return std::abs(f.psi(t)); }, -40 * s, 40 * s, 400000);
        EXPECT_NEAR(f.l1_bound, l1, 1e-6);
        EXPECT_LT(std::abs(f.psi_antideriv(f.support_radius_time)), 1e-12);
        EXPECT_LT(std::abs(f.psi_antideriv(-f.support_radius_time)), 1e-12);
        EXPECT_EQ(f.psi_antideriv(*f.zero_radius_time + 1e-9), 0.0);
        const double c3 = std::pow(f.psi_hat(std::sqrt(2.0) / s), 2);
        EXPECT_LT(std::pow(f.psi_hat(f.support_radius_freq), 2), 1e-16 * c3 * 1.0001);
    }
}

TEST(MexicanHat, FourierTransformMatchesClosedForm) {
    const auto f = mexican_hat(1.0);
    for (double l = 0.0; l < 6.0; l += 0.37) EXPECT_NEAR(f.psi_hat(l), oracle::mexican_hat_hat(l, 1.0), 1e-14);
    // Fourier integral of psi against cos(l t).
    for (double l : {0.5, 1.4, 3.0}) {
        const double ft = oracle::riemann([&](double t) { return f.psi(t) * std::cos(l * t); }, -40, 40, 200000);
        EXPECT_NEAR(ft, f.psi_hat(l), 1e-9) << l;
    }
}
