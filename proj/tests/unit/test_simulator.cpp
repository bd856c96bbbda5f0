#include <gfmm/error.hpp>
#include <gfmm/rng.hpp>
#include <gfmm/simulator.hpp>
#include <gfmm/spectral.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace gfmm;

TEST(Philox, KnownAnswerVectors) {
    // Published Philox4x32-10 test vectors.
    const auto zero = Philox4x32(0)(0, 0);
    EXPECT_EQ(zero, (Philox4x32::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    const auto ones = Philox4x32(~0ull)(~0ull, ~0ull);
    EXPECT_EQ(ones, (Philox4x32::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    const auto pi = Philox4x32(0x299f31d0a4093822ull)(0x0370734413198a2eull, 0x85a308d3243f6a88ull);
    EXPECT_EQ(pi, (Philox4x32::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(NormalStream, RandomAccessMatchesSequential) {
    const NormalStream s(42);
    std::vector<double> all(101);
    s.fill(all.data(), all.size());
    std::vector<double> tail(50);
    s.fill(tail.data(), tail.size(), 51);
    for (std::size_t i = 0; i < tail.size(); ++i) EXPECT_EQ(tail[i], all[51 + i]);
}

TEST(NormalStream, Moments) {
    const NormalStream s(7);
    std::vector<double> z(200000);
    s.fill(z.data(), z.size());
    const double mean = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
    double var = 0, kurt = 0;
    for (double v : z) {
        var += (v - mean) * (v - mean);
        kurt += std::pow(v - mean, 4);
    }
    var /= z.size();
    kurt /= z.size() * var * var;
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(var, 1.0, 0.01);
    EXPECT_NEAR(kurt, 3.0, 0.05);
}

TEST(MixSeed, DistinctStreams) {
    EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
    EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
    EXPECT_EQ(mix_seed(9, 4), mix_seed(9, 4));
}

TEST(Simulate, ZeroNoiseGivesZeros) {
    const auto s = simulate(GegenbauerSpec{0.1, 0.3, 0.0, 50}, 100, 1);
    for (double v : s.values) EXPECT_EQ(v, 0.0);
}

TEST(Simulate, SingleTermIsWhiteNoise) {
    const auto s = simulate(GegenbauerSpec{0.1, 0.3, 1.0, 1}, 64, 5);
    std::vector<double> z(65);
    NormalStream(5).fill(z.data(), z.size());
    // X(t) = eps(t), the innovation after the single burn-in draw.
    for (std::size_t t = 0; t < 64; ++t) EXPECT_EQ(s.values[t], z[t + 1]);
    EXPECT_EQ(s.dt, 1.0);
    EXPECT_EQ(s.seed, 5u);
}

TEST(Simulate, Deterministic) {
    const GegenbauerSpec spec{0.1, 0.3, 1.0, 500};
    const auto a = simulate(spec, 1000, 99);
    const auto b = simulate(spec, 1000, 99);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, simulate(spec, 1000, 100).values);
}

TEST(Simulate, MatchesDirectConvolutionByHand) {
    const GegenbauerSpec spec{0.2, -0.4, 1.5, 7};
    const auto c = gegenbauer_coeffs(spec, 6);
    const auto s = simulate(spec, 10, 3);
    std::vector<double> e(17);
    NormalStream(3).fill(e.data(), e.size());
    for (std::size_t t = 0; t < 10; ++t) {
        double x = 0;
        for (std::size_t n = 0; n < 7; ++n) x += c[n] * 1.5 * e[t + 7 - n];
        EXPECT_NEAR(s.values[t], x, 1e-14);
    }
}

TEST(Simulate, FftPathAgreesWithDirect) {
    const GegenbauerSpec spec{0.1, 0.3, 1.0, 3000};
    SimulateOptions fft;
    fft.direct_max_terms = 0;
    const auto a = simulate(spec, 7000, 17);
    const auto b = simulate(spec, 7000, 17, fft);
    double scale = 0;
    for (double v : a.values) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-12 * scale) << i;
}

TEST(Simulate, CapacityError) {
    SimulateOptions tiny;
    tiny.memory_budget_bytes = 1024;
    EXPECT_THROW(simulate(GegenbauerSpec{0.1, 0.3, 1.0, 100}, 1000, 1, tiny), CapacityError);
    EXPECT_THROW(simulate(GegenbauerSpec{0.1, 0.3, 1.0, 100}, 0, 1), DomainError);
}

TEST(Simulate, SampleVarianceNearTheory) {
    const GegenbauerSpec spec{0.1, 0.3, 1.0, 2000};
    SimulateOptions fft;
    fft.direct_max_terms = 0;
    const auto s = simulate(spec, 100000, 2024, fft);
    double m = 0, v = 0;
    for (double x : s.values) m += x;
    m /= s.size();
    for (double x : s.values) v += (x - m) * (x - m);
    v /= s.size();
    EXPECT_NEAR(v / theoretical_autocovariance(spec, 0), 1.0, 0.05);
    EXPECT_LT(std::abs(m), 10.0 * 3.0 * std::sqrt(v / s.size()));
}

TEST(Rescale, MetadataOnly) {
    const auto s = simulate(GegenbauerSpec{0.1, 0.3, 1.0, 10}, 10000, 1);
    const auto same = rescale(s, 1.0);
    EXPECT_EQ(same.values, s.values);
    EXPECT_EQ(same.dt, s.dt);
    const auto half = rescale(s, 0.5);
    EXPECT_EQ(half.values, s.values);
    EXPECT_EQ(half.dt, 0.5);
    const double d5 = std::pow(5.0, -22.0 - 1.0 / 6.0);
    EXPECT_DOUBLE_EQ(rescale(s, d5).dt * s.size(), 1e4 * d5);
    EXPECT_THROW(rescale(s, 0.0), DomainError);
}

TEST(SampledSeries, Prefix) {
    SampledSeries s{{1, 2, 3, 4}, 0.5, 0.0, 8};
    const auto p = s.prefix(2);
    EXPECT_EQ(p.values, (std::vector<double>{1, 2}));
    EXPECT_EQ(p.dt, 0.5);
    EXPECT_EQ(p.seed, 8u);
    EXPECT_THROW(s.prefix(0), DomainError);
    EXPECT_THROW(s.prefix(5), DomainError);
}
