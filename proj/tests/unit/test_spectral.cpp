#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "decompleak/error.hpp"
#include "decompleak/spectral.hpp"
#include "decompleak/synthetic.hpp"

using namespace decompleak;
using cd = std::complex<double>;

namespace {
// O(N^2) reference transform
std::vector<cd> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cd acc = 0;
        for (std::size_t j = 0; j < n; ++j)
            acc += x[j] * std::polar(1.0, -2 * std::numbers::pi * double(k * j % n) / double(n));
        out[k] = acc;
    }
    return out;
}

std::vector<double> randn(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    return v;
}
} // namespace

TEST(Fft, Impulse) {
    std::vector<double> x(8, 0.0);
    x[0] = 1;
    for (auto c : fft(x)) EXPECT_NEAR(std::abs(c - cd(1, 0)), 0.0, 1e-15);
}

TEST(Fft, CosinePeaks) {
    std::vector<double> x(64);
    for (std::size_t n = 0; n < 64; ++n) x[n] = std::cos(2 * std::numbers::pi * 5 * n / 64.0);
    auto X = fft(x);
    for (std::size_t k = 0; k < 64; ++k) {
        double m = std::abs(X[k]);
        if (k == 5 || k == 59)
            EXPECT_NEAR(m, 32.0, 1e-10);
        else
            EXPECT_LT(m, 1e-10);
    }
}

TEST(Fft, MatchesNaiveDftAndPads) {
    auto x = randn(64, 1);
    auto a = fft(x);
    auto b = naive_dft(x);
    for (std::size_t k = 0; k < 64; ++k) EXPECT_LT(std::abs(a[k] - b[k]), 1e-10);
    auto y = randn(37, 2);
    EXPECT_EQ(fft(y).size(), 64u);
    EXPECT_EQ(next_pow2(37), 64u);
    EXPECT_EQ(next_pow2(64), 64u);
    EXPECT_EQ(next_pow2(1), 1u);
    EXPECT_THROW(fft(std::vector<double>{}), InvalidInputError);
}

TEST(Fft, Parseval) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto x = randn(256, s);
        auto X = fft(x);
        double e = 0, E = 0;
        for (double v : x) e += v * v;
        for (auto c : X) E += std::norm(c);
        EXPECT_NEAR(E / 256.0, e, 1e-9 * e);
    }
}

TEST(Fft, LinearityAndRoundTrip) {
    auto x = randn(128, 3), y = randn(128, 4);
    const double a = 1.7, b = -0.4;
    std::vector<double> z(128);
    for (std::size_t i = 0; i < 128; ++i) z[i] = a * x[i] + b * y[i];
    auto X = fft(x), Y = fft(y), Z = fft(z);
    for (std::size_t k = 0; k < 128; ++k) EXPECT_LT(std::abs(Z[k] - (a * X[k] + b * Y[k])), 1e-10);
    auto back = ifft(X);
    for (std::size_t i = 0; i < 128; ++i) {
        EXPECT_NEAR(back[i].real(), x[i], 1e-10);
        EXPECT_NEAR(back[i].imag(), 0.0, 1e-10);
    }
    std::vector<cd> bad(12);
    EXPECT_THROW(ifft(bad), InvalidInputError);
}

TEST(PowerSpectrum, Shape) {
    auto x = randn(100, 9);
    auto s = power_spectrum(x);
    EXPECT_EQ(s.n, 128u);
    ASSERT_EQ(s.frequencies.size(), 65u);
    ASSERT_EQ(s.power.size(), 65u);
    EXPECT_EQ(s.frequencies.front(), 0.0);
    EXPECT_EQ(s.frequencies.back(), 0.5);
    for (double p : s.power) EXPECT_GE(p, 0.0);
}

TEST(Dominant, SineAtBinFive) {
    std::vector<double> x(64);
    for (std::size_t n = 0; n < 64; ++n) x[n] = std::sin(2 * std::numbers::pi * 5 * n / 64.0);
    auto d = dominant_frequency(x);
    EXPECT_DOUBLE_EQ(d.frequency, 5.0 / 64.0);
    EXPECT_FALSE(d.low_power);
}

TEST(Dominant, ConstantIsLowPower) {
    auto d = dominant_frequency(std::vector<double>(64, 4.0));
    EXPECT_DOUBLE_EQ(d.frequency, 1.0 / 64.0);
    EXPECT_TRUE(d.low_power);
}

TEST(Dominant, NoiselessSyntheticToneExact) {
    SyntheticSpec spec;
    spec.length = 256;
    spec.tones = {{1.0, 0.125, 0.3}};
    auto x = gen_synthetic(spec);
    EXPECT_DOUBLE_EQ(dominant_frequency(x.values()).frequency, 0.125);
}
