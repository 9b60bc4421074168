#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "decompleak/dataset.hpp"
#include "decompleak/decomposition.hpp"
#include "decompleak/error.hpp"
#include "decompleak/spectral.hpp"

using namespace decompleak;

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    double walk = 0;
    for (std::size_t i = 0; i < n; ++i) {
        walk += 0.1 * z(rng);
        v[i] = walk + std::sin(0.07 * double(i)) + 0.5 * z(rng);
    }
    return v;
}

std::vector<double> two_tone_512() {
    std::vector<double> x(512);
    for (std::size_t n = 0; n < 512; ++n) {
        double t = double(n) / 512.0;
        x[n] = std::sin(2 * std::numbers::pi * 25 * t) + std::sin(2 * std::numbers::pi * 3 * t);
    }
    return x;
}

double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Dense SSA oracle: one-sided Jacobi SVD of the transposed trajectory matrix, then
// grouping {1}, {2}, {rest} and anti-diagonal averaging.
std::vector<std::vector<double>> ssa_oracle(const std::vector<double>& x, std::size_t L) {
    const std::size_t N = x.size(), K = N - L + 1;
    // A = X^T, K x L; column j of A is row j of X.
    std::vector<std::vector<double>> col(L, std::vector<double>(K));
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < K; ++j) col[i][j] = x[i + j];
    std::vector<std::vector<double>> V(L, std::vector<double>(L, 0.0));
    for (std::size_t i = 0; i < L; ++i) V[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < L; ++p)
            for (std::size_t q = p + 1; q < L; ++q) {
                double a = 0, b = 0, c = 0;
                for (std::size_t k = 0; k < K; ++k) {
                    a += col[p][k] * col[p][k];
                    b += col[q][k] * col[q][k];
                    c += col[p][k] * col[q][k];
                }
                if (std::abs(c) <= 1e-15 * std::sqrt(a * b) || c == 0.0) continue;
                off = std::max(off, std::abs(c) / std::sqrt(a * b));
                double zeta = (b - a) / (2 * c);
                double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                double cs = 1 / std::sqrt(1 + t * t), sn = cs * t;
                for (std::size_t k = 0; k < K; ++k) {
                    double u = col[p][k], w = col[q][k];
                    col[p][k] = cs * u - sn * w;
                    col[q][k] = sn * u + cs * w;
                }
                for (std::size_t k = 0; k < L; ++k) {
                    double u = V[k][p], w = V[k][q];
                    V[k][p] = cs * u - sn * w;
                    V[k][q] = sn * u + cs * w;
                }
            }
        if (off < 1e-15) break;
    }
    // X = V * B^T with B = A V; term i is V[:,i] * col[i]^T.
    std::vector<std::size_t> order(L);
    for (std::size_t i = 0; i < L; ++i) order[i] = i;
    auto norm2 = [&](std::size_t i) {
        double s = 0;
        for (double v : col[i]) s += v * v;
        return s;
    };
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return norm2(a) > norm2(b); });
    std::vector<std::vector<double>> out(3, std::vector<double>(N, 0.0));
    std::vector<double> counts(N, 0.0);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < K; ++j) counts[i + j] += 1;
    for (std::size_t r = 0; r < L; ++r) {
        std::size_t g = std::min<std::size_t>(r, 2);
        std::size_t e = order[r];
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < K; ++j) out[g][i + j] += V[i][e] * col[e][j];
    }
    for (auto& c : out)
        for (std::size_t n = 0; n < N; ++n) c[n] /= counts[n];
    return out;
}

} // namespace

TEST(Decomposition, ParseMethod) {
    EXPECT_EQ(parse_method("emd"), Method::EMD);
    EXPECT_EQ(parse_method("DWT"), Method::DWT);
    EXPECT_EQ(parse_method("ssa"), Method::SSA);
    EXPECT_EQ(parse_method("none"), Method::Identity);
    EXPECT_THROW(parse_method("vmd"), InvalidConfigError);
}

// ---- EMD ----

TEST(Emd, RampHasNoImfs) {
    std::vector<double> v(32);
    for (int i = 0; i < 32; ++i) v[i] = i + 1;
    auto set = emd_decompose(TimeSeries(v));
    ASSERT_EQ(set.size(), 1u);
    EXPECT_EQ(set.labels[0], "Res");
    EXPECT_EQ(set.components[0], v);
}

TEST(Emd, TooShortAndLabels) {
    EXPECT_THROW(emd_decompose(TimeSeries({1, 2, 1})), InsufficientDataError);
    auto set = emd_decompose(TimeSeries(two_tone_512()));
    ASSERT_GE(set.size(), 3u);
    EXPECT_EQ(set.labels.front(), "IMF1");
    EXPECT_EQ(set.labels.back(), "Res");
}

TEST(Emd, TwoToneDominantBins) {
    auto set = emd_decompose(TimeSeries(two_tone_512()));
    auto f1 = dominant_frequency(set.components[0]);
    auto f2 = dominant_frequency(set.components[1]);
    EXPECT_DOUBLE_EQ(f1.frequency, 25.0 / 512.0);
    EXPECT_DOUBLE_EQ(f2.frequency, 3.0 / 512.0);
}

TEST(Emd, FrequencyOrderingOnToneMixtures) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ph(0, 6.28);
        std::vector<double> x(1024);
        double p1 = ph(rng), p2 = ph(rng), p3 = ph(rng);
        for (std::size_t n = 0; n < x.size(); ++n)
            x[n] = 0.5 * std::sin(2 * std::numbers::pi * 0.2 * n + p1) +
                   std::sin(2 * std::numbers::pi * 0.04 * n + p2) +
                   2 * std::sin(2 * std::numbers::pi * 0.005 * n + p3);
        auto set = emd_decompose(TimeSeries(x));
        for (std::size_t k = 0; k + 2 < set.size(); ++k)
            EXPECT_GE(dominant_frequency(set.components[k]).frequency,
                      dominant_frequency(set.components[k + 1]).frequency)
                << "seed " << seed << " IMF" << k + 1;
    }
}

// Reference output of an independent EMD implementation on the same fixture. Its sifting and
// boundary rules differ, so the comparison is a frozen regression bound: the fast IMF matches
// closely, while the split of the slow tone between IMF2 and the residual differs, so those
// two are compared as a sum.
TEST(Emd, AgreesWithReferenceImplementation) {
    auto ref = load_csv(std::string(TEST_DATA_DIR) + "/two_tone_reference_emd.csv", "imf1");
    auto ref2 = load_csv(std::string(TEST_DATA_DIR) + "/two_tone_reference_emd.csv", "imf2");
    auto ref3 = load_csv(std::string(TEST_DATA_DIR) + "/two_tone_reference_emd.csv", "res");
    auto set = emd_decompose(TimeSeries(two_tone_512()));
    ASSERT_EQ(set.size(), 3u);
    EXPECT_LE(max_abs_diff(set.components[0], ref.values()), 0.12);
    std::vector<double> ours_slow(512), ref_slow(512);
    for (std::size_t i = 0; i < 512; ++i) {
        ours_slow[i] = set.components[1][i] + set.components[2][i];
        ref_slow[i] = ref2[i] + ref3[i];
    }
    EXPECT_LE(max_abs_diff(ours_slow, ref_slow), 0.12);
    // interior agreement is much tighter
    std::vector<double> a(set.components[0].begin() + 32, set.components[0].end() - 32);
    std::vector<double> b(ref.values().begin() + 32, ref.values().end() - 32);
    EXPECT_LE(max_abs_diff(a, b), 0.01);
}

TEST(Emd, ReconstructionAndImfValidity) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto x = random_series(512, seed);
        auto set = emd_decompose(TimeSeries(x));
        auto s = set.sum();
        double scale = max_abs(x);
        EXPECT_LE(max_abs_diff(s, x), 1e-8 * scale);
        for (std::size_t k = 0; k + 1 < set.size(); ++k) {
            auto ex = find_extrema(set.components[k]);
            long extrema = long(ex.maxima.size() + ex.minima.size());
            long zc = long(count_zero_crossings(set.components[k]));
            EXPECT_LE(std::abs(extrema - zc), 1) << "seed " << seed << " IMF" << k + 1;
        }
    }
}

TEST(Emd, Deterministic) {
    auto x = random_series(300, 5);
    auto a = emd_decompose(TimeSeries(x));
    auto b = emd_decompose(TimeSeries(x));
    EXPECT_EQ(a.components, b.components);
}

TEST(Emd, ExtremaAndZeroCrossings) {
    std::vector<double> x{0, 1, 0, -1, -1, -1, 0, 2, 2, 0};
    auto ex = find_extrema(x);
    EXPECT_EQ(ex.maxima, (std::vector<std::size_t>{1, 7}));
    EXPECT_EQ(ex.minima, (std::vector<std::size_t>{4}));
    EXPECT_EQ(count_zero_crossings(x), 2u);
}

TEST(Emd, NaturalSplineInterpolatesAndIsLinearOnLines) {
    std::vector<double> xs{0, 3, 7, 10}, ys{1, 4, 8, 11};
    auto s = natural_spline(xs, ys, 11);
    for (int i = 0; i <= 10; ++i) EXPECT_NEAR(s[i], i + 1.0, 1e-12);
    std::vector<double> ys2{0, 2, -1, 5};
    auto t = natural_spline(xs, ys2, 11);
    EXPECT_NEAR(t[0], 0, 1e-12);
    EXPECT_NEAR(t[3], 2, 1e-12);
    EXPECT_NEAR(t[7], -1, 1e-12);
    EXPECT_NEAR(t[10], 5, 1e-12);
}

// ---- DWT ----

TEST(Dwt, FilterInvariants) {
    DwtConfig cfg;
    const auto& h = cfg.lowpass;
    ASSERT_EQ(h.size(), 10u);
    double s = 0, s2 = 0;
    for (double v : h) {
        s += v;
        s2 += v * v;
    }
    EXPECT_NEAR(s, std::sqrt(2.0), 1e-10);
    EXPECT_NEAR(s2, 1.0, 1e-10);
    for (std::size_t k = 1; k < 5; ++k) {
        double acc = 0;
        for (std::size_t n = 0; n + 2 * k < h.size(); ++n) acc += h[n] * h[n + 2 * k];
        EXPECT_NEAR(acc, 0.0, 1e-10) << "shift " << k;
    }
    auto g = cfg.highpass();
    for (std::size_t n = 0; n < h.size(); ++n)
        EXPECT_EQ(g[n], (n % 2 ? -1.0 : 1.0) * h[h.size() - 1 - n]);
    // vanishing moments of the highpass
    for (int p = 0; p < 5; ++p) {
        double m = 0;
        for (std::size_t n = 0; n < g.size(); ++n) m += std::pow(double(n), p) * g[n];
        EXPECT_NEAR(m, 0.0, 1e-7 * std::pow(10.0, p)) << "moment " << p;
    }
}

TEST(Dwt, ConstantAnnihilated) {
    const double c = 3.7;
    auto set = dwt_decompose(TimeSeries(std::vector<double>(64, c)));
    ASSERT_EQ(set.labels, (std::vector<std::string>{"AC", "DC"}));
    for (std::size_t i = 0; i < 64; ++i) {
        EXPECT_LE(std::abs(set.components[1][i]), 1e-9 * c);
        EXPECT_NEAR(set.components[0][i], c, 1e-9 * c);
    }
}

TEST(Dwt, RampInteriorAnnihilated) {
    std::vector<double> v(128);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * double(i) - 7;
    auto set = dwt_decompose(TimeSeries(v));
    double scale = max_abs(v);
    for (std::size_t i = 12; i + 12 < v.size(); ++i)
        EXPECT_LE(std::abs(set.components[1][i]), 1e-9 * scale) << i;
}

TEST(Dwt, PerfectReconstructionOddAndEvenLengths) {
    for (std::size_t n : {10u, 11u, 37u, 64u, 513u}) {
        auto x = random_series(n, n);
        auto set = dwt_decompose(TimeSeries(x));
        EXPECT_LE(max_abs_diff(set.sum(), x), 1e-10 * std::max(1.0, max_abs(x)));
    }
    EXPECT_THROW(dwt_decompose(TimeSeries(std::vector<double>(9, 1.0))), InsufficientDataError);
}

// ---- SSA ----

TEST(Ssa, WindowResolution) {
    SsaConfig c;
    EXPECT_EQ(c.resolve_window(20), 10u);
    EXPECT_EQ(c.resolve_window(2000), 50u);
    c.window = 7;
    EXPECT_EQ(c.resolve_window(2000), 7u);
    SsaConfig bad;
    bad.window = 20;
    EXPECT_THROW(ssa_decompose(TimeSeries(std::vector<double>(20, 1.0)), bad), InvalidConfigError);
    bad.window = 1;
    EXPECT_THROW(ssa_decompose(TimeSeries(std::vector<double>(20, 1.0)), bad), InvalidConfigError);
}

TEST(Ssa, ConstantIsRankOne) {
    std::vector<double> v(30, 2.5);
    auto set = ssa_decompose(TimeSeries(v));
    ASSERT_EQ(set.labels, (std::vector<std::string>{"SSA1", "SSA2", "SSA3"}));
    auto oracle = ssa_oracle(v, SsaConfig{}.resolve_window(v.size()));
    EXPECT_LE(max_abs_diff(set.components[0], v), 1e-10);
    EXPECT_LE(max_abs_diff(oracle[0], v), 1e-10);
    EXPECT_LE(max_abs(set.components[1]), 1e-10);
    EXPECT_LE(max_abs(set.components[2]), 1e-10);
}

TEST(Ssa, LinearTrendIsRankTwo) {
    std::vector<double> v(64);
    for (std::size_t t = 0; t < 64; ++t) v[t] = 1.5 + 0.25 * double(t);
    SsaConfig cfg;
    cfg.window = 16;
    auto set = ssa_decompose(TimeSeries(v), cfg);
    auto oracle = ssa_oracle(v, 16);
    double scale = max_abs(v);
    std::vector<double> s12(64), o12(64);
    for (std::size_t t = 0; t < 64; ++t) {
        s12[t] = set.components[0][t] + set.components[1][t];
        o12[t] = oracle[0][t] + oracle[1][t];
    }
    EXPECT_LE(max_abs_diff(s12, v), 1e-8 * scale);
    EXPECT_LE(max_abs_diff(o12, v), 1e-8 * scale);
    EXPECT_LE(max_abs(set.components[2]), 1e-8 * scale);
}

TEST(Ssa, MatchesDenseSvdOracle) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto x = random_series(32, seed + 100);
        for (std::size_t L : {3u, 8u, 16u}) {
            SsaConfig cfg;
            cfg.window = L;
            auto set = ssa_decompose(TimeSeries(x), cfg);
            auto oracle = ssa_oracle(x, L);
            for (int k = 0; k < 3; ++k)
                EXPECT_LE(max_abs_diff(set.components[k], oracle[k]), 1e-8)
                    << "seed " << seed << " L " << L << " component " << k;
        }
    }
}

TEST(Ssa, Reconstruction) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto x = random_series(512, seed);
        auto set = ssa_decompose(TimeSeries(x));
        EXPECT_LE(max_abs_diff(set.sum(), x), 1e-10 * std::max(1.0, max_abs(x)));
    }
}

TEST(Decomposition, DispatchAndIdentity) {
    auto x = random_series(100, 1);
    DecompositionConfig cfg;
    auto id = decompose(Method::Identity, TimeSeries(x), cfg);
    ASSERT_EQ(id.size(), 1u);
    EXPECT_EQ(id.components[0], x);
    EXPECT_EQ(decompose(Method::DWT, TimeSeries(x), cfg).components,
              dwt_decompose(TimeSeries(x)).components);
    EXPECT_EQ(min_length(Method::DWT, cfg), 10u);
    EXPECT_EQ(min_length(Method::EMD, cfg), 4u);
}
