#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "decompleak/error.hpp"
#include "decompleak/series.hpp"

using namespace decompleak;

TEST(TimeSeries, RejectsNonFiniteAndEmpty) {
    EXPECT_THROW(TimeSeries(std::vector<double>{}), InvalidInputError);
    EXPECT_THROW(TimeSeries({1.0, std::nan("")}), InvalidInputError);
    EXPECT_THROW(TimeSeries({std::numeric_limits<double>::infinity()}), InvalidInputError);
    TimeSeries s({1, 2, 3}, "x");
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.prefix(2).values(), (std::vector<double>{1, 2}));
    EXPECT_EQ(s.prefix(2).name(), "x");
}

TEST(Split, FloorArithmetic) {
    TimeSeries s(std::vector<double>(8, 1.0));
    auto r = split_chronological(s, 0.75);
    EXPECT_EQ(r.spec.train_len, 6u);
    EXPECT_EQ(r.test.size(), 2u);
}

TEST(Split, HsSizedSeries) {
    TimeSeries s(std::vector<double>(70128, 0.5));
    auto r = split_chronological(s, 0.75);
    EXPECT_EQ(r.spec.train_len, 52596u);
    EXPECT_EQ(r.spec.test_len(), 17532u);
}

TEST(Split, InvalidFractions) {
    TimeSeries s(std::vector<double>(8, 1.0));
    EXPECT_THROW(split_chronological(s, 1.0), InvalidConfigError);
    EXPECT_THROW(split_chronological(s, 0.0), InvalidConfigError);
    EXPECT_THROW(split_chronological(s, -0.2), InvalidConfigError);
    // floor(0.1 * 8) = 0 leaves training empty
    EXPECT_THROW(split_chronological(s, 0.1), InvalidConfigError);
    EXPECT_THROW(split_chronological(TimeSeries({1.0}), 0.5), InvalidConfigError);
}

TEST(Split, ConcatenationIsBitIdentical) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(10 + trial * 7);
        for (auto& x : v) x = n(rng);
        auto r = split_chronological(TimeSeries(v), 0.6);
        std::vector<double> joined = r.train.values();
        joined.insert(joined.end(), r.test.values().begin(), r.test.values().end());
        EXPECT_EQ(joined, v);
    }
}

TEST(Scaler, FitExamples) {
    auto p = minmax_fit(std::vector<double>{1, 2, 3});
    EXPECT_EQ(p.min, 1);
    EXPECT_EQ(p.max, 3);
    auto d = minmax_fit(std::vector<double>{5, 5, 5});
    EXPECT_TRUE(d.degenerate());
    auto q = minmax_fit(std::vector<double>{-2, 0, 2});
    EXPECT_EQ(q.min, -2);
    EXPECT_EQ(q.max, 2);
    EXPECT_THROW(minmax_fit(std::vector<double>{}), InvalidInputError);
}

TEST(Scaler, ApplyAndDegenerate) {
    ScalerParams p{1, 3};
    EXPECT_EQ(minmax_apply(p, std::vector<double>{1, 2, 3}), (std::vector<double>{0, 0.5, 1}));
    ScalerParams c{5, 5};
    EXPECT_EQ(minmax_apply(c, std::vector<double>{5, 5}), (std::vector<double>{0, 0}));
    EXPECT_EQ(minmax_invert(c, 0.7), 5.0);
}

TEST(Scaler, RoundTripAndNoClipping) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50, 50);
    std::vector<double> train(200), test(50);
    for (auto& x : train) x = u(rng);
    for (auto& x : test) x = 3 * u(rng);
    auto p = minmax_fit(train);
    for (double y : minmax_apply(p, train)) {
        EXPECT_GE(y, 0.0);
        EXPECT_LE(y, 1.0);
    }
    bool outside = false;
    auto scaled = minmax_apply(p, test);
    auto back = minmax_invert(p, scaled);
    for (std::size_t i = 0; i < test.size(); ++i) {
        outside |= scaled[i] < 0.0 || scaled[i] > 1.0;
        EXPECT_NEAR(back[i], test[i], 1e-12);
    }
    EXPECT_TRUE(outside);
}

namespace {
FeatureMatrix single_channel(std::vector<double> v) {
    FeatureMatrix f;
    f.channels = {std::move(v)};
    f.labels = {"raw"};
    return f;
}
} // namespace

TEST(Windows, LengthFiveWindowTwo) {
    std::vector<double> v{10, 20, 30, 40, 50};
    auto w = make_windows(single_channel(v), v, WindowSpec{2, 1});
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w.row(0)[0], 10);
    EXPECT_EQ(w.row(0)[1], 20);
    EXPECT_EQ(w.targets[0], 30);
    EXPECT_EQ(w.targets[2], 50);
}

TEST(Windows, InsufficientData) {
    std::vector<double> v(12, 1.0);
    EXPECT_THROW(make_windows(single_channel(v), v, WindowSpec{12, 1}), InsufficientDataError);
    EXPECT_THROW(make_windows(single_channel(v), v, WindowSpec{3, 2}), InvalidConfigError);
}

TEST(Windows, CountPropertyAndLayout) {
    for (std::size_t L = 2; L < 30; ++L)
        for (std::size_t W = 1; W < L; ++W) {
            std::vector<double> a(L), b(L);
            for (std::size_t i = 0; i < L; ++i) {
                a[i] = double(i);
                b[i] = 100.0 + double(i);
            }
            FeatureMatrix f;
            f.channels = {a, b};
            f.labels = {"raw", "c"};
            auto w = make_windows(f, a, WindowSpec{W, 1});
            ASSERT_EQ(w.size(), L - W);
            ASSERT_EQ(w.width(), 2 * W);
            std::size_t i = (L - W) / 2;
            // time-major, channel-minor
            EXPECT_EQ(w.row(i)[2 * (W - 1)], a[i + W - 1]);
            EXPECT_EQ(w.row(i)[2 * (W - 1) + 1], b[i + W - 1]);
            EXPECT_EQ(w.targets[i], a[i + W]);
        }
}
