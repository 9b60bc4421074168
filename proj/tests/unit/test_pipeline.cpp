#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "decompleak/error.hpp"
#include "decompleak/pipeline.hpp"
#include "decompleak/synthetic.hpp"

using namespace decompleak;

namespace {

TimeSeries noisy_sine(std::size_t n, std::uint64_t seed) {
    SyntheticSpec s;
    s.length = n;
    s.tones = {{1.0, 0.05, 0.0}, {2.0, 0.01, 0.5}};
    s.sigma = 0.3;
    s.seed = seed;
    return gen_synthetic(s);
}

std::vector<std::string> layout(const TimeSeries& train, Method m, const DecompositionConfig& cfg) {
    return build_train_features(train, m, cfg).labels;
}

// Copy of `series` with every value from index `from` on replaced by random noise.
TimeSeries perturb_future(const TimeSeries& series, std::size_t from, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 3.0);
    std::vector<double> v = series.values();
    for (std::size_t i = from; i < v.size(); ++i) v[i] += z(rng);
    return TimeSeries(v);
}

std::span<const double> window_of(const WindowSet& w, std::size_t i) { return w.row(i); }

bool same_row(const WindowSet& a, std::size_t i, const WindowSet& b, std::size_t j) {
    auto ra = a.row(i), rb = b.row(j);
    return std::equal(ra.begin(), ra.end(), rb.begin(), rb.end());
}

} // namespace

TEST(Pipeline, ModeNames) {
    std::vector<std::string> labels{"raw", "IMF1", "Res"};
    EXPECT_EQ(PipelineMode::raw_only().name(), "raw");
    EXPECT_EQ(PipelineMode::leaked_full(Method::SSA).name(), "leaked");
    EXPECT_EQ(PipelineMode::causal_full(Method::SSA).name(), "causal");
    EXPECT_EQ(PipelineMode::single(Method::EMD, 1, true).name(labels), "single-leaked:IMF1");
    EXPECT_EQ(PipelineMode::single(Method::EMD, 2, false).name(labels), "single-causal:Res");
    EXPECT_EQ(PipelineMode::summation(Method::EMD, true).name(), "summation-leaked");
    EXPECT_TRUE(PipelineMode::summation(Method::EMD, true).uses_leaked_features());
    EXPECT_FALSE(PipelineMode::causal_full(Method::EMD).uses_leaked_features());
}

TEST(Pipeline, TrainFeatureChannelCounts) {
    auto s = noisy_sine(400, 1);
    DecompositionConfig cfg;
    auto emd = build_train_features(s, Method::EMD, cfg);
    auto emd_set = emd_decompose(s, cfg.emd);
    EXPECT_EQ(emd.channel_count(), emd_set.size() + 1);
    EXPECT_EQ(build_train_features(s, Method::DWT, cfg).channel_count(), 3u);
    auto ssa = build_train_features(s, Method::SSA, cfg);
    EXPECT_EQ(ssa.channel_count(), 4u);
    EXPECT_EQ(ssa.labels, (std::vector<std::string>{"raw", "SSA1", "SSA2", "SSA3"}));
    EXPECT_EQ(ssa.channels[0], s.values());
    EXPECT_EQ(ssa.length(), 400u);
}

TEST(Pipeline, IdentityLeakedEqualsCausal) {
    auto s = noisy_sine(200, 2);
    auto split = split_chronological(s, 0.75).spec;
    DecompositionConfig cfg;
    WindowSpec w{12, 1};
    auto labels = layout(s.prefix(split.train_len), Method::Identity, cfg);
    auto a = build_test_features_leaked(s, split, Method::Identity, cfg, w, labels);
    auto b = build_test_features_causal(s, split, Method::Identity, cfg, w, labels);
    EXPECT_EQ(a.inputs, b.inputs);
    EXPECT_EQ(a.targets, b.targets);
}

TEST(Pipeline, LeakedWindowSlicesFullDecomposition) {
    auto s = noisy_sine(300, 3);
    auto split = split_chronological(s, 0.75).spec;
    DecompositionConfig cfg;
    WindowSpec w{12, 1};
    auto labels = layout(s.prefix(split.train_len), Method::SSA, cfg);
    auto leaked = build_test_features_leaked(s, split, Method::SSA, cfg, w, labels);
    ASSERT_EQ(leaked.size(), split.test_len());
    auto full = ssa_decompose(s, cfg.ssa);
    const std::size_t P = split.train_len, C = 4;
    for (std::size_t i : {0ul, 5ul, split.test_len() - 1}) {
        auto row = window_of(leaked, i);
        for (std::size_t r = 0; r < 12; ++r) {
            std::size_t t = P + i - 12 + r;
            EXPECT_EQ(row[r * C], s[t]);
            for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(row[r * C + 1 + k], full.components[k][t]);
        }
        EXPECT_EQ(leaked.targets[i], s[P + i]);
    }
}

class CausalityTest : public ::testing::TestWithParam<Method> {};

TEST_P(CausalityTest, FuturePerturbationLeavesCausalWindowsBitIdentical) {
    const Method m = GetParam();
    auto s = noisy_sine(240, 4);
    auto split = split_chronological(s, 0.75).spec;
    DecompositionConfig cfg;
    WindowSpec w{12, 1};
    auto labels = layout(s.prefix(split.train_len), m, cfg);
    auto base = build_test_features_causal(s, split, m, cfg, w, labels);
    auto leaked_base = build_test_features_leaked(s, split, m, cfg, w, labels);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> pick(0, split.test_len() - 1);
    bool witnessed = false;
    for (int trial = 0; trial < 8; ++trial) {
        std::size_t i = pick(rng);
        std::size_t t = split.train_len + i; // target index; x[t..] is strictly future
        auto p = perturb_future(s, t, 1000 + trial);
        auto causal = causal_windows(p, t, t + 1, m, cfg, w, labels);
        EXPECT_TRUE(same_row(causal, 0, base, i)) << "step " << i;
        auto leaked = build_test_features_leaked(p, split, m, cfg, w, labels);
        witnessed |= !same_row(leaked, i, leaked_base, i);
    }
    EXPECT_TRUE(witnessed) << "leaked features never reacted to future values";
}

namespace decompleak {
void PrintTo(Method m, std::ostream* os) { *os << to_string(m); }
} // namespace decompleak

INSTANTIATE_TEST_SUITE_P(AllMethods, CausalityTest,
                         ::testing::Values(Method::EMD, Method::DWT, Method::SSA),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Pipeline, SsaLeakedValueAtCutoffReactsToFuture) {
    auto s = noisy_sine(300, 5);
    auto split = split_chronological(s, 0.75).spec;
    DecompositionConfig cfg;
    auto a = ssa_decompose(s, cfg.ssa);
    auto b = ssa_decompose(perturb_future(s, split.train_len + 1, 7), cfg.ssa);
    EXPECT_NE(a.components[0][split.train_len], b.components[0][split.train_len]);
}

TEST(Pipeline, FirstCausalStepMatchesTrainingDecomposition) {
    for (Method m : {Method::EMD, Method::DWT, Method::SSA}) {
        auto s = noisy_sine(240, 6);
        auto split = split_chronological(s, 0.75).spec;
        DecompositionConfig cfg;
        WindowSpec w{12, 1};
        auto train = build_train_features(s.prefix(split.train_len), m, cfg);
        auto causal = build_test_features_causal(s, split, m, cfg, w, train.labels);
        auto row = causal.row(0);
        const std::size_t C = train.channel_count(), P = split.train_len;
        for (std::size_t r = 0; r < 12; ++r)
            for (std::size_t c = 0; c < C; ++c)
                EXPECT_EQ(row[r * C + c], train.channels[c][P - 12 + r]) << to_string(m);
    }
}

TEST(Pipeline, EmdCausalBoundaryDiffersFromLeaked) {
    auto s = gen_synthetic(standard_fixture_spec()).prefix(800);
    auto split = split_chronological(s, 0.75).spec;
    DecompositionConfig cfg;
    WindowSpec w{12, 1};
    auto labels = layout(s.prefix(split.train_len), Method::EMD, cfg);
    auto leaked = build_test_features_leaked(s, split, Method::EMD, cfg, w, labels);
    auto causal = build_test_features_causal(s, split, Method::EMD, cfg, w, labels);
    const std::size_t C = labels.size();
    double dev = 0;
    for (std::size_t i = 0; i < causal.size(); ++i)
        dev = std::max(dev, std::abs(causal.row(i)[11 * C + 1] - leaked.row(i)[11 * C + 1]));
    EXPECT_GT(dev, 1e-3);
}

TEST(Pipeline, RawChannelIdentityAndWorkerIndependence) {
    auto s = noisy_sine(240, 8);
    auto split = split_chronological(s, 0.75).spec;
    DecompositionConfig cfg;
    WindowSpec w{12, 1};
    auto labels = layout(s.prefix(split.train_len), Method::EMD, cfg);
    auto one = build_test_features_causal(s, split, Method::EMD, cfg, w, labels, {1, 1});
    auto many = build_test_features_causal(s, split, Method::EMD, cfg, w, labels, {1, 4});
    EXPECT_EQ(one.inputs, many.inputs);
    const std::size_t C = labels.size();
    for (std::size_t i = 0; i < one.size(); ++i)
        for (std::size_t r = 0; r < 12; ++r)
            ASSERT_EQ(one.row(i)[r * C], s[split.train_len + i - 12 + r]);
}

TEST(Pipeline, StrideRemainsCausal) {
    auto s = noisy_sine(240, 9);
    auto split = split_chronological(s, 0.75).spec;
    DecompositionConfig cfg;
    WindowSpec w{12, 1};
    auto labels = layout(s.prefix(split.train_len), Method::SSA, cfg);
    CausalScheduleConfig sched{5, 1};
    auto base = build_test_features_causal(s, split, Method::SSA, cfg, w, labels, sched);
    auto exact = build_test_features_causal(s, split, Method::SSA, cfg, w, labels);
    // refresh steps coincide with the exact schedule
    EXPECT_TRUE(same_row(base, 0, exact, 0));
    EXPECT_TRUE(same_row(base, 5, exact, 5));
    for (std::size_t i : {3ul, 17ul, 41ul}) {
        auto p = perturb_future(s, split.train_len + i, i);
        auto q = build_test_features_causal(p, split, Method::SSA, cfg, w, labels, sched);
        for (std::size_t j = 0; j <= i; ++j) EXPECT_TRUE(same_row(q, j, base, j));
    }
    EXPECT_THROW(build_test_features_causal(s, split, Method::SSA, cfg, w, labels, {0, 1}),
                 InvalidConfigError);
}

TEST(Pipeline, SelectComponents) {
    FeatureMatrix f;
    f.labels = {"raw", "IMF1", "IMF2", "Res"};
    f.channels.assign(4, std::vector<double>(20, 0.0));
    for (std::size_t c = 0; c < 4; ++c) f.channels[c].assign(20, double(c));
    EXPECT_EQ(select_components(f, PipelineMode::raw_only()).channel_count(), 1u);
    auto one = select_components(f, PipelineMode::single(Method::EMD, 1, true));
    EXPECT_EQ(one.labels, (std::vector<std::string>{"raw", "IMF1"}));
    auto res = select_components(f, PipelineMode::single(Method::EMD, 3, true));
    EXPECT_EQ(res.labels, (std::vector<std::string>{"raw", "Res"}));
    EXPECT_EQ(res.channels[1][0], 3.0);
    EXPECT_EQ(select_components(f, PipelineMode::leaked_full(Method::EMD)).channel_count(), 4u);
    EXPECT_THROW(select_components(f, PipelineMode::single(Method::EMD, 4, true)), InvalidConfigError);
    EXPECT_THROW(select_components(f, PipelineMode::single(Method::EMD, 0, true)), InvalidConfigError);

    auto w = make_windows(f, f.channels[0], WindowSpec{3, 1});
    auto ws = select_components(w, PipelineMode::single(Method::EMD, 2, true));
    EXPECT_EQ(ws.channels, 2u);
    EXPECT_EQ(ws.row(0)[1], 2.0);
}

TEST(Pipeline, AlignZeroFillsAndFoldsSurplus) {
    ComponentSet fewer;
    fewer.method = Method::EMD;
    fewer.labels = {"IMF1", "Res"};
    fewer.components = {{1, 1}, {5, 5}};
    std::vector<std::string> layout3{"IMF1", "IMF2", "Res"};
    auto a = align_components(fewer, layout3);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a[1], (std::vector<double>{0, 0}));
    EXPECT_EQ(a[2], (std::vector<double>{5, 5}));

    ComponentSet more;
    more.method = Method::EMD;
    more.labels = {"IMF1", "IMF2", "IMF3", "Res"};
    more.components = {{1, 1}, {2, 2}, {3, 3}, {4, 4}};
    auto b = align_components(more, layout3);
    EXPECT_EQ(b[0], (std::vector<double>{1, 1}));
    EXPECT_EQ(b[2], (std::vector<double>{7, 7}));
}

TEST(Pipeline, ScalersUseTrainParams) {
    FeatureMatrix f;
    f.labels = {"raw", "c"};
    f.channels = {{0, 2, 4}, {10, 10, 10}};
    auto sc = ChannelScalers::fit(f);
    ASSERT_EQ(sc.params.size(), 2u);
    auto g = sc.apply(f);
    EXPECT_EQ(g.channels[0], (std::vector<double>{0, 0.5, 1}));
    EXPECT_EQ(g.channels[1], (std::vector<double>{0, 0, 0}));
    FeatureMatrix t;
    t.labels = f.labels;
    t.channels = {{8, -2, 1}, {3, 3, 3}};
    auto h = sc.apply(t);
    EXPECT_EQ(h.channels[0], (std::vector<double>{2, -0.5, 0.25}));
}
