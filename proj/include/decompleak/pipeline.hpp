#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "decompleak/decomposition.hpp"
#include "decompleak/series.hpp"

namespace decompleak {

enum class ModeKind { RawOnly, Leaked, Causal, SingleComponent, Summation };

/// How model inputs are assembled for one grid cell.
struct PipelineMode {
    ModeKind kind = ModeKind::RawOnly;
    Method method = Method::Identity;
    /// Channel index of the added component for SingleComponent (1..K).
    std::size_t component = 0;
    /// Whether SingleComponent / Summation read leaked (full-series) decompositions.
    bool leaked = true;

    static PipelineMode raw_only() { return {}; }
    static PipelineMode leaked_full(Method m) { return {ModeKind::Leaked, m, 0, true}; }
    static PipelineMode causal_full(Method m) { return {ModeKind::Causal, m, 0, false}; }
    static PipelineMode single(Method m, std::size_t k, bool leaked) {
        return {ModeKind::SingleComponent, m, k, leaked};
    }
    static PipelineMode summation(Method m, bool leaked) {
        return {ModeKind::Summation, m, 0, leaked};
    }

    /// Whether test features come from the full-series decomposition.
    bool uses_leaked_features() const noexcept {
        return kind == ModeKind::Leaked ||
               ((kind == ModeKind::SingleComponent || kind == ModeKind::Summation) && leaked);
    }
    /// Stable short name used in report rows, e.g. "leaked", "single-leaked:IMF1".
    std::string name(const std::vector<std::string>& labels = {}) const;
};

struct CausalScheduleConfig {
    std::size_t refresh_stride = 1;
    /// Threads used for per-step prefix decompositions. Output does not depend on it.
    std::size_t workers = 1;
};

/// Decomposes the whole training subsequence once; channel 0 is the raw series.
FeatureMatrix build_train_features(const TimeSeries& train, Method method,
                                   const DecompositionConfig& cfg);

/// Test windows under the leaked protocol: the ENTIRE series is decomposed once and the window
/// for target index t (P <= t < Q) is rows t-W..t-1 of that decomposition. Component channels
/// are aligned to `labels` (the training layout).
WindowSet build_test_features_leaked(const TimeSeries& full, const SplitSpec& split, Method method,
                                     const DecompositionConfig& cfg, const WindowSpec& window,
                                     const std::vector<std::string>& labels);

/// Test windows under the causal protocol: the window for target index t is the trailing W rows
/// of a decomposition of x[0..t-1] only.
WindowSet build_test_features_causal(const TimeSeries& full, const SplitSpec& split, Method method,
                                     const DecompositionConfig& cfg, const WindowSpec& window,
                                     const std::vector<std::string>& labels,
                                     const CausalScheduleConfig& sched = {});

/// Causal windows for targets first..last-1 (general form of the above; also used to build
/// training windows by per-step decomposition when that option is enabled).
WindowSet causal_windows(const TimeSeries& full, std::size_t first_target, std::size_t last_target,
                         Method method, const DecompositionConfig& cfg, const WindowSpec& window,
                         const std::vector<std::string>& labels,
                         const CausalScheduleConfig& sched = {});

/// Channels retained by `mode` for a matrix with `channel_count` channels.
std::vector<std::size_t> selected_channels(const PipelineMode& mode, std::size_t channel_count);

FeatureMatrix select_components(const FeatureMatrix& features, const PipelineMode& mode);
WindowSet select_components(const WindowSet& windows, const PipelineMode& mode);
WindowSet select_channels(const WindowSet& windows, const std::vector<std::size_t>& channels);

/// Rearranges `set` onto the training component layout `labels` (raw channel excluded).
/// EMD IMFs missing from `set` are zero-filled; surplus IMFs are folded into the residual.
std::vector<std::vector<double>> align_components(const ComponentSet& set,
                                                  const std::vector<std::string>& labels);

/// Per-channel min-max scalers fit on training features.
struct ChannelScalers {
    std::vector<ScalerParams> params;

    static ChannelScalers fit(const FeatureMatrix& train);
    FeatureMatrix apply(const FeatureMatrix& features) const;
    WindowSet apply(const WindowSet& windows) const;
};

} // namespace decompleak
