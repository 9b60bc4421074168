#include "decompleak/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "decompleak/error.hpp"

namespace decompleak {

std::string PipelineMode::name(const std::vector<std::string>& labels) const {
    switch (kind) {
    case ModeKind::RawOnly: return "raw";
    case ModeKind::Leaked: return "leaked";
    case ModeKind::Causal: return "causal";
    case ModeKind::SingleComponent: {
        const std::string tag = component < labels.size() ? labels[component]
                                                          : "c" + std::to_string(component);
        return std::string(leaked ? "single-leaked:" : "single-causal:") + tag;
    }
    case ModeKind::Summation: return leaked ? "summation-leaked" : "summation-causal";
    }
    return "unknown";
}

namespace {

std::vector<std::string> component_labels(const std::vector<std::string>& labels) {
    if (labels.empty()) throw InvalidInputError("feature layout has no raw channel");
    return {labels.begin() + 1, labels.end()};
}

bool is_imf_label(const std::string& s) { return s.rfind("IMF", 0) == 0; }

} // namespace

std::vector<std::vector<double>> align_components(const ComponentSet& set,
                                                  const std::vector<std::string>& labels) {
    const std::size_t n = set.length();
    std::vector<std::vector<double>> out(labels.size(), std::vector<double>(n, 0.0));
    std::vector<bool> filled(labels.size(), false);

    auto slot_of = [&](const std::string& label) -> std::ptrdiff_t {
        const auto it = std::find(labels.begin(), labels.end(), label);
        return it == labels.end() ? -1 : it - labels.begin();
    };
    const std::ptrdiff_t res_slot = slot_of("Res");

    for (std::size_t c = 0; c < set.size(); ++c) {
        std::ptrdiff_t slot = slot_of(set.labels[c]);
        if (slot < 0 && set.method == Method::EMD && is_imf_label(set.labels[c])) slot = res_slot;
        if (slot < 0)
            throw InvalidInputError("component '" + set.labels[c] + "' has no slot in the layout");
        auto& dst = out[static_cast<std::size_t>(slot)];
        for (std::size_t t = 0; t < n; ++t) dst[t] += set.components[c][t];
        filled[static_cast<std::size_t>(slot)] = true;
    }
    for (std::size_t s = 0; s < labels.size(); ++s) {
        if (!filled[s] && !(set.method == Method::EMD && is_imf_label(labels[s])))
            throw InvalidInputError("layout channel '" + labels[s] + "' missing from decomposition");
    }
    return out;
}

FeatureMatrix build_train_features(const TimeSeries& train, Method method,
                                   const DecompositionConfig& cfg) {
    const ComponentSet set = decompose(method, train, cfg);
    FeatureMatrix out;
    out.origin = "train";
    out.channels.reserve(set.size() + 1);
    out.channels.push_back(train.values());
    out.labels.push_back("raw");
    for (std::size_t c = 0; c < set.size(); ++c) {
        out.channels.push_back(set.components[c]);
        out.labels.push_back(set.labels[c]);
    }
    return out;
}

WindowSet build_test_features_leaked(const TimeSeries& full, const SplitSpec& split, Method method,
                                     const DecompositionConfig& cfg, const WindowSpec& window,
                                     const std::vector<std::string>& labels) {
    if (split.total_len != full.size()) throw InvalidInputError("split does not match series");
    if (split.train_len < window.window)
        throw InsufficientDataError("training split shorter than the model window");

    const ComponentSet set = decompose(method, full, cfg);
    FeatureMatrix matrix;
    matrix.origin = "leaked";
    matrix.labels = labels;
    matrix.channels.push_back(full.values());
    for (auto& c : align_components(set, component_labels(labels))) matrix.channels.push_back(std::move(c));

    WindowSet all = make_windows(matrix, full.view(), window);
    // Window i targets index i + W; keep those that land in the test split.
    const std::size_t skip = split.train_len - window.window;
    WindowSet out;
    out.window = all.window;
    out.channels = all.channels;
    out.labels = labels;
    out.inputs.assign(all.inputs.begin() + static_cast<std::ptrdiff_t>(skip * all.width()), all.inputs.end());
    out.targets.assign(all.targets.begin() + static_cast<std::ptrdiff_t>(skip), all.targets.end());
    return out;
}

WindowSet causal_windows(const TimeSeries& full, std::size_t first_target, std::size_t last_target,
                         Method method, const DecompositionConfig& cfg, const WindowSpec& window,
                         const std::vector<std::string>& labels, const CausalScheduleConfig& sched) {
    const std::size_t w = window.window;
    if (w == 0) throw InvalidConfigError("window must be positive");
    if (sched.refresh_stride < 1) throw InvalidConfigError("refresh stride must be >= 1");
    if (last_target > full.size() || first_target >= last_target)
        throw InvalidInputError("causal target range is empty or out of bounds");
    if (first_target < w || first_target < min_length(method, cfg))
        throw InsufficientDataError("prefix before the first causal target is too short");

    const auto comp_labels = component_labels(labels);
    const std::size_t c = labels.size();
    const std::size_t steps = last_target - first_target;
    const std::size_t stride = sched.refresh_stride;

    WindowSet out;
    out.window = w;
    out.channels = c;
    out.labels = labels;
    out.inputs.assign(steps * w * c, 0.0);
    out.targets.resize(steps);
    const auto& x = full.values();

    // One job per refresh: decompose the prefix x[0..t0-1] and fill every step that reuses it.
    const std::size_t jobs = (steps + stride - 1) / stride;
    auto run_job = [&](std::size_t job) {
        const std::size_t first_step = job * stride;
        const std::size_t t0 = first_target + first_step;
        const ComponentSet set = decompose(method, full.prefix(t0), cfg);
        const auto comps = align_components(set, comp_labels);
        const std::size_t end_step = std::min(steps, first_step + stride);
        for (std::size_t s = first_step; s < end_step; ++s) {
            const std::size_t t = first_target + s;
            double* dst = out.inputs.data() + s * w * c;
            for (std::size_t r = 0; r < w; ++r) {
                const std::size_t row = t - w + r;
                dst[r * c] = x[row];
                // Rows after a stale prefix hold its last decomposed value.
                const std::size_t src = std::min(row, t0 - 1);
                for (std::size_t k = 1; k < c; ++k) dst[r * c + k] = comps[k - 1][src];
            }
            out.targets[s] = x[t];
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(sched.workers, jobs));
    if (workers == 1) {
        for (std::size_t j = 0; j < jobs; ++j) run_job(j);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) {
            pool.emplace_back([&] {
                for (std::size_t j = next++; j < jobs; j = next++) {
                    try {
                        run_job(j);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

WindowSet build_test_features_causal(const TimeSeries& full, const SplitSpec& split, Method method,
                                     const DecompositionConfig& cfg, const WindowSpec& window,
                                     const std::vector<std::string>& labels,
                                     const CausalScheduleConfig& sched) {
    if (split.total_len != full.size()) throw InvalidInputError("split does not match series");
    return causal_windows(full, split.train_len, split.total_len, method, cfg, window, labels, sched);
}

std::vector<std::size_t> selected_channels(const PipelineMode& mode, std::size_t channel_count) {
    if (channel_count == 0) throw InvalidInputError("no channels to select from");
    switch (mode.kind) {
    case ModeKind::RawOnly: return {0};
    case ModeKind::SingleComponent:
        if (mode.component < 1 || mode.component >= channel_count)
            throw InvalidConfigError("component index " + std::to_string(mode.component) +
                                     " out of range for " + std::to_string(channel_count - 1) +
                                     " components");
        return {0, mode.component};
    case ModeKind::Leaked:
    case ModeKind::Causal:
    case ModeKind::Summation: {
        std::vector<std::size_t> all(channel_count);
        for (std::size_t i = 0; i < channel_count; ++i) all[i] = i;
        return all;
    }
    }
    throw InvalidConfigError("unknown pipeline mode");
}

FeatureMatrix select_components(const FeatureMatrix& features, const PipelineMode& mode) {
    FeatureMatrix out;
    out.origin = features.origin;
    for (std::size_t k : selected_channels(mode, features.channel_count())) {
        out.channels.push_back(features.channels[k]);
        out.labels.push_back(k < features.labels.size() ? features.labels[k] : std::string{});
    }
    return out;
}

WindowSet select_channels(const WindowSet& windows, const std::vector<std::size_t>& channels) {
    for (std::size_t k : channels)
        if (k >= windows.channels) throw InvalidConfigError("channel index out of range");
    WindowSet out;
    out.window = windows.window;
    out.channels = channels.size();
    out.targets = windows.targets;
    for (std::size_t k : channels)
        out.labels.push_back(k < windows.labels.size() ? windows.labels[k] : std::string{});
    const std::size_t n = windows.size();
    const std::size_t c_in = windows.channels;
    const std::size_t c_out = channels.size();
    out.inputs.resize(n * windows.window * c_out);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < windows.window; ++r)
            for (std::size_t j = 0; j < c_out; ++j)
                out.inputs[(i * windows.window + r) * c_out + j] =
                    windows.inputs[(i * windows.window + r) * c_in + channels[j]];
    return out;
}

WindowSet select_components(const WindowSet& windows, const PipelineMode& mode) {
    return select_channels(windows, selected_channels(mode, windows.channels));
}

ChannelScalers ChannelScalers::fit(const FeatureMatrix& train) {
    ChannelScalers s;
    for (const auto& ch : train.channels) s.params.push_back(minmax_fit(ch));
    return s;
}

FeatureMatrix ChannelScalers::apply(const FeatureMatrix& features) const {
    if (features.channel_count() != params.size())
        throw InvalidInputError("scaler channel count mismatch");
    FeatureMatrix out = features;
    for (std::size_t k = 0; k < params.size(); ++k) out.channels[k] = minmax_apply(params[k], features.channels[k]);
    return out;
}

WindowSet ChannelScalers::apply(const WindowSet& windows) const {
    if (windows.channels != params.size()) throw InvalidInputError("scaler channel count mismatch");
    WindowSet out = windows;
    const std::size_t c = windows.channels;
    for (std::size_t i = 0; i < out.inputs.size(); ++i)
        out.inputs[i] = minmax_apply(params[i % c], out.inputs[i]);
    for (auto& t : out.targets) t = minmax_apply(params[0], t);
    return out;
}

} // namespace decompleak
