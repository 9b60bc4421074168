#include "decompleak/series.hpp"

#include <algorithm>
#include <cmath>

#include "decompleak/error.hpp"

namespace decompleak {

const char* to_string(ErrorCategory category) noexcept {
    switch (category) {
    case ErrorCategory::InvalidConfig: return "invalid-config";
    case ErrorCategory::InvalidInput: return "invalid-input";
    case ErrorCategory::InsufficientData: return "insufficient-data";
    case ErrorCategory::IllConditioned: return "ill-conditioned";
    case ErrorCategory::NumericOverflow: return "numeric-overflow";
    case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

TimeSeries::TimeSeries(std::vector<double> values, std::string name, std::string resolution)
    : values_(std::move(values)), name_(std::move(name)), resolution_(std::move(resolution)) {
    if (values_.empty()) throw InvalidInputError("time series must contain at least one value");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw InvalidInputError("non-finite value at index " + std::to_string(i));
    }
}

TimeSeries TimeSeries::prefix(std::size_t n) const {
    if (n == 0 || n > values_.size()) throw InvalidInputError("prefix length out of range");
    return TimeSeries(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)),
                      name_, resolution_);
}

SplitResult split_chronological(const TimeSeries& series, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidConfigError("train fraction must lie in (0, 1)");
    if (series.size() < 2) throw InvalidConfigError("series too short to split");
    const std::size_t q = series.size();
    const auto p = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(q)));
    if (p == 0 || p >= q) throw InvalidConfigError("split leaves an empty train or test side");

    const auto& v = series.values();
    const auto cut = v.begin() + static_cast<std::ptrdiff_t>(p);
    return SplitResult{
        TimeSeries(std::vector<double>(v.begin(), cut), series.name(), series.resolution()),
        TimeSeries(std::vector<double>(cut, v.end()), series.name(), series.resolution()),
        SplitSpec{train_fraction, p, q},
    };
}

ScalerParams minmax_fit(std::span<const double> channel) {
    if (channel.empty()) throw InvalidInputError("cannot fit a scaler on an empty channel");
    for (double x : channel)
        if (!std::isfinite(x)) throw InvalidInputError("cannot fit a scaler on non-finite values");
    const auto [lo, hi] = std::minmax_element(channel.begin(), channel.end());
    return ScalerParams{*lo, *hi};
}

double minmax_apply(const ScalerParams& p, double x) noexcept {
    if (p.degenerate()) return 0.0;
    return (x - p.min) / (p.max - p.min);
}

double minmax_invert(const ScalerParams& p, double y) noexcept {
    if (p.degenerate()) return p.min;
    return y * (p.max - p.min) + p.min;
}

std::vector<double> minmax_apply(const ScalerParams& p, std::span<const double> channel) {
    std::vector<double> out(channel.size());
    std::transform(channel.begin(), channel.end(), out.begin(),
                   [&](double x) { return minmax_apply(p, x); });
    return out;
}

std::vector<double> minmax_invert(const ScalerParams& p, std::span<const double> scaled) {
    std::vector<double> out(scaled.size());
    std::transform(scaled.begin(), scaled.end(), out.begin(),
                   [&](double y) { return minmax_invert(p, y); });
    return out;
}

WindowSet make_windows(const FeatureMatrix& features, std::span<const double> target,
                       const WindowSpec& spec) {
    if (spec.window == 0) throw InvalidConfigError("window must be positive");
    if (spec.horizon != 1) throw InvalidConfigError("only one-step-ahead horizons are supported");
    if (features.channels.empty()) throw InvalidInputError("feature matrix has no channels");
    const std::size_t len = features.length();
    for (const auto& ch : features.channels)
        if (ch.size() != len) throw InvalidInputError("feature channels differ in length");
    if (target.size() != len) throw InvalidInputError("target length differs from feature length");
    if (len <= spec.window)
        throw InsufficientDataError("series length " + std::to_string(len) +
                                    " does not exceed window " + std::to_string(spec.window));

    const std::size_t c = features.channel_count();
    const std::size_t n = len - spec.window;
    WindowSet out;
    out.window = spec.window;
    out.channels = c;
    out.labels = features.labels;
    out.inputs.resize(n * spec.window * c);
    out.targets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double* dst = out.inputs.data() + i * spec.window * c;
        for (std::size_t r = 0; r < spec.window; ++r)
            for (std::size_t k = 0; k < c; ++k) dst[r * c + k] = features.channels[k][i + r];
        out.targets[i] = target[i + spec.window];
    }
    return out;
}

} // namespace decompleak
