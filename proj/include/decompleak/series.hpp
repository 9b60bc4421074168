#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace decompleak {

/// A uniformly sampled scalar series. Values are validated finite on construction.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::vector<double> values, std::string name = {}, std::string resolution = {});

    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> view() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::string& name() const noexcept { return name_; }
    const std::string& resolution() const noexcept { return resolution_; }

    /// First `n` values as a new series with the same metadata.
    TimeSeries prefix(std::size_t n) const;

private:
    std::vector<double> values_;
    std::string name_;
    std::string resolution_;
};

struct SplitSpec {
    double train_fraction = 0.75;
    std::size_t train_len = 0; // P
    std::size_t total_len = 0; // Q
    std::size_t test_len() const noexcept { return total_len - train_len; }
};

struct SplitResult {
    TimeSeries train;
    TimeSeries test;
    SplitSpec spec;
};

/// Chronological split: train = first floor(fraction * Q) values, test = the rest.
SplitResult split_chronological(const TimeSeries& series, double train_fraction);

struct ScalerParams {
    double min = 0.0;
    double max = 0.0;
    bool degenerate() const noexcept { return !(max > min); }
};

ScalerParams minmax_fit(std::span<const double> channel);
double minmax_apply(const ScalerParams& p, double x) noexcept;
double minmax_invert(const ScalerParams& p, double y) noexcept;
std::vector<double> minmax_apply(const ScalerParams& p, std::span<const double> channel);
std::vector<double> minmax_invert(const ScalerParams& p, std::span<const double> scaled);

struct WindowSpec {
    std::size_t window = 12;
    std::size_t horizon = 1;
};

/// Same-length channels; channel 0 is the raw series, the rest are decomposed components.
struct FeatureMatrix {
    std::vector<std::vector<double>> channels;
    std::vector<std::string> labels;
    std::string origin;

    std::size_t channel_count() const noexcept { return channels.size(); }
    std::size_t length() const noexcept { return channels.empty() ? 0 : channels.front().size(); }
};

/// Flattened supervised samples: row i holds a W x C window in row-major order
/// (time step major, channel minor).
struct WindowSet {
    std::size_t window = 0;
    std::size_t channels = 0;
    std::vector<std::string> labels;
    std::vector<double> inputs;
    std::vector<double> targets;

    std::size_t size() const noexcept { return targets.size(); }
    std::size_t width() const noexcept { return window * channels; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(inputs).subspan(i * width(), width());
    }
};

/// Sliding windows over `features`: pair i has input rows i..i+W-1 and target[i+W].
WindowSet make_windows(const FeatureMatrix& features, std::span<const double> target,
                       const WindowSpec& spec);

} // namespace decompleak
