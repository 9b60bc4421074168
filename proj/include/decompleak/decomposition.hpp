#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decompleak/series.hpp"

namespace decompleak {

/// Decomposition methods. `Identity` is a pass-through (one component equal to the input);
/// it is causal by construction and serves as a control in pipeline tests.
enum class Method { EMD, DWT, SSA, Identity };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

/// K same-length components that sum back to the parent series.
struct ComponentSet {
    Method method = Method::Identity;
    std::vector<std::vector<double>> components;
    std::vector<std::string> labels;

    std::size_t size() const noexcept { return components.size(); }
    std::size_t length() const noexcept { return components.empty() ? 0 : components.front().size(); }
    /// Element-wise sum of all components.
    std::vector<double> sum() const;
};

struct EmdConfig {
    std::size_t max_imfs = 10;
    double sift_sd_threshold = 0.2;
    std::size_t max_sift_iterations = 50;
};

/// Single-level Daubechies-5 filter bank.
struct DwtConfig {
    /// db5 scaling (lowpass) filter, synthesis ordering.
    static constexpr std::array<double, 10> kDb5 = {
        0.16010239797419291448,  0.60382926979718967054,  0.72430852843777292773,
        0.13842814590132073151,  -0.24229488706638203186, -0.032244869584638374648,
        0.077571493840045713523, -0.0062414902127982742742, -0.012580751999081999469,
        0.003335725285473771278,
    };

    std::vector<double> lowpass{kDb5.begin(), kDb5.end()};
    /// g[n] = (-1)^n h[len-1-n]
    std::vector<double> highpass() const;
};

struct SsaConfig {
    /// Embedding window. 0 selects min(N/2, 50) for the series at hand.
    std::size_t window = 0;
    std::size_t n_components = 3;

    std::size_t resolve_window(std::size_t n) const noexcept;
};

struct DecompositionConfig {
    EmdConfig emd;
    DwtConfig dwt;
    SsaConfig ssa;
};

ComponentSet emd_decompose(const TimeSeries& series, const EmdConfig& cfg = {});
ComponentSet dwt_decompose(const TimeSeries& series, const DwtConfig& cfg = {});
ComponentSet ssa_decompose(const TimeSeries& series, const SsaConfig& cfg = {});
ComponentSet identity_decompose(const TimeSeries& series);

ComponentSet decompose(Method method, const TimeSeries& series, const DecompositionConfig& cfg);

/// Minimum series length accepted by `method`.
std::size_t min_length(Method method, const DecompositionConfig& cfg) noexcept;

// Building blocks exposed for testing.

struct Extrema {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};

/// Interior local extrema (endpoints excluded). Flat runs count once, at their centre.
Extrema find_extrema(std::span<const double> x);
/// Number of sign changes, skipping exact zeros.
std::size_t count_zero_crossings(std::span<const double> x);

/// Natural cubic spline through (xs, ys), evaluated at integer positions 0..n-1.
/// `xs` must be strictly increasing and contain at least two knots.
std::vector<double> natural_spline(std::span<const double> xs, std::span<const double> ys,
                                   std::size_t n);

} // namespace decompleak
