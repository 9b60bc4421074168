#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "decompleak/series.hpp"

namespace decompleak {

struct Tone {
    double amplitude = 1.0;
    double frequency = 0.1; // cycles per sample, in (0, 0.5)
    double phase = 0.0;     // radians
};

enum class NoiseKind { White, AR1 };

struct SyntheticSpec {
    std::size_t length = 2000;
    std::vector<Tone> tones;
    NoiseKind noise = NoiseKind::White;
    double sigma = 0.0;
    double ar_coef = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Sum of tones plus seeded Gaussian noise (white, or AR(1) driven by the same innovations).
TimeSeries gen_synthetic(const SyntheticSpec& spec);

/// The standard leakage fixture: N = 2000, tones 1.0 @ 0.05 and 2.0 @ 0.003 cycles/sample,
/// white noise sigma 0.5, seed 42.
SyntheticSpec standard_fixture_spec();

} // namespace decompleak
