#include <cmath>
#include <numbers>
#include <random>

#include "decompleak/error.hpp"
#include "decompleak/synthetic.hpp"

namespace decompleak {

void SyntheticSpec::validate() const {
    if (length == 0) throw InvalidConfigError("synthetic length must be positive");
    for (const Tone& t : tones) {
        if (!(t.frequency > 0.0 && t.frequency < 0.5))
            throw InvalidConfigError("tone frequency must lie in (0, 0.5) cycles/sample");
        if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase))
            throw InvalidConfigError("tone amplitude and phase must be finite");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidConfigError("noise sigma must be >= 0");
    if (noise == NoiseKind::AR1 && !(std::abs(ar_coef) < 1.0))
        throw InvalidConfigError("AR(1) coefficient must satisfy |phi| < 1");
}

TimeSeries gen_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    std::vector<double> x(spec.length, 0.0);
    for (const Tone& t : spec.tones) {
        for (std::size_t n = 0; n < spec.length; ++n)
            x[n] += t.amplitude * std::sin(2.0 * std::numbers::pi * t.frequency * static_cast<double>(n) + t.phase);
    }
    if (spec.sigma > 0.0) {
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> z(0.0, 1.0);
        const double phi = spec.noise == NoiseKind::AR1 ? spec.ar_coef : 0.0;
        double e = 0.0;
        for (std::size_t n = 0; n < spec.length; ++n) {
            e = phi * e + spec.sigma * z(rng);
            x[n] += e;
        }
    }
    return TimeSeries(std::move(x), "synthetic");
}

SyntheticSpec standard_fixture_spec() {
    SyntheticSpec s;
    s.length = 2000;
    s.tones = {Tone{1.0, 0.05, 0.0}, Tone{2.0, 0.003, 0.0}};
    s.noise = NoiseKind::White;
    s.sigma = 0.5;
    s.seed = 42;
    return s;
}

} // namespace decompleak
