#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace decompleak {

/// DFT of `signal` zero-padded to the next power of two.
std::vector<std::complex<double>> fft(std::span<const double> signal);
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> signal);
/// Inverse DFT (1/N normalised). Input length must be a power of two.
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> coeffs);

std::size_t next_pow2(std::size_t n) noexcept;

/// One-sided power spectrum: bins 0..N/2 of the padded transform, power = |X_k|^2 / N.
struct Spectrum {
    std::vector<double> frequencies; // cycles per sample
    std::vector<double> power;
    std::size_t n = 0;               // padded transform length
};

Spectrum power_spectrum(std::span<const double> signal);

struct DominantFrequency {
    double frequency = 0.0; // cycles per sample
    double power = 0.0;
    /// Set when no nonzero bin carries meaningful power (e.g. a constant signal).
    bool low_power = false;
};

/// Peak of the power spectrum excluding the zero bin; ties go to the lowest frequency.
DominantFrequency dominant_frequency(std::span<const double> signal);

} // namespace decompleak
