#include "decompleak/spectral.hpp"

#include <cmath>
#include <numbers>

#include "decompleak/error.hpp"

namespace decompleak {

std::size_t next_pow2(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace {

using cplx = std::complex<double>;

// Iterative radix-2 Cooley-Tukey; sign = -1 forward, +1 inverse (unnormalised).
void transform(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k) {
            // Twiddles computed directly rather than by repeated multiplication.
            const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(len);
            const cplx w(std::cos(angle), std::sin(angle));
            for (std::size_t i = 0; i < n; i += len) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * w;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

} // namespace

std::vector<cplx> fft(std::span<const cplx> signal) {
    if (signal.empty()) throw InvalidInputError("fft of an empty signal");
    std::vector<cplx> a(next_pow2(signal.size()), cplx{});
    std::copy(signal.begin(), signal.end(), a.begin());
    transform(a, -1);
    return a;
}

std::vector<cplx> fft(std::span<const double> signal) {
    if (signal.empty()) throw InvalidInputError("fft of an empty signal");
    std::vector<cplx> a(next_pow2(signal.size()), cplx{});
    for (std::size_t i = 0; i < signal.size(); ++i) a[i] = signal[i];
    transform(a, -1);
    return a;
}

std::vector<cplx> ifft(std::span<const cplx> coeffs) {
    if (coeffs.empty()) throw InvalidInputError("ifft of an empty spectrum");
    if (next_pow2(coeffs.size()) != coeffs.size())
        throw InvalidInputError("ifft length must be a power of two");
    std::vector<cplx> a(coeffs.begin(), coeffs.end());
    transform(a, +1);
    const double scale = 1.0 / static_cast<double>(a.size());
    for (auto& z : a) z *= scale;
    return a;
}

Spectrum power_spectrum(std::span<const double> signal) {
    const auto coeffs = fft(signal);
    Spectrum s;
    s.n = coeffs.size();
    const std::size_t bins = s.n / 2 + 1;
    s.frequencies.resize(bins);
    s.power.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        s.frequencies[k] = static_cast<double>(k) / static_cast<double>(s.n);
        s.power[k] = std::norm(coeffs[k]) / static_cast<double>(s.n);
    }
    return s;
}

DominantFrequency dominant_frequency(std::span<const double> signal) {
    const Spectrum s = power_spectrum(signal);
    DominantFrequency out;
    if (s.power.size() < 2) {
        out.low_power = true;
        return out;
    }
    double total = 0.0, peak = 0.0;
    for (double p : s.power) total += p;
    for (std::size_t k = 1; k < s.power.size(); ++k) peak = std::max(peak, s.power[k]);

    // Bins within rounding distance of the peak are ties.
    const double tol = 1e-12 * total;
    for (std::size_t k = 1; k < s.power.size(); ++k) {
        if (s.power[k] >= peak - tol) {
            out.frequency = s.frequencies[k];
            out.power = s.power[k];
            break;
        }
    }
    out.low_power = peak <= tol;
    return out;
}

} // namespace decompleak
