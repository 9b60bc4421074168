#include "decompleak/decomposition.hpp"
#include "decompleak/error.hpp"

namespace decompleak {

std::vector<double> DwtConfig::highpass() const {
    const std::size_t len = lowpass.size();
    std::vector<double> g(len);
    for (std::size_t n = 0; n < len; ++n)
        g[n] = (n % 2 == 0 ? 1.0 : -1.0) * lowpass[len - 1 - n];
    return g;
}

namespace {

// Half-sample symmetric index reflection: x[-1] = x[0], x[n] = x[n-1].
std::size_t reflect(long i, long n) {
    const long period = 2 * n;
    long r = i % period;
    if (r < 0) r += period;
    return static_cast<std::size_t>(r < n ? r : period - 1 - r);
}

// One band of the filter bank: analysis by the full (untruncated) strided correlation, then
// synthesis by its transpose. Summing both bands reproduces `y` exactly for an orthonormal pair.
std::vector<double> band(const std::vector<double>& y, const std::vector<double>& filter) {
    const std::size_t m = y.size();
    const std::size_t f = filter.size();
    const std::size_t k_count = (m + f - 2) / 2 + 1;

    std::vector<double> coeffs(k_count, 0.0);
    for (std::size_t k = 0; k < k_count; ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n < f; ++n) {
            const long j = static_cast<long>(2 * k) - static_cast<long>(n);
            if (j >= 0 && j < static_cast<long>(m)) acc += filter[n] * y[static_cast<std::size_t>(j)];
        }
        coeffs[k] = acc;
    }

    std::vector<double> out(m, 0.0);
    for (std::size_t k = 0; k < k_count; ++k) {
        for (std::size_t n = 0; n < f; ++n) {
            const long j = static_cast<long>(2 * k) - static_cast<long>(n);
            if (j >= 0 && j < static_cast<long>(m)) out[static_cast<std::size_t>(j)] += coeffs[k] * filter[n];
        }
    }
    return out;
}

} // namespace

ComponentSet dwt_decompose(const TimeSeries& series, const DwtConfig& cfg) {
    const std::size_t f = cfg.lowpass.size();
    if (f < 2 || f % 2 != 0) throw InvalidConfigError("DWT filter length must be even and >= 2");
    const std::size_t n = series.size();
    if (n < f) throw InsufficientDataError("DWT needs at least as many samples as filter taps");

    const std::size_t ext = f - 1;
    const auto& x = series.values();
    std::vector<double> y(n + 2 * ext);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = x[reflect(static_cast<long>(i) - static_cast<long>(ext), static_cast<long>(n))];

    const auto low = band(y, cfg.lowpass);
    const auto high = band(y, cfg.highpass());

    ComponentSet out;
    out.method = Method::DWT;
    const auto first = static_cast<std::ptrdiff_t>(ext);
    const auto last = static_cast<std::ptrdiff_t>(ext + n);
    out.components.emplace_back(low.begin() + first, low.begin() + last);
    out.components.emplace_back(high.begin() + first, high.begin() + last);
    out.labels = {"AC", "DC"};
    return out;
}

} // namespace decompleak
