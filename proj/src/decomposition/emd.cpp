#include <cmath>
#include <cstdlib>

#include "decompleak/decomposition.hpp"
#include "decompleak/error.hpp"

namespace decompleak {

Extrema find_extrema(std::span<const double> x) {
    Extrema out;
    const std::size_t n = x.size();
    if (n < 3) return out;
    std::size_t i = 1;
    while (i + 1 < n) {
        // Extend over a flat run starting at i.
        std::size_t j = i;
        while (j + 1 < n && x[j + 1] == x[i]) ++j;
        if (j + 1 >= n) break; // run touches the right endpoint
        const double before = x[i - 1];
        const double after = x[j + 1];
        const std::size_t centre = i + (j - i) / 2;
        if (x[i] > before && x[i] > after) out.maxima.push_back(centre);
        else if (x[i] < before && x[i] < after) out.minima.push_back(centre);
        i = j + 1;
    }
    return out;
}

std::size_t count_zero_crossings(std::span<const double> x) {
    std::size_t count = 0;
    int prev = 0;
    for (double v : x) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

std::vector<double> natural_spline(std::span<const double> xs, std::span<const double> ys,
                                   std::size_t n) {
    const std::size_t m = xs.size();
    if (m < 2 || ys.size() != m) throw InvalidInputError("spline needs at least two matching knots");

    // Second derivatives via the tridiagonal system; natural ends force M[0] = M[m-1] = 0.
    std::vector<double> second(m, 0.0);
    if (m > 2) {
        std::vector<double> diag(m - 2), upper(m - 2), rhs(m - 2);
        for (std::size_t k = 1; k + 1 < m; ++k) {
            const double h0 = xs[k] - xs[k - 1];
            const double h1 = xs[k + 1] - xs[k];
            diag[k - 1] = 2.0 * (h0 + h1);
            upper[k - 1] = h1;
            rhs[k - 1] = 6.0 * ((ys[k + 1] - ys[k]) / h1 - (ys[k] - ys[k - 1]) / h0);
        }
        // Thomas algorithm; the lower diagonal entry of row k is h0 = xs[k] - xs[k-1].
        for (std::size_t r = 1; r < m - 2; ++r) {
            const double lower = xs[r + 1] - xs[r];
            const double w = lower / diag[r - 1];
            diag[r] -= w * upper[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        second[m - 2] = rhs[m - 3] / diag[m - 3];
        for (std::size_t r = m - 3; r-- > 0;)
            second[r + 1] = (rhs[r] - upper[r] * second[r + 2]) / diag[r];
    }

    std::vector<double> out(n);
    std::size_t seg = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double pos = static_cast<double>(t);
        while (seg + 2 < m && pos > xs[seg + 1]) ++seg;
        const double h = xs[seg + 1] - xs[seg];
        const double a = (xs[seg + 1] - pos) / h;
        const double b = (pos - xs[seg]) / h;
        out[t] = a * ys[seg] + b * ys[seg + 1] +
                 ((a * a * a - a) * second[seg] + (b * b * b - b) * second[seg + 1]) * h * h / 6.0;
    }
    return out;
}

namespace {

// Spline through the given extrema after mirroring the two outermost ones across each end.
std::vector<double> envelope(std::span<const double> x, const std::vector<std::size_t>& idx) {
    const std::size_t n = x.size();
    const double last = static_cast<double>(n - 1);
    const std::size_t k = idx.size();
    std::vector<double> xs, ys;
    xs.reserve(k + 4);
    ys.reserve(k + 4);
    for (std::size_t r = 2; r-- > 0;) {
        xs.push_back(-static_cast<double>(idx[r]));
        ys.push_back(x[idx[r]]);
    }
    for (std::size_t i : idx) {
        xs.push_back(static_cast<double>(i));
        ys.push_back(x[i]);
    }
    for (std::size_t r = 0; r < 2; ++r) {
        const std::size_t i = idx[k - 1 - r];
        xs.push_back(2.0 * last - static_cast<double>(i));
        ys.push_back(x[i]);
    }
    return natural_spline(xs, ys, n);
}

bool is_imf(std::span<const double> h) {
    const Extrema e = find_extrema(h);
    const auto extrema = static_cast<long>(e.maxima.size() + e.minima.size());
    const auto crossings = static_cast<long>(count_zero_crossings(h));
    return std::labs(extrema - crossings) <= 1;
}

bool too_few_extrema(const Extrema& e) { return e.maxima.size() < 2 || e.minima.size() < 2; }

} // namespace

ComponentSet emd_decompose(const TimeSeries& series, const EmdConfig& cfg) {
    if (cfg.max_imfs < 1 || cfg.max_sift_iterations < 1 || !(cfg.sift_sd_threshold > 0.0))
        throw InvalidConfigError("EMD config requires positive counts and threshold");
    const std::size_t n = series.size();
    if (n < 4) throw InsufficientDataError("EMD needs at least 4 samples");

    ComponentSet out;
    out.method = Method::EMD;
    std::vector<double> residual = series.values();

    while (out.components.size() < cfg.max_imfs) {
        if (too_few_extrema(find_extrema(residual))) break;

        std::vector<double> h = residual;
        for (std::size_t it = 0; it < cfg.max_sift_iterations; ++it) {
            const Extrema e = find_extrema(h);
            if (too_few_extrema(e)) break;
            const auto upper = envelope(h, e.maxima);
            const auto lower = envelope(h, e.minima);
            double num = 0.0, den = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                const double mean = 0.5 * (upper[t] + lower[t]);
                num += mean * mean;
                den += h[t] * h[t];
                h[t] -= mean;
            }
            if (den == 0.0) break;
            if (num / den < cfg.sift_sd_threshold && is_imf(h)) break;
        }

        for (std::size_t t = 0; t < n; ++t) residual[t] -= h[t];
        out.components.push_back(std::move(h));
        out.labels.push_back("IMF" + std::to_string(out.components.size()));
    }

    out.components.push_back(std::move(residual));
    out.labels.push_back("Res");
    return out;
}

} // namespace decompleak
