#include "decompleak/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "decompleak/error.hpp"

namespace decompleak {

MetricsReport compute_metrics(std::span<const double> truth, std::span<const double> pred,
                              double mape_floor) {
    if (truth.empty() || truth.size() != pred.size())
        throw InvalidInputError("metrics need equal, non-zero lengths");
    const auto n = static_cast<double>(truth.size());
    double se = 0.0, ae = 0.0, ape = 0.0, y_sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!std::isfinite(truth[i]) || !std::isfinite(pred[i]))
            throw InvalidInputError("metrics inputs must be finite");
        const double e = truth[i] - pred[i];
        se += e * e;
        ae += std::abs(e);
        ape += std::abs(e) / std::max(std::abs(truth[i]), mape_floor);
        y_sum += truth[i];
    }
    const double y_mean = y_sum / n;
    double ss_tot = 0.0;
    for (double y : truth) ss_tot += (y - y_mean) * (y - y_mean);

    MetricsReport r;
    r.n = truth.size();
    r.mse = se / n;
    r.mae = ae / n;
    r.mape = 100.0 * ape / n;
    if (ss_tot > 0.0) r.r2 = 1.0 - se / ss_tot;
    return r;
}

double mean(std::span<const double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw NumericOverflowError("incomplete beta continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidInputError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidInputError("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
    return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw InvalidInputError("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw InvalidInputError("t-test needs at least two values per sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a), mb = mean(b);
    const double va = std::pow(sample_std(a), 2.0), vb = std::pow(sample_std(b), 2.0);
    const double qa = va / na, qb = vb / nb;
    const double se2 = qa + qb;

    TTestResult r;
    if (se2 == 0.0) {
        if (ma == mb) return r; // t = 0, p = 1
        throw InvalidInputError("t-test degrees of freedom undefined: both samples constant with different means");
    }
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    r.p = student_t_two_sided(r.t, r.df);
    return r;
}

} // namespace decompleak
