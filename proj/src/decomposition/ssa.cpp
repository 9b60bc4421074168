#include <Eigen/Dense>
#include <algorithm>

#include "decompleak/decomposition.hpp"
#include "decompleak/error.hpp"

namespace decompleak {

std::size_t SsaConfig::resolve_window(std::size_t n) const noexcept {
    if (window != 0) return window;
    return std::max<std::size_t>(2, std::min<std::size_t>(n / 2, 50));
}

ComponentSet ssa_decompose(const TimeSeries& series, const SsaConfig& cfg) {
    const std::size_t n = series.size();
    if (n < 3) throw InsufficientDataError("SSA needs at least 3 samples");
    const std::size_t l = cfg.resolve_window(n);
    if (l < 2 || l > n - 1)
        throw InvalidConfigError("SSA window " + std::to_string(l) + " outside [2, " +
                                 std::to_string(n - 1) + "]");
    if (cfg.n_components < 1 || cfg.n_components > l)
        throw InvalidConfigError("SSA component count must lie in [1, window]");

    const std::size_t k = n - l + 1;
    const double* x = series.values().data();

    // Lag-covariance (Gram) matrix of the L x K trajectory matrix, X X^T.
    Eigen::MatrixXd gram(l, l);
    for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = a; b < l; ++b) {
            double acc = 0.0;
            for (std::size_t j = 0; j < k; ++j) acc += x[a + j] * x[b + j];
            gram(a, b) = acc;
            gram(b, a) = acc;
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw IllConditionedError("SSA eigen-decomposition failed");

    ComponentSet out;
    out.method = Method::SSA;
    std::vector<double> remainder = series.values();

    // Leading eigentriples one per component; the final component collects all the rest.
    for (std::size_t c = 0; c + 1 < cfg.n_components; ++c) {
        const Eigen::VectorXd u = eig.eigenvectors().col(static_cast<Eigen::Index>(l - 1 - c));
        std::vector<double> v(k, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < l; ++i) acc += u[static_cast<Eigen::Index>(i)] * x[i + j];
            v[j] = acc;
        }
        // Anti-diagonal averaging of the rank-one matrix u v^T.
        std::vector<double> comp(n, 0.0);
        for (std::size_t i = 0; i < l; ++i) {
            const double ui = u[static_cast<Eigen::Index>(i)];
            for (std::size_t j = 0; j < k; ++j) comp[i + j] += ui * v[j];
        }
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t lo = t + 1 > k ? t + 1 - k : 0;
            const std::size_t hi = std::min(t, l - 1);
            comp[t] /= static_cast<double>(hi - lo + 1);
            remainder[t] -= comp[t];
        }
        out.components.push_back(std::move(comp));
        out.labels.push_back("SSA" + std::to_string(c + 1));
    }
    out.components.push_back(std::move(remainder));
    out.labels.push_back("SSA" + std::to_string(cfg.n_components));
    return out;
}

} // namespace decompleak
