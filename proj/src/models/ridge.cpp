#include <Eigen/Dense>
#include <cmath>

#include "decompleak/error.hpp"
#include "decompleak/models.hpp"

namespace decompleak {

RidgeParams ridge_fit(std::span<const double> inputs, std::span<const double> targets,
                      std::size_t dim, double lambda) {
    if (!(lambda >= 0.0)) throw InvalidConfigError("ridge lambda must be non-negative");
    if (dim == 0 || targets.empty() || inputs.size() != targets.size() * dim)
        throw InvalidInputError("ridge inputs do not match targets");
    const auto n = static_cast<Eigen::Index>(targets.size());
    const auto d = static_cast<Eigen::Index>(dim);
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMatrix> x(inputs.data(), n, d);
    const Eigen::Map<const Eigen::VectorXd> y(targets.data(), n);

    // Centring leaves the intercept unpenalised.
    const Eigen::RowVectorXd x_mean = x.colwise().mean();
    const double y_mean = y.mean();
    const Eigen::MatrixXd xc = x.rowwise() - x_mean;
    const Eigen::VectorXd yc = y.array() - y_mean;

    Eigen::MatrixXd gram = xc.transpose() * xc;
    gram.diagonal().array() += lambda;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    const double scale = gram.diagonal().cwiseAbs().maxCoeff();
    const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
    if (ldlt.info() != Eigen::Success || scale == 0.0 || !(ldlt.rcond() > 1e-13) ||
        !(pivots.minCoeff() > 1e-13 * pivots.maxCoeff()))
        throw IllConditionedError("ridge normal equations are singular; increase lambda");
    const Eigen::VectorXd beta = ldlt.solve(xc.transpose() * yc);
    if (!beta.allFinite()) throw NumericOverflowError("ridge solution is not finite");

    RidgeParams out;
    out.coef.assign(beta.data(), beta.data() + beta.size());
    out.intercept = y_mean - x_mean.dot(beta);
    return out;
}

RidgeParams ridge_fit(const WindowSet& samples, double lambda) {
    return ridge_fit(samples.inputs, samples.targets, samples.width(), lambda);
}

} // namespace decompleak
