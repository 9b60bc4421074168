#include <cmath>

#include "decompleak/error.hpp"
#include "decompleak/models.hpp"

namespace decompleak {

void adam_step(AdamState& s, Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr) {
    if (grad.size() != params.size()) throw InvalidInputError("gradient shape mismatch");
    if (s.m.size() == 0) {
        s.m = Eigen::VectorXd::Zero(params.size());
        s.v = Eigen::VectorXd::Zero(params.size());
    }
    if (s.m.size() != params.size()) throw InvalidInputError("Adam state shape mismatch");
    ++s.step;
    s.m = s.beta1 * s.m + (1.0 - s.beta1) * grad;
    s.v = s.beta2 * s.v + (1.0 - s.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    params.array() -= lr * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + s.eps);
}

void adagrad_step(AdagradState& s, Eigen::VectorXd& params, const Eigen::VectorXd& grad,
                  double lr) {
    if (grad.size() != params.size()) throw InvalidInputError("gradient shape mismatch");
    if (s.accum.size() == 0) s.accum = Eigen::VectorXd::Zero(params.size());
    if (s.accum.size() != params.size()) throw InvalidInputError("Adagrad state shape mismatch");
    s.accum.array() += grad.array().square();
    params.array() -= lr * grad.array() / (s.accum.array().sqrt() + s.eps);
}

} // namespace decompleak
