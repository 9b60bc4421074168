#include <cmath>
#include <random>

#include "decompleak/error.hpp"
#include "decompleak/models.hpp"

namespace decompleak {

using RowMatrix = MlpParams::RowMatrix;

MlpParams::MlpParams(std::size_t input_dim, std::vector<std::size_t> hidden)
    : input_dim_(input_dim), hidden_(std::move(hidden)) {
    if (input_dim_ == 0) throw InvalidConfigError("MLP input dimension must be positive");
    for (std::size_t h : hidden_)
        if (h == 0) throw InvalidConfigError("MLP hidden widths must be positive");
    std::size_t total = 0;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        offsets_.push_back(total);
        total += fan_out(l) * fan_in(l) + fan_out(l);
    }
    values_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
}

MlpParams MlpParams::initialise(std::size_t input_dim, std::vector<std::size_t> hidden,
                                std::uint64_t seed) {
    MlpParams p(input_dim, std::move(hidden));
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
        const double in = static_cast<double>(p.fan_in(l));
        const double out = static_cast<double>(p.fan_out(l));
        const bool head = l + 1 == p.layer_count();
        const double limit = head ? std::sqrt(6.0 / (in + out)) : std::sqrt(6.0 / in);
        std::uniform_real_distribution<double> dist(-limit, limit);
        auto w = p.weight(l);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    }
    return p;
}

std::size_t MlpParams::fan_in(std::size_t layer) const noexcept {
    return layer == 0 ? input_dim_ : hidden_[layer - 1];
}

std::size_t MlpParams::fan_out(std::size_t layer) const noexcept {
    return layer < hidden_.size() ? hidden_[layer] : 1;
}

Eigen::Map<const RowMatrix> MlpParams::weight(std::size_t layer) const {
    return {values_.data() + offsets_[layer], static_cast<Eigen::Index>(fan_out(layer)),
            static_cast<Eigen::Index>(fan_in(layer))};
}

Eigen::Map<RowMatrix> MlpParams::weight(std::size_t layer) {
    return {values_.data() + offsets_[layer], static_cast<Eigen::Index>(fan_out(layer)),
            static_cast<Eigen::Index>(fan_in(layer))};
}

Eigen::Map<const Eigen::VectorXd> MlpParams::bias(std::size_t layer) const {
    return {values_.data() + offsets_[layer] + fan_out(layer) * fan_in(layer),
            static_cast<Eigen::Index>(fan_out(layer))};
}

Eigen::Map<Eigen::VectorXd> MlpParams::bias(std::size_t layer) {
    return {values_.data() + offsets_[layer] + fan_out(layer) * fan_in(layer),
            static_cast<Eigen::Index>(fan_out(layer))};
}

namespace {

Eigen::Map<const RowMatrix> as_batch(const MlpParams& p, std::span<const double> inputs) {
    const std::size_t d = p.input_dim();
    if (inputs.size() % d != 0) throw InvalidInputError("input size is not a multiple of the MLP input dimension");
    return {inputs.data(), static_cast<Eigen::Index>(inputs.size() / d), static_cast<Eigen::Index>(d)};
}

// Pre-activations (z) and activations (a) per layer; a[0] is the input batch.
struct Trace {
    std::vector<RowMatrix> z;
    std::vector<RowMatrix> a;
};

Trace run_forward(const MlpParams& p, std::span<const double> inputs) {
    Trace tr;
    tr.a.emplace_back(as_batch(p, inputs));
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
        RowMatrix z = tr.a.back() * p.weight(l).transpose();
        z.rowwise() += p.bias(l).transpose();
        const bool head = l + 1 == p.layer_count();
        RowMatrix a = head ? z : RowMatrix(z.cwiseMax(0.0));
        tr.z.push_back(std::move(z));
        tr.a.push_back(std::move(a));
    }
    if (!tr.a.back().allFinite()) throw NumericOverflowError("MLP produced non-finite activations");
    return tr;
}

} // namespace

std::vector<double> mlp_forward_batch(const MlpParams& params, std::span<const double> inputs) {
    const Trace tr = run_forward(params, inputs);
    const auto& out = tr.a.back();
    return std::vector<double>(out.data(), out.data() + out.size());
}

double mlp_forward(const MlpParams& params, std::span<const double> window) {
    if (window.size() != params.input_dim()) throw InvalidInputError("window size does not match MLP input");
    return mlp_forward_batch(params, window).front();
}

Eigen::VectorXd mlp_gradient(const MlpParams& params, std::span<const double> inputs,
                             std::span<const double> targets, LossKind loss_kind, double* loss) {
    const Trace tr = run_forward(params, inputs);
    const auto rows = tr.a.front().rows();
    if (static_cast<std::size_t>(rows) != targets.size() || rows == 0)
        throw InvalidInputError("batch inputs and targets disagree in length");

    const Eigen::Map<const Eigen::VectorXd> y(targets.data(), rows);
    const Eigen::VectorXd err = tr.a.back().col(0) - y;
    const double inv = 1.0 / static_cast<double>(rows);
    RowMatrix delta(rows, 1);
    if (loss_kind == LossKind::MSE) {
        delta.col(0) = 2.0 * inv * err;
        if (loss) *loss = err.squaredNorm() * inv;
    } else {
        delta.col(0) = inv * err.unaryExpr([](double e) { return double((e > 0.0) - (e < 0.0)); });
        if (loss) *loss = err.cwiseAbs().sum() * inv;
    }

    MlpParams grad(params.input_dim(), params.hidden());
    for (std::size_t l = params.layer_count(); l-- > 0;) {
        grad.weight(l).noalias() = delta.transpose() * tr.a[l];
        grad.bias(l) = delta.colwise().sum().transpose();
        if (l == 0) break;
        RowMatrix back = delta * params.weight(l);
        delta = back.cwiseProduct(
            tr.z[l - 1].unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
    }
    return std::move(grad.values());
}

} // namespace decompleak
