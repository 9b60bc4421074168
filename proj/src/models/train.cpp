#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "decompleak/error.hpp"
#include "decompleak/models.hpp"

namespace decompleak {

std::string_view to_string(ModelKind k) noexcept {
    switch (k) {
    case ModelKind::Persistence: return "persistence";
    case ModelKind::Ridge: return "ridge";
    case ModelKind::Mlp: return "mlp";
    }
    return "unknown";
}

std::string_view to_string(OptimizerKind k) noexcept {
    return k == OptimizerKind::Adam ? "adam" : "adagrad";
}

std::string_view to_string(LossKind k) noexcept { return k == LossKind::MAE ? "mae" : "mse"; }

ModelKind parse_model_kind(std::string_view s) {
    if (s == "persistence") return ModelKind::Persistence;
    if (s == "ridge") return ModelKind::Ridge;
    if (s == "mlp") return ModelKind::Mlp;
    throw InvalidConfigError("unknown model '" + std::string(s) + "'");
}

OptimizerKind parse_optimizer(std::string_view s) {
    if (s == "adagrad") return OptimizerKind::Adagrad;
    if (s == "adam") return OptimizerKind::Adam;
    throw InvalidConfigError("unknown optimizer '" + std::string(s) + "'");
}

LossKind parse_loss(std::string_view s) {
    if (s == "mse") return LossKind::MSE;
    if (s == "mae") return LossKind::MAE;
    throw InvalidConfigError("unknown loss '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
    if (max_epochs == 0 || batch_size == 0 || patience == 0)
        throw InvalidConfigError("epochs, batch size and patience must be positive");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw InvalidConfigError("learning rate must be finite and non-negative");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw InvalidConfigError("validation fraction must lie in (0, 1)");
    if (!(ridge_lambda >= 0.0)) throw InvalidConfigError("ridge lambda must be non-negative");
}

double persistence_predict(std::span<const double> window) {
    if (window.empty()) throw InvalidInputError("persistence needs a non-empty window");
    return window.back();
}

double predict(const ModelParams& params, std::span<const double> window) {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PersistenceParams>) {
                if (window.size() != p.window * p.channels)
                    throw InvalidInputError("window size does not match persistence layout");
                return window[(p.window - 1) * p.channels];
            } else if constexpr (std::is_same_v<T, RidgeParams>) {
                if (window.size() != p.coef.size()) throw InvalidInputError("window size does not match ridge");
                return p.intercept + std::inner_product(window.begin(), window.end(), p.coef.begin(), 0.0);
            } else {
                return mlp_forward(p, window);
            }
        },
        params);
}

std::vector<double> predict(const ModelParams& params, const WindowSet& windows) {
    if (const auto* mlp = std::get_if<MlpParams>(&params)) return mlp_forward_batch(*mlp, windows.inputs);
    std::vector<double> out(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) out[i] = predict(params, windows.row(i));
    return out;
}

namespace {

double mean_loss(std::span<const double> pred, std::span<const double> truth, LossKind loss) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - truth[i];
        acc += loss == LossKind::MSE ? e * e : std::abs(e);
    }
    const double out = acc / static_cast<double>(pred.size());
    if (!std::isfinite(out)) throw NumericOverflowError("loss is not finite");
    return out;
}

WindowSet subset(const WindowSet& w, const std::vector<std::size_t>& idx) {
    WindowSet out;
    out.window = w.window;
    out.channels = w.channels;
    out.labels = w.labels;
    out.inputs.reserve(idx.size() * w.width());
    out.targets.reserve(idx.size());
    for (std::size_t i : idx) {
        const auto row = w.row(i);
        out.inputs.insert(out.inputs.end(), row.begin(), row.end());
        out.targets.push_back(w.targets[i]);
    }
    return out;
}

struct Folds {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
};

Folds split_validation(std::size_t n, const TrainConfig& cfg, std::mt19937_64& rng) {
    const auto n_val = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(cfg.validation_fraction * static_cast<double>(n))), 1, n - 1);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Folds f;
    if (cfg.chronological_validation) {
        f.train.assign(idx.begin(), idx.end() - static_cast<std::ptrdiff_t>(n_val));
        f.val.assign(idx.end() - static_cast<std::ptrdiff_t>(n_val), idx.end());
        return f;
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    f.val.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    f.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
    std::sort(f.val.begin(), f.val.end());
    std::sort(f.train.begin(), f.train.end());
    return f;
}

void record_single_epoch(TrainResult& r, const WindowSet& tr, const WindowSet& val,
                         const WindowSet* test, LossKind loss) {
    r.history.train_loss.push_back(evaluate_loss(r.params, tr, loss));
    r.history.val_loss.push_back(evaluate_loss(r.params, val, loss));
    if (test) r.history.test_loss.push_back(evaluate_loss(r.params, *test, loss));
    r.history.best_epoch = 0;
}

TrainResult train_mlp(const WindowSet& tr, const WindowSet& val, const TrainConfig& cfg,
                      const WindowSet* test, std::mt19937_64& rng) {
    MlpParams params = MlpParams::initialise(tr.width(), cfg.hidden, rng());
    MlpParams best = params;
    TrainingHistory hist;
    AdamState adam;
    AdagradState adagrad;

    const std::size_t n = tr.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> batch_x, batch_y;
    double best_val = std::numeric_limits<double>::infinity();

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double weighted = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            batch_x.clear();
            batch_y.clear();
            for (std::size_t i = start; i < end; ++i) {
                const auto row = tr.row(order[i]);
                batch_x.insert(batch_x.end(), row.begin(), row.end());
                batch_y.push_back(tr.targets[order[i]]);
            }
            double batch_loss = 0.0;
            const Eigen::VectorXd grad = mlp_gradient(params, batch_x, batch_y, cfg.loss, &batch_loss);
            if (!std::isfinite(batch_loss) || !grad.allFinite())
                throw NumericOverflowError("training diverged at epoch " + std::to_string(epoch));
            weighted += batch_loss * static_cast<double>(end - start);
            if (cfg.optimizer == OptimizerKind::Adam) adam_step(adam, params.values(), grad, cfg.learning_rate);
            else adagrad_step(adagrad, params.values(), grad, cfg.learning_rate);
        }
        hist.train_loss.push_back(weighted / static_cast<double>(n));
        const double v = mean_loss(mlp_forward_batch(params, val.inputs), val.targets, cfg.loss);
        hist.val_loss.push_back(v);
        if (test) hist.test_loss.push_back(mean_loss(mlp_forward_batch(params, test->inputs), test->targets, cfg.loss));

        if (v < best_val) {
            best_val = v;
            best = params;
            hist.best_epoch = epoch;
        } else if (epoch - hist.best_epoch >= cfg.patience) {
            break;
        }
    }
    return TrainResult{std::move(best), std::move(hist)};
}

} // namespace

double evaluate_loss(const ModelParams& params, const WindowSet& windows, LossKind loss) {
    if (windows.size() == 0) throw InvalidInputError("cannot evaluate on an empty window set");
    return mean_loss(predict(params, windows), windows.targets, loss);
}

TrainResult train(ModelKind kind, const WindowSet& windows, const TrainConfig& cfg,
                  const WindowSet* test) {
    cfg.validate();
    if (windows.size() < 2)
        throw InsufficientDataError("training needs at least two windows to hold out validation");
    if (test && test->width() != windows.width())
        throw InvalidInputError("test windows do not match training layout");

    std::mt19937_64 rng(cfg.seed);
    const Folds folds = split_validation(windows.size(), cfg, rng);
    const WindowSet tr = subset(windows, folds.train);
    const WindowSet val = subset(windows, folds.val);

    switch (kind) {
    case ModelKind::Persistence: {
        TrainResult r{PersistenceParams{windows.window, windows.channels}, {}};
        record_single_epoch(r, tr, val, test, cfg.loss);
        return r;
    }
    case ModelKind::Ridge: {
        TrainResult r{ridge_fit(tr, cfg.ridge_lambda), {}};
        record_single_epoch(r, tr, val, test, cfg.loss);
        return r;
    }
    case ModelKind::Mlp: return train_mlp(tr, val, cfg, test, rng);
    }
    throw InvalidConfigError("unknown model kind");
}

} // namespace decompleak
