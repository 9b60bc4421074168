#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <iomanip>
#include <sstream>
#include <thread>
#include <tuple>

#include "decompleak/error.hpp"
#include "decompleak/experiment.hpp"

namespace decompleak {

namespace {

// Features for one decomposition method, scaled with train-fit per-channel scalers.
struct MethodData {
    Method method = Method::Identity;
    std::vector<std::string> labels;
    ChannelScalers scalers;
    FeatureMatrix train_scaled;
    WindowSet train_windows;
    std::optional<WindowSet> leaked_test;
    std::optional<WindowSet> causal_test;
    ComponentSet full;
};

struct Needs {
    bool leaked = false;
    bool causal = false;
};

struct Cell {
    std::size_t method_index = 0;
    PipelineMode mode;
    ModelKind model = ModelKind::Persistence;
    std::uint64_t seed = 0;
};

struct Context {
    const ExperimentConfig& cfg;
    TimeSeries series;
    SplitResult split;
};

Context make_context(const ExperimentConfig& cfg, const TimeSeries& series) {
    cfg.validate();
    return Context{cfg, series, split_chronological(series, cfg.train_fraction)};
}

MethodData prepare(const Context& ctx, Method method, Needs needs) {
    const auto& cfg = ctx.cfg;
    const WindowSpec window{cfg.window, 1};
    MethodData d;
    d.method = method;

    const FeatureMatrix train = build_train_features(ctx.split.train, method, cfg.decomposition);
    d.labels = train.labels;
    d.scalers = ChannelScalers::fit(train);
    d.train_scaled = d.scalers.apply(train);

    if (cfg.causal_training) {
        const std::size_t first = std::max(cfg.window, min_length(method, cfg.decomposition));
        CausalScheduleConfig sched = cfg.causal;
        sched.workers = cfg.workers;
        d.train_windows = d.scalers.apply(causal_windows(ctx.series, first, ctx.split.spec.train_len, method,
                                                         cfg.decomposition, window, d.labels, sched));
    } else {
        d.train_windows = make_windows(d.train_scaled, d.train_scaled.channels[0], window);
    }

    if (needs.leaked)
        d.leaked_test = d.scalers.apply(build_test_features_leaked(ctx.series, ctx.split.spec, method,
                                                                   cfg.decomposition, window, d.labels));
    if (needs.causal) {
        CausalScheduleConfig sched = cfg.causal;
        sched.workers = cfg.workers;
        d.causal_test = d.scalers.apply(build_test_features_causal(ctx.series, ctx.split.spec, method,
                                                                   cfg.decomposition, window, d.labels, sched));
    }
    d.full = decompose(method, ctx.series, cfg.decomposition);
    return d;
}

const WindowSet& test_windows(const MethodData& d, const PipelineMode& mode) {
    const bool leaked = mode.kind == ModeKind::RawOnly ? d.leaked_test.has_value() : mode.uses_leaked_features();
    const auto& src = leaked ? d.leaked_test : d.causal_test;
    if (!src) throw InvalidConfigError("test features for mode '" + mode.name() + "' were not prepared");
    return *src;
}

std::vector<double> invert(const ScalerParams& p, const std::vector<double>& scaled) {
    return minmax_invert(p, scaled);
}

void run_single(const Context& ctx, const MethodData& d, const Cell& cell, ResultRow& row) {
    TrainConfig tc = ctx.cfg.train;
    tc.seed = cell.seed;
    const WindowSet& test_all = test_windows(d, cell.mode);
    const WindowSet train = select_components(d.train_windows, cell.mode);
    const WindowSet test = select_components(test_all, cell.mode);

    const TrainResult fit = decompleak::train(cell.model, train, tc, ctx.cfg.record_test_loss ? &test : nullptr);
    const auto pred = invert(d.scalers.params[0], predict(fit.params, test));
    const auto truth = invert(d.scalers.params[0], test.targets);
    row.metrics = compute_metrics(truth, pred);
    row.histories.emplace_back("model", fit.history);
    if (ctx.cfg.save_models) row.model_documents.emplace_back("model", to_json(fit.params, fit.history));
}

void run_summation_cell(const Context& ctx, const MethodData& d, const Cell& cell, ResultRow& row) {
    TrainConfig tc = ctx.cfg.train;
    tc.seed = cell.seed;
    const WindowSpec window{ctx.cfg.window, 1};
    const WindowSet& test_all = test_windows(d, cell.mode);
    const std::size_t n_test = test_all.size();
    std::vector<double> total(n_test, 0.0);

    for (std::size_t k = 1; k < d.labels.size(); ++k) {
        FeatureMatrix single;
        single.channels = {d.train_scaled.channels[k]};
        single.labels = {d.labels[k]};
        const WindowSet train = make_windows(single, d.train_scaled.channels[k], window);
        const WindowSet test = select_channels(test_all, {k});
        const TrainResult fit = decompleak::train(cell.model, train, tc, nullptr);
        const auto pred = invert(d.scalers.params[k], predict(fit.params, test));
        for (std::size_t i = 0; i < n_test; ++i) total[i] += pred[i];
        row.histories.emplace_back(d.labels[k], fit.history);
        if (ctx.cfg.save_models) row.model_documents.emplace_back(d.labels[k], to_json(fit.params, fit.history));
    }
    const auto truth = invert(d.scalers.params[0], test_all.targets);
    row.metrics = compute_metrics(truth, total);
}

ResultRow run_cell(const Context& ctx, const std::vector<MethodData>& data, const Cell& cell) {
    const MethodData& d = data[cell.method_index];
    ResultRow row;
    row.dataset = ctx.cfg.dataset_name;
    row.method = std::string(to_string(d.method));
    row.mode = cell.mode.name(d.labels);
    row.model = std::string(to_string(cell.model));
    row.seed = cell.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (cell.mode.kind == ModeKind::Summation) run_summation_cell(ctx, d, cell, row);
        else run_single(ctx, d, cell, row);
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
        row.metrics = {};
        row.histories.clear();
        row.model_documents.clear();
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

// RawOnly cells read only the raw channel and are identical for every method (unless training
// windows come from per-method causal decompositions), so they are computed once.
std::string memo_key(const Context& ctx, const std::vector<MethodData>& data, const Cell& c) {
    std::ostringstream k;
    if (c.mode.kind == ModeKind::RawOnly && !ctx.cfg.causal_training) k << "raw";
    else k << to_string(data[c.method_index].method) << "|" << c.mode.name(data[c.method_index].labels);
    k << "|" << to_string(c.model) << "|" << c.seed;
    return k.str();
}

std::vector<ResultRow> execute(const Context& ctx, const std::vector<MethodData>& data,
                               const std::vector<Cell>& cells) {
    std::map<std::string, std::size_t> unique_index;
    std::vector<std::size_t> task_of(cells.size());
    std::vector<std::size_t> tasks;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto [it, inserted] = unique_index.emplace(memo_key(ctx, data, cells[i]), tasks.size());
        if (inserted) tasks.push_back(i);
        task_of[i] = it->second;
    }

    std::vector<ResultRow> computed(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) computed[t] = run_cell(ctx, data, cells[tasks[t]]);
    };
    const std::size_t n_workers = std::max<std::size_t>(1, std::min(ctx.cfg.workers, tasks.size()));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    }

    std::vector<ResultRow> rows;
    rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        ResultRow r = computed[task_of[i]];
        r.method = std::string(to_string(data[cells[i].method_index].method));
        rows.push_back(std::move(r));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.method, a.mode, a.model, a.seed) < std::tie(b.method, b.mode, b.model, b.seed);
    });
    return rows;
}

std::vector<ComponentSpectrum> spectra_for(const Context& ctx, const std::vector<MethodData>& data) {
    std::vector<ComponentSpectrum> out;
    out.push_back({"raw", "raw", power_spectrum(ctx.series.view()), dominant_frequency(ctx.series.view())});
    for (const auto& d : data) {
        for (std::size_t c = 0; c < d.full.size(); ++c)
            out.push_back({std::string(to_string(d.method)), d.full.labels[c], power_spectrum(d.full.components[c]),
                           dominant_frequency(d.full.components[c])});
    }
    return out;
}

std::vector<std::uint64_t> seeds_of(const ExperimentConfig& cfg) {
    std::vector<std::uint64_t> s;
    for (std::size_t k = 0; k < cfg.n_seeds; ++k) s.push_back(cfg.seed + k);
    return s;
}

ExperimentResult finish(const Context& ctx, const std::vector<MethodData>& data, std::vector<ResultRow> rows) {
    ExperimentResult r;
    r.config = ctx.cfg;
    r.rows = std::move(rows);
    r.aggregate = aggregate_rows(r.rows);
    r.spectra = spectra_for(ctx, data);
    return r;
}

std::string counterpart(const std::string& mode) {
    if (mode == "leaked" || mode == "raw") return "causal";
    if (mode == "summation-leaked") return "summation-causal";
    if (mode.rfind("single-leaked:", 0) == 0) return "single-causal:" + mode.substr(14);
    return {};
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, load_series(cfg)); }

ExperimentResult run_experiment(const ExperimentConfig& cfg, const TimeSeries& series) {
    const Context ctx = make_context(cfg, series);
    Needs needs;
    for (ModeKind m : cfg.modes) {
        needs.leaked |= m == ModeKind::Leaked || m == ModeKind::RawOnly;
        needs.causal |= m == ModeKind::Causal;
    }
    std::vector<MethodData> data;
    for (Method m : cfg.methods) data.push_back(prepare(ctx, m, needs));

    std::vector<Cell> cells;
    for (std::size_t mi = 0; mi < data.size(); ++mi)
        for (ModeKind mode : cfg.modes)
            for (ModelKind model : cfg.models)
                for (std::uint64_t seed : seeds_of(cfg)) {
                    PipelineMode pm;
                    if (mode == ModeKind::Leaked) pm = PipelineMode::leaked_full(data[mi].method);
                    else if (mode == ModeKind::Causal) pm = PipelineMode::causal_full(data[mi].method);
                    else pm = PipelineMode::raw_only();
                    cells.push_back({mi, pm, model, seed});
                }
    return finish(ctx, data, execute(ctx, data, cells));
}

AblationResult run_ablation(const ExperimentConfig& cfg, Method method, bool leaked) {
    return run_ablation(cfg, load_series(cfg), method, leaked);
}

AblationResult run_ablation(const ExperimentConfig& cfg, const TimeSeries& series, Method method, bool leaked) {
    const Context ctx = make_context(cfg, series);
    std::vector<MethodData> data{prepare(ctx, method, Needs{true, !leaked})};
    const MethodData& d = data.front();

    std::vector<Cell> cells;
    for (ModelKind model : cfg.models)
        for (std::uint64_t seed : seeds_of(cfg)) {
            cells.push_back({0, PipelineMode::raw_only(), model, seed});
            for (std::size_t k = 1; k < d.labels.size(); ++k)
                cells.push_back({0, PipelineMode::single(method, k, leaked), model, seed});
        }

    AblationResult out;
    out.experiment = finish(ctx, data, execute(ctx, data, cells));

    const auto aligned = align_components(d.full, {d.labels.begin() + 1, d.labels.end()});
    for (ModelKind model : cfg.models) {
        const std::string model_name(to_string(model));
        double raw_mse = 0.0;
        for (const auto& a : out.experiment.aggregate)
            if (a.mode == "raw" && a.model == model_name) raw_mse = a.mse_mean;
        for (std::size_t k = 1; k < d.labels.size(); ++k) {
            AblationComponent c;
            c.label = d.labels[k];
            c.model = model_name;
            c.channel = k;
            c.dominant_frequency = dominant_frequency(aligned[k - 1]).frequency;
            const std::string mode = PipelineMode::single(method, k, leaked).name(d.labels);
            for (const auto& a : out.experiment.aggregate)
                if (a.mode == mode && a.model == model_name) c.mse_mean = a.mse_mean;
            c.error_reduction = raw_mse > 0.0 ? (raw_mse - c.mse_mean) / raw_mse : 0.0;
            out.components.push_back(c);
        }
    }
    return out;
}

ExperimentResult run_summation(const ExperimentConfig& cfg, Method method, bool leaked) {
    return run_summation(cfg, load_series(cfg), method, leaked);
}

ExperimentResult run_summation(const ExperimentConfig& cfg, const TimeSeries& series, Method method,
                               bool leaked) {
    const Context ctx = make_context(cfg, series);
    std::vector<MethodData> data{prepare(ctx, method, Needs{true, !leaked})};
    std::vector<Cell> cells;
    for (ModelKind model : cfg.models)
        for (std::uint64_t seed : seeds_of(cfg)) {
            cells.push_back({0, PipelineMode::raw_only(), model, seed});
            cells.push_back({0, PipelineMode::summation(method, leaked), model, seed});
        }
    return finish(ctx, data, execute(ctx, data, cells));
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, std::string, std::string, std::string>;
    std::map<Key, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows)
        if (r.ok) groups[{r.dataset, r.method, r.mode, r.model}].push_back(&r);

    auto collect = [](const std::vector<const ResultRow*>& g, auto&& field) {
        std::vector<double> v;
        for (const auto* r : g) v.push_back(field(*r));
        return v;
    };
    auto mse_of = [&](const std::vector<const ResultRow*>& g) {
        return collect(g, [](const ResultRow& r) { return r.metrics.mse; });
    };

    std::vector<AggregateRow> out;
    for (const auto& [key, g] : groups) {
        AggregateRow a;
        std::tie(a.dataset, a.method, a.mode, a.model) = key;
        a.n = g.size();
        const auto mse = mse_of(g);
        const auto mae = collect(g, [](const ResultRow& r) { return r.metrics.mae; });
        const auto mape = collect(g, [](const ResultRow& r) { return r.metrics.mape; });
        a.mse_mean = mean(mse);
        a.mse_std = sample_std(mse);
        a.mae_mean = mean(mae);
        a.mae_std = sample_std(mae);
        a.mape_mean = mean(mape);
        a.mape_std = sample_std(mape);
        std::vector<double> r2;
        for (const auto* r : g)
            if (r->metrics.r2) r2.push_back(*r->metrics.r2);
        if (r2.size() == g.size()) {
            a.r2_mean = mean(r2);
            a.r2_std = sample_std(r2);
        }
        const std::string other = counterpart(a.mode);
        if (!other.empty()) {
            const auto it = groups.find({a.dataset, a.method, other, a.model});
            if (it != groups.end()) {
                try {
                    a.p_vs_causal = welch_t_test(mse, mse_of(it->second)).p;
                } catch (const Error&) {
                    a.p_vs_causal.reset();
                }
            }
        }
        out.push_back(std::move(a));
    }
    return out;
}

AuditVerdict audit(const ExperimentResult& result, Method method, ModelKind model, double alpha) {
    const std::string m(to_string(method));
    const std::string k(to_string(model));
    const AggregateRow* leaked = nullptr;
    const AggregateRow* causal = nullptr;
    const AggregateRow* raw = nullptr;
    for (const auto& a : result.aggregate) {
        if (a.method != m || a.model != k) continue;
        if (a.mode == "leaked") leaked = &a;
        else if (a.mode == "causal") causal = &a;
        else if (a.mode == "raw") raw = &a;
    }
    if (!leaked || !causal) throw InvalidInputError("audit needs both leaked and causal cells for " + m + "/" + k);

    AuditVerdict v;
    v.leaked_mse = leaked->mse_mean;
    v.causal_mse = causal->mse_mean;
    v.raw_mse = raw ? raw->mse_mean : 0.0;
    v.inflation = causal->mse_mean > 0.0 ? (causal->mse_mean - leaked->mse_mean) / causal->mse_mean : 0.0;
    v.p_value = leaked->p_vs_causal;
    v.leakage_detected = leaked->mse_mean < causal->mse_mean && v.p_value && *v.p_value < alpha;

    std::ostringstream msg;
    if (v.leakage_detected) {
        msg << "LEAKAGE: decomposing the whole series makes " << k << "+" << m << " look "
            << std::fixed << std::setprecision(1) << 100.0 * v.inflation << "% more accurate than the causal pipeline";
    } else {
        msg << "no significant accuracy inflation from " << m << " leakage at alpha " << format_number(alpha);
    }
    v.message = msg.str();
    return v;
}

} // namespace decompleak
