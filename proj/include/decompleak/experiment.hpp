#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "decompleak/decomposition.hpp"
#include "decompleak/metrics.hpp"
#include "decompleak/models.hpp"
#include "decompleak/pipeline.hpp"
#include "decompleak/spectral.hpp"
#include "decompleak/synthetic.hpp"

namespace decompleak {

struct ExperimentConfig {
    std::string dataset_name = "synthetic";
    /// Local CSV; when unset the synthetic spec is generated instead.
    std::optional<std::string> csv_path;
    std::string csv_column;
    SyntheticSpec synthetic = standard_fixture_spec();

    std::vector<Method> methods{Method::SSA};
    std::vector<ModeKind> modes{ModeKind::RawOnly, ModeKind::Leaked, ModeKind::Causal};
    std::vector<ModelKind> models{ModelKind::Persistence, ModelKind::Ridge, ModelKind::Mlp};

    TrainConfig train;
    DecompositionConfig decomposition;
    CausalScheduleConfig causal;
    /// Build training windows by per-step causal decomposition instead of one decomposition
    /// of the whole training split.
    bool causal_training = false;

    std::size_t window = 12;
    double train_fraction = 0.75;
    std::size_t n_seeds = 5;
    std::uint64_t seed = 0; // seeds used are seed, seed+1, ..., seed+n_seeds-1

    std::size_t workers = 1;
    std::string out_dir = "results";
    bool save_models = false;
    bool record_test_loss = true;

    void validate() const;
    /// Fixed-order `key = value` text covering every setting that affects results.
    std::string canonical() const;
    /// FNV-1a 64 of canonical().
    std::uint64_t hash() const;
};

/// Parses `key = value` lines (`#` starts a comment) on top of `base`.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
/// Applies one setting; unknown keys and malformed values raise invalid-config errors.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Loads the configured CSV or generates the synthetic series.
TimeSeries load_series(const ExperimentConfig& cfg);

struct ResultRow {
    std::string dataset;
    std::string method;
    std::string mode;
    std::string model;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    MetricsReport metrics;
    double wall_seconds = 0.0;
    /// One entry per trained model: (component label or "model", history).
    std::vector<std::pair<std::string, TrainingHistory>> histories;
    /// One JSON model document per trained model, only when save_models is set.
    std::vector<std::pair<std::string, std::string>> model_documents;
};

struct AggregateRow {
    std::string dataset;
    std::string method;
    std::string mode;
    std::string model;
    std::size_t n = 0;
    double mse_mean = 0, mse_std = 0, mae_mean = 0, mae_std = 0;
    double mape_mean = 0, mape_std = 0;
    std::optional<double> r2_mean, r2_std;
    std::optional<double> p_vs_causal;
};

struct ComponentSpectrum {
    std::string method;
    std::string label;
    Spectrum spectrum;
    DominantFrequency dominant;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ResultRow> rows;
    std::vector<AggregateRow> aggregate;
    std::vector<ComponentSpectrum> spectra;
};

/// Full grid: methods x modes x models x seeds.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg, const TimeSeries& series);

struct AblationComponent {
    std::string label;
    std::string model;
    std::size_t channel = 0;
    double dominant_frequency = 0.0;
    double mse_mean = 0.0;
    /// (raw-only mean MSE - component mean MSE) / raw-only mean MSE
    double error_reduction = 0.0;
};

struct AblationResult {
    ExperimentResult experiment;
    std::vector<AblationComponent> components;
};

/// RawOnly reference plus one SingleComponent cell per component, leaked (or causal).
AblationResult run_ablation(const ExperimentConfig& cfg, Method method, bool leaked = true);
AblationResult run_ablation(const ExperimentConfig& cfg, const TimeSeries& series, Method method,
                            bool leaked = true);

/// RawOnly reference plus the component-summation cell: one model per component, predictions summed.
ExperimentResult run_summation(const ExperimentConfig& cfg, Method method, bool leaked);
ExperimentResult run_summation(const ExperimentConfig& cfg, const TimeSeries& series,
                               Method method, bool leaked);

/// Aggregates rows per (dataset, method, mode, model) with Welch p against the causal counterpart.
std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows);

struct AuditVerdict {
    double leaked_mse = 0.0;
    double causal_mse = 0.0;
    double raw_mse = 0.0;
    /// (causal - leaked) / causal
    double inflation = 0.0;
    std::optional<double> p_value;
    bool leakage_detected = false;
    std::string message;
};

AuditVerdict audit(const ExperimentResult& result, Method method, ModelKind model,
                   double alpha = 0.05);

/// Writes results.csv, aggregate.csv, history/, spectra/, manifest.json (all byte-deterministic)
/// and timings.csv (wall-clock, excluded from the determinism contract). Returns written paths.
std::vector<std::filesystem::path> emit_reports(const ExperimentResult& result,
                                                const std::filesystem::path& out_dir);

// Plot-data writers.
void write_components_csv(std::ostream& out, const TimeSeries& series, const ComponentSet& set);
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
void write_windows_csv(std::ostream& out, const WindowSet& windows);
std::string format_number(double v);

} // namespace decompleak
