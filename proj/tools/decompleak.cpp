// Command-line front end for the decomposition leakage harness.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "decompleak/dataset.hpp"
#include "decompleak/decomposition.hpp"
#include "decompleak/error.hpp"
#include "decompleak/experiment.hpp"
#include "decompleak/spectral.hpp"
#include "decompleak/synthetic.hpp"

namespace fs = std::filesystem;
using namespace decompleak;

namespace {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kConfig = 2,
    kData = 3,
    kNumeric = 4,
};

int exit_code(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::InvalidConfig: return kConfig;
    case ErrorCategory::InvalidInput:
    case ErrorCategory::InsufficientData:
    case ErrorCategory::Io: return kData;
    case ErrorCategory::IllConditioned:
    case ErrorCategory::NumericOverflow: return kNumeric;
    }
    return kInternal;
}

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::string out;
    std::string csv;
    std::string column;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("-c,--config", c.config, "key = value configuration file");
    app->add_option("--set", c.sets, "override a setting, key=value (repeatable)");
    app->add_option("--seed", c.seed, "base seed");
    app->add_option("--workers", c.workers, "worker threads");
    app->add_option("-o,--out", c.out, "output directory or file");
    app->add_option("--dataset,--csv", c.csv, "input CSV (overrides dataset.csv)");
    app->add_option("--column", c.column, "CSV column name or index");
}

ExperimentConfig build_config(const Common& c) {
    ExperimentConfig cfg;
    if (!c.config.empty()) cfg = load_config(c.config);
    for (const auto& s : c.sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw InvalidConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!c.csv.empty()) apply_setting(cfg, "dataset.csv", c.csv);
    if (!c.column.empty()) apply_setting(cfg, "dataset.column", c.column);
    if (c.seed) cfg.seed = *c.seed;
    if (c.workers) cfg.workers = *c.workers;
    if (!c.out.empty()) cfg.out_dir = c.out;
    cfg.validate();
    return cfg;
}

// Writes to the named file, or stdout when the name is empty or "-".
template <class F>
void with_output(const std::string& path, F&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write(out);
    if (!out) throw IoError("write failed: " + path);
}

void print_aggregate(const ExperimentResult& r) {
    std::printf("%-10s %-6s %-22s %-12s %-14s %-14s %s\n", "dataset", "method", "mode", "model",
                "mse_mean", "mse_std", "p_vs_causal");
    for (const auto& a : r.aggregate) {
        std::printf("%-10s %-6s %-22s %-12s %-14s %-14s %s\n", a.dataset.c_str(), a.method.c_str(),
                    a.mode.c_str(), a.model.c_str(), format_number(a.mse_mean).c_str(),
                    format_number(a.mse_std).c_str(),
                    a.p_vs_causal ? format_number(*a.p_vs_causal).c_str() : "");
    }
}

void report_failures(const ExperimentResult& r) {
    for (const auto& row : r.rows)
        if (!row.ok)
            std::fprintf(stderr, "cell %s/%s/%s seed %llu failed: %s\n", row.method.c_str(),
                         row.mode.c_str(), row.model.c_str(),
                         static_cast<unsigned long long>(row.seed), row.error.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signal-decomposition forecasting and leakage audit harness"};
    app.set_version_flag("--version", DECOMPLEAK_VERSION);
    app.require_subcommand(1);

    Common common;
    std::string method_name = "ssa";
    bool causal = false;
    double alpha = 0.05;
    std::optional<std::size_t> component;
    std::optional<std::size_t> prefix;

    auto* decompose_cmd = app.add_subcommand("decompose", "decompose a series into components CSV");
    add_common(decompose_cmd, common);
    decompose_cmd->add_option("-m,--method", method_name, "emd | dwt | ssa | none");
    decompose_cmd->add_option("--prefix", prefix, "decompose only the first N values");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "power spectrum of a series or component");
    add_common(spectrum_cmd, common);
    spectrum_cmd->add_option("-m,--method", method_name, "decomposition for --component");
    spectrum_cmd->add_option("--component", component, "component index (1-based); omit for raw");

    auto* run_cmd = app.add_subcommand("run", "run the experiment grid and write reports");
    add_common(run_cmd, common);

    auto* ablate_cmd = app.add_subcommand("ablate", "single-component ablation");
    add_common(ablate_cmd, common);
    ablate_cmd->add_option("-m,--method", method_name, "emd | dwt | ssa");
    ablate_cmd->add_flag("--causal", causal, "ablate causal instead of leaked components");

    auto* sum_cmd = app.add_subcommand("summation", "per-component models with summed predictions");
    add_common(sum_cmd, common);
    sum_cmd->add_option("-m,--method", method_name, "emd | dwt | ssa");
    sum_cmd->add_flag("--causal", causal, "use causal component features");

    auto* audit_cmd = app.add_subcommand("audit", "leaked vs causal delta with Welch p");
    add_common(audit_cmd, common);
    audit_cmd->add_option("--alpha", alpha, "significance level")->check(CLI::Range(0.0, 1.0));

    auto* synth_cmd = app.add_subcommand("synth", "write the configured synthetic series as CSV");
    add_common(synth_cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        ExperimentConfig cfg = build_config(common);

        if (*decompose_cmd) {
            TimeSeries series = load_series(cfg);
            if (prefix) {
                if (*prefix == 0 || *prefix > series.size())
                    throw InvalidConfigError("--prefix out of range");
                series = series.prefix(*prefix);
            }
            ComponentSet set = decompose(parse_method(method_name), series, cfg.decomposition);
            with_output(common.out, [&](std::ostream& o) { write_components_csv(o, series, set); });
        } else if (*spectrum_cmd) {
            TimeSeries series = load_series(cfg);
            std::vector<double> signal = series.values();
            if (component) {
                ComponentSet set = decompose(parse_method(method_name), series, cfg.decomposition);
                if (*component == 0 || *component > set.size())
                    throw InvalidConfigError("--component must be in 1.." +
                                             std::to_string(set.size()));
                signal = set.components[*component - 1];
            }
            Spectrum s = power_spectrum(signal);
            DominantFrequency d = dominant_frequency(signal);
            with_output(common.out, [&](std::ostream& o) { write_spectrum_csv(o, s); });
            std::fprintf(stderr, "dominant frequency %s (power %s%s)\n",
                         format_number(d.frequency).c_str(), format_number(d.power).c_str(),
                         d.low_power ? ", low power" : "");
        } else if (*run_cmd) {
            ExperimentResult r = run_experiment(cfg);
            emit_reports(r, cfg.out_dir);
            print_aggregate(r);
            report_failures(r);
        } else if (*ablate_cmd) {
            AblationResult r = run_ablation(cfg, parse_method(method_name), !causal);
            emit_reports(r.experiment, cfg.out_dir);
            std::ofstream out(fs::path(cfg.out_dir) / "ablation.csv", std::ios::binary);
            if (!out) throw IoError("cannot write ablation.csv");
            out << "label,model,channel,dominant_frequency,mse_mean,error_reduction\n";
            std::printf("%-8s %-12s %-14s %-14s %s\n", "label", "model", "dom_freq", "mse_mean",
                        "reduction");
            for (const auto& c : r.components) {
                out << c.label << ',' << c.model << ',' << c.channel << ','
                    << format_number(c.dominant_frequency) << ',' << format_number(c.mse_mean)
                    << ',' << format_number(c.error_reduction) << '\n';
                std::printf("%-8s %-12s %-14s %-14s %s\n", c.label.c_str(), c.model.c_str(),
                            format_number(c.dominant_frequency).c_str(),
                            format_number(c.mse_mean).c_str(),
                            format_number(c.error_reduction).c_str());
            }
            report_failures(r.experiment);
        } else if (*sum_cmd) {
            ExperimentResult r = run_summation(cfg, parse_method(method_name), !causal);
            emit_reports(r, cfg.out_dir);
            print_aggregate(r);
            report_failures(r);
        } else if (*audit_cmd) {
            ExperimentResult r = run_experiment(cfg);
            emit_reports(r, cfg.out_dir);
            for (Method m : cfg.methods)
                for (ModelKind k : cfg.models) {
                    AuditVerdict v = audit(r, m, k, alpha);
                    std::printf("%s/%s: leaked %s causal %s raw %s inflation %s p %s -> %s\n",
                                std::string(to_string(m)).c_str(),
                                std::string(to_string(k)).c_str(),
                                format_number(v.leaked_mse).c_str(),
                                format_number(v.causal_mse).c_str(),
                                format_number(v.raw_mse).c_str(),
                                format_number(v.inflation).c_str(),
                                v.p_value ? format_number(*v.p_value).c_str() : "n/a",
                                v.message.c_str());
                }
            report_failures(r);
        } else if (*synth_cmd) {
            TimeSeries s = gen_synthetic(cfg.synthetic);
            with_output(common.out, [&](std::ostream& o) {
                o << "t,value\n";
                for (std::size_t i = 0; i < s.size(); ++i)
                    o << i << ',' << format_number(s[i]) << '\n';
            });
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error (%s): %s\n", to_string(e.category()), e.what());
        return exit_code(e.category());
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "error (io): %s\n", e.what());
        return kData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInternal;
    }
    return kOk;
}
