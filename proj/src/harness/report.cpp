#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "decompleak/error.hpp"
#include "decompleak/experiment.hpp"

namespace decompleak {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':' || c == '/' || c == ' ') c = '-';
    return s;
}

class Writer {
public:
    explicit Writer(std::filesystem::path root) : root_(std::move(root)) {}

    void write(const std::filesystem::path& rel, const std::string& content) {
        const auto path = root_ / rel;
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out << content;
        if (!out) throw IoError("failed writing '" + path.string() + "'");
        written_.push_back(path);
        relative_.push_back(rel.generic_string());
    }

    const std::vector<std::filesystem::path>& written() const { return written_; }
    const std::vector<std::string>& relative() const { return relative_; }

private:
    std::filesystem::path root_;
    std::vector<std::filesystem::path> written_;
    std::vector<std::string> relative_;
};

std::string history_csv(const TrainingHistory& h) {
    std::ostringstream o;
    o << "epoch,train_loss,val_loss,test_loss,best\n";
    for (std::size_t e = 0; e < h.epochs(); ++e) {
        o << e << "," << format_number(h.train_loss[e]) << "," << format_number(h.val_loss[e]) << ","
          << (e < h.test_loss.size() ? format_number(h.test_loss[e]) : "NA") << ","
          << (e == h.best_epoch ? 1 : 0) << "\n";
    }
    return o.str();
}

} // namespace

void write_components_csv(std::ostream& out, const TimeSeries& series, const ComponentSet& set) {
    out << "t,raw";
    for (const auto& l : set.labels) out << "," << l;
    out << "\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        out << t << "," << format_number(series[t]);
        for (const auto& c : set.components) out << "," << format_number(c[t]);
        out << "\n";
    }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << "frequency,power\n";
    for (std::size_t k = 0; k < spectrum.power.size(); ++k)
        out << format_number(spectrum.frequencies[k]) << "," << format_number(spectrum.power[k]) << "\n";
}

void write_windows_csv(std::ostream& out, const WindowSet& windows) {
    out << "step,row";
    for (std::size_t k = 0; k < windows.channels; ++k)
        out << "," << (k < windows.labels.size() ? windows.labels[k] : "c" + std::to_string(k));
    out << ",target\n";
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto row = windows.row(i);
        for (std::size_t r = 0; r < windows.window; ++r) {
            out << i << "," << r;
            for (std::size_t k = 0; k < windows.channels; ++k) out << "," << format_number(row[r * windows.channels + k]);
            out << "," << format_number(windows.targets[i]) << "\n";
        }
    }
}

std::vector<std::filesystem::path> emit_reports(const ExperimentResult& result,
                                                const std::filesystem::path& out_dir) {
    if (result.rows.empty()) throw InvalidInputError("no result rows to report");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw IoError("cannot create output directory '" + out_dir.string() + "'");

    Writer w(out_dir);

    std::ostringstream results;
    results << "dataset,method,mode,model,seed,status,n,mse,mae,mape,r2,error\n";
    for (const auto& r : result.rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        results << r.dataset << "," << r.method << "," << r.mode << "," << r.model << "," << r.seed << ","
                << (r.ok ? "ok" : "failed") << "," << r.metrics.n << ",";
        if (r.ok)
            results << format_number(r.metrics.mse) << "," << format_number(r.metrics.mae) << ","
                    << format_number(r.metrics.mape) << "," << opt(r.metrics.r2);
        else
            results << "NA,NA,NA,NA";
        results << "," << err << "\n";
    }
    w.write("results.csv", results.str());

    std::ostringstream agg;
    agg << "dataset,method,mode,model,mse_mean,mse_std,mae_mean,mae_std,mape_mean,mape_std,r2_mean,r2_std,"
           "p_vs_causal\n";
    for (const auto& a : result.aggregate) {
        agg << a.dataset << "," << a.method << "," << a.mode << "," << a.model << ","
            << format_number(a.mse_mean) << "," << format_number(a.mse_std) << ","
            << format_number(a.mae_mean) << "," << format_number(a.mae_std) << ","
            << format_number(a.mape_mean) << "," << format_number(a.mape_std) << "," << opt(a.r2_mean) << ","
            << opt(a.r2_std) << "," << opt(a.p_vs_causal) << "\n";
    }
    w.write("aggregate.csv", agg.str());

    for (const auto& r : result.rows) {
        const std::string stem = sanitize(r.method + "__" + r.mode + "__" + r.model + "__seed" + std::to_string(r.seed));
        for (const auto& [label, h] : r.histories) {
            const std::string suffix = label == "model" ? "" : "__" + sanitize(label);
            w.write(std::filesystem::path("history") / (stem + suffix + ".csv"), history_csv(h));
        }
        for (const auto& [label, doc] : r.model_documents) {
            const std::string suffix = label == "model" ? "" : "__" + sanitize(label);
            w.write(std::filesystem::path("models") / (stem + suffix + ".json"), doc + "\n");
        }
    }

    std::ostringstream dominant;
    dominant << "method,label,dominant_frequency,power,low_power\n";
    for (const auto& s : result.spectra) {
        std::ostringstream o;
        write_spectrum_csv(o, s.spectrum);
        w.write(std::filesystem::path("spectra") / (sanitize(s.method + "__" + s.label) + ".csv"), o.str());
        dominant << s.method << "," << s.label << "," << format_number(s.dominant.frequency) << ","
                 << format_number(s.dominant.power) << "," << (s.dominant.low_power ? 1 : 0) << "\n";
    }
    w.write(std::filesystem::path("spectra") / "dominant.csv", dominant.str());

    nlohmann::ordered_json manifest;
    manifest["tool"] = "decompleak";
    manifest["version"] = DECOMPLEAK_VERSION;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(result.config.hash()));
    manifest["config_hash"] = hash;
    manifest["config"] = result.config.canonical();
    manifest["rows"] = result.rows.size();
    manifest["failed_rows"] = std::count_if(result.rows.begin(), result.rows.end(),
                                            [](const ResultRow& r) { return !r.ok; });
    auto files = w.relative();
    std::sort(files.begin(), files.end());
    manifest["files"] = files;
    w.write("manifest.json", manifest.dump(2) + "\n");

    std::ostringstream timings;
    timings << "method,mode,model,seed,wall_seconds\n";
    for (const auto& r : result.rows)
        timings << r.method << "," << r.mode << "," << r.model << "," << r.seed << ","
                << format_number(r.wall_seconds) << "\n";
    w.write("timings.csv", timings.str());

    return w.written();
}

} // namespace decompleak
