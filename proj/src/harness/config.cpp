#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "decompleak/dataset.hpp"
#include "decompleak/error.hpp"
#include "decompleak/experiment.hpp"

namespace decompleak {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw InvalidConfigError("setting '" + key + "': cannot parse '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvalidConfigError("setting '" + key + "': expected true/false, got '" + v + "'");
}

ModeKind parse_mode(const std::string& s) {
    if (s == "raw") return ModeKind::RawOnly;
    if (s == "leaked") return ModeKind::Leaked;
    if (s == "causal") return ModeKind::Causal;
    throw InvalidConfigError("unknown grid mode '" + s + "' (expected raw, leaked or causal)");
}

std::string mode_key(ModeKind m) {
    switch (m) {
    case ModeKind::RawOnly: return "raw";
    case ModeKind::Leaked: return "leaked";
    case ModeKind::Causal: return "causal";
    default: return "other";
    }
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += fmt(items[i]);
    }
    return out;
}

} // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    auto size = [&] { return parse_number<std::size_t>(key, v); };
    auto real = [&] { return parse_number<double>(key, v); };

    if (key == "dataset.name") cfg.dataset_name = v;
    else if (key == "dataset.csv") cfg.csv_path = v.empty() ? std::nullopt : std::optional<std::string>(v);
    else if (key == "dataset.column") cfg.csv_column = v;
    else if (key == "synthetic.length") cfg.synthetic.length = size();
    else if (key == "synthetic.tones") {
        cfg.synthetic.tones.clear();
        for (const auto& item : split_list(v)) {
            const auto parts = split_list(item, ':');
            if (parts.size() < 2 || parts.size() > 3)
                throw InvalidConfigError("synthetic.tones entries are amplitude:frequency[:phase]");
            Tone t;
            t.amplitude = parse_number<double>(key, parts[0]);
            t.frequency = parse_number<double>(key, parts[1]);
            t.phase = parts.size() == 3 ? parse_number<double>(key, parts[2]) : 0.0;
            cfg.synthetic.tones.push_back(t);
        }
    } else if (key == "synthetic.noise") {
        if (v == "white") cfg.synthetic.noise = NoiseKind::White;
        else if (v == "ar1") cfg.synthetic.noise = NoiseKind::AR1;
        else throw InvalidConfigError("synthetic.noise must be white or ar1");
    } else if (key == "synthetic.sigma") cfg.synthetic.sigma = real();
    else if (key == "synthetic.ar") cfg.synthetic.ar_coef = real();
    else if (key == "synthetic.seed") cfg.synthetic.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "methods") {
        cfg.methods.clear();
        for (const auto& m : split_list(v)) cfg.methods.push_back(parse_method(m));
    } else if (key == "modes") {
        cfg.modes.clear();
        for (const auto& m : split_list(v)) cfg.modes.push_back(parse_mode(m));
    } else if (key == "models") {
        cfg.models.clear();
        for (const auto& m : split_list(v)) cfg.models.push_back(parse_model_kind(m));
    } else if (key == "window") cfg.window = size();
    else if (key == "train_fraction") cfg.train_fraction = real();
    else if (key == "seeds") cfg.n_seeds = size();
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "workers") cfg.workers = size();
    else if (key == "out") cfg.out_dir = v;
    else if (key == "train.max_epochs") cfg.train.max_epochs = size();
    else if (key == "train.batch_size") cfg.train.batch_size = size();
    else if (key == "train.learning_rate") cfg.train.learning_rate = real();
    else if (key == "train.optimizer") cfg.train.optimizer = parse_optimizer(v);
    else if (key == "train.patience") cfg.train.patience = size();
    else if (key == "train.validation_fraction") cfg.train.validation_fraction = real();
    else if (key == "train.loss") cfg.train.loss = parse_loss(v);
    else if (key == "train.hidden") {
        cfg.train.hidden.clear();
        for (const auto& h : split_list(v)) cfg.train.hidden.push_back(parse_number<std::size_t>(key, h));
    } else if (key == "train.ridge_lambda") cfg.train.ridge_lambda = real();
    else if (key == "train.chronological_validation") cfg.train.chronological_validation = parse_bool(key, v);
    else if (key == "emd.max_imfs") cfg.decomposition.emd.max_imfs = size();
    else if (key == "emd.sd_threshold") cfg.decomposition.emd.sift_sd_threshold = real();
    else if (key == "emd.max_sift") cfg.decomposition.emd.max_sift_iterations = size();
    else if (key == "ssa.window") cfg.decomposition.ssa.window = size();
    else if (key == "ssa.components") cfg.decomposition.ssa.n_components = size();
    else if (key == "causal.stride") cfg.causal.refresh_stride = size();
    else if (key == "causal.training") cfg.causal_training = parse_bool(key, v);
    else if (key == "report.save_models") cfg.save_models = parse_bool(key, v);
    else if (key == "report.test_loss") cfg.record_test_loss = parse_bool(key, v);
    else throw InvalidConfigError("unknown setting '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidConfigError("line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    base.validate();
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    return parse_config(in, std::move(base));
}

void ExperimentConfig::validate() const {
    if (methods.empty()) throw InvalidConfigError("at least one decomposition method is required");
    if (modes.empty()) throw InvalidConfigError("at least one pipeline mode is required");
    if (models.empty()) throw InvalidConfigError("at least one model is required");
    if (n_seeds < 1) throw InvalidConfigError("seeds must be >= 1");
    if (window < 1) throw InvalidConfigError("window must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidConfigError("train_fraction must lie in (0, 1)");
    if (causal.refresh_stride < 1) throw InvalidConfigError("causal.stride must be >= 1");
    if (workers < 1) throw InvalidConfigError("workers must be >= 1");
    train.validate();
    if (!csv_path) synthetic.validate();
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream o;
    auto num = [](double v) { return format_number(v); };
    o << "dataset.name = " << dataset_name << "\n";
    o << "dataset.csv = " << csv_path.value_or("") << "\n";
    o << "dataset.column = " << csv_column << "\n";
    if (!csv_path) {
        o << "synthetic.length = " << synthetic.length << "\n";
        o << "synthetic.tones = " << join(synthetic.tones, [&](const Tone& t) {
            return num(t.amplitude) + ":" + num(t.frequency) + ":" + num(t.phase);
        }) << "\n";
        o << "synthetic.noise = " << (synthetic.noise == NoiseKind::AR1 ? "ar1" : "white") << "\n";
        o << "synthetic.sigma = " << num(synthetic.sigma) << "\n";
        o << "synthetic.ar = " << num(synthetic.ar_coef) << "\n";
        o << "synthetic.seed = " << synthetic.seed << "\n";
    }
    o << "methods = " << join(methods, [](Method m) { return std::string(to_string(m)); }) << "\n";
    o << "modes = " << join(modes, mode_key) << "\n";
    o << "models = " << join(models, [](ModelKind m) { return std::string(to_string(m)); }) << "\n";
    o << "window = " << window << "\n";
    o << "train_fraction = " << num(train_fraction) << "\n";
    o << "seeds = " << n_seeds << "\n";
    o << "seed = " << seed << "\n";
    o << "train.max_epochs = " << train.max_epochs << "\n";
    o << "train.batch_size = " << train.batch_size << "\n";
    o << "train.learning_rate = " << num(train.learning_rate) << "\n";
    o << "train.optimizer = " << to_string(train.optimizer) << "\n";
    o << "train.patience = " << train.patience << "\n";
    o << "train.validation_fraction = " << num(train.validation_fraction) << "\n";
    o << "train.loss = " << to_string(train.loss) << "\n";
    o << "train.hidden = " << join(train.hidden, [](std::size_t h) { return std::to_string(h); }) << "\n";
    o << "train.ridge_lambda = " << num(train.ridge_lambda) << "\n";
    o << "train.chronological_validation = " << (train.chronological_validation ? "true" : "false") << "\n";
    o << "emd.max_imfs = " << decomposition.emd.max_imfs << "\n";
    o << "emd.sd_threshold = " << num(decomposition.emd.sift_sd_threshold) << "\n";
    o << "emd.max_sift = " << decomposition.emd.max_sift_iterations << "\n";
    o << "ssa.window = " << decomposition.ssa.window << "\n";
    o << "ssa.components = " << decomposition.ssa.n_components << "\n";
    o << "causal.stride = " << causal.refresh_stride << "\n";
    o << "causal.training = " << (causal_training ? "true" : "false") << "\n";
    o << "report.save_models = " << (save_models ? "true" : "false") << "\n";
    o << "report.test_loss = " << (record_test_loss ? "true" : "false") << "\n";
    return o.str();
}

std::uint64_t ExperimentConfig::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

TimeSeries load_series(const ExperimentConfig& cfg) {
    if (cfg.csv_path) {
        const TimeSeries loaded = load_csv(*cfg.csv_path, cfg.csv_column);
        return TimeSeries(loaded.values(), cfg.dataset_name);
    }
    const TimeSeries s = gen_synthetic(cfg.synthetic);
    return TimeSeries(s.values(), cfg.dataset_name);
}

} // namespace decompleak
