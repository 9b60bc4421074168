#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "decompleak/dataset.hpp"
#include "decompleak/error.hpp"
#include "decompleak/metrics.hpp"

namespace decompleak {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

TimeSeries load_csv(const std::filesystem::path& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw InvalidInputError("'" + path.string() + "' is empty");
    const auto header = split_row(line);

    std::size_t col = 0;
    if (!column.empty()) {
        bool found = false;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == column) {
                col = i;
                found = true;
                break;
            }
        }
        if (!found) {
            std::size_t idx = 0;
            const auto [p, ec] = std::from_chars(column.data(), column.data() + column.size(), idx);
            if (ec != std::errc{} || p != column.data() + column.size() || idx >= header.size())
                throw InvalidConfigError("column '" + column + "' not found in header");
            col = idx;
        }
    }

    std::vector<double> values;
    std::size_t row = 1;
    std::size_t blank_row = 0; // trailing blank lines are tolerated, interior ones are not
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            if (blank_row == 0) blank_row = row;
            continue;
        }
        if (blank_row != 0) throw InvalidInputError("row " + std::to_string(blank_row) + ": blank row");
        const auto cells = split_row(line);
        if (col >= cells.size() || cells[col].empty())
            throw InvalidInputError("row " + std::to_string(row) + ": blank cell");
        const std::string& cell = cells[col];
        double v = 0.0;
        const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || p != cell.data() + cell.size())
            throw InvalidInputError("row " + std::to_string(row) + ": non-numeric cell '" + cell + "'");
        if (!std::isfinite(v))
            throw InvalidInputError("row " + std::to_string(row) + ": non-finite value '" + cell + "'");
        values.push_back(v);
    }
    if (values.empty()) throw InvalidInputError("column '" + header[col] + "' has no values");
    return TimeSeries(std::move(values), header[col]);
}

const std::vector<DatasetRegistryEntry>& dataset_registry() {
    static const std::vector<DatasetRegistryEntry> entries = {
        {"Hs", "http://cdip.ucsd.edu/offline/wavecdf/wncbrowse.php?ARCHIVE/150p1/150p1_historic",
         "30 min", 70128, 0.945, 0.414},
        {"WSPD", "https://www.ndbc.noaa.gov/", "1 h", 32158, 5.58, 3.18},
        {"U", "https://www.kaggle.com/datasets/l3l1ff/electrical-grid-power-mw-20152021", "15 min",
         228526, 74.2, 19.5},
        {"GHI", "https://solargis.com/products/evaluate/useful-resources", "1 day", 9952, 5.14, 2.25},
        {"P", "http://maps.nrel.gov/wind_prospector", "15 min", 140160, 100470.0, 555.0},
        {"T", "http://maps.nrel.gov/wind_prospector", "15 min", 140160, 13.1, 4.12},
    };
    return entries;
}

std::optional<DatasetRegistryEntry> find_dataset(const std::string& name) {
    for (const auto& e : dataset_registry())
        if (e.name == name) return e;
    return std::nullopt;
}

RegistryCheck verify_against_registry(const TimeSeries& series, const DatasetRegistryEntry& entry,
                                      double mean_tol, double std_tol) {
    RegistryCheck c;
    c.mean = mean(series.view());
    c.std = sample_std(series.view());
    c.length_ok = series.size() == entry.length;
    c.mean_ok = std::abs(c.mean - entry.mean) <= mean_tol * std::abs(entry.mean);
    c.std_ok = std::abs(c.std - entry.std) <= std_tol * std::abs(entry.std);
    return c;
}

} // namespace decompleak
