#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "decompleak/series.hpp"

namespace decompleak {

/// Reads one numeric column from a CSV file with a header row. `column` may be a header
/// name or a zero-based index; empty selects the first column. Blank, non-numeric and
/// non-finite cells are rejected with the offending row number.
TimeSeries load_csv(const std::filesystem::path& path, const std::string& column = {});

/// Reference statistics for the public datasets the harness was designed around.
struct DatasetRegistryEntry {
    std::string name;
    std::string url;
    std::string resolution;
    std::size_t length = 0;
    double mean = 0.0;
    double std = 0.0;
};

const std::vector<DatasetRegistryEntry>& dataset_registry();
std::optional<DatasetRegistryEntry> find_dataset(const std::string& name);

struct RegistryCheck {
    bool length_ok = false;
    bool mean_ok = false;
    bool std_ok = false;
    double mean = 0.0;
    double std = 0.0;
    bool ok() const noexcept { return length_ok && mean_ok && std_ok; }
};

/// Compares a loaded series with its registry entry; tolerances are relative to the entry.
RegistryCheck verify_against_registry(const TimeSeries& series, const DatasetRegistryEntry& entry,
                                      double mean_tol = 0.01, double std_tol = 0.05);

} // namespace decompleak
