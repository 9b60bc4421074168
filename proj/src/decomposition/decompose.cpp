#include <algorithm>
#include <cctype>
#include <string>

#include "decompleak/decomposition.hpp"
#include "decompleak/error.hpp"

namespace decompleak {

std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::EMD: return "emd";
    case Method::DWT: return "dwt";
    case Method::SSA: return "ssa";
    case Method::Identity: return "identity";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "emd") return Method::EMD;
    if (lower == "dwt") return Method::DWT;
    if (lower == "ssa") return Method::SSA;
    if (lower == "identity" || lower == "none") return Method::Identity;
    throw InvalidConfigError("unknown decomposition method '" + std::string(name) + "'");
}

std::vector<double> ComponentSet::sum() const {
    std::vector<double> total(length(), 0.0);
    for (const auto& c : components)
        for (std::size_t t = 0; t < total.size(); ++t) total[t] += c[t];
    return total;
}

ComponentSet identity_decompose(const TimeSeries& series) {
    ComponentSet out;
    out.method = Method::Identity;
    out.components.push_back(series.values());
    out.labels.push_back("Id");
    return out;
}

ComponentSet decompose(Method method, const TimeSeries& series, const DecompositionConfig& cfg) {
    switch (method) {
    case Method::EMD: return emd_decompose(series, cfg.emd);
    case Method::DWT: return dwt_decompose(series, cfg.dwt);
    case Method::SSA: return ssa_decompose(series, cfg.ssa);
    case Method::Identity: return identity_decompose(series);
    }
    throw InvalidConfigError("unknown decomposition method");
}

std::size_t min_length(Method method, const DecompositionConfig& cfg) noexcept {
    switch (method) {
    case Method::EMD: return 4;
    case Method::DWT: return cfg.dwt.lowpass.size();
    case Method::SSA: return cfg.ssa.window == 0 ? 3 : cfg.ssa.window + 1;
    case Method::Identity: return 1;
    }
    return 1;
}

} // namespace decompleak
