#include "vqr/resources.hpp"

#include "vqr/encoders.hpp"

#include <stdexcept>

namespace vqr {

std::string_view to_string(ResourceScheme s) {
    switch (s) {
    case ResourceScheme::OneHot:
        return "one-hot";
    case ResourceScheme::CompactWithMemory:
        return "compact-memory";
    case ResourceScheme::CompactMemoryFree:
        return "compact-memory-free";
    }
    return "unknown";
}

std::string_view to_string(GateModel g) {
    switch (g) {
    case GateModel::LocalDigital:
        return "local-digital";
    case GateModel::GlobalAnalog:
        return "global-analog";
    case GateModel::CompiledOptimized:
        return "compiled-optimized";
    }
    return "unknown";
}

ResourceScheme parse_resource_scheme(std::string_view s) {
    for (auto v : {ResourceScheme::OneHot, ResourceScheme::CompactWithMemory,
                   ResourceScheme::CompactMemoryFree}) {
        if (s == to_string(v)) {
            return v;
        }
    }
    throw std::invalid_argument("unknown encoding scheme '" + std::string(s) + "'");
}

GateModel parse_gate_model(std::string_view s) {
    for (auto v : {GateModel::LocalDigital, GateModel::GlobalAnalog, GateModel::CompiledOptimized}) {
        if (s == to_string(v)) {
            return v;
        }
    }
    throw std::invalid_argument("unknown gate model '" + std::string(s) + "'");
}

ResourceEstimate estimate(std::uint64_t rows, std::uint64_t features, std::uint64_t memory_bits,
                          ResourceScheme scheme, GateModel gate_model) {
    if (rows == 0 || features == 0) {
        throw std::invalid_argument("resource estimate needs positive L and M");
    }
    if (scheme == ResourceScheme::CompactWithMemory && memory_bits == 0) {
        throw std::invalid_argument("memory encoding needs N_P >= 1");
    }
    ResourceEstimate r;
    r.scheme = scheme;
    r.gate_model = gate_model;
    r.rows = rows;
    r.features = features;
    r.memory_bits = scheme == ResourceScheme::CompactWithMemory ? memory_bits : 0;

    const std::uint64_t cols = features + 1;
    const std::uint64_t cells = rows * cols;
    const bool local = gate_model == GateModel::LocalDigital;
    const bool compiled = gate_model == GateModel::CompiledOptimized;

    if (scheme == ResourceScheme::OneHot) {
        r.qubit_count = cells + 1;
        r.state_prep_gates = cells;
        r.regression_map_gates = local ? cells : cols;
        r.formulas = {{"qubits", "L(M+1) + 1"},
                      {"state_prep", "L(M+1)"},
                      {"regression_map", local ? "L(M+1)" : "M+1"}};
    } else {
        const std::uint64_t nl = ceil_log2(rows);
        const std::uint64_t nm = ceil_log2(cols);
        const std::uint64_t nk = nl + nm;
        const std::uint64_t keys = std::uint64_t{1} << nk;
        const bool memory = scheme == ResourceScheme::CompactWithMemory;
        const std::uint64_t per_cell = memory ? r.memory_bits : 1;
        r.qubit_count = nk + 1 + (memory ? cells * r.memory_bits : 0);
        if (compiled) {
            r.state_prep_gates = cells * per_cell;
        } else {
            r.state_prep_gates = cells * per_cell * keys * (local ? std::max<std::uint64_t>(nk, 1) : 1);
        }
        const std::uint64_t map = (std::uint64_t{1} << nm) * cols;
        r.regression_map_gates = local ? map * std::max<std::uint64_t>(nm, 1) : map;
        r.formulas = {{"qubits", memory ? "N_L + N_M + 1 + L(M+1) N_P" : "N_L + N_M + 1"}};
        if (compiled) {
            r.formulas.emplace_back("state_prep", memory ? "L(M+1) N_P" : "L(M+1)");
        } else if (local) {
            r.formulas.emplace_back("state_prep",
                                    memory ? "L(M+1) N_P 2^N_K N_K" : "L(M+1) 2^N_K N_K");
        } else {
            r.formulas.emplace_back("state_prep", memory ? "L(M+1) N_P 2^N_K" : "L(M+1) 2^N_K");
        }
        r.formulas.emplace_back("regression_map", local ? "2^N_M (M+1) N_M" : "2^N_M (M+1)");
    }
    r.total_gates = r.state_prep_gates + r.regression_map_gates;
    r.shot_cost = r.total_gates * r.qubit_count;
    r.formulas.emplace_back("total", "state_prep + regression_map");
    r.formulas.emplace_back("shot_cost", "total * qubits");
    return r;
}

double shot_cost_ratio(std::uint64_t rows, std::uint64_t features, GateModel gate_model) {
    const auto c = estimate(rows, features, 0, ResourceScheme::CompactMemoryFree, gate_model);
    const auto o = estimate(rows, features, 0, ResourceScheme::OneHot, gate_model);
    return static_cast<double>(c.shot_cost) / static_cast<double>(o.shot_cost);
}

double classical_cost(std::uint64_t rows, std::uint64_t features) {
    const double l = static_cast<double>(rows);
    const double m = static_cast<double>(features);
    return l * l * m * m * m;
}

} // namespace vqr
