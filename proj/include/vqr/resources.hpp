#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vqr {

enum class ResourceScheme { OneHot, CompactWithMemory, CompactMemoryFree };
enum class GateModel { LocalDigital, GlobalAnalog, CompiledOptimized };

std::string_view to_string(ResourceScheme s);
std::string_view to_string(GateModel g);
ResourceScheme parse_resource_scheme(std::string_view s);
GateModel parse_gate_model(std::string_view s);

/// Counts with unit constant factors. `formulas` lists the expression used
/// for each count so callers can rescale.
struct ResourceEstimate {
    ResourceScheme scheme = ResourceScheme::OneHot;
    GateModel gate_model = GateModel::GlobalAnalog;
    std::uint64_t rows = 0;
    std::uint64_t features = 0;
    std::uint64_t memory_bits = 0;
    std::uint64_t qubit_count = 0;
    std::uint64_t state_prep_gates = 0;
    std::uint64_t regression_map_gates = 0;
    std::uint64_t total_gates = 0;
    /// total_gates * qubit_count.
    std::uint64_t shot_cost = 0;
    std::vector<std::pair<std::string, std::string>> formulas;
};

/// L rows, M features, N_P memory bits per cell (ignored without memory).
///
///   one-hot   Q = L(M+1) + 1, prep = L(M+1) chain gadgets,
///             map = L(M+1) local or M+1 global controlled phases
///   compact   Q = N_L + N_M + 1 (+ L(M+1) N_P with memory),
///             prep = K 2^N_K (memory-free) or K N_P 2^N_K (memory) with
///             K = L(M+1) multi-controlled phases; times N_K when each is
///             decomposed locally, K (or K N_P) when compiled;
///             map = 2^N_M (M+1), times N_M when decomposed locally
/// CompiledOptimized uses the global map count.
ResourceEstimate estimate(std::uint64_t rows, std::uint64_t features, std::uint64_t memory_bits,
                          ResourceScheme scheme, GateModel gate_model);

/// Shot-cost ratio of memory-free compact to one-hot under one gate model.
double shot_cost_ratio(std::uint64_t rows, std::uint64_t features, GateModel gate_model);

/// Classical reference cost L^2 M^3, listed next to the quantum counts.
double classical_cost(std::uint64_t rows, std::uint64_t features);

} // namespace vqr
