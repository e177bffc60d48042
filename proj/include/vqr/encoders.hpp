#pragma once

#include "vqr/data.hpp"
#include "vqr/statevector.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace vqr {

enum class EncodingScheme { OneHot, CompactBinary };

std::string_view to_string(EncodingScheme s);

/// Qubit allocation for one encoded table.
///
/// OneHot: cell (l, m) lives on qubit j = m + l (M+1); the ancilla follows
/// the L (M+1) data qubits.
///
/// CompactBinary: the column index m occupies qubits [0, N_M), the row index
/// l occupies [N_M, N_M + N_L), so the data-register code of (l, m) is
/// m + l 2^N_M. The ancilla is qubit N_K = N_L + N_M and the optional memory
/// register follows it, N_P qubits per table cell in row-major cell order.
struct EncodingLayout {
    EncodingScheme scheme = EncodingScheme::CompactBinary;
    std::size_t rows = 0;      // L
    std::size_t cols = 0;      // M + 1
    std::size_t row_qubits = 0;  // N_L (compact only)
    std::size_t col_qubits = 0;  // N_M (compact only)
    std::size_t data_qubits = 0;
    QubitIndex ancilla;
    std::size_t memory_bits_per_cell = 0;  // N_P, 0 when no memory register
    std::size_t memory_qubits = 0;

    std::size_t num_qubits() const { return data_qubits + 1 + memory_qubits; }

    /// Data-register amplitude index of cell (l, m) with the ancilla at 0.
    std::uint64_t code_index(std::size_t l, std::size_t m) const;

    QubitIndex col_qubit(std::size_t bit) const { return QubitIndex{bit}; }
    QubitIndex row_qubit(std::size_t bit) const { return QubitIndex{col_qubits + bit}; }
    QubitIndex memory_qubit(std::size_t cell, std::size_t bit) const {
        return QubitIndex{data_qubits + 1 + cell * memory_bits_per_cell + bit};
    }

    /// Controls selecting column m of the compact column register.
    std::vector<PhaseControl> column_controls(std::size_t m) const;
    /// Controls selecting the compact key (l, m).
    std::vector<PhaseControl> key_controls(std::size_t l, std::size_t m) const;
};

std::size_t ceil_log2(std::size_t n);

EncodingLayout make_layout(EncodingScheme scheme, std::size_t rows, std::size_t cols,
                           std::size_t memory_bits_per_cell = 0);

enum class AmplitudeModel { Exact, SinOfDigitized };

/// A prepared data state with the ancilla in |0>. For post-selected
/// preparations the state is the unnormalized conditional state and
/// success_probability is its squared norm.
struct PreparedState {
    StateVector state;
    EncodingLayout layout;
    double success_probability = 1.0;
    AmplitudeModel amplitude_model = AmplitudeModel::Exact;
    /// (1 / 2^N_K) sum_k x~_k^2: the small-angle estimate of
    /// success_probability.
    double small_angle_success_estimate = 1.0;
    /// The same estimate under per-feature scaling where sum_k x~_k^2 = M + 1.
    double per_feature_scaling_estimate = 1.0;
};

/// Writes the table amplitudes directly at their code indices (no circuit).
PreparedState prepare_exact(const StandardizedTable& table, EncodingScheme scheme);

/// Angles for the one-hot chain: gadget j acts on qubits (j, j+1) and the
/// resulting amplitudes reproduce `amplitudes` (assumed unit norm).
std::vector<double> one_hot_chain_angles(const std::vector<double>& amplitudes);

/// Starting from |1_0>, applies controlled-Ry(theta_j) then CNOT along the
/// qubit chain to build the one-hot data state.
PreparedState prepare_one_hot_chain(const StandardizedTable& table);

/// Compact preparation through a simulated quantum memory register: ancilla
/// |+>, uniform key superposition, memory basis state, key-selected phases
/// read from the memory bits, then ancilla projection onto |->. Amplitudes
/// are proportional to sin(x~_k). Qubit count grows with K N_P, so this is
/// intended for small tables.
PreparedState prepare_compact_with_memory(const DigitizedTable& digits);

/// Same conditional state with the digitized phases applied as classical
/// scalars; no memory register.
PreparedState memory_free_compact(const DigitizedTable& digits);

/// Compact preparation with phases x_k taken from the standardized table
/// without digitization.
PreparedState memory_free_compact(const StandardizedTable& table);

/// Total preparation attempts needed to collect `accepted` post-selected
/// successes, each attempt succeeding with `success_probability`: a sum of
/// geometric draws from a stream seeded by `seed`.
std::uint64_t sample_preparation_attempts(std::uint64_t accepted, double success_probability,
                                          std::uint64_t seed);

/// Drops the memory register, which must be in a single basis state (it is
/// never entangled with the processing register). Throws otherwise.
PreparedState discard_memory_register(const PreparedState& prepared);

} // namespace vqr
