#include "vqr/encoders.hpp"

#include "vqr/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace vqr {

std::string_view to_string(EncodingScheme s) {
    return s == EncodingScheme::OneHot ? "one-hot" : "compact";
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) {
        ++bits;
    }
    return bits;
}

std::uint64_t EncodingLayout::code_index(std::size_t l, std::size_t m) const {
    if (scheme == EncodingScheme::OneHot) {
        return std::uint64_t{1} << (m + l * cols);
    }
    return m + (std::uint64_t{l} << col_qubits);
}

std::vector<PhaseControl> EncodingLayout::column_controls(std::size_t m) const {
    std::vector<PhaseControl> c;
    for (std::size_t b = 0; b < col_qubits; ++b) {
        c.push_back({col_qubit(b), static_cast<int>((m >> b) & 1U)});
    }
    return c;
}

std::vector<PhaseControl> EncodingLayout::key_controls(std::size_t l, std::size_t m) const {
    auto c = column_controls(m);
    for (std::size_t b = 0; b < row_qubits; ++b) {
        c.push_back({row_qubit(b), static_cast<int>((l >> b) & 1U)});
    }
    return c;
}

EncodingLayout make_layout(EncodingScheme scheme, std::size_t rows, std::size_t cols,
                           std::size_t memory_bits_per_cell) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("layout needs a non-empty table");
    }
    EncodingLayout lay;
    lay.scheme = scheme;
    lay.rows = rows;
    lay.cols = cols;
    if (scheme == EncodingScheme::OneHot) {
        if (memory_bits_per_cell != 0) {
            throw std::invalid_argument("one-hot layout has no memory register");
        }
        lay.data_qubits = rows * cols;
    } else {
        lay.row_qubits = ceil_log2(rows);
        lay.col_qubits = ceil_log2(cols);
        lay.data_qubits = lay.row_qubits + lay.col_qubits;
        lay.memory_bits_per_cell = memory_bits_per_cell;
        lay.memory_qubits = rows * cols * memory_bits_per_cell;
    }
    lay.ancilla = QubitIndex{lay.data_qubits};
    return lay;
}

PreparedState prepare_exact(const StandardizedTable& table, EncodingScheme scheme) {
    PreparedState out;
    out.layout = make_layout(scheme, table.rows(), static_cast<std::size_t>(table.values.cols()));
    out.state = StateVector(out.layout.num_qubits());
    out.state[0] = 0.0;
    for (std::size_t l = 0; l < out.layout.rows; ++l) {
        for (std::size_t m = 0; m < out.layout.cols; ++m) {
            out.state[out.layout.code_index(l, m)] = table.values(Eigen::Index(l), Eigen::Index(m));
        }
    }
    return out;
}

std::vector<double> one_hot_chain_angles(const std::vector<double>& amplitudes) {
    const std::size_t n = amplitudes.size();
    if (n < 2) {
        throw std::invalid_argument("one-hot chain needs at least two amplitudes");
    }
    std::vector<double> tail(n + 1, 0.0);
    for (std::size_t j = n; j-- > 0;) {
        tail[j] = tail[j + 1] + amplitudes[j] * amplitudes[j];
    }
    std::vector<double> theta(n - 1);
    for (std::size_t j = 0; j + 2 < n; ++j) {
        // atan2(0, x) is 0 or pi: a zero tail keeps the sign of x_j and
        // leaves the rest of the chain empty.
        theta[j] = std::atan2(std::sqrt(tail[j + 1]), amplitudes[j]);
    }
    // The last gadget splits the remaining weight with both signs intact.
    theta[n - 2] = std::atan2(amplitudes[n - 1], amplitudes[n - 2]);
    return theta;
}

PreparedState prepare_one_hot_chain(const StandardizedTable& table) {
    PreparedState out;
    out.layout = make_layout(EncodingScheme::OneHot, table.rows(),
                             static_cast<std::size_t>(table.values.cols()));
    const std::size_t n = out.layout.data_qubits;
    std::vector<double> amps(n);
    for (std::size_t l = 0; l < out.layout.rows; ++l) {
        for (std::size_t m = 0; m < out.layout.cols; ++m) {
            amps[m + l * out.layout.cols] = table.values(Eigen::Index(l), Eigen::Index(m));
        }
    }
    const auto theta = one_hot_chain_angles(amps);
    StateVector s = StateVector::basis_state(out.layout.num_qubits(), 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        s = apply_controlled_ry(std::move(s), QubitIndex{j}, QubitIndex{j + 1}, theta[j]);
        s = apply_cnot(std::move(s), QubitIndex{j + 1}, QubitIndex{j});
    }
    out.state = std::move(s);
    return out;
}

namespace {

// Applies the conditional-state bookkeeping shared by both compact routes:
// project the ancilla onto |->, rotate it back to |0>, and strip the global
// factor -i so the amplitudes read sin(x~_k) / sqrt(2^N_K).
PreparedState finish_compact(StateVector state, const EncodingLayout& layout,
                             const std::vector<double>& x_tilde) {
    auto proj = project_qubit(std::move(state), layout.ancilla, ProjectionBasis::XMinus);
    StateVector s = apply_hadamard(std::move(proj.state), layout.ancilla);
    s = apply_x(std::move(s), layout.ancilla);
    for (auto& a : s.amplitudes()) {
        a *= Complex{0.0, 1.0};
    }

    PreparedState out;
    out.layout = layout;
    out.state = std::move(s);
    out.success_probability = proj.probability;
    out.amplitude_model = AmplitudeModel::SinOfDigitized;
    double sum_sq = 0.0;
    for (double x : x_tilde) {
        sum_sq += x * x;
    }
    const double keys = std::ldexp(1.0, static_cast<int>(layout.data_qubits));
    out.small_angle_success_estimate = sum_sq / keys;
    out.per_feature_scaling_estimate = static_cast<double>(layout.cols) / keys;
    return out;
}

StateVector compact_initial_state(const EncodingLayout& layout) {
    StateVector s(layout.num_qubits());
    s = apply_hadamard(std::move(s), layout.ancilla);
    for (std::size_t q = 0; q < layout.data_qubits; ++q) {
        s = apply_hadamard(std::move(s), QubitIndex{q});
    }
    return s;
}

PreparedState memory_free_from_phases(const std::vector<double>& x, std::size_t rows,
                                      std::size_t cols) {
    const auto layout = make_layout(EncodingScheme::CompactBinary, rows, cols);
    StateVector s = compact_initial_state(layout);
    for (std::size_t l = 0; l < rows; ++l) {
        for (std::size_t m = 0; m < cols; ++m) {
            DiagonalPhaseSpec spec{layout.key_controls(l, m), -x[l * cols + m], layout.ancilla};
            s = apply_controlled_diagonal_phase(std::move(s), spec);
        }
    }
    return finish_compact(std::move(s), layout, x);
}

} // namespace

PreparedState prepare_compact_with_memory(const DigitizedTable& digits) {
    const auto layout =
        make_layout(EncodingScheme::CompactBinary, digits.rows, digits.cols, digits.n_bits);
    StateVector s = compact_initial_state(layout);
    for (std::size_t k = 0; k < digits.bits.size(); ++k) {
        for (std::size_t j = 0; j < digits.n_bits; ++j) {
            if (digits.bits[k][j]) {
                s = apply_x(std::move(s), layout.memory_qubit(k, j));
            }
        }
    }
    // exp(-i Z_A (x) |k><k| (x) sum_j dtheta_j Z_{k,j}) factorizes into one
    // diagonal phase per (k, j, memory bit value).
    for (std::size_t l = 0; l < digits.rows; ++l) {
        for (std::size_t m = 0; m < digits.cols; ++m) {
            const std::size_t k = l * digits.cols + m;
            for (std::size_t j = 0; j < digits.n_bits; ++j) {
                for (int bit_value : {0, 1}) {
                    auto controls = layout.key_controls(l, m);
                    controls.push_back({layout.memory_qubit(k, j), bit_value});
                    const double angle =
                        bit_value == 0 ? -digits.delta_thetas[j] : digits.delta_thetas[j];
                    s = apply_controlled_diagonal_phase(std::move(s),
                                                        {std::move(controls), angle, layout.ancilla});
                }
            }
        }
    }
    return finish_compact(std::move(s), layout, digits.x_tilde);
}

PreparedState memory_free_compact(const DigitizedTable& digits) {
    return memory_free_from_phases(digits.x_tilde, digits.rows, digits.cols);
}

PreparedState memory_free_compact(const StandardizedTable& table) {
    const std::size_t rows = table.rows();
    const auto cols = static_cast<std::size_t>(table.values.cols());
    std::vector<double> x(rows * cols);
    for (std::size_t l = 0; l < rows; ++l) {
        for (std::size_t m = 0; m < cols; ++m) {
            x[l * cols + m] = table.values(Eigen::Index(l), Eigen::Index(m));
        }
    }
    return memory_free_from_phases(x, rows, cols);
}

PreparedState discard_memory_register(const PreparedState& prepared) {
    const auto& lay = prepared.layout;
    if (lay.memory_qubits == 0) {
        return prepared;
    }
    const std::size_t low_qubits = lay.data_qubits + 1;
    const std::uint64_t low_mask = (std::uint64_t{1} << low_qubits) - 1;
    std::vector<Complex> reduced(std::size_t{1} << low_qubits, Complex{0.0, 0.0});
    bool have_pattern = false;
    std::uint64_t pattern = 0;
    const auto amps = prepared.state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (amps[i] == Complex{0.0, 0.0}) {
            continue;
        }
        const std::uint64_t mem = i >> low_qubits;
        if (!have_pattern) {
            pattern = mem;
            have_pattern = true;
        } else if (mem != pattern) {
            throw std::logic_error("memory register is not in a single basis state");
        }
        reduced[i & low_mask] = amps[i];
    }
    PreparedState out = prepared;
    out.state = StateVector(std::move(reduced));
    out.layout = make_layout(lay.scheme, lay.rows, lay.cols);
    return out;
}

std::uint64_t sample_preparation_attempts(std::uint64_t accepted, double success_probability,
                                          std::uint64_t seed) {
    if (!(success_probability > 0.0) || success_probability > 1.0) {
        throw std::domain_error("success probability must lie in (0, 1]");
    }
    if (success_probability == 1.0) {
        return accepted;
    }
    Rng rng(seed);
    const double log_fail = std::log1p(-success_probability);
    std::uint64_t total = accepted;
    for (std::uint64_t s = 0; s < accepted; ++s) {
        total += static_cast<std::uint64_t>(std::floor(std::log(1.0 - rng.uniform01()) / log_fail));
    }
    return total;
}

} // namespace vqr
