#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vqr {

using Complex = std::complex<double>;

/// Bit position of a qubit inside an amplitude index.
///
/// Qubit q corresponds to bit q of the index (little-endian): the basis
/// state with only qubit q excited has index 1 << q. Ket strings produced by
/// to_ket() list qubit 0 first, so "|1000>" means qubit 0 is set.
struct QubitIndex {
    std::size_t index = 0;

    constexpr QubitIndex() = default;
    constexpr explicit QubitIndex(std::size_t i) : index(i) {}
    constexpr auto operator<=>(const QubitIndex&) const = default;
};

/// Dense amplitude vector over num_qubits qubits. May be subnormalized after
/// a projection; norm_squared() reports the current squared norm.
class StateVector {
public:
    StateVector() = default;

    /// |0...0> on num_qubits qubits.
    explicit StateVector(std::size_t num_qubits);

    /// Takes ownership of amplitudes; the length must be a power of two.
    explicit StateVector(std::vector<Complex> amplitudes);

    static StateVector basis_state(std::size_t num_qubits, std::uint64_t index);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amps_.size(); }

    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }

    const Complex& operator[](std::uint64_t i) const { return amps_[i]; }
    Complex& operator[](std::uint64_t i) { return amps_[i]; }

    double norm_squared() const;

    void check_qubit(QubitIndex q) const;

private:
    std::size_t num_qubits_ = 0;
    std::vector<Complex> amps_{Complex{1.0, 0.0}};
};

/// Ket label with qubit 0 leftmost, e.g. to_ket(1, 4) == "|1000>".
std::string to_ket(std::uint64_t index, std::size_t num_qubits);

/// Ry(theta) = [[cos t, -sin t], [sin t, cos t]] on the target. The angle is
/// used as-is (no half angle) so that the one-hot gadget produces
/// cos t|10> + sin t|01>.
StateVector apply_ry(StateVector state, QubitIndex target, double theta);

/// Ry(theta) on target, applied only where control is |1>.
StateVector apply_controlled_ry(StateVector state, QubitIndex control, QubitIndex target,
                                double theta);

StateVector apply_hadamard(StateVector state, QubitIndex target);

StateVector apply_x(StateVector state, QubitIndex target);

/// S^dagger = diag(1, -i).
StateVector apply_sdg(StateVector state, QubitIndex target);

StateVector apply_cnot(StateVector state, QubitIndex control, QubitIndex target);

struct PhaseControl {
    QubitIndex qubit;
    int required_bit = 1;
};

/// Diagonal phase exp(i * (-1)^b * angle) on every basis state whose bits
/// match all controls, where b is the bit of sign_qubit (0 if absent).
struct DiagonalPhaseSpec {
    std::vector<PhaseControl> controls;
    double angle = 0.0;
    std::optional<QubitIndex> sign_qubit;
};

StateVector apply_controlled_diagonal_phase(StateVector state, const DiagonalPhaseSpec& spec);

enum class ProjectionBasis { Z0, Z1, XPlus, XMinus };

struct Projection {
    StateVector state;  // unnormalized
    double probability = 0.0;
};

/// Projects target onto the given outcome without renormalizing. X-basis
/// outcomes are H-conjugated Z projections, so the target is left in |+> or
/// |-> respectively.
Projection project_qubit(StateVector state, QubitIndex target, ProjectionBasis basis);

/// Rescales to unit norm. Throws on a zero state.
StateVector renormalized(StateVector state);

/// Precomputed cumulative distribution |a_i|^2 / norm^2 for repeated
/// sampling from one state.
class BasisSampler {
public:
    explicit BasisSampler(const StateVector& state);

    template <class RngT>
    std::uint64_t draw(RngT& rng) const {
        const double u = rng.uniform01() * total_;
        return locate(u);
    }

    std::size_t num_qubits() const { return num_qubits_; }

private:
    std::uint64_t locate(double u) const;

    std::vector<double> cumulative_;
    double total_ = 0.0;
    std::uint64_t last_nonzero_ = 0;
    std::size_t num_qubits_ = 0;
};

/// shots i.i.d. basis indices drawn from |a_i|^2 / norm^2. Deterministic in
/// rng_seed. Throws on a zero-norm state.
std::vector<std::uint64_t> sample_bitstrings(const StateVector& state, std::size_t shots,
                                             std::uint64_t rng_seed);

} // namespace vqr
