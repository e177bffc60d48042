#include "vqr/statevector.hpp"

#include "vqr/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vqr {

namespace {

constexpr std::size_t kMaxQubits = 30;

std::uint64_t bit(QubitIndex q) { return std::uint64_t{1} << q.index; }

// Calls f(i0, i1) for every index pair differing only in the target bit,
// with i0 holding target = 0.
template <class F>
void for_each_pair(std::size_t dim, QubitIndex target, F&& f) {
    const std::uint64_t stride = bit(target);
    for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
        for (std::uint64_t off = 0; off < stride; ++off) {
            const std::uint64_t i0 = base + off;
            f(i0, i0 + stride);
        }
    }
}

} // namespace

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits > kMaxQubits) {
        throw std::invalid_argument("StateVector: too many qubits (" +
                                    std::to_string(num_qubits) + ")");
    }
    amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty() || !std::has_single_bit(amps_.size())) {
        throw std::invalid_argument("StateVector: amplitude count must be a power of two");
    }
    num_qubits_ = static_cast<std::size_t>(std::countr_zero(amps_.size()));
}

StateVector StateVector::basis_state(std::size_t num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dimension()) {
        throw std::out_of_range("basis_state: index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm_squared() const {
    double acc = 0.0;
    for (const auto& a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

void StateVector::check_qubit(QubitIndex q) const {
    if (q.index >= num_qubits_) {
        throw std::out_of_range("qubit " + std::to_string(q.index) + " out of range for " +
                                std::to_string(num_qubits_) + "-qubit state");
    }
}

std::string to_ket(std::uint64_t index, std::size_t num_qubits) {
    std::string s = "|";
    for (std::size_t q = 0; q < num_qubits; ++q) {
        s += ((index >> q) & 1U) ? '1' : '0';
    }
    return s + ">";
}

StateVector apply_ry(StateVector state, QubitIndex target, double theta) {
    state.check_qubit(target);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto amps = state.amplitudes();
    for_each_pair(state.dimension(), target, [&](std::uint64_t i0, std::uint64_t i1) {
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = c * a0 - s * a1;
        amps[i1] = s * a0 + c * a1;
    });
    return state;
}

StateVector apply_controlled_ry(StateVector state, QubitIndex control, QubitIndex target,
                                double theta) {
    state.check_qubit(control);
    state.check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("controlled Ry: control and target coincide");
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::uint64_t cmask = bit(control);
    auto amps = state.amplitudes();
    for_each_pair(state.dimension(), target, [&](std::uint64_t i0, std::uint64_t i1) {
        if ((i0 & cmask) == 0) {
            return;
        }
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = c * a0 - s * a1;
        amps[i1] = s * a0 + c * a1;
    });
    return state;
}

StateVector apply_hadamard(StateVector state, QubitIndex target) {
    state.check_qubit(target);
    const double r = 1.0 / std::numbers::sqrt2;
    auto amps = state.amplitudes();
    for_each_pair(state.dimension(), target, [&](std::uint64_t i0, std::uint64_t i1) {
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = r * (a0 + a1);
        amps[i1] = r * (a0 - a1);
    });
    return state;
}

StateVector apply_x(StateVector state, QubitIndex target) {
    state.check_qubit(target);
    auto amps = state.amplitudes();
    for_each_pair(state.dimension(), target,
                  [&](std::uint64_t i0, std::uint64_t i1) { std::swap(amps[i0], amps[i1]); });
    return state;
}

StateVector apply_sdg(StateVector state, QubitIndex target) {
    state.check_qubit(target);
    auto amps = state.amplitudes();
    for_each_pair(state.dimension(), target,
                  [&](std::uint64_t, std::uint64_t i1) { amps[i1] *= Complex{0.0, -1.0}; });
    return state;
}

StateVector apply_cnot(StateVector state, QubitIndex control, QubitIndex target) {
    state.check_qubit(control);
    state.check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("CNOT: control and target coincide");
    }
    const std::uint64_t cmask = bit(control);
    auto amps = state.amplitudes();
    for_each_pair(state.dimension(), target, [&](std::uint64_t i0, std::uint64_t i1) {
        if (i0 & cmask) {
            std::swap(amps[i0], amps[i1]);
        }
    });
    return state;
}

StateVector apply_controlled_diagonal_phase(StateVector state, const DiagonalPhaseSpec& spec) {
    std::uint64_t mask = 0;
    std::uint64_t want = 0;
    for (const auto& c : spec.controls) {
        state.check_qubit(c.qubit);
        if (c.required_bit != 0 && c.required_bit != 1) {
            throw std::invalid_argument("phase control bit must be 0 or 1");
        }
        if (mask & bit(c.qubit)) {
            throw std::invalid_argument("duplicate control qubit " +
                                        std::to_string(c.qubit.index));
        }
        mask |= bit(c.qubit);
        if (c.required_bit == 1) {
            want |= bit(c.qubit);
        }
    }
    std::uint64_t sign_mask = 0;
    if (spec.sign_qubit) {
        state.check_qubit(*spec.sign_qubit);
        sign_mask = bit(*spec.sign_qubit);
        if (mask & sign_mask) {
            throw std::invalid_argument("sign qubit must not be a control");
        }
    }
    if (spec.angle == 0.0) {
        return state;
    }
    const Complex plus = std::polar(1.0, spec.angle);
    const Complex minus = std::conj(plus);
    auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) == want) {
            amps[i] *= (i & sign_mask) ? minus : plus;
        }
    }
    return state;
}

Projection project_qubit(StateVector state, QubitIndex target, ProjectionBasis basis) {
    state.check_qubit(target);
    const bool x_basis = basis == ProjectionBasis::XPlus || basis == ProjectionBasis::XMinus;
    const bool keep_one = basis == ProjectionBasis::Z1 || basis == ProjectionBasis::XMinus;
    if (x_basis) {
        state = apply_hadamard(std::move(state), target);
    }
    const std::uint64_t tmask = bit(target);
    auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (static_cast<bool>(i & tmask) != keep_one) {
            amps[i] = 0.0;
        }
    }
    if (x_basis) {
        state = apply_hadamard(std::move(state), target);
    }
    const double p = state.norm_squared();
    return {std::move(state), p};
}

StateVector renormalized(StateVector state) {
    const double n2 = state.norm_squared();
    if (!(n2 > 0.0)) {
        throw std::domain_error("cannot renormalize a zero state");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : state.amplitudes()) {
        a *= inv;
    }
    return state;
}

BasisSampler::BasisSampler(const StateVector& state) : num_qubits_(state.num_qubits()) {
    cumulative_.resize(state.dimension());
    double acc = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p > 0.0) {
            last_nonzero_ = i;
        }
        acc += p;
        cumulative_[i] = acc;
    }
    total_ = acc;
    if (!(total_ > 0.0)) {
        throw std::domain_error("cannot sample from a zero-norm state");
    }
}

std::uint64_t BasisSampler::locate(double u) const {
    // upper_bound never lands on a zero-probability entry.
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) {
        return last_nonzero_;
    }
    return static_cast<std::uint64_t>(it - cumulative_.begin());
}

std::vector<std::uint64_t> sample_bitstrings(const StateVector& state, std::size_t shots,
                                             std::uint64_t rng_seed) {
    if (shots == 0) {
        throw std::invalid_argument("sample_bitstrings: shots must be positive");
    }
    const BasisSampler sampler(state);
    Rng rng(rng_seed);
    std::vector<std::uint64_t> out(shots);
    for (auto& o : out) {
        o = sampler.draw(rng);
    }
    return out;
}

} // namespace vqr
