#pragma once

#include "vqr/data.hpp"
#include "vqr/encoders.hpp"
#include "vqr/regression.hpp"
#include "vqr/statevector.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>

namespace vqr {

enum class EstimatorKind { Exact, GroupedPauliShots, CompactXBasisShots, PauliShadows };

std::string_view to_string(EstimatorKind k);

struct CostEstimate {
    double value = 0.0;
    EstimatorKind estimator = EstimatorKind::Exact;
    std::size_t shots = 0;
    double std_error = 0.0;
    double readout_delta = 0.0;
    std::uint64_t seed = 0;
};

/// <psi0| M |psi0> on the unnormalized state, M = sum_l sum_{m,m'} |lm><lm'|
/// over the non-padded columns, tensored with identity on every other qubit.
double exact_expectation(const StateVector& psi0, const EncodingLayout& layout);

/// Dense M on the abstract L (M+1) cell basis, with M^2 compared against the
/// two candidate identities I + M*M and (M+1)*M.
struct OperatorIdentityReport {
    Eigen::MatrixXd op;
    Eigen::MatrixXd squared;
    double deviation_identity_plus_m = 0.0;  // max |M^2 - (I + M*M)|
    double deviation_m_plus_one = 0.0;       // max |M^2 - (M+1)*M|
    Eigen::VectorXd eigenvalues;
};

OperatorIdentityReport operator_identity_check(std::size_t rows, std::size_t features);

/// Single-setting estimator for the compact encoding: Hadamard on every
/// column qubit, measure ancilla, row and column registers, and return
/// 2^N_M times the fraction of shots with ancilla 0 and all column bits 0.
/// Each measured bit is flipped with probability readout_delta before
/// counting. `pre_projection` is the state before the ancilla is measured.
CostEstimate shot_estimate_compact(const StateVector& pre_projection, const EncodingLayout& layout,
                                   std::size_t shots, double readout_delta, std::uint64_t seed);

/// Three grouped settings for the one-hot encoding, shots split evenly:
///   computational basis  ancilla 0 and exactly one excited data qubit
///   all-X basis          ancilla 0 times sum over row pairs X_j X_k / 2
///   all-Y basis          ancilla 0 times sum over row pairs Y_j Y_k / 2
/// The three sample means add up to the cost.
CostEstimate shot_estimate_one_hot(const StateVector& pre_projection, const EncodingLayout& layout,
                                   std::size_t shots, double readout_delta, std::uint64_t seed);

/// Mean of the compact or one-hot estimator under readout noise, computed
/// exactly from the outcome distribution (no sampling).
double expected_noisy_estimate(const StateVector& pre_projection, const EncodingLayout& layout,
                               double readout_delta);

enum class ShadowObservable { CostOperator, Identity };

struct ShadowConfig {
    std::size_t snapshots = 1000;
    /// Median-of-means group count; 0 selects ceil(2 ln(1/alpha)).
    std::size_t groups = 0;
    double alpha = 0.05;
    ShadowObservable observable = ShadowObservable::CostOperator;
    std::uint64_t seed = 0;

    std::size_t resolved_groups() const;
};

/// Locality of the cost operator under the compact encoding (N_M) and its
/// shadow-norm bound 4^k.
std::size_t shadow_locality(const EncodingLayout& layout);
double shadow_norm_bound(std::size_t locality);

/// Random single-qubit Pauli shadows of the compact cost operator
/// I^{N_L} (x) (I + X)^{N_M}. psi0 may be unnormalized; the protocol runs on
/// the normalized state and the estimate is rescaled by the squared norm.
/// Only column-register outcomes enter the estimator, so only those qubits'
/// bases are drawn.
CostEstimate pauli_shadow_estimate(const StateVector& psi0, const EncodingLayout& layout,
                                   const ShadowConfig& config);

/// Snapshots for accuracy epsilon: ceil(c * ln(2^k) * 4^k / epsilon^2).
std::size_t shadow_snapshot_budget(std::size_t locality, double epsilon, double constant);

struct ModelMetrics {
    double C = 0.0;
    double C0 = 0.0;
    double R2 = 0.0;
};

/// C0 = cos^2(phi_0) / (1 + F); R2 = 1 - C / C0.
ModelMetrics model_metrics(double cost, const StandardizedTable& table, const PhaseVector& phases);

enum class VarianceFormula {
    /// sigma^2 = 1 + M C - C^2, built on M^2 = I + M*M.
    IdentityPlusM,
    /// sigma^2 = (M+1) C - C^2, from M^2 = (M+1) M on the unnormalized
    /// post-selected state.
    OperatorDerived
};

struct ShotBudget {
    double epsilon = 0.0;
    double alpha = 0.0;
    double variance = 0.0;
    std::size_t required_shots = 0;
    VarianceFormula formula = VarianceFormula::OperatorDerived;
};

/// ceil(2 sigma^2 ln(1/alpha) / epsilon^2), at least one shot.
ShotBudget required_shots(double cost, std::size_t features, double epsilon, double alpha,
                          VarianceFormula formula);

} // namespace vqr
