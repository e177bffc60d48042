#pragma once

#include "vqr/data.hpp"
#include "vqr/encoders.hpp"
#include "vqr/statevector.hpp"

#include <vector>

namespace vqr {

/// Variational angles phi_0 (response) ... phi_M, in radians.
struct PhaseVector {
    std::vector<double> phis;
};

/// Regression coefficients W_1 ... W_M.
struct WeightVector {
    std::vector<double> weights;
};

/// State after the ancilla Hadamard, before the ancilla is measured:
///   sum_{l,m} (cos phi_m |0> + i sin phi_m |1>)_A x_lm |lm>.
/// Each column gate imprints exp(+i phi_m) on ancilla |0> and exp(-i phi_m)
/// on ancilla |1>. Post-selected preparations are renormalized first.
StateVector regression_pre_projection(const PreparedState& prepared, const PhaseVector& phases);

struct RegressionOutput {
    StateVector psi0;  // unnormalized, ancilla projected onto |0>
    double p_ancilla0 = 0.0;
};

RegressionOutput apply_regression_map(const PreparedState& prepared, const PhaseVector& phases);

/// W_m = -cos(phi_m) / cos(phi_0). Throws std::domain_error when
/// |cos phi_0| <= 1e-9.
WeightVector phases_to_weights(const PhaseVector& phases);

/// sum_l (sum_m x_lm cos phi_m)^2.
double analytic_cost(const StandardizedTable& table, const PhaseVector& phases);

/// Same cost written in the cosine variables c_m = cos phi_m.
double cost_from_cosines(const Eigen::MatrixXd& values, const Eigen::VectorXd& cosines);

/// dC/dphi_m = -2 sin(phi_m) sum_l x_lm sum_m' x_lm' cos(phi_m').
std::vector<double> analytic_gradient(const StandardizedTable& table, const PhaseVector& phases);

} // namespace vqr
