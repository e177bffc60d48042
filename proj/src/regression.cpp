#include "vqr/regression.hpp"

#include <cmath>
#include <stdexcept>

namespace vqr {

StateVector regression_pre_projection(const PreparedState& prepared, const PhaseVector& phases) {
    const auto& lay = prepared.layout;
    if (phases.phis.size() != lay.cols) {
        throw std::invalid_argument("phase vector has " + std::to_string(phases.phis.size()) +
                                    " entries, layout needs " + std::to_string(lay.cols));
    }
    StateVector s = prepared.success_probability < 1.0 ? renormalized(prepared.state)
                                                        : prepared.state;
    s = apply_hadamard(std::move(s), lay.ancilla);
    if (lay.scheme == EncodingScheme::OneHot) {
        for (std::size_t l = 0; l < lay.rows; ++l) {
            for (std::size_t m = 0; m < lay.cols; ++m) {
                DiagonalPhaseSpec spec{{{QubitIndex{m + l * lay.cols}, 1}}, phases.phis[m],
                                       lay.ancilla};
                s = apply_controlled_diagonal_phase(std::move(s), spec);
            }
        }
    } else {
        for (std::size_t m = 0; m < lay.cols; ++m) {
            s = apply_controlled_diagonal_phase(
                std::move(s), {lay.column_controls(m), phases.phis[m], lay.ancilla});
        }
    }
    return apply_hadamard(std::move(s), lay.ancilla);
}

RegressionOutput apply_regression_map(const PreparedState& prepared, const PhaseVector& phases) {
    auto proj = project_qubit(regression_pre_projection(prepared, phases), prepared.layout.ancilla,
                              ProjectionBasis::Z0);
    return {std::move(proj.state), proj.probability};
}

WeightVector phases_to_weights(const PhaseVector& phases) {
    if (phases.phis.empty()) {
        throw std::invalid_argument("empty phase vector");
    }
    const double c0 = std::cos(phases.phis[0]);
    if (std::abs(c0) <= 1e-9) {
        throw std::domain_error("cos(phi_0) vanishes; weights are undefined");
    }
    WeightVector w;
    for (std::size_t m = 1; m < phases.phis.size(); ++m) {
        w.weights.push_back(-std::cos(phases.phis[m]) / c0);
    }
    return w;
}

double cost_from_cosines(const Eigen::MatrixXd& values, const Eigen::VectorXd& cosines) {
    return (values * cosines).squaredNorm();
}

namespace {

Eigen::VectorXd cosines_of(const StandardizedTable& table, const PhaseVector& phases) {
    if (phases.phis.size() != static_cast<std::size_t>(table.values.cols())) {
        throw std::invalid_argument("phase vector length does not match table columns");
    }
    Eigen::VectorXd c(table.values.cols());
    for (Eigen::Index m = 0; m < c.size(); ++m) {
        c[m] = std::cos(phases.phis[std::size_t(m)]);
    }
    return c;
}

} // namespace

double analytic_cost(const StandardizedTable& table, const PhaseVector& phases) {
    return cost_from_cosines(table.values, cosines_of(table, phases));
}

std::vector<double> analytic_gradient(const StandardizedTable& table, const PhaseVector& phases) {
    const Eigen::VectorXd residual = table.values * cosines_of(table, phases);
    const Eigen::VectorXd projected = table.values.transpose() * residual;
    std::vector<double> g(phases.phis.size());
    for (std::size_t m = 0; m < g.size(); ++m) {
        g[m] = -2.0 * std::sin(phases.phis[m]) * projected[Eigen::Index(m)];
    }
    return g;
}

} // namespace vqr
