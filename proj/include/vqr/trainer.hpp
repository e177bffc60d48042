#pragma once

#include "vqr/data.hpp"
#include "vqr/encoders.hpp"
#include "vqr/measurement.hpp"
#include "vqr/regression.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqr {

// ---------------------------------------------------------------------------
// Nelder-Mead

enum class StopReason { FunctionSpread, PointSpread, IterationCap, NonFinite };

std::string_view to_string(StopReason r);

struct NelderMeadOptions {
    double tolerance_f = 1e-12;
    double tolerance_x = 1e-10;
    std::size_t max_iterations = 10000;
    /// Edge length of the axis-aligned initial simplex.
    double initial_scale = 0.5;
};

struct NelderMeadResult {
    Eigen::VectorXd point;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    StopReason reason = StopReason::IterationCap;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Reflection 1, expansion 2, contraction 0.5, shrink 0.5. A NaN or infinite
/// objective stops the search; the offending point is returned with its value.
NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& start,
                             const NelderMeadOptions& options);

struct RestartOptions {
    NelderMeadOptions nm;
    std::size_t max_restarts = 20;
};

struct RestartResult {
    NelderMeadResult best;
    std::size_t restarts_used = 0;
    std::size_t total_iterations = 0;
    bool converged = false;
};

/// Repeated Nelder-Mead runs, each started at the previous optimum with the
/// simplex scale halved. Converged once two consecutive optima differ by less
/// than tolerance_f.
RestartResult minimize_with_restarts(const Objective& f, const Eigen::VectorXd& start,
                                     const RestartOptions& options);

// ---------------------------------------------------------------------------
// Regression training

/// Training could not produce weights (non-finite objective or a vanishing
/// response phase).
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RegularizationParams {
    double alpha_l1 = 0.0;
    double beta_l2 = 0.0;
};

enum class BackendKind { Analytic, CircuitExact, Shots };

std::string_view to_string(BackendKind k);

struct CostBackend {
    BackendKind kind = BackendKind::Analytic;
    /// CircuitExact and Shots: encoding of the simulated circuit.
    EncodingScheme scheme = EncodingScheme::OneHot;
    /// Shots only.
    std::size_t shots = 10000;
    double readout_delta = 0.0;
};

struct TrainConfig {
    CostBackend cost_backend;
    std::size_t max_restarts = 20;
    double nm_tolerance_f = 1e-14;
    double nm_tolerance_x = 1e-10;
    std::size_t max_iterations_per_restart = 20000;
    double initial_simplex_scale = 0.5;
    bool fix_c0_to_minus_one = true;
    bool equalize_columns = true;
    /// Starting weights in the raw table's units; zeros when absent.
    std::optional<std::vector<double>> initial_weights;
    std::uint64_t seed = 0;
};

struct FitResult {
    /// Weights in the raw table's units and the matching intercept,
    /// y ~ intercept + sum_m W_m x_m.
    WeightVector weights;
    double intercept = 0.0;
    /// Weights on the standardized table, -cos(phi_m) / cos(phi_0).
    WeightVector standardized_weights;
    PhaseVector phases;
    /// Backend cost at the returned phases, penalty excluded.
    double cost = 0.0;
    /// Cost plus penalty: the minimized objective.
    double objective = 0.0;
    double r_squared = 0.0;
    double C0 = 0.0;
    std::size_t restarts_used = 0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Backend cost at the given cosine variables c_m = cos(phi_m).
/// The Shots backend samples evaluation i from the stream derive_seed(seed, i).
class CostEvaluator {
public:
    CostEvaluator(const StandardizedTable& table, const CostBackend& backend, std::uint64_t seed);

    double operator()(const Eigen::VectorXd& cosines);

    std::size_t evaluations() const { return evaluations_; }

private:
    const StandardizedTable* table_;
    CostBackend backend_;
    std::uint64_t seed_;
    Eigen::MatrixXd gram_;
    std::optional<PreparedState> prepared_;
    std::size_t evaluations_ = 0;
};

PhaseVector cosines_to_phases(const Eigen::VectorXd& cosines);

/// Minimizes backend cost + alpha sum |W| + beta sum W^2 over the cosine
/// variables. Penalties use the standardized weights and are added
/// classically after the backend evaluation.
FitResult fit(const StandardizedTable& table, const RegularizationParams& reg,
              const TrainConfig& config);

/// Standardizes `raw` and fits it; the intercept and weights are reported in
/// the raw table's units.
FitResult fit(const RawTable& raw, const RegularizationParams& reg, const TrainConfig& config);

/// Prediction intercept + sum_m W_m x_m for each row of a features-only matrix.
Eigen::VectorXd predict(const FitResult& fit, const Eigen::MatrixXd& features);

// ---------------------------------------------------------------------------
// Bootstrap ensembles

enum class StandardErrorKind {
    /// Sample standard deviation of the per-batch weights.
    BatchSpread,
    /// The same spread divided by sqrt(successful batches).
    MeanOfBatches
};

std::string_view to_string(StandardErrorKind k);
StandardErrorKind parse_standard_error_kind(std::string_view s);

struct BatchFailure {
    std::size_t batch = 0;
    std::string message;
};

struct EnsembleResult {
    std::vector<double> mean_weights;
    /// Per standard_error_kind; absent with fewer than two successful
    /// batches.
    std::optional<std::vector<double>> std_errors;
    StandardErrorKind standard_error_kind = StandardErrorKind::BatchSpread;
    /// mean / std_error, absent where the standard error is absent or zero.
    std::vector<std::optional<double>> t_stats;
    /// Successful batches only, one row per batch in batch order.
    Eigen::MatrixXd per_batch_weights;
    std::vector<std::size_t> batch_ids;
    std::vector<BatchFailure> failures;
    std::size_t batch_size = 0;
    std::size_t num_batches = 0;
    double mean_cost = 0.0;
    double mean_r_squared = 0.0;
};

/// Each batch b is resampled, standardized and fitted with seed
/// derive_seed(config.seed, b); `jobs` worker threads share the batches.
/// Results do not depend on the number of workers.
EnsembleResult fit_ensemble(const RawTable& raw, const BootstrapPlan& plan,
                            const RegularizationParams& reg, const TrainConfig& config,
                            std::size_t jobs = 1,
                            StandardErrorKind se_kind = StandardErrorKind::BatchSpread);

// ---------------------------------------------------------------------------
// sin(x) power-series demo

struct SinDemoConfig {
    std::size_t records = 32;
    std::size_t max_power = 15;
    double alpha_l1 = 1.2e-7;
    /// Magnitude of the alternating-sign starting weights on odd powers
    /// (+, -, +, ... on x, x^3, x^5, ...), in the raw table's units.
    double ansatz_magnitude = 0.1;
    std::size_t grid_points = 201;
    std::uint64_t seed = 2023;
    TrainConfig train;
};

struct SinDemoResult {
    FitResult fit;
    RawTable training;
    /// Rows of (x, prediction, sin x) on an even grid over [-1, 1].
    Eigen::MatrixXd curve;
    double max_abs_error = 0.0;
};

SinDemoResult fit_nonlinear_sin_demo(const SinDemoConfig& config);

} // namespace vqr
