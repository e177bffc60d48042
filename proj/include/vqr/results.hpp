#pragma once

#include "vqr/measurement.hpp"
#include "vqr/resources.hpp"
#include "vqr/trainer.hpp"

#include <json.hpp>

#include <filesystem>

namespace vqr {

using Json = nlohmann::ordered_json;

/// Result documents share the keys weights, standard_errors, t_stats, cost,
/// r_squared and config_echo; absent values are null. Each builder fills
/// the shared keys and appends its own detail under "details".
Json result_json(const FitResult& fit, const Json& config_echo);
Json result_json(const EnsembleResult& ensemble, const Json& config_echo);

Json to_json(const TrainConfig& config);
Json to_json(const RegularizationParams& reg);
Json to_json(const CostEstimate& estimate);
Json to_json(const ShotBudget& budget);
Json to_json(const ResourceEstimate& estimate);

/// Writes `doc` with two-space indentation and a trailing newline.
void save_results_json(const std::filesystem::path& path, const Json& doc);
Json load_results_json(const std::filesystem::path& path);

/// One row per successful batch: batch id then the feature weights.
void save_batch_weights_csv(const std::filesystem::path& path, const EnsembleResult& ensemble,
                            const std::vector<std::string>& feature_names);

/// Header line then rows, every value printed with %.17g.
void save_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const Eigen::MatrixXd& rows);

} // namespace vqr
