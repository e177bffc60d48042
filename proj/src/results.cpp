#include "vqr/results.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vqr {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) {
        a.push_back(number_or_null(x));
    }
    return a;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Json to_json(const RegularizationParams& reg) {
    return Json{{"l1", reg.alpha_l1}, {"l2", reg.beta_l2}};
}

Json to_json(const TrainConfig& c) {
    Json backend{{"kind", to_string(c.cost_backend.kind)}};
    if (c.cost_backend.kind != BackendKind::Analytic) {
        backend["scheme"] = to_string(c.cost_backend.scheme);
    }
    if (c.cost_backend.kind == BackendKind::Shots) {
        backend["shots"] = c.cost_backend.shots;
        backend["readout_delta"] = c.cost_backend.readout_delta;
    }
    Json j{{"backend", backend},
           {"max_restarts", c.max_restarts},
           {"nm_tolerance_f", c.nm_tolerance_f},
           {"nm_tolerance_x", c.nm_tolerance_x},
           {"max_iterations_per_restart", c.max_iterations_per_restart},
           {"initial_simplex_scale", c.initial_simplex_scale},
           {"fix_c0_to_minus_one", c.fix_c0_to_minus_one},
           {"equalize_columns", c.equalize_columns},
           {"initial_weights", nullptr},
           {"seed", c.seed}};
    if (c.initial_weights) {
        j["initial_weights"] = numbers(*c.initial_weights);
    }
    return j;
}

Json result_json(const FitResult& fit, const Json& config_echo) {
    Json j{{"weights", numbers(fit.weights.weights)},
           {"standard_errors", nullptr},
           {"t_stats", nullptr},
           {"cost", number_or_null(fit.cost)},
           {"r_squared", number_or_null(fit.r_squared)},
           {"config_echo", config_echo}};
    j["details"] = Json{{"intercept", number_or_null(fit.intercept)},
                        {"standardized_weights", numbers(fit.standardized_weights.weights)},
                        {"phases", numbers(fit.phases.phis)},
                        {"objective", number_or_null(fit.objective)},
                        {"C0", number_or_null(fit.C0)},
                        {"restarts_used", fit.restarts_used},
                        {"iterations", fit.iterations},
                        {"converged", fit.converged}};
    return j;
}

Json result_json(const EnsembleResult& e, const Json& config_echo) {
    Json j{{"weights", numbers(e.mean_weights)},
           {"standard_errors", nullptr},
           {"t_stats", Json::array()},
           {"cost", number_or_null(e.mean_cost)},
           {"r_squared", number_or_null(e.mean_r_squared)},
           {"config_echo", config_echo}};
    if (e.std_errors) {
        j["standard_errors"] = numbers(*e.std_errors);
    }
    bool any_t = false;
    for (const auto& t : e.t_stats) {
        j["t_stats"].push_back(t ? number_or_null(*t) : Json(nullptr));
        any_t = any_t || t.has_value();
    }
    if (!any_t) {
        j["t_stats"] = nullptr;
    }
    Json failures = Json::array();
    for (const auto& f : e.failures) {
        failures.push_back(Json{{"batch", f.batch}, {"message", f.message}});
    }
    j["details"] = Json{{"standard_error_kind", to_string(e.standard_error_kind)},
                        {"num_batches", e.num_batches},
                        {"batch_size", e.batch_size},
                        {"successful_batches", e.batch_ids.size()},
                        {"failed_batches", e.failures.size()},
                        {"failures", failures}};
    return j;
}

Json to_json(const CostEstimate& e) {
    return Json{{"value", number_or_null(e.value)},
                {"estimator", to_string(e.estimator)},
                {"shots", e.shots},
                {"std_error", number_or_null(e.std_error)},
                {"readout_delta", e.readout_delta},
                {"seed", e.seed}};
}

Json to_json(const ShotBudget& b) {
    return Json{{"formula", b.formula == VarianceFormula::IdentityPlusM ? "identity-plus-m" : "operator-derived"},
                {"epsilon", b.epsilon},
                {"alpha", b.alpha},
                {"variance", b.variance},
                {"required_shots", b.required_shots}};
}

Json to_json(const ResourceEstimate& r) {
    Json formulas = Json::object();
    for (const auto& [k, v] : r.formulas) {
        formulas[k] = v;
    }
    return Json{{"scheme", to_string(r.scheme)},
                {"gate_model", to_string(r.gate_model)},
                {"rows", r.rows},
                {"features", r.features},
                {"memory_bits", r.memory_bits},
                {"qubit_count", r.qubit_count},
                {"state_prep_gates", r.state_prep_gates},
                {"regression_map_gates", r.regression_map_gates},
                {"total_gates", r.total_gates},
                {"shot_cost", r.shot_cost},
                {"formulas", formulas}};
}

void save_results_json(const std::filesystem::path& path, const Json& doc) {
    auto out = open_for_write(path);
    out << doc.dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

Json load_results_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, e.what());
    }
}

void save_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const Eigen::MatrixXd& rows) {
    auto out = open_for_write(path);
    for (std::size_t c = 0; c < header.size(); ++c) {
        out << (c ? "," : "") << header[c];
    }
    out << '\n';
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c) {
            out << (c ? "," : "") << format_double(rows(r, c));
        }
        out << '\n';
    }
}

void save_batch_weights_csv(const std::filesystem::path& path, const EnsembleResult& e,
                            const std::vector<std::string>& feature_names) {
    auto out = open_for_write(path);
    out << "batch";
    for (Eigen::Index m = 0; m < e.per_batch_weights.cols(); ++m) {
        out << ','
            << (std::size_t(m) < feature_names.size() ? feature_names[std::size_t(m)]
                                                      : "x" + std::to_string(m + 1));
    }
    out << '\n';
    for (Eigen::Index r = 0; r < e.per_batch_weights.rows(); ++r) {
        out << e.batch_ids[std::size_t(r)];
        for (Eigen::Index m = 0; m < e.per_batch_weights.cols(); ++m) {
            out << ',' << format_double(e.per_batch_weights(r, m));
        }
        out << '\n';
    }
}

} // namespace vqr
