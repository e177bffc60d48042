// vqr: command-line driver for data generation, training, estimator studies
// and resource tables. Every output embeds the resolved configuration.

#include "vqr/data.hpp"
#include "vqr/encoders.hpp"
#include "vqr/measurement.hpp"
#include "vqr/regression.hpp"
#include "vqr/resources.hpp"
#include "vqr/results.hpp"
#include "vqr/rng.hpp"
#include "vqr/trainer.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>

namespace {

using vqr::Json;

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kIo = 3,
    kParse = 4,
    kInvalidInput = 5,
    kTraining = 6,
    kInternal = 7,
};

class NotConverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::filesystem::path output_dir(const std::string& flag) {
    std::filesystem::path dir = ".";
    if (!flag.empty()) {
        dir = flag;
    } else if (const char* env = std::getenv("VQR_OUTPUT_DIR"); env && *env) {
        dir = env;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw vqr::IoError("cannot create output directory " + dir.string());
    }
    return dir;
}

struct TrainFlags {
    std::string backend = "analytic";
    std::string scheme = "one-hot";
    std::size_t shots = 10000;
    double readout_delta = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    std::size_t max_restarts = 20;
    double tol_f = 1e-14;
    double tol_x = 1e-10;
    std::size_t max_iterations = 20000;
    bool no_equalize = false;
    bool free_c0 = false;
    bool strict = false;
    std::uint64_t seed = 0;

    void add_to(CLI::App* app) {
        app->add_option("--backend", backend, "Cost backend")
            ->check(CLI::IsMember({"analytic", "circuit", "shots"}))
            ->capture_default_str();
        app->add_option("--scheme", scheme, "Encoding for circuit and shot backends")
            ->check(CLI::IsMember({"one-hot", "compact"}))
            ->capture_default_str();
        app->add_option("--shots", shots, "Shots per cost evaluation")->capture_default_str();
        app->add_option("--readout-delta", readout_delta, "Bit-flip readout error probability")
            ->check(CLI::Range(0.0, 0.4999))
            ->capture_default_str();
        app->add_option("--l1", l1, "L1 penalty strength")->check(CLI::NonNegativeNumber);
        app->add_option("--l2", l2, "L2 penalty strength")->check(CLI::NonNegativeNumber);
        app->add_option("--max-restarts", max_restarts)->capture_default_str();
        app->add_option("--tol-f", tol_f)->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--tol-x", tol_x)->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--max-iterations", max_iterations, "Iteration cap per restart")
            ->capture_default_str();
        app->add_flag("--no-equalize", no_equalize, "Skip per-column equalization");
        app->add_flag("--free-c0", free_c0, "Optimize the response cosine too");
        app->add_flag("--strict", strict, "Exit with an error when training does not converge");
        app->add_option("--seed", seed)->capture_default_str();
    }

    vqr::TrainConfig config() const {
        vqr::TrainConfig c;
        if (backend == "circuit") {
            c.cost_backend.kind = vqr::BackendKind::CircuitExact;
        } else if (backend == "shots") {
            c.cost_backend.kind = vqr::BackendKind::Shots;
        }
        c.cost_backend.scheme =
            scheme == "compact" ? vqr::EncodingScheme::CompactBinary : vqr::EncodingScheme::OneHot;
        c.cost_backend.shots = shots;
        c.cost_backend.readout_delta = readout_delta;
        c.max_restarts = max_restarts;
        c.nm_tolerance_f = tol_f;
        c.nm_tolerance_x = tol_x;
        c.max_iterations_per_restart = max_iterations;
        c.equalize_columns = !no_equalize;
        c.fix_c0_to_minus_one = !free_c0;
        c.seed = seed;
        return c;
    }

    vqr::RegularizationParams reg() const { return {l1, l2}; }
};

std::vector<std::string> feature_names(const vqr::RawTable& raw) {
    if (raw.column_names.size() < 2) {
        return {};
    }
    return {raw.column_names.begin() + 1, raw.column_names.end()};
}

void report(const std::filesystem::path& path) { std::cout << "wrote " << path.string() << '\n'; }

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::size_t rows = 1024;
    std::size_t features = 0;
    std::vector<double> weights;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string output;
    std::string out_dir;
};

int run_generate(const GenerateArgs& a) {
    if (a.features != 0 && a.features != a.weights.size()) {
        throw std::invalid_argument("--features does not match the number of --weights");
    }
    if (a.rows < 2) {
        throw std::invalid_argument("--rows must be at least 2");
    }
    vqr::SyntheticSpec spec;
    spec.rows = a.rows;
    spec.true_weights = a.weights;
    spec.noise_std = a.noise;
    spec.seed = a.seed;
    const auto table = vqr::generate_linear_synthetic(spec);
    const auto path = a.output.empty() ? output_dir(a.out_dir) / "synthetic.csv"
                                       : std::filesystem::path(a.output);
    vqr::save_csv(path, table);
    report(path);
    return kOk;
}

struct FitArgs {
    std::string input;
    std::string out_dir;
    TrainFlags train;
};

int run_fit(const FitArgs& a) {
    const auto raw = vqr::load_csv(a.input);
    const auto config = a.train.config();
    const auto result = vqr::fit(raw, a.train.reg(), config);
    Json echo{{"command", "fit"},
              {"input", a.input},
              {"regularization", vqr::to_json(a.train.reg())},
              {"train", vqr::to_json(config)}};
    auto doc = vqr::result_json(result, echo);
    doc["details"]["least_squares_reference"] = Json::array();
    const Eigen::VectorXd ls = vqr::least_squares_weights(raw);
    for (double w : ls) {
        doc["details"]["least_squares_reference"].push_back(w);
    }
    const auto path = output_dir(a.out_dir) / "fit.json";
    vqr::save_results_json(path, doc);
    report(path);
    if (a.train.strict && !result.converged) {
        throw NotConverged("training did not converge within the restart budget");
    }
    return kOk;
}

struct EnsembleArgs {
    std::string input;
    std::string out_dir;
    std::size_t batches = 1024;
    std::size_t batch_size = 60;
    std::size_t jobs = 1;
    std::string standard_error = "batch-spread";
    TrainFlags train;
};

int run_ensemble(const EnsembleArgs& a) {
    const auto raw = vqr::load_csv(a.input);
    const vqr::BootstrapPlan plan{a.batches, a.batch_size, a.train.seed};
    const auto config = a.train.config();
    const auto se_kind = vqr::parse_standard_error_kind(a.standard_error);
    const auto result = vqr::fit_ensemble(raw, plan, a.train.reg(), config, a.jobs, se_kind);
    // jobs changes scheduling only, so it stays out of the echoed config.
    Json echo{{"command", "ensemble"},
              {"input", a.input},
              {"batches", a.batches},
              {"batch_size", a.batch_size},
              {"bootstrap_seed", a.train.seed},
              {"standard_error", a.standard_error},
              {"regularization", vqr::to_json(a.train.reg())},
              {"train", vqr::to_json(config)}};
    const auto dir = output_dir(a.out_dir);
    vqr::save_results_json(dir / "ensemble.json", vqr::result_json(result, echo));
    vqr::save_batch_weights_csv(dir / "ensemble_weights.csv", result, feature_names(raw));
    report(dir / "ensemble.json");
    report(dir / "ensemble_weights.csv");
    if (result.batch_ids.empty()) {
        throw NotConverged("every bootstrap batch failed");
    }
    return kOk;
}

struct SinArgs {
    vqr::SinDemoConfig demo;
    std::string out_dir;
    TrainFlags train;
};

int run_sin_demo(SinArgs a) {
    a.demo.train = a.train.config();
    a.demo.seed = a.train.seed == 0 ? a.demo.seed : a.train.seed;
    const auto result = vqr::fit_nonlinear_sin_demo(a.demo);
    Json echo{{"command", "sin-demo"},
              {"records", a.demo.records},
              {"max_power", a.demo.max_power},
              {"alpha", a.demo.alpha_l1},
              {"ansatz_magnitude", a.demo.ansatz_magnitude},
              {"grid_points", a.demo.grid_points},
              {"data_seed", a.demo.seed},
              {"train", vqr::to_json(a.demo.train)}};
    auto doc = vqr::result_json(result.fit, echo);
    doc["details"]["max_abs_error"] = result.max_abs_error;
    const auto dir = output_dir(a.out_dir);
    vqr::save_results_json(dir / "sin_demo.json", doc);
    vqr::save_matrix_csv(dir / "sin_demo_curve.csv", {"x", "prediction", "sin_x"}, result.curve);
    report(dir / "sin_demo.json");
    report(dir / "sin_demo_curve.csv");
    return kOk;
}

struct NoiseArgs {
    std::string input;
    std::string out_dir;
    std::string scheme = "compact";
    std::vector<double> deltas{0.0, 0.005, 0.01, 0.02};
    std::size_t shots = 100000;
    std::size_t replications = 20;
    std::uint64_t seed = 0;
    std::size_t bits = 8;
};

int run_noise_sweep(const NoiseArgs& a) {
    const auto raw = vqr::load_csv(a.input);
    const auto table = vqr::standardize(raw, true);
    const auto scheme =
        a.scheme == "compact" ? vqr::EncodingScheme::CompactBinary : vqr::EncodingScheme::OneHot;
    const auto prepared = scheme == vqr::EncodingScheme::OneHot
                              ? vqr::prepare_one_hot_chain(table)
                              : vqr::prepare_exact(table, scheme);
    // Null-model phases: the cost equals C0.
    vqr::PhaseVector phases;
    phases.phis.assign(table.features() + 1, std::numbers::pi / 2);
    phases.phis[0] = std::numbers::pi;
    const auto pre = vqr::regression_pre_projection(prepared, phases);

    Json preparation = nullptr;
    if (scheme == vqr::EncodingScheme::CompactBinary) {
        const auto digitized = vqr::memory_free_compact(vqr::digitize(table, a.bits));
        const double p = digitized.success_probability;
        preparation = Json{{"amplitude_model", "sin-of-digitized"},
                           {"bits", a.bits},
                           {"success_probability", p},
                           {"expected_attempts_per_shot", p > 0.0 ? Json(1.0 / p) : Json(nullptr)},
                           {"sampled_attempts", p > 0.0 ? Json(vqr::sample_preparation_attempts(
                                                              a.shots, p, vqr::derive_seed(a.seed, ~0ULL)))
                                                        : Json(nullptr)}};
    }

    Eigen::MatrixXd rows(Eigen::Index(a.deltas.size()), 4);
    Json points = Json::array();
    for (std::size_t i = 0; i < a.deltas.size(); ++i) {
        const double d = a.deltas[i];
        const double exact = vqr::expected_noisy_estimate(pre, prepared.layout, d);
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t r = 0; r < a.replications; ++r) {
            const auto seed = vqr::derive_seed(a.seed, i * a.replications + r);
            const auto e = scheme == vqr::EncodingScheme::OneHot
                               ? vqr::shot_estimate_one_hot(pre, prepared.layout, a.shots, d, seed)
                               : vqr::shot_estimate_compact(pre, prepared.layout, a.shots, d, seed);
            sum += e.value;
            sum_sq += e.value * e.value;
        }
        const double n = static_cast<double>(a.replications);
        const double mean = sum / n;
        const double se =
            a.replications > 1 ? std::sqrt(std::max(0.0, sum_sq - n * mean * mean) / (n - 1) / n) : 0.0;
        rows.row(Eigen::Index(i)) << d, exact, mean, se;
        points.push_back(Json{{"readout_delta", d},
                              {"expected_estimate", exact},
                              {"sampled_mean", mean},
                              {"sampled_std_error", se}});
    }
    Json echo{{"command", "noise-sweep"},
              {"input", a.input},
              {"scheme", a.scheme},
              {"deltas", a.deltas},
              {"shots", a.shots},
              {"replications", a.replications},
              {"bits", a.bits},
              {"seed", a.seed}};
    Json doc{{"weights", nullptr},
             {"standard_errors", nullptr},
             {"t_stats", nullptr},
             {"cost", vqr::exact_expectation(vqr::apply_regression_map(prepared, phases).psi0,
                                             prepared.layout)},
             {"r_squared", 0.0},
             {"config_echo", echo},
             {"details",
              Json{{"C0", table.C0},
                   {"measured_qubits", prepared.layout.data_qubits + 1},
                   {"preparation", preparation},
                   {"points", points}}}};
    const auto dir = output_dir(a.out_dir);
    vqr::save_results_json(dir / "noise_sweep.json", doc);
    vqr::save_matrix_csv(dir / "noise_sweep.csv",
                         {"readout_delta", "expected_estimate", "sampled_mean", "sampled_std_error"},
                         rows);
    report(dir / "noise_sweep.json");
    report(dir / "noise_sweep.csv");
    return kOk;
}

struct ShadowArgs {
    std::size_t rows = 4;
    std::vector<std::size_t> features{1, 3};
    double epsilon = 0.05;
    double constant = 1.0;
    std::size_t replications = 100;
    std::uint64_t seed = 0;
    std::string out_dir;
};

int run_shadow_study(const ShadowArgs& a) {
    Json studies = Json::array();
    Eigen::MatrixXd rows(Eigen::Index(a.features.size()), 6);
    for (std::size_t i = 0; i < a.features.size(); ++i) {
        const std::size_t M = a.features[i];
        vqr::SyntheticSpec spec;
        spec.rows = a.rows;
        spec.true_weights.assign(M, 1.0);
        spec.noise_std = 0.3;
        spec.seed = vqr::derive_seed(a.seed, 1000 + i);
        const auto table = vqr::standardize(vqr::generate_linear_synthetic(spec), true);
        const auto prepared = vqr::prepare_exact(table, vqr::EncodingScheme::CompactBinary);
        vqr::Rng rng(vqr::derive_seed(a.seed, 2000 + i));
        vqr::PhaseVector phases;
        for (std::size_t m = 0; m <= M; ++m) {
            phases.phis.push_back(rng.uniform(0.0, std::numbers::pi));
        }
        const auto psi0 = vqr::apply_regression_map(prepared, phases).psi0;
        const double exact = vqr::exact_expectation(psi0, prepared.layout);
        const std::size_t k = vqr::shadow_locality(prepared.layout);
        const std::size_t snapshots = vqr::shadow_snapshot_budget(k, a.epsilon, a.constant);
        std::size_t covered = 0;
        double sum = 0.0;
        for (std::size_t r = 0; r < a.replications; ++r) {
            vqr::ShadowConfig cfg;
            cfg.snapshots = snapshots;
            cfg.seed = vqr::derive_seed(a.seed, (i + 1) * 1000003 + r);
            const double v = vqr::pauli_shadow_estimate(psi0, prepared.layout, cfg).value;
            covered += std::abs(v - exact) <= a.epsilon;
            sum += v;
        }
        const double coverage = double(covered) / double(a.replications);
        rows.row(Eigen::Index(i)) << double(M), double(k), double(snapshots), exact,
            sum / double(a.replications), coverage;
        studies.push_back(Json{{"features", M},
                               {"locality", k},
                               {"snapshots", snapshots},
                               {"exact", exact},
                               {"mean_estimate", sum / double(a.replications)},
                               {"coverage", coverage}});
    }
    Json echo{{"command", "shadow-study"},
              {"rows", a.rows},
              {"features", a.features},
              {"epsilon", a.epsilon},
              {"constant", a.constant},
              {"replications", a.replications},
              {"seed", a.seed}};
    Json doc{{"weights", nullptr},     {"standard_errors", nullptr}, {"t_stats", nullptr},
             {"cost", nullptr},        {"r_squared", nullptr},       {"config_echo", echo},
             {"details", Json{{"studies", studies}}}};
    const auto dir = output_dir(a.out_dir);
    vqr::save_results_json(dir / "shadow_study.json", doc);
    vqr::save_matrix_csv(dir / "shadow_study.csv",
                         {"features", "locality", "snapshots", "exact", "mean_estimate", "coverage"},
                         rows);
    report(dir / "shadow_study.json");
    report(dir / "shadow_study.csv");
    return kOk;
}

struct ResourceArgs {
    std::vector<std::uint64_t> rows{16, 32, 64, 128, 256, 512, 1024};
    std::vector<std::uint64_t> features{3};
    std::uint64_t bits = 8;
    std::string gate_model = "global-analog";
    std::string out_dir;
};

int run_resources(const ResourceArgs& a) {
    const auto model = vqr::parse_gate_model(a.gate_model);
    Json table = Json::array();
    std::vector<std::vector<double>> csv;
    for (auto L : a.rows) {
        for (auto M : a.features) {
            Json entry{{"rows", L}, {"features", M}};
            std::vector<double> line{double(L), double(M)};
            for (auto scheme : {vqr::ResourceScheme::OneHot, vqr::ResourceScheme::CompactMemoryFree,
                                vqr::ResourceScheme::CompactWithMemory}) {
                const auto e = vqr::estimate(L, M, a.bits, scheme, model);
                entry[std::string(vqr::to_string(scheme))] = vqr::to_json(e);
                line.push_back(double(e.qubit_count));
                line.push_back(double(e.total_gates));
                line.push_back(double(e.shot_cost));
            }
            const double ratio = vqr::shot_cost_ratio(L, M, model);
            entry["shot_cost_ratio_compact_over_one_hot"] = ratio;
            entry["classical_cost"] = vqr::classical_cost(L, M);
            line.push_back(ratio);
            line.push_back(vqr::classical_cost(L, M));
            table.push_back(entry);
            csv.push_back(line);
        }
    }
    Eigen::MatrixXd rows(Eigen::Index(csv.size()), Eigen::Index(csv.empty() ? 0 : csv[0].size()));
    for (std::size_t r = 0; r < csv.size(); ++r) {
        for (std::size_t c = 0; c < csv[r].size(); ++c) {
            rows(Eigen::Index(r), Eigen::Index(c)) = csv[r][c];
        }
    }
    Json echo{{"command", "resources"},
              {"rows", a.rows},
              {"features", a.features},
              {"bits", a.bits},
              {"gate_model", a.gate_model}};
    Json doc{{"weights", nullptr},     {"standard_errors", nullptr}, {"t_stats", nullptr},
             {"cost", nullptr},        {"r_squared", nullptr},       {"config_echo", echo},
             {"details", Json{{"estimates", table}}}};
    const auto dir = output_dir(a.out_dir);
    vqr::save_results_json(dir / "resources.json", doc);
    vqr::save_matrix_csv(dir / "resources.csv",
                         {"rows", "features", "onehot_qubits", "onehot_gates", "onehot_shot_cost",
                          "compact_qubits", "compact_gates", "compact_shot_cost",
                          "memory_qubits", "memory_gates", "memory_shot_cost",
                          "shot_cost_ratio", "classical_cost"},
                         rows);
    report(dir / "resources.json");
    report(dir / "resources.csv");
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational quantum regression simulator"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic linear table as CSV");
    generate->add_option("--rows", gen.rows)->capture_default_str();
    generate->add_option("--features", gen.features, "Feature count (checked against --weights)");
    generate->add_option("--weights", gen.weights, "True weights, comma separated")
        ->required()
        ->delimiter(',');
    generate->add_option("--noise", gen.noise, "Relative per-row weight noise")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    generate->add_option("--seed", gen.seed)->capture_default_str();
    generate->add_option("--output", gen.output, "Output CSV path");
    generate->add_option("--output-dir", gen.out_dir);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Train one model");
    fit->add_option("--input", fit_args.input)->required();
    fit->add_option("--output-dir", fit_args.out_dir);
    fit_args.train.add_to(fit);

    EnsembleArgs ens;
    auto* ensemble = app.add_subcommand("ensemble", "Bootstrap ensemble training");
    ensemble->add_option("--input", ens.input)->required();
    ensemble->add_option("--output-dir", ens.out_dir);
    ensemble->add_option("--batches", ens.batches)->check(CLI::PositiveNumber)->capture_default_str();
    ensemble->add_option("--batch-size", ens.batch_size)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ensemble->add_option("--jobs", ens.jobs, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ensemble->add_option("--standard-error", ens.standard_error, "Ensemble error definition")
        ->check(CLI::IsMember({"batch-spread", "mean-of-batches"}))
        ->capture_default_str();
    ens.train.add_to(ensemble);

    SinArgs sin;
    auto* sin_demo = app.add_subcommand("sin-demo", "Power-series fit of sin(x)");
    sin_demo->add_option("--alpha,--l1", sin.demo.alpha_l1, "L1 penalty strength")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sin_demo->add_option("--records", sin.demo.records)->capture_default_str();
    sin_demo->add_option("--powers", sin.demo.max_power)->capture_default_str();
    sin_demo->add_option("--ansatz", sin.demo.ansatz_magnitude, "Starting odd-power magnitude")
        ->capture_default_str();
    sin_demo->add_option("--grid", sin.demo.grid_points)->capture_default_str();
    sin_demo->add_option("--data-seed", sin.demo.seed)->capture_default_str();
    sin_demo->add_option("--output-dir", sin.out_dir);
    sin_demo->add_option("--seed", sin.train.seed, "Optimizer seed; also reseeds the data when set");
    sin_demo->add_option("--max-restarts", sin.train.max_restarts)->capture_default_str();

    NoiseArgs noise;
    auto* noise_sweep = app.add_subcommand("noise-sweep", "Readout-error sweep at the null model");
    noise_sweep->add_option("--input", noise.input)->required();
    noise_sweep->add_option("--scheme", noise.scheme)
        ->check(CLI::IsMember({"one-hot", "compact"}))
        ->capture_default_str();
    noise_sweep->add_option("--deltas", noise.deltas)->delimiter(',')->capture_default_str();
    noise_sweep->add_option("--shots", noise.shots)->check(CLI::PositiveNumber)->capture_default_str();
    noise_sweep->add_option("--replications", noise.replications)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    noise_sweep->add_option("--bits", noise.bits, "Digitization bits per cell")
        ->check(CLI::Range(1, 52))
        ->capture_default_str();
    noise_sweep->add_option("--seed", noise.seed)->capture_default_str();
    noise_sweep->add_option("--output-dir", noise.out_dir);

    ShadowArgs shadow;
    auto* shadow_study = app.add_subcommand("shadow-study", "Pauli-shadow coverage study");
    shadow_study->add_option("--rows", shadow.rows)->capture_default_str();
    shadow_study->add_option("--features", shadow.features)->delimiter(',')->capture_default_str();
    shadow_study->add_option("--epsilon", shadow.epsilon)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    shadow_study->add_option("--constant", shadow.constant)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    shadow_study->add_option("--replications", shadow.replications)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    shadow_study->add_option("--seed", shadow.seed)->capture_default_str();
    shadow_study->add_option("--output-dir", shadow.out_dir);

    ResourceArgs res;
    auto* resources = app.add_subcommand("resources", "Gate, qubit and shot-cost tables");
    resources->add_option("--rows", res.rows)->delimiter(',')->capture_default_str();
    resources->add_option("--features", res.features)->delimiter(',')->capture_default_str();
    resources->add_option("--bits", res.bits, "Memory bits per cell")->capture_default_str();
    resources->add_option("--gate-model", res.gate_model)
        ->check(CLI::IsMember({"local-digital", "global-analog", "compiled-optimized"}))
        ->capture_default_str();
    resources->add_option("--output-dir", res.out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*generate) return run_generate(gen);
        if (*fit) return run_fit(fit_args);
        if (*ensemble) return run_ensemble(ens);
        if (*sin_demo) return run_sin_demo(sin);
        if (*noise_sweep) return run_noise_sweep(noise);
        if (*shadow_study) return run_shadow_study(shadow);
        if (*resources) return run_resources(res);
    } catch (const vqr::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const vqr::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    } catch (const vqr::TrainingError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kTraining;
    } catch (const NotConverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kTraining;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
