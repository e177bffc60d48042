#include "vqr/trainer.hpp"

#include "vqr/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace vqr {

std::string_view to_string(StopReason r) {
    switch (r) {
    case StopReason::FunctionSpread:
        return "function-spread";
    case StopReason::PointSpread:
        return "point-spread";
    case StopReason::IterationCap:
        return "iteration-cap";
    case StopReason::NonFinite:
        return "non-finite";
    }
    return "unknown";
}

std::string_view to_string(BackendKind k) {
    switch (k) {
    case BackendKind::Analytic:
        return "analytic";
    case BackendKind::CircuitExact:
        return "circuit-exact";
    case BackendKind::Shots:
        return "shots";
    }
    return "unknown";
}

NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& start,
                             const NelderMeadOptions& options) {
    if (!(options.tolerance_f > 0.0) || !(options.tolerance_x > 0.0)) {
        throw std::invalid_argument("Nelder-Mead tolerances must be positive");
    }
    const Eigen::Index n = start.size();
    if (n == 0) {
        throw std::invalid_argument("Nelder-Mead needs at least one variable");
    }
    NelderMeadResult out;
    std::vector<Eigen::VectorXd> x(std::size_t(n + 1), start);
    std::vector<double> fx(std::size_t(n + 1));
    auto eval = [&](const Eigen::VectorXd& p) {
        ++out.evaluations;
        return f(p);
    };
    auto non_finite = [&](const Eigen::VectorXd& p, double v) {
        out.point = p;
        out.value = v;
        out.reason = StopReason::NonFinite;
        return out;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        x[std::size_t(i + 1)][i] += options.initial_scale;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        fx[i] = eval(x[i]);
        if (!std::isfinite(fx[i])) {
            return non_finite(x[i], fx[i]);
        }
    }

    std::vector<std::size_t> order(x.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<Eigen::VectorXd> xs(x.size());
        std::vector<double> fs(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            xs[i] = std::move(x[order[i]]);
            fs[i] = fx[order[i]];
        }
        x = std::move(xs);
        fx = std::move(fs);
    };

    const std::size_t worst = std::size_t(n);
    while (true) {
        sort_simplex();
        if (fx[worst] - fx[0] < options.tolerance_f) {
            out.reason = StopReason::FunctionSpread;
            break;
        }
        double spread = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) {
            spread = std::max(spread, (x[i] - x[0]).cwiseAbs().maxCoeff());
        }
        if (spread < options.tolerance_x) {
            out.reason = StopReason::PointSpread;
            break;
        }
        if (out.iterations >= options.max_iterations) {
            out.reason = StopReason::IterationCap;
            break;
        }
        ++out.iterations;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < worst; ++i) {
            centroid += x[i];
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + (centroid - x[worst]);
        const double fr = eval(xr);
        if (!std::isfinite(fr)) {
            return non_finite(xr, fr);
        }
        if (fr < fx[0]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (xr - centroid);
            const double fe = eval(xe);
            if (!std::isfinite(fe)) {
                return non_finite(xe, fe);
            }
            if (fe < fr) {
                x[worst] = xe;
                fx[worst] = fe;
            } else {
                x[worst] = xr;
                fx[worst] = fr;
            }
            continue;
        }
        if (fr < fx[worst - 1]) {
            x[worst] = xr;
            fx[worst] = fr;
            continue;
        }
        const bool outside = fr < fx[worst];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                           : Eigen::VectorXd(centroid + 0.5 * (x[worst] - centroid));
        const double fc = eval(xc);
        if (!std::isfinite(fc)) {
            return non_finite(xc, fc);
        }
        if (outside ? fc <= fr : fc < fx[worst]) {
            x[worst] = xc;
            fx[worst] = fc;
            continue;
        }
        for (std::size_t i = 1; i < x.size(); ++i) {
            x[i] = x[0] + 0.5 * (x[i] - x[0]);
            fx[i] = eval(x[i]);
            if (!std::isfinite(fx[i])) {
                return non_finite(x[i], fx[i]);
            }
        }
    }
    out.point = x[0];
    out.value = fx[0];
    return out;
}

RestartResult minimize_with_restarts(const Objective& f, const Eigen::VectorXd& start,
                                     const RestartOptions& options) {
    RestartResult out;
    NelderMeadOptions nm = options.nm;
    out.best = nelder_mead(f, start, nm);
    out.total_iterations = out.best.iterations;
    for (std::size_t r = 0; r < options.max_restarts; ++r) {
        if (out.best.reason == StopReason::NonFinite) {
            return out;
        }
        nm.initial_scale *= 0.5;
        auto next = nelder_mead(f, out.best.point, nm);
        ++out.restarts_used;
        out.total_iterations += next.iterations;
        const double previous = out.best.value;
        const bool non_finite = next.reason == StopReason::NonFinite;
        if (non_finite || next.value <= previous) {
            out.best = std::move(next);
        }
        if (non_finite) {
            return out;
        }
        if (std::abs(previous - out.best.value) < options.nm.tolerance_f) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

PhaseVector cosines_to_phases(const Eigen::VectorXd& cosines) {
    PhaseVector p;
    p.phis.reserve(std::size_t(cosines.size()));
    for (Eigen::Index m = 0; m < cosines.size(); ++m) {
        p.phis.push_back(std::acos(std::clamp(cosines[m], -1.0, 1.0)));
    }
    return p;
}

CostEvaluator::CostEvaluator(const StandardizedTable& table, const CostBackend& backend,
                             std::uint64_t seed)
    : table_(&table), backend_(backend), seed_(seed) {
    if (backend.kind == BackendKind::Analytic) {
        gram_ = table.values.transpose() * table.values;
        return;
    }
    if (backend.scheme == EncodingScheme::OneHot) {
        prepared_ = prepare_one_hot_chain(table);
    } else {
        prepared_ = prepare_exact(table, EncodingScheme::CompactBinary);
    }
}

double CostEvaluator::operator()(const Eigen::VectorXd& cosines) {
    const std::size_t index = evaluations_++;
    if (backend_.kind == BackendKind::Analytic) {
        return cosines.dot(gram_ * cosines);
    }
    const PhaseVector phases = cosines_to_phases(cosines);
    if (backend_.kind == BackendKind::CircuitExact) {
        return exact_expectation(apply_regression_map(*prepared_, phases).psi0, prepared_->layout);
    }
    const StateVector pre = regression_pre_projection(*prepared_, phases);
    const std::uint64_t seed = derive_seed(seed_, index);
    if (backend_.scheme == EncodingScheme::OneHot) {
        return shot_estimate_one_hot(pre, prepared_->layout, backend_.shots, backend_.readout_delta,
                                     seed)
            .value;
    }
    return shot_estimate_compact(pre, prepared_->layout, backend_.shots, backend_.readout_delta,
                                 seed)
        .value;
}

namespace {

void check_config(const TrainConfig& config, const RegularizationParams& reg) {
    if (!(config.nm_tolerance_f > 0.0) || !(config.nm_tolerance_x > 0.0)) {
        throw std::invalid_argument("optimizer tolerances must be positive");
    }
    if (!(reg.alpha_l1 >= 0.0) || !(reg.beta_l2 >= 0.0)) {
        throw std::invalid_argument("regularization strengths must be non-negative");
    }
    if (!(config.initial_simplex_scale > 0.0)) {
        throw std::invalid_argument("initial simplex scale must be positive");
    }
}

} // namespace

FitResult fit(const StandardizedTable& table, const RegularizationParams& reg,
              const TrainConfig& config) {
    check_config(config, reg);
    const auto M = static_cast<Eigen::Index>(table.features());
    const bool fixed = config.fix_c0_to_minus_one;

    Eigen::VectorXd start_w = Eigen::VectorXd::Zero(M);
    if (config.initial_weights) {
        if (config.initial_weights->size() != std::size_t(M)) {
            throw std::invalid_argument("initial weights need one entry per feature");
        }
        start_w = table.to_standardized_weights(
            Eigen::Map<const Eigen::VectorXd>(config.initial_weights->data(), M));
    }

    // Optimization variables: c_1..c_M, preceded by c_0 when it is free.
    auto full_cosines = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd c(M + 1);
        if (fixed) {
            c[0] = -1.0;
            c.tail(M) = v;
        } else {
            c = v;
        }
        return c;
    };
    auto std_weights = [&](const Eigen::VectorXd& c) -> Eigen::VectorXd {
        return -c.tail(M) / c[0];
    };

    Eigen::VectorXd start(fixed ? M : M + 1);
    if (fixed) {
        start = start_w;
    } else {
        start[0] = -1.0;
        start.tail(M) = start_w;
    }

    CostEvaluator cost(table, config.cost_backend, config.seed);
    const Objective objective = [&](const Eigen::VectorXd& v) {
        const Eigen::VectorXd c = full_cosines(v);
        double value = cost(c);
        if (reg.alpha_l1 > 0.0 || reg.beta_l2 > 0.0) {
            const Eigen::VectorXd w = std_weights(c);
            value += reg.alpha_l1 * w.lpNorm<1>() + reg.beta_l2 * w.squaredNorm();
        }
        return value;
    };

    RestartOptions opts;
    opts.nm.tolerance_f = config.nm_tolerance_f;
    opts.nm.tolerance_x = config.nm_tolerance_x;
    opts.nm.max_iterations = config.max_iterations_per_restart;
    opts.nm.initial_scale = config.initial_simplex_scale;
    opts.max_restarts = config.max_restarts;
    const RestartResult rr = minimize_with_restarts(objective, start, opts);

    const Eigen::VectorXd c = full_cosines(rr.best.point);
    if (!std::isfinite(rr.best.value)) {
        throw TrainingError("objective became non-finite during training");
    }
    if (std::abs(c[0]) <= 1e-9) {
        throw TrainingError("cos(phi_0) vanished during training");
    }

    FitResult out;
    out.phases = cosines_to_phases(c);
    const Eigen::VectorXd w_std = std_weights(c);
    out.standardized_weights.weights.assign(w_std.data(), w_std.data() + M);
    const Eigen::VectorXd w = table.to_original_weights(w_std);
    out.weights.weights.assign(w.data(), w.data() + M);
    out.intercept = table.column_means[0] - w.dot(table.column_means.tail(M));
    out.objective = rr.best.value;
    out.cost = cost(c);
    // Shots backends re-evaluate on a fresh stream; use the exact penalty split.
    const double penalty =
        reg.alpha_l1 * w_std.lpNorm<1>() + reg.beta_l2 * w_std.squaredNorm();
    if (config.cost_backend.kind != BackendKind::Shots) {
        out.cost = out.objective - penalty;
    }
    out.C0 = c[0] * c[0] / (1.0 + table.F);
    out.r_squared = 1.0 - out.cost / out.C0;
    out.restarts_used = rr.restarts_used;
    out.iterations = rr.total_iterations;
    out.converged = rr.converged;
    return out;
}

FitResult fit(const RawTable& raw, const RegularizationParams& reg, const TrainConfig& config) {
    return fit(standardize(raw, config.equalize_columns), reg, config);
}

Eigen::VectorXd predict(const FitResult& fit, const Eigen::MatrixXd& features) {
    const auto M = static_cast<Eigen::Index>(fit.weights.weights.size());
    if (features.cols() != M) {
        throw std::invalid_argument("feature matrix has the wrong number of columns");
    }
    const Eigen::Map<const Eigen::VectorXd> w(fit.weights.weights.data(), M);
    return (features * w).array() + fit.intercept;
}

// ---------------------------------------------------------------------------

EnsembleResult fit_ensemble(const RawTable& raw, const BootstrapPlan& plan,
                            const RegularizationParams& reg, const TrainConfig& config,
                            std::size_t jobs, StandardErrorKind se_kind) {
    raw.validate();
    if (plan.num_batches == 0 || plan.batch_size == 0) {
        throw std::invalid_argument("bootstrap plan needs batches and rows");
    }
    const std::size_t M = raw.features();
    struct Slot {
        std::optional<FitResult> fit;
        std::string error;
    };
    std::vector<Slot> slots(plan.num_batches);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b = next++; b < plan.num_batches; b = next++) {
            try {
                const RawTable batch = take_rows(raw, bootstrap_indices(raw.rows(), plan, b));
                TrainConfig cfg = config;
                cfg.seed = derive_seed(config.seed, b);
                slots[b].fit = fit(batch, reg, cfg);
            } catch (const std::exception& e) {
                slots[b].error = e.what();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, plan.num_batches);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back(worker);
        }
    }

    EnsembleResult out;
    out.batch_size = plan.batch_size;
    out.num_batches = plan.num_batches;
    out.standard_error_kind = se_kind;
    std::vector<const FitResult*> ok;
    for (std::size_t b = 0; b < slots.size(); ++b) {
        if (slots[b].fit) {
            ok.push_back(&*slots[b].fit);
            out.batch_ids.push_back(b);
        } else {
            out.failures.push_back({b, slots[b].error});
        }
    }
    const auto n = static_cast<Eigen::Index>(ok.size());
    out.per_batch_weights.resize(n, Eigen::Index(M));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < M; ++m) {
            out.per_batch_weights(i, Eigen::Index(m)) = ok[std::size_t(i)]->weights.weights[m];
        }
        out.mean_cost += ok[std::size_t(i)]->cost;
        out.mean_r_squared += ok[std::size_t(i)]->r_squared;
    }
    out.t_stats.assign(M, std::nullopt);
    if (n == 0) {
        out.mean_weights.assign(M, std::nan(""));
        out.mean_cost = std::nan("");
        out.mean_r_squared = std::nan("");
        return out;
    }
    out.mean_cost /= double(n);
    out.mean_r_squared /= double(n);
    const Eigen::VectorXd mean = out.per_batch_weights.colwise().mean().transpose();
    out.mean_weights.assign(mean.data(), mean.data() + M);
    if (n >= 2) {
        std::vector<double> se(M);
        for (std::size_t m = 0; m < M; ++m) {
            const auto col = out.per_batch_weights.col(Eigen::Index(m));
            se[m] = std::sqrt((col.array() - mean[Eigen::Index(m)]).square().sum() / double(n - 1));
            if (se_kind == StandardErrorKind::MeanOfBatches) {
                se[m] /= std::sqrt(double(n));
            }
            if (se[m] > 0.0) {
                out.t_stats[m] = mean[Eigen::Index(m)] / se[m];
            }
        }
        out.std_errors = std::move(se);
    }
    return out;
}

std::string_view to_string(StandardErrorKind k) {
    return k == StandardErrorKind::BatchSpread ? "batch-spread" : "mean-of-batches";
}

StandardErrorKind parse_standard_error_kind(std::string_view s) {
    for (auto k : {StandardErrorKind::BatchSpread, StandardErrorKind::MeanOfBatches}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw std::invalid_argument("unknown standard error kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------

SinDemoResult fit_nonlinear_sin_demo(const SinDemoConfig& config) {
    if (config.records < 2 || config.max_power == 0 || config.grid_points < 2) {
        throw std::invalid_argument("sin demo needs records, powers and grid points");
    }
    Rng rng(config.seed);
    Eigen::VectorXd x(Eigen::Index(config.records));
    for (auto& v : x) {
        v = rng.uniform(-1.0, 1.0);
    }
    const Eigen::MatrixXd powers = build_power_features(x, config.max_power);

    SinDemoResult out;
    out.training.values.resize(x.size(), powers.cols() + 1);
    out.training.values.col(0) = x.array().sin();
    out.training.values.rightCols(powers.cols()) = powers;
    out.training.column_names.push_back("y");
    for (std::size_t p = 1; p <= config.max_power; ++p) {
        out.training.column_names.push_back("x" + std::to_string(p));
    }

    TrainConfig train = config.train;
    std::vector<double> ansatz(config.max_power, 0.0);
    for (std::size_t p = 1, k = 0; p <= config.max_power; p += 2, ++k) {
        ansatz[p - 1] = (k % 2 == 0 ? 1.0 : -1.0) * config.ansatz_magnitude;
    }
    train.initial_weights = ansatz;
    out.fit = fit(out.training, RegularizationParams{config.alpha_l1, 0.0}, train);

    Eigen::VectorXd grid =
        Eigen::VectorXd::LinSpaced(Eigen::Index(config.grid_points), -1.0, 1.0);
    const Eigen::VectorXd prediction = predict(out.fit, build_power_features(grid, config.max_power));
    out.curve.resize(grid.size(), 3);
    out.curve.col(0) = grid;
    out.curve.col(1) = prediction;
    out.curve.col(2) = grid.array().sin();
    out.max_abs_error = (out.curve.col(1) - out.curve.col(2)).cwiseAbs().maxCoeff();
    return out;
}

} // namespace vqr
