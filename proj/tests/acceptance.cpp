#include "vqr/measurement.hpp"
#include "vqr/regression.hpp"
#include "vqr/resources.hpp"
#include "vqr/rng.hpp"
#include "vqr/trainer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

using namespace vqr;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

RawTable uniform_table(Rng& rng, std::size_t rows, std::size_t features) {
    RawTable raw;
    raw.values.resize(Eigen::Index(rows), Eigen::Index(features + 1));
    for (Eigen::Index r = 0; r < raw.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < raw.values.cols(); ++c) {
            raw.values(r, c) = rng.uniform(-1.0, 1.0);
        }
    }
    return raw;
}

PhaseVector random_phases(Rng& rng, std::size_t features) {
    PhaseVector p;
    for (std::size_t m = 0; m <= features; ++m) {
        p.phis.push_back(rng.uniform(0.0, 2 * kPi));
    }
    return p;
}

/// Least-squares slope and intercept of y on x.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double b = sxy / sxx;
    return {b, my - b * mx};
}

RawTable synthetic(std::vector<double> w, double noise, std::uint64_t seed) {
    SyntheticSpec s;
    s.rows = 1024;
    s.true_weights = std::move(w);
    s.noise_std = noise;
    s.seed = seed;
    return generate_linear_synthetic(s);
}

const std::vector<std::size_t> kBatchSizes{10, 20, 40, 60, 100, 150};
const std::vector<double> kTruth{1, 2, 3, 4, 5, 6};

Outcome equivalence() {
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t L = 2 + rng.uniform_index(3);
        const std::size_t M = 1 + rng.uniform_index(3);
        const auto t = standardize(uniform_table(rng, L, M), rng.bernoulli(0.5));
        const auto phases = random_phases(rng, M);
        const double analytic = analytic_cost(t, phases);
        for (const auto& prep : {prepare_one_hot_chain(t), prepare_exact(t, EncodingScheme::CompactBinary)}) {
            const auto psi0 = apply_regression_map(prep, phases).psi0;
            worst = std::max(worst, std::abs(exact_expectation(psi0, prep.layout) - analytic));
        }
    }
    return {worst <= 1e-9, fmt("200 tables x 2 encodings, max |circuit - analytic| = %.2e", worst)};
}

Outcome operator_identity() {
    double worst = 0.0;
    double candidate = std::numeric_limits<double>::infinity();
    std::size_t cases = 0;
    for (std::size_t L = 1; L <= 12; ++L) {
        for (std::size_t M = 1; L * (M + 1) <= 12; ++M) {
            const auto r = operator_identity_check(L, M);
            worst = std::max(worst, r.deviation_m_plus_one);
            candidate = std::min(candidate, r.deviation_identity_plus_m);
            ++cases;
        }
    }
    const auto a = required_shots(0.2, 3, 0.01, 0.05, VarianceFormula::OperatorDerived);
    const auto b = required_shots(0.2, 3, 0.01, 0.05, VarianceFormula::IdentityPlusM);
    return {worst <= 1e-12,
            fmt("%zu shapes, max |M^2-(M+1)M| = %.1e, min |M^2-(I+M M)| = %.3f; "
                "shots at C=0.2 M=3 eps=0.01: operator-derived %zu, identity-plus-m %zu",
                cases, worst, candidate, a.required_shots, b.required_shots)};
}

struct EnsembleRow {
    std::size_t batch = 0;
    EnsembleResult result;
};

std::vector<EnsembleRow> ensemble_sweep(double noise) {
    const auto raw = synthetic(kTruth, noise, 11);
    TrainConfig cfg;
    cfg.seed = 5;
    std::vector<EnsembleRow> rows;
    for (std::size_t bs : kBatchSizes) {
        rows.push_back({bs, fit_ensemble(raw, BootstrapPlan{1024, bs, 99}, {}, cfg, 8)});
    }
    return rows;
}

Outcome noise_free_recovery() {
    const auto rows = ensemble_sweep(0.0);
    bool ok = true;
    double worst_z = 0.0;
    double min_t = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        ok = ok && r.result.failures.empty() && r.result.std_errors;
        for (std::size_t m = 0; m < kTruth.size(); ++m) {
            const double se = (*r.result.std_errors)[m];
            const double z = std::abs(r.result.mean_weights[m] - kTruth[m]) / se;
            worst_z = std::max(worst_z, z);
            min_t = std::min(min_t, r.result.t_stats[m].value_or(0.0));
            ok = ok && z <= 3.0 && r.result.t_stats[m].value_or(0.0) > 10.0;
        }
    }
    return {ok, fmt("6 batch sizes x 1024 batches, max |W-W_true|/SE = %.2f, min t = %.3g", worst_z, min_t)};
}

Outcome noise_robustness() {
    const auto rows = ensemble_sweep(0.1);
    bool ok = true;
    double worst_z = 0.0;
    for (const auto& r : rows) {
        ok = ok && r.result.failures.empty() && r.result.std_errors;
        if (r.batch < 60) {
            continue;
        }
        for (std::size_t m = 0; m < kTruth.size(); ++m) {
            const double z = std::abs(r.result.mean_weights[m] - kTruth[m]) / (*r.result.std_errors)[m];
            worst_z = std::max(worst_z, z);
            ok = ok && z <= 3.0;
        }
    }
    double worst_ratio = 0.0;
    for (std::size_t m = 0; m < kTruth.size(); ++m) {
        const double ratio = (*rows.back().result.std_errors)[m] / (*rows.front().result.std_errors)[m];
        worst_ratio = std::max(worst_ratio, ratio);
        ok = ok && ratio < 1.0;
    }
    return {ok, fmt("batch >= 60 max |W-W_true|/SE = %.2f, max SE(150)/SE(10) = %.3f", worst_z, worst_ratio)};
}

Outcome sin_demo() {
    const auto r = fit_nonlinear_sin_demo(SinDemoConfig{});
    const auto& w = r.fit.weights.weights;
    double max_even = 0.0;
    for (std::size_t p = 2; p <= w.size(); p += 2) {
        max_even = std::max(max_even, std::abs(w[p - 1]));
    }
    const bool ok = w[0] >= 0.98 && w[0] <= 1.02 && w[2] >= -0.18 && w[2] <= -0.15 &&
                    max_even < 0.01 && r.max_abs_error < 1e-2;
    return {ok, fmt("W1 = %.5f, W3 = %.5f, max even |W| = %.2e, max |y-sin x| = %.2e", w[0], w[2],
                    max_even, r.max_abs_error)};
}

struct ShotStudy {
    double slope = 0.0;
    double worst_bias_sigma = 0.0;
};

ShotStudy shot_study(double exact, const std::function<CostEstimate(std::size_t, std::uint64_t)>& estimate) {
    const int reps = 200;
    std::vector<double> logn;
    std::vector<double> logsd;
    ShotStudy s;
    for (std::size_t shots : {1000, 10000, 100000, 1000000}) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int r = 0; r < reps; ++r) {
            const double v = estimate(shots, derive_seed(shots, std::uint64_t(r))).value;
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / reps;
        const double sd = std::sqrt((sum_sq - reps * mean * mean) / (reps - 1));
        logn.push_back(std::log10(double(shots)));
        logsd.push_back(std::log10(sd));
        s.worst_bias_sigma = std::max(s.worst_bias_sigma, std::abs(mean - exact) / (sd / std::sqrt(reps)));
    }
    s.slope = line_fit(logn, logsd).first;
    return s;
}

Outcome shot_convergence() {
    Rng rng(606);
    const auto oh_table = standardize(uniform_table(rng, 2, 1), true);
    const auto oh = prepare_one_hot_chain(oh_table);
    const auto oh_phases = random_phases(rng, 1);
    const auto oh_pre = regression_pre_projection(oh, oh_phases);
    const double oh_exact = analytic_cost(oh_table, oh_phases);

    const auto c_table = standardize(uniform_table(rng, 4, 3), true);
    const auto c = prepare_exact(c_table, EncodingScheme::CompactBinary);
    const auto c_phases = random_phases(rng, 3);
    const auto c_pre = regression_pre_projection(c, c_phases);
    const double c_exact = analytic_cost(c_table, c_phases);

    const auto a = shot_study(oh_exact, [&](std::size_t n, std::uint64_t seed) {
        return shot_estimate_one_hot(oh_pre, oh.layout, n, 0.0, seed);
    });
    const auto b = shot_study(c_exact, [&](std::size_t n, std::uint64_t seed) {
        return shot_estimate_compact(c_pre, c.layout, n, 0.0, seed);
    });
    const bool ok = std::abs(a.slope + 0.5) <= 0.05 && std::abs(b.slope + 0.5) <= 0.05 &&
                    a.worst_bias_sigma <= 3.0 && b.worst_bias_sigma <= 3.0;
    return {ok, fmt("one-hot slope %.3f bias %.2f sigma; compact slope %.3f bias %.2f sigma", a.slope,
                    a.worst_bias_sigma, b.slope, b.worst_bias_sigma)};
}

/// First-order coefficient of a quadratic fit of the exact noisy mean over
/// delta in {0, 0.0025, 0.005, 0.01, 0.02}.
double readout_slope(const StateVector& pre, const EncodingLayout& layout) {
    const std::vector<double> deltas{0.0, 0.0025, 0.005, 0.01, 0.02};
    Eigen::MatrixXd A(Eigen::Index(deltas.size()), 3);
    Eigen::VectorXd y(Eigen::Index(deltas.size()));
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double d = deltas[i];
        A.row(Eigen::Index(i)) << 1.0, d, d * d;
        y[Eigen::Index(i)] = expected_noisy_estimate(pre, layout, d);
    }
    return A.colPivHouseholderQr().solve(y)[1];
}

Outcome readout_law() {
    SyntheticSpec spec;
    spec.rows = 4;
    spec.true_weights = {1, 2, 3};
    spec.noise_std = 0.1;
    spec.seed = 3;
    const auto t = standardize(generate_linear_synthetic(spec), true);
    const PhaseVector null_model{{kPi, kPi / 2, kPi / 2, kPi / 2}};

    const auto oh = prepare_one_hot_chain(t);
    const auto oh_pre = regression_pre_projection(oh, null_model);
    const double oh_c = expected_noisy_estimate(oh_pre, oh.layout, 0.0);
    const double oh_slope = readout_slope(oh_pre, oh.layout);
    const double oh_count = double(t.rows() * (t.features() + 1));

    const auto c = prepare_exact(t, EncodingScheme::CompactBinary);
    const auto c_pre = regression_pre_projection(c, null_model);
    const double c_c = expected_noisy_estimate(c_pre, c.layout, 0.0);
    const double c_slope = readout_slope(c_pre, c.layout);
    const double c_count = double(c.layout.data_qubits + 1);

    const double oh_rel = std::abs(oh_slope / (-oh_count * oh_c) - 1.0);
    const double c_rel = std::abs(c_slope / (-c_count * c_c) - 1.0);
    const double ratio = oh_slope / c_slope;
    const double ratio_rel = std::abs(ratio / (oh_count / c_count) - 1.0);
    const bool ok = oh_rel <= 0.1 && c_rel <= 0.1 && ratio_rel <= 0.1;
    return {ok, fmt("C=C0=%.4f; one-hot slope %.3fC vs -%.0fC (off %.1f%%); compact slope %.3fC vs "
                    "-%.0fC (off %.1f%%); slope ratio %.1f vs %.1f",
                    oh_c, oh_slope / oh_c, oh_count, 100 * oh_rel, c_slope / c_c, c_count,
                    100 * c_rel, ratio, oh_count / c_count)};
}

Outcome shadow_coverage() {
    const double eps = 0.05;
    bool ok = true;
    std::string detail;
    std::vector<double> variances;
    for (std::size_t M : {1, 3}) {
        SyntheticSpec s;
        s.rows = 4;
        s.true_weights = std::vector<double>(M, 1.0);
        s.noise_std = 0.3;
        s.seed = 8;
        const auto t = standardize(generate_linear_synthetic(s), true);
        const auto prep = prepare_exact(t, EncodingScheme::CompactBinary);
        Rng rng(4);
        PhaseVector phases;
        for (std::size_t m = 0; m <= M; ++m) {
            phases.phis.push_back(rng.uniform(0.0, kPi));
        }
        const auto psi0 = apply_regression_map(prep, phases).psi0;
        const double exact = exact_expectation(psi0, prep.layout);
        const std::size_t k = prep.layout.col_qubits;
        const std::size_t n = shadow_snapshot_budget(k, eps, 1.0);
        int hits = 0;
        for (int r = 0; r < 100; ++r) {
            ShadowConfig cfg;
            cfg.snapshots = n;
            cfg.seed = 1000 + std::uint64_t(r);
            hits += std::abs(pauli_shadow_estimate(psi0, prep.layout, cfg).value - exact) <= eps;
        }
        ok = ok && hits >= 95;

        const auto unit = renormalized(psi0);
        const int reps = 400;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int r = 0; r < reps; ++r) {
            ShadowConfig cfg;
            cfg.snapshots = 2000;
            cfg.groups = 1;
            cfg.seed = 5000 + std::uint64_t(r);
            const double v = pauli_shadow_estimate(unit, prep.layout, cfg).value;
            sum += v;
            sum_sq += v * v;
        }
        variances.push_back((sum_sq - sum * sum / reps) / (reps - 1));
        detail += fmt("N_M=%zu: %zu snapshots, coverage %d/100; ", k, n, hits);
    }
    const double ratio = variances[1] / variances[0];
    ok = ok && ratio >= 2.0 && ratio <= 8.0;
    return {ok, detail + fmt("variance ratio %.2f (expected 4, band [2, 8])", ratio)};
}

Outcome gradient_check() {
    Rng rng(909);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t L = 2 + rng.uniform_index(7);
        const std::size_t M = 1 + rng.uniform_index(5);
        const auto t = standardize(uniform_table(rng, L, M), true);
        const auto phases = random_phases(rng, M);
        const auto g = analytic_gradient(t, phases);
        for (std::size_t m = 0; m <= M; ++m) {
            auto plus = phases;
            auto minus = phases;
            plus.phis[m] += h;
            minus.phis[m] -= h;
            const double fd = (analytic_cost(t, plus) - analytic_cost(t, minus)) / (2 * h);
            worst = std::max(worst, std::abs(g[m] - fd) / std::max(1.0, std::abs(fd)));
        }
    }

    std::vector<double> logm;
    std::vector<double> logg;
    for (std::size_t M : {2, 4, 8, 16}) {
        Rng data(derive_seed(17, M));
        RawTable raw;
        raw.values.resize(64, Eigen::Index(M + 1));
        for (Eigen::Index l = 0; l < 64; ++l) {
            const double u = data.uniform(-1.0, 1.0);
            raw.values(l, 0) = u;
            for (Eigen::Index m = 1; m <= Eigen::Index(M); ++m) {
                raw.values(l, m) = u + 0.1 * data.normal();
            }
        }
        const auto t = standardize(raw, true);
        PhaseVector null_model{{kPi}};
        null_model.phis.resize(M + 1, kPi / 2);
        const auto g = analytic_gradient(t, null_model);
        double mean_abs = 0.0;
        for (std::size_t m = 1; m <= M; ++m) {
            mean_abs += std::abs(g[m]) / double(M);
        }
        logm.push_back(std::log(double(M + 1)));
        logg.push_back(std::log(mean_abs));
    }
    const double decay = line_fit(logm, logg).first;
    const bool ok = worst <= 1e-6 && std::abs(decay + 1.0) <= 0.1;
    return {ok, fmt("100 instances max rel FD error %.2e; log|grad| vs log(M+1) slope %.3f", worst, decay)};
}

Outcome metrics() {
    Rng rng(1010);
    bool ok = true;
    double worst_c0 = 0.0;
    for (std::size_t M = 1; M <= 8; ++M) {
        const auto t = standardize(uniform_table(rng, 20, M), true);
        worst_c0 = std::max(worst_c0, std::abs(t.C0 - 1.0 / double(M + 1)));
        PhaseVector p{{kPi}};
        p.phis.resize(M + 1, 1.0);
        const double c0 = model_metrics(0.0, t, p).C0;
        ok = ok && model_metrics(0.0, t, p).R2 == 1.0 && model_metrics(c0, t, p).R2 == 0.0 &&
             model_metrics(4.0 * c0, t, p).R2 == -3.0;
    }
    ok = ok && worst_c0 <= 1e-10;
    return {ok, fmt("R2 at C = 0, C0, 4C0 exact for M = 1..8: %s; max |C0 - 1/(1+M)| = %.1e",
                    ok ? "yes" : "no", worst_c0)};
}

Outcome resource_growth() {
    std::vector<double> logs;
    std::vector<double> ratios;
    for (std::uint64_t L = 16; L <= 1024; L *= 2) {
        logs.push_back(std::log2(double(L * 3)));
        ratios.push_back(shot_cost_ratio(L, 3, GateModel::GlobalAnalog));
    }
    const auto [b, a] = line_fit(logs, ratios);
    double worst = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        worst = std::max(worst, std::abs(a + b * logs[i] - ratios[i]) / ratios[i]);
    }
    const bool ok = b > 0.0 && worst < 0.15 && ratios.back() > ratios.front();
    return {ok, fmt("ratio %.2f -> %.2f over L = 16..1024 (M = 3); log fit slope %.3f, max residual %.1f%%",
                    ratios.front(), ratios.back(), b, 100 * worst)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"quantum-classical equivalence", equivalence},
        {"operator identity", operator_identity},
        {"noise-free recovery", noise_free_recovery},
        {"gaussian-noise robustness", noise_robustness},
        {"sin(x) demo", sin_demo},
        {"shot-estimator convergence", shot_convergence},
        {"readout-error law", readout_law},
        {"pauli-shadow coverage", shadow_coverage},
        {"gradient check", gradient_check},
        {"model metrics", metrics},
        {"resource growth", resource_growth},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %2zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), o.detail.c_str(), sec);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
