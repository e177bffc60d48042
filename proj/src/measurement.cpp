#include "vqr/measurement.hpp"

#include "vqr/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace vqr {

std::string_view to_string(EstimatorKind k) {
    switch (k) {
    case EstimatorKind::Exact:
        return "exact";
    case EstimatorKind::GroupedPauliShots:
        return "grouped-pauli-shots";
    case EstimatorKind::CompactXBasisShots:
        return "compact-x-basis-shots";
    case EstimatorKind::PauliShadows:
        return "pauli-shadows";
    }
    return "unknown";
}

namespace {

void check_layout(const StateVector& s, const EncodingLayout& layout) {
    if (s.num_qubits() != layout.num_qubits()) {
        throw std::invalid_argument("state has " + std::to_string(s.num_qubits()) +
                                    " qubits, layout expects " +
                                    std::to_string(layout.num_qubits()));
    }
}

} // namespace

double exact_expectation(const StateVector& psi0, const EncodingLayout& layout) {
    check_layout(psi0, layout);
    const auto amps = psi0.amplitudes();
    double total = 0.0;
    if (layout.scheme == EncodingScheme::OneHot) {
        for (std::uint64_t anc = 0; anc < 2; ++anc) {
            const std::uint64_t anc_bits = anc << layout.ancilla.index;
            for (std::size_t l = 0; l < layout.rows; ++l) {
                Complex row_sum{0.0, 0.0};
                for (std::size_t m = 0; m < layout.cols; ++m) {
                    row_sum += amps[layout.code_index(l, m) | anc_bits];
                }
                total += std::norm(row_sum);
            }
        }
        return total;
    }
    const std::uint64_t col_mask = (std::uint64_t{1} << layout.col_qubits) - 1;
    for (std::uint64_t base = 0; base < amps.size(); ++base) {
        if (base & col_mask) {
            continue;
        }
        Complex row_sum{0.0, 0.0};
        for (std::size_t m = 0; m < layout.cols; ++m) {
            row_sum += amps[base | m];
        }
        total += std::norm(row_sum);
    }
    return total;
}

OperatorIdentityReport operator_identity_check(std::size_t rows, std::size_t features) {
    const std::size_t cols = features + 1;
    const std::size_t dim = rows * cols;
    if (rows == 0 || dim > 12) {
        throw std::invalid_argument("operator identity check supports L (M+1) <= 12");
    }
    OperatorIdentityReport r;
    r.op = Eigen::MatrixXd::Zero(Eigen::Index(dim), Eigen::Index(dim));
    for (std::size_t l = 0; l < rows; ++l) {
        r.op.block(Eigen::Index(l * cols), Eigen::Index(l * cols), Eigen::Index(cols),
                   Eigen::Index(cols))
            .setOnes();
    }
    r.squared = r.op * r.op;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(Eigen::Index(dim), Eigen::Index(dim));
    const double M = static_cast<double>(features);
    r.deviation_identity_plus_m = (r.squared - (id + M * r.op)).cwiseAbs().maxCoeff();
    r.deviation_m_plus_one = (r.squared - (M + 1.0) * r.op).cwiseAbs().maxCoeff();
    r.eigenvalues = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.op).eigenvalues();
    return r;
}

namespace {

std::size_t measured_qubits(const EncodingLayout& layout) { return layout.data_qubits + 1; }

std::uint64_t low_mask(const EncodingLayout& layout) {
    return (std::uint64_t{1} << measured_qubits(layout)) - 1;
}

StateVector rotate_compact_columns(StateVector s, const EncodingLayout& layout) {
    for (std::size_t b = 0; b < layout.col_qubits; ++b) {
        s = apply_hadamard(std::move(s), layout.col_qubit(b));
    }
    return s;
}

enum class OneHotSetting { Computational, AllX, AllY };

StateVector rotate_one_hot(StateVector s, const EncodingLayout& layout, OneHotSetting setting) {
    if (setting == OneHotSetting::Computational) {
        return s;
    }
    for (std::size_t q = 0; q < layout.data_qubits; ++q) {
        if (setting == OneHotSetting::AllY) {
            s = apply_sdg(std::move(s), QubitIndex{q});
        }
        s = apply_hadamard(std::move(s), QubitIndex{q});
    }
    return s;
}

// Per-shot value of a measured pattern (ancilla and data bits only).
double compact_value(std::uint64_t pattern, const EncodingLayout& layout) {
    const std::uint64_t col_mask = (std::uint64_t{1} << layout.col_qubits) - 1;
    const bool anc = (pattern >> layout.ancilla.index) & 1U;
    return (!anc && (pattern & col_mask) == 0) ? std::ldexp(1.0, int(layout.col_qubits)) : 0.0;
}

double one_hot_value(std::uint64_t pattern, const EncodingLayout& layout, OneHotSetting setting) {
    if ((pattern >> layout.ancilla.index) & 1U) {
        return 0.0;
    }
    const std::uint64_t data = pattern & ((std::uint64_t{1} << layout.data_qubits) - 1);
    if (setting == OneHotSetting::Computational) {
        return std::popcount(data) == 1 ? 1.0 : 0.0;
    }
    // sum_{j<k in row} x_j x_k = (s^2 - n) / 2 with s = sum of +-1 outcomes.
    const double n = static_cast<double>(layout.cols);
    double v = 0.0;
    for (std::size_t l = 0; l < layout.rows; ++l) {
        const std::uint64_t row_bits = (data >> (l * layout.cols)) & ((std::uint64_t{1} << layout.cols) - 1);
        const double s = n - 2.0 * std::popcount(row_bits);
        v += (s * s - n) / 4.0;
    }
    return v;
}

struct SampleStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased, of single-shot values
};

template <class ValueFn>
SampleStats sample_setting(const StateVector& rotated, const EncodingLayout& layout,
                           std::size_t shots, double delta, Rng& rng, ValueFn&& value) {
    const BasisSampler sampler(rotated);
    const std::size_t nbits = measured_qubits(layout);
    const std::uint64_t mask = low_mask(layout);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < shots; ++s) {
        std::uint64_t pattern = sampler.draw(rng) & mask;
        if (delta > 0.0) {
            for (std::size_t b = 0; b < nbits; ++b) {
                if (rng.uniform01() < delta) {
                    pattern ^= std::uint64_t{1} << b;
                }
            }
        }
        const double v = value(pattern);
        sum += v;
        sum_sq += v * v;
    }
    SampleStats st;
    const double n = static_cast<double>(shots);
    st.mean = sum / n;
    st.variance = shots > 1 ? std::max(0.0, (sum_sq - n * st.mean * st.mean) / (n - 1.0)) : 0.0;
    return st;
}

void check_shots(std::size_t shots, double delta) {
    if (shots == 0) {
        throw std::invalid_argument("shot estimate needs at least one shot");
    }
    if (!(delta >= 0.0 && delta < 0.5)) {
        throw std::invalid_argument("readout error must lie in [0, 0.5)");
    }
}

} // namespace

CostEstimate shot_estimate_compact(const StateVector& pre_projection, const EncodingLayout& layout,
                                   std::size_t shots, double readout_delta, std::uint64_t seed) {
    if (layout.scheme != EncodingScheme::CompactBinary) {
        throw std::invalid_argument("compact estimator needs a compact layout");
    }
    check_layout(pre_projection, layout);
    check_shots(shots, readout_delta);
    Rng rng(seed);
    const StateVector rotated = rotate_compact_columns(pre_projection, layout);
    const auto st = sample_setting(rotated, layout, shots, readout_delta, rng,
                                   [&](std::uint64_t p) { return compact_value(p, layout); });
    CostEstimate e;
    e.value = st.mean;
    e.estimator = EstimatorKind::CompactXBasisShots;
    e.shots = shots;
    // Binomial standard error of the scaled hit fraction.
    const double scale = std::ldexp(1.0, int(layout.col_qubits));
    const double p = st.mean / scale;
    e.std_error = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    e.readout_delta = readout_delta;
    e.seed = seed;
    return e;
}

CostEstimate shot_estimate_one_hot(const StateVector& pre_projection, const EncodingLayout& layout,
                                   std::size_t shots, double readout_delta, std::uint64_t seed) {
    if (layout.scheme != EncodingScheme::OneHot) {
        throw std::invalid_argument("grouped-Pauli estimator needs a one-hot layout");
    }
    check_layout(pre_projection, layout);
    check_shots(shots, readout_delta);
    if (shots < 3) {
        throw std::invalid_argument("grouped-Pauli estimator needs at least three shots");
    }
    Rng rng(seed);
    CostEstimate e;
    double var = 0.0;
    std::size_t index = 0;
    for (auto setting : {OneHotSetting::Computational, OneHotSetting::AllX, OneHotSetting::AllY}) {
        const std::size_t n = shots / 3 + (index < shots % 3 ? 1 : 0);
        ++index;
        const StateVector rotated = rotate_one_hot(pre_projection, layout, setting);
        const auto st = sample_setting(rotated, layout, n, readout_delta, rng, [&](std::uint64_t p) {
            return one_hot_value(p, layout, setting);
        });
        e.value += st.mean;
        var += st.variance / static_cast<double>(n);
    }
    e.estimator = EstimatorKind::GroupedPauliShots;
    e.shots = shots;
    e.std_error = std::sqrt(var);
    e.readout_delta = readout_delta;
    e.seed = seed;
    return e;
}

namespace {

std::vector<double> measured_distribution(const StateVector& s, const EncodingLayout& layout,
                                          double delta) {
    const std::uint64_t mask = low_mask(layout);
    std::vector<double> p(mask + 1, 0.0);
    const auto amps = s.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        p[i & mask] += std::norm(amps[i]);
    }
    // Independent symmetric flip channel, one qubit at a time.
    const std::size_t nbits = measured_qubits(layout);
    for (std::size_t b = 0; b < nbits && delta > 0.0; ++b) {
        const std::uint64_t flip = std::uint64_t{1} << b;
        for (std::uint64_t i = 0; i < p.size(); ++i) {
            if (i & flip) {
                continue;
            }
            const double p0 = p[i];
            const double p1 = p[i | flip];
            p[i] = (1.0 - delta) * p0 + delta * p1;
            p[i | flip] = delta * p0 + (1.0 - delta) * p1;
        }
    }
    return p;
}

} // namespace

double expected_noisy_estimate(const StateVector& pre_projection, const EncodingLayout& layout,
                               double readout_delta) {
    check_layout(pre_projection, layout);
    double total = 0.0;
    if (layout.scheme == EncodingScheme::CompactBinary) {
        const auto p = measured_distribution(rotate_compact_columns(pre_projection, layout), layout,
                                             readout_delta);
        for (std::uint64_t i = 0; i < p.size(); ++i) {
            total += p[i] * compact_value(i, layout);
        }
        return total;
    }
    for (auto setting : {OneHotSetting::Computational, OneHotSetting::AllX, OneHotSetting::AllY}) {
        const auto p = measured_distribution(rotate_one_hot(pre_projection, layout, setting), layout,
                                             readout_delta);
        for (std::uint64_t i = 0; i < p.size(); ++i) {
            if (p[i] != 0.0) {
                total += p[i] * one_hot_value(i, layout, setting);
            }
        }
    }
    return total;
}

std::size_t ShadowConfig::resolved_groups() const {
    if (groups > 0) {
        return groups;
    }
    return static_cast<std::size_t>(std::ceil(2.0 * std::log(1.0 / alpha)));
}

std::size_t shadow_locality(const EncodingLayout& layout) {
    if (layout.scheme != EncodingScheme::CompactBinary) {
        throw std::invalid_argument("Pauli shadows are implemented for the compact encoding");
    }
    return layout.col_qubits;
}

double shadow_norm_bound(std::size_t locality) { return std::ldexp(1.0, int(2 * locality)); }

std::size_t shadow_snapshot_budget(std::size_t locality, double epsilon, double constant) {
    if (!(epsilon > 0.0) || !(constant > 0.0)) {
        throw std::invalid_argument("snapshot budget needs positive epsilon and constant");
    }
    const double k = static_cast<double>(locality);
    const double log_term = std::max(k * std::log(2.0), std::log(2.0));
    return static_cast<std::size_t>(
        std::ceil(constant * log_term * shadow_norm_bound(locality) / (epsilon * epsilon)));
}

CostEstimate pauli_shadow_estimate(const StateVector& psi0, const EncodingLayout& layout,
                                   const ShadowConfig& config) {
    check_layout(psi0, layout);
    const std::size_t k = shadow_locality(layout);
    const std::size_t groups = config.resolved_groups();
    if (config.snapshots < groups || groups == 0) {
        throw std::invalid_argument("shadow estimate needs at least one snapshot per group");
    }
    const double norm_sq = psi0.norm_squared();
    CostEstimate e;
    e.estimator = EstimatorKind::PauliShadows;
    e.shots = config.snapshots;
    e.seed = config.seed;
    if (!(norm_sq > 0.0)) {
        return e;
    }
    const StateVector psi = renormalized(psi0);

    // Column-register outcome distribution for each of the 3^k basis
    // assignments (0 = X, 1 = Y, 2 = Z per column qubit).
    std::size_t combos = 1;
    for (std::size_t q = 0; q < k; ++q) {
        combos *= 3;
    }
    const std::uint64_t col_mask = (std::uint64_t{1} << k) - 1;
    std::vector<std::vector<double>> cdfs(combos);
    for (std::size_t c = 0; c < combos; ++c) {
        StateVector r = psi;
        std::size_t code = c;
        for (std::size_t q = 0; q < k; ++q, code /= 3) {
            const auto basis = code % 3;
            if (basis == 1) {
                r = apply_sdg(std::move(r), layout.col_qubit(q));
            }
            if (basis != 2) {
                r = apply_hadamard(std::move(r), layout.col_qubit(q));
            }
        }
        std::vector<double> p(col_mask + 1, 0.0);
        const auto amps = r.amplitudes();
        for (std::uint64_t i = 0; i < amps.size(); ++i) {
            p[i & col_mask] += std::norm(amps[i]);
        }
        for (std::size_t i = 1; i < p.size(); ++i) {
            p[i] += p[i - 1];
        }
        cdfs[c] = std::move(p);
    }

    Rng rng(config.seed);
    std::vector<double> values(config.snapshots);
    for (auto& v : values) {
        std::size_t combo = 0;
        std::size_t weight = 1;
        std::vector<int> basis(k);
        for (std::size_t q = 0; q < k; ++q) {
            basis[q] = static_cast<int>(rng.uniform_index(3));
            combo += static_cast<std::size_t>(basis[q]) * weight;
            weight *= 3;
        }
        const auto& cdf = cdfs[combo];
        const double u = rng.uniform01() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        const auto outcome = static_cast<std::uint64_t>(it - cdf.begin());
        if (config.observable == ShadowObservable::Identity) {
            v = 1.0;
            continue;
        }
        // (I + X)^{(x)k} expands into all X-strings; the inverse channel gives
        // 3 * (+-1) for a matched X basis and 0 otherwise, so the snapshot
        // estimate factorizes per qubit.
        double prod = 1.0;
        for (std::size_t q = 0; q < k; ++q) {
            if (basis[q] == 0) {
                prod *= 1.0 + 3.0 * (((outcome >> q) & 1U) ? -1.0 : 1.0);
            }
        }
        v = prod;
    }

    // Median of means over contiguous, nearly equal groups.
    std::vector<double> means(groups);
    const std::size_t base = config.snapshots / groups;
    const std::size_t extra = config.snapshots % groups;
    std::size_t pos = 0;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t n = base + (g < extra ? 1 : 0);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += values[pos++];
        }
        means[g] = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const double median = groups % 2 ? means[groups / 2]
                                     : 0.5 * (means[groups / 2 - 1] + means[groups / 2]);

    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) {
        var += (v - mean) * (v - mean);
    }
    var /= std::max<double>(1.0, static_cast<double>(values.size()) - 1.0);

    e.value = norm_sq * median;
    e.std_error = norm_sq * std::sqrt(var / static_cast<double>(values.size()));
    return e;
}

ModelMetrics model_metrics(double cost, const StandardizedTable& table, const PhaseVector& phases) {
    if (phases.phis.empty()) {
        throw std::invalid_argument("empty phase vector");
    }
    const double c0 = std::cos(phases.phis[0]);
    ModelMetrics m;
    m.C = cost;
    m.C0 = c0 * c0 / (1.0 + table.F);
    if (std::abs(c0) <= 1e-9 || !(m.C0 > 0.0)) {
        throw std::domain_error("null-model cost vanishes");
    }
    m.R2 = 1.0 - cost / m.C0;
    return m;
}

ShotBudget required_shots(double cost, std::size_t features, double epsilon, double alpha,
                          VarianceFormula formula) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    const double M = static_cast<double>(features);
    ShotBudget b;
    b.epsilon = epsilon;
    b.alpha = alpha;
    b.formula = formula;
    b.variance = formula == VarianceFormula::IdentityPlusM ? 1.0 + M * cost - cost * cost
                                                    : (M + 1.0) * cost - cost * cost;
    b.variance = std::max(0.0, b.variance);
    const double n = std::ceil(2.0 * b.variance * std::log(1.0 / alpha) / (epsilon * epsilon));
    b.required_shots = std::max<std::size_t>(1, static_cast<std::size_t>(n));
    return b;
}

} // namespace vqr
