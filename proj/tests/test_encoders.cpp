#include "helpers.hpp"

#include "vqr/encoders.hpp"
#include "vqr/measurement.hpp"
#include "vqr/regression.hpp"

#include <doctest.h>

#include <cmath>

using namespace vqr;

namespace {

StandardizedTable table_from(std::size_t rows, std::size_t cols, const std::vector<double>& v) {
    StandardizedTable t;
    t.values.resize(Eigen::Index(rows), Eigen::Index(cols));
    for (std::size_t l = 0; l < rows; ++l) {
        for (std::size_t m = 0; m < cols; ++m) {
            t.values(Eigen::Index(l), Eigen::Index(m)) = v[l * cols + m];
        }
    }
    t.column_means = Eigen::VectorXd::Zero(Eigen::Index(cols));
    t.column_scales = Eigen::VectorXd::Ones(Eigen::Index(cols));
    return t;
}

const StandardizedTable kQuarter = table_from(2, 2, {0.5, 0.5, 0.5, 0.5});

} // namespace

TEST_CASE("layouts") {
    const auto one_hot = make_layout(EncodingScheme::OneHot, 4, 4);
    CHECK(one_hot.num_qubits() == 17);
    CHECK(one_hot.code_index(1, 2) == (std::uint64_t{1} << 6));

    const auto compact = make_layout(EncodingScheme::CompactBinary, 4, 4);
    CHECK(compact.num_qubits() == 5);
    CHECK(compact.code_index(2, 1) == 1 + (2 << 2));
    CHECK(compact.ancilla.index == 4);

    const auto padded = make_layout(EncodingScheme::CompactBinary, 3, 3, 2);
    CHECK(padded.row_qubits == 2);
    CHECK(padded.col_qubits == 2);
    CHECK(padded.memory_qubits == 18);
    CHECK(padded.memory_qubit(1, 1).index == 5 + 2 + 1);
    CHECK_THROWS_AS(make_layout(EncodingScheme::OneHot, 2, 2, 1), std::invalid_argument);
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(5) == 3);
}

TEST_CASE("exact injection places amplitudes at code indices") {
    const auto oh = prepare_exact(kQuarter, EncodingScheme::OneHot);
    for (std::uint64_t idx : {1, 2, 4, 8}) {
        CHECK(oh.state[idx].real() == 0.5);
    }
    CHECK(to_ket(1, 4) == "|1000>");
    CHECK(oh.state.norm_squared() == doctest::Approx(1.0));

    const auto cb = prepare_exact(kQuarter, EncodingScheme::CompactBinary);
    for (std::uint64_t idx : {0, 1, 2, 3}) {
        CHECK(cb.state[idx].real() == 0.5);
    }
    CHECK(cb.state.norm_squared() == doctest::Approx(1.0));
}

TEST_CASE("chain angles") {
    const auto single = one_hot_chain_angles({std::cos(0.7), std::sin(0.7)});
    CHECK(single.size() == 1);
    CHECK(single[0] == doctest::Approx(0.7).epsilon(1e-15));

    const auto two = one_hot_chain_angles({0.6, 0.8 * std::cos(0.4), 0.8 * std::sin(0.4)});
    CHECK(two[0] == doctest::Approx(0.9272952180016123).epsilon(1e-14));
    CHECK(two[1] == doctest::Approx(0.4).epsilon(1e-14));

    const auto tail_zero = one_hot_chain_angles({-1.0, 0.0, 0.0});
    CHECK(tail_zero[1] == 0.0);
}

TEST_CASE("chain preparation matches exact injection") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> v(8);
        for (auto& x : v) {
            x = rng.normal();
        }
        if (trial == 0) {
            v[5] = 0.0;
            v[6] = 0.0;
        }
        double n = 0.0;
        for (double x : v) {
            n += x * x;
        }
        for (auto& x : v) {
            x /= std::sqrt(n);
        }
        const auto t = table_from(4, 2, v);
        CHECK(test::max_diff(prepare_one_hot_chain(t).state,
                             prepare_exact(t, EncodingScheme::OneHot).state) < 1e-9);
    }
}

TEST_CASE("chain handles zero cells in the tail") {
    const auto t = table_from(2, 2, {0.6, 0.0, 0.8, 0.0});
    const auto chain = prepare_one_hot_chain(t);
    const auto exact = prepare_exact(t, EncodingScheme::OneHot);
    CHECK(test::max_diff(chain.state, exact.state) < 1e-12);
}

TEST_CASE("compact preparation amplitudes follow sin of the phases") {
    const auto t = table_from(2, 2, {0.3, -0.2, 0.5, 0.1});
    const auto p = memory_free_compact(t);
    CHECK(p.success_probability == doctest::Approx(0.09165431342225691).epsilon(1e-12));
    CHECK(p.state[0].real() == doctest::Approx(0.14776010333066977).epsilon(1e-12));
    CHECK(p.state[1].real() == doctest::Approx(-0.09933466539753061).epsilon(1e-12));
    CHECK(p.state[2].real() == doctest::Approx(0.2397127693021015).epsilon(1e-12));
    CHECK(p.state[3].real() == doctest::Approx(0.04991670832341408).epsilon(1e-12));
    CHECK(p.success_probability == doctest::Approx(p.state.norm_squared()).epsilon(1e-12));
    CHECK(p.amplitude_model == AmplitudeModel::SinOfDigitized);
    // Ancilla returned to |0>.
    for (std::uint64_t i = 4; i < 8; ++i) {
        CHECK(std::abs(p.state[i]) < 1e-15);
    }
}

TEST_CASE("compact success probability edge cases") {
    const auto zero = memory_free_compact(table_from(2, 2, {0.0, 0.0, 0.0, 0.0}));
    CHECK(zero.success_probability == doctest::Approx(0.0));

    const double tval = 0.6;
    const auto single = memory_free_compact(table_from(2, 2, {tval, 0.0, 0.0, 0.0}));
    CHECK(single.success_probability ==
          doctest::Approx(std::sin(tval) * std::sin(tval) / 4.0).epsilon(1e-12));
    const auto cond = renormalized(single.state);
    CHECK(std::abs(cond[0]) == doctest::Approx(1.0));
}

TEST_CASE("memory register reproduces the memory-free state") {
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const auto t = standardize(test::random_raw_table(rng, 2, 1), true);
        const auto digits = digitize(t, 3);
        const auto with_memory = prepare_compact_with_memory(digits);
        const auto free = memory_free_compact(digits);
        CHECK(with_memory.success_probability ==
              doctest::Approx(free.success_probability).epsilon(1e-12));
        const auto reduced = discard_memory_register(with_memory);
        CHECK(test::max_diff(reduced.state, free.state) < 1e-12);
    }
}

TEST_CASE("memory register is rejected when entangled") {
    auto p = prepare_compact_with_memory(digitize(kQuarter, 1));
    p.state = apply_hadamard(std::move(p.state), p.layout.memory_qubit(0, 0));
    CHECK_THROWS_AS(discard_memory_register(p), std::logic_error);
}

TEST_CASE("success probability scales inversely with the row count") {
    Rng rng(17);
    for (std::size_t L : {4, 8, 16}) {
        const auto t = standardize(test::random_raw_table(rng, L, 1), true);
        const auto p = memory_free_compact(t);
        const double keys = double(std::size_t{1} << p.layout.data_qubits);
        // Sum of x^2 is one, so p ~ 1/2^N_K = 1/(2L) minus the sin^2 <= x^2 loss.
        CHECK(p.success_probability * keys <= 1.0 + 1e-12);
        CHECK(p.success_probability * keys > 0.9);
        CHECK(p.small_angle_success_estimate == doctest::Approx(1.0 / keys).epsilon(1e-12));
        CHECK(p.per_feature_scaling_estimate == doctest::Approx(2.0 / keys).epsilon(1e-12));
    }
}

TEST_CASE("small-angle error is bounded by the Taylor remainder") {
    Rng rng(19);
    const auto t = standardize(test::random_raw_table(rng, 4, 1), true);
    const auto digits = digitize(t, 8);
    double max_x = 0.0;
    double max_err = 0.0;
    for (double x : digits.x_tilde) {
        max_x = std::max(max_x, std::abs(x));
        max_err = std::max(max_err, std::abs(std::sin(x) - x));
    }
    CHECK(max_err <= max_x * max_x * max_x / 6.0);
}

TEST_CASE("costs agree across encodings") {
    Rng rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t L = 1 + rng.uniform_index(4);
        const std::size_t M = 1 + rng.uniform_index(4);
        if (L < 2) {
            continue;
        }
        const auto t = standardize(test::random_raw_table(rng, L, M), true);
        PhaseVector phases;
        for (std::size_t m = 0; m <= M; ++m) {
            phases.phis.push_back(rng.uniform(0.0, 6.3));
        }
        const double analytic = analytic_cost(t, phases);
        for (const auto& prep : {prepare_exact(t, EncodingScheme::OneHot),
                                 prepare_exact(t, EncodingScheme::CompactBinary),
                                 prepare_one_hot_chain(t)}) {
            const auto out = apply_regression_map(prep, phases);
            CHECK(exact_expectation(out.psi0, prep.layout) == doctest::Approx(analytic).epsilon(1e-9));
        }
    }
}

TEST_CASE("digitization error propagates to the cost boundedly") {
    Rng rng(29);
    std::vector<double> mean_err(9, 0.0);
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        const auto t = standardize(test::random_raw_table(rng, 4, 1), true);
        PhaseVector phases{{rng.uniform(0.0, 3.1), rng.uniform(0.0, 3.1)}};
        const double exact = analytic_cost(t, phases);
        const double max_x = t.values.cwiseAbs().maxCoeff();
        for (std::size_t nb = 2; nb <= 8; ++nb) {
            const auto prep = memory_free_compact(digitize(t, nb));
            const double c = exact_expectation(apply_regression_map(prep, phases).psi0, prep.layout);
            const double err = std::abs(c - exact);
            CHECK(err <= 4.0 * (std::ldexp(1.0, -int(nb)) + max_x * max_x * max_x / 6.0));
            mean_err[nb] += err / trials;
        }
    }
    // The mean error shrinks as bits are added, until the sin(x) bias dominates.
    CHECK(mean_err[2] > mean_err[4]);
    CHECK(mean_err[4] > mean_err[8]);
}

TEST_CASE("preparation attempts") {
    CHECK(sample_preparation_attempts(50, 1.0, 3) == 50);
    CHECK(sample_preparation_attempts(0, 0.2, 3) == 0);
    const auto a = sample_preparation_attempts(100000, 0.25, 9);
    CHECK(a == sample_preparation_attempts(100000, 0.25, 9));
    // Mean 4 attempts per success, standard deviation sqrt(0.75)/0.25 per success.
    CHECK(std::abs(double(a) / 100000.0 - 4.0) < 5.0 * std::sqrt(12.0 / 100000.0));
    CHECK_THROWS_AS(sample_preparation_attempts(1, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(sample_preparation_attempts(1, 1.5, 1), std::domain_error);
}
