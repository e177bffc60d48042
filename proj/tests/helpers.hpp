#pragma once

#include "vqr/data.hpp"
#include "vqr/rng.hpp"
#include "vqr/statevector.hpp"

#include <cmath>
#include <vector>

namespace vqr::test {

inline RawTable random_raw_table(Rng& rng, std::size_t rows, std::size_t features) {
    RawTable raw;
    raw.values.resize(Eigen::Index(rows), Eigen::Index(features + 1));
    for (Eigen::Index r = 0; r < raw.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < raw.values.cols(); ++c) {
            raw.values(r, c) = rng.uniform(-1.0, 1.0);
        }
    }
    return raw;
}

inline StateVector random_state(Rng& rng, std::size_t qubits) {
    std::vector<Complex> a(std::size_t{1} << qubits);
    double n = 0.0;
    for (auto& z : a) {
        z = Complex(rng.normal(), rng.normal());
        n += std::norm(z);
    }
    for (auto& z : a) {
        z /= std::sqrt(n);
    }
    return StateVector(std::move(a));
}

inline double max_diff(const StateVector& a, const StateVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

} // namespace vqr::test
