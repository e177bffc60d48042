#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqr {

/// L x (M+1) table. Column 0 is the response y, columns 1..M are features.
struct RawTable {
    Eigen::MatrixXd values;
    std::vector<std::string> column_names;

    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t features() const {
        return values.cols() > 0 ? static_cast<std::size_t>(values.cols() - 1) : 0;
    }

    /// Throws std::invalid_argument unless L >= 2, M >= 1 and all values finite.
    void validate() const;
};

/// Mean-centered, optionally column-equalized, globally normalized table:
/// every column sums to zero and the squared entries sum to one.
struct StandardizedTable {
    Eigen::MatrixXd values;
    Eigen::VectorXd column_means;
    /// Per-column divisor applied before global normalization (column L2
    /// norm when equalized, otherwise 1).
    Eigen::VectorXd column_scales;
    /// Sum of squares of the centered (and equalized) table before the final
    /// division by its square root.
    double global_norm = 1.0;
    /// Mean feature energy over response energy.
    double variance_ratio = 1.0;
    /// M * variance_ratio.
    double F = 1.0;
    /// Null-model cost 1 / (1 + F) at cos^2(phi_0) = 1.
    double C0 = 0.5;
    bool equalized = false;

    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t features() const { return static_cast<std::size_t>(values.cols() - 1); }

    /// Converts standardized-space weights back to the raw table's units.
    Eigen::VectorXd to_original_weights(const Eigen::VectorXd& standardized) const;
    Eigen::VectorXd to_standardized_weights(const Eigen::VectorXd& original) const;
};

/// Raised for a constant column; index() names the offending column.
class ZeroVarianceColumn : public std::invalid_argument {
public:
    explicit ZeroVarianceColumn(std::size_t column);
    std::size_t index() const { return column_; }

private:
    std::size_t column_;
};

StandardizedTable standardize(const RawTable& raw, bool equalize_columns);

/// Signed-binary digitization x ~ sum_j 2^-j (-1)^bit_j.
struct DigitizedTable {
    std::size_t n_bits = 0;
    /// K x n_bits, row k holds bits of cell k (row-major over the table).
    std::vector<std::vector<std::uint8_t>> bits;
    std::vector<double> delta_thetas;  // 2^-1 ... 2^-n_bits
    std::vector<double> x_tilde;
    std::size_t rows = 0;
    std::size_t cols = 0;  // M + 1
};

/// Greedy digit choice: each bit takes the sign of the remaining residual
/// (ties go to +). Attains the nearest representable value, so
/// |x~ - x| <= 2^-n_bits for |x| <= 1.
DigitizedTable digitize(const StandardizedTable& table, std::size_t n_bits);

/// Single-value form of the above.
double digitize_value(double x, std::size_t n_bits, std::vector<std::uint8_t>* bits = nullptr);

struct SyntheticSpec {
    std::size_t rows = 1024;
    std::vector<double> true_weights;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
};

/// Features ~ U[-1, 1]; each row draws its own weights W_i = w_i (1 + noise * N(0,1))
/// and y = sum_i x_i W_i. Per row the stream consumes M uniforms then M normals.
RawTable generate_linear_synthetic(const SyntheticSpec& spec);

/// Columns x, x^2, ..., x^max_power.
Eigen::MatrixXd build_power_features(const Eigen::VectorXd& x, std::size_t max_power);

struct BootstrapPlan {
    std::size_t num_batches = 1;
    std::size_t batch_size = 1;
    std::uint64_t seed = 0;
};

/// Row indices of batch b, drawn with replacement from a stream seeded by
/// derive_seed(plan.seed, b).
std::vector<std::size_t> bootstrap_indices(std::size_t source_rows, const BootstrapPlan& plan,
                                           std::size_t batch);

RawTable take_rows(const RawTable& raw, const std::vector<std::size_t>& indices);

std::vector<RawTable> bootstrap_batches(const RawTable& raw, const BootstrapPlan& plan);

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Header row then numeric rows; the first column is the response.
RawTable parse_csv(const std::string& text);
RawTable load_csv(const std::filesystem::path& path);
void save_csv(const std::filesystem::path& path, const RawTable& table);

/// Classical least-squares weights of y on the features after mean
/// centering. Used as a reference throughout.
Eigen::VectorXd least_squares_weights(const RawTable& raw);

} // namespace vqr
