#include "vqr/data.hpp"

#include "vqr/rng.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vqr {

void RawTable::validate() const {
    if (values.rows() < 2) {
        throw std::invalid_argument("table needs at least 2 rows");
    }
    if (values.cols() < 2) {
        throw std::invalid_argument("table needs a response and at least one feature");
    }
    if (!values.allFinite()) {
        throw std::invalid_argument("table contains non-finite values");
    }
}

ZeroVarianceColumn::ZeroVarianceColumn(std::size_t column)
    : std::invalid_argument("column " + std::to_string(column) + " has zero variance"),
      column_(column) {}

Eigen::VectorXd StandardizedTable::to_original_weights(const Eigen::VectorXd& standardized) const {
    Eigen::VectorXd w(standardized.size());
    for (Eigen::Index m = 0; m < standardized.size(); ++m) {
        w[m] = standardized[m] * column_scales[0] / column_scales[m + 1];
    }
    return w;
}

Eigen::VectorXd StandardizedTable::to_standardized_weights(const Eigen::VectorXd& original) const {
    Eigen::VectorXd w(original.size());
    for (Eigen::Index m = 0; m < original.size(); ++m) {
        w[m] = original[m] * column_scales[m + 1] / column_scales[0];
    }
    return w;
}

StandardizedTable standardize(const RawTable& raw, bool equalize_columns) {
    raw.validate();
    const auto L = raw.values.rows();
    const auto cols = raw.values.cols();

    StandardizedTable out;
    out.equalized = equalize_columns;
    out.column_means = raw.values.colwise().mean().transpose();
    Eigen::MatrixXd z = raw.values.rowwise() - out.column_means.transpose();

    out.column_scales = Eigen::VectorXd::Ones(cols);
    for (Eigen::Index m = 0; m < cols; ++m) {
        const double norm = z.col(m).norm();
        const double reference = (1.0 + std::abs(out.column_means[m])) * std::sqrt(double(L));
        if (!(norm > 1e-12 * reference)) {
            throw ZeroVarianceColumn(static_cast<std::size_t>(m));
        }
        if (equalize_columns) {
            out.column_scales[m] = norm;
            z.col(m) /= norm;
        }
    }

    const Eigen::VectorXd energy = z.colwise().squaredNorm().transpose();
    out.global_norm = energy.sum();
    out.values = z / std::sqrt(out.global_norm);

    const double features = static_cast<double>(cols - 1);
    const double feature_energy = energy.tail(cols - 1).sum();
    out.variance_ratio = feature_energy / features / energy[0];
    out.F = features * out.variance_ratio;
    out.C0 = 1.0 / (1.0 + out.F);
    return out;
}

double digitize_value(double x, std::size_t n_bits, std::vector<std::uint8_t>* bits) {
    if (bits) {
        bits->assign(n_bits, 0);
    }
    double residual = x;
    double approx = 0.0;
    double step = 0.5;
    for (std::size_t j = 0; j < n_bits; ++j, step *= 0.5) {
        const bool negative = residual < 0.0;
        const double d = negative ? -step : step;
        approx += d;
        residual -= d;
        if (bits) {
            (*bits)[j] = negative ? 1 : 0;
        }
    }
    return approx;
}

DigitizedTable digitize(const StandardizedTable& table, std::size_t n_bits) {
    if (n_bits == 0) {
        throw std::invalid_argument("digitize: need at least one bit");
    }
    DigitizedTable out;
    out.n_bits = n_bits;
    out.rows = table.rows();
    out.cols = static_cast<std::size_t>(table.values.cols());
    out.delta_thetas.resize(n_bits);
    for (std::size_t j = 0; j < n_bits; ++j) {
        out.delta_thetas[j] = std::ldexp(1.0, -static_cast<int>(j + 1));
    }
    const std::size_t K = out.rows * out.cols;
    out.bits.resize(K);
    out.x_tilde.resize(K);
    for (std::size_t l = 0; l < out.rows; ++l) {
        for (std::size_t m = 0; m < out.cols; ++m) {
            const std::size_t k = l * out.cols + m;
            const double x = table.values(Eigen::Index(l), Eigen::Index(m));
            if (std::abs(x) > 1.0) {
                throw std::invalid_argument("digitize: value outside [-1, 1]");
            }
            out.x_tilde[k] = digitize_value(x, n_bits, &out.bits[k]);
        }
    }
    return out;
}

RawTable generate_linear_synthetic(const SyntheticSpec& spec) {
    const std::size_t M = spec.true_weights.size();
    if (spec.rows < 2 || M == 0) {
        throw std::invalid_argument("synthetic table needs rows >= 2 and at least one weight");
    }
    if (!(spec.noise_std >= 0.0)) {
        throw std::invalid_argument("noise standard deviation must be non-negative");
    }
    Rng rng(spec.seed);
    RawTable t;
    t.values.resize(Eigen::Index(spec.rows), Eigen::Index(M + 1));
    std::vector<double> x(M);
    for (std::size_t j = 0; j < spec.rows; ++j) {
        for (auto& v : x) {
            v = rng.uniform(-1.0, 1.0);
        }
        double y = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double w = spec.true_weights[i] * (1.0 + spec.noise_std * rng.normal());
            y += x[i] * w;
            t.values(Eigen::Index(j), Eigen::Index(i + 1)) = x[i];
        }
        t.values(Eigen::Index(j), 0) = y;
    }
    t.column_names.push_back("y");
    for (std::size_t i = 1; i <= M; ++i) {
        t.column_names.push_back("x" + std::to_string(i));
    }
    return t;
}

Eigen::MatrixXd build_power_features(const Eigen::VectorXd& x, std::size_t max_power) {
    if (max_power == 0) {
        throw std::invalid_argument("max_power must be at least 1");
    }
    Eigen::MatrixXd out(x.size(), Eigen::Index(max_power));
    out.col(0) = x;
    for (Eigen::Index p = 1; p < Eigen::Index(max_power); ++p) {
        out.col(p) = out.col(p - 1).cwiseProduct(x);
    }
    return out;
}

std::vector<std::size_t> bootstrap_indices(std::size_t source_rows, const BootstrapPlan& plan,
                                           std::size_t batch) {
    if (source_rows == 0) {
        throw std::invalid_argument("bootstrap: empty source table");
    }
    Rng rng(derive_seed(plan.seed, batch));
    std::vector<std::size_t> idx(plan.batch_size);
    for (auto& i : idx) {
        i = static_cast<std::size_t>(rng.uniform_index(source_rows));
    }
    return idx;
}

RawTable take_rows(const RawTable& raw, const std::vector<std::size_t>& indices) {
    RawTable out;
    out.column_names = raw.column_names;
    out.values.resize(Eigen::Index(indices.size()), raw.values.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        out.values.row(Eigen::Index(r)) = raw.values.row(Eigen::Index(indices[r]));
    }
    return out;
}

std::vector<RawTable> bootstrap_batches(const RawTable& raw, const BootstrapPlan& plan) {
    if (plan.num_batches == 0 || plan.batch_size == 0) {
        throw std::invalid_argument("bootstrap plan needs positive batch count and size");
    }
    std::vector<RawTable> out;
    out.reserve(plan.num_batches);
    for (std::size_t b = 0; b < plan.num_batches; ++b) {
        out.push_back(take_rows(raw, bootstrap_indices(raw.rows(), plan, b)));
    }
    return out;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

RawTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_fields(line);
        if (header.empty()) {
            for (auto& f : fields) {
                header.push_back(trim(f));
            }
            if (header.size() < 2) {
                throw ParseError(line_no, "header needs a response and at least one feature");
            }
            continue;
        }
        if (fields.size() != header.size()) {
            throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                          " fields, found " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            const std::string cell = trim(f);
            double v = 0.0;
            const auto* first = cell.data();
            const auto* last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') {
                ++first;
            }
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
                throw ParseError(line_no, "non-numeric cell '" + cell + "'");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (header.empty()) {
        throw ParseError(line_no, "missing header row");
    }
    RawTable t;
    t.column_names = header;
    t.values.resize(Eigen::Index(rows.size()), Eigen::Index(header.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            t.values(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
        }
    }
    return t;
}

RawTable load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

void save_csv(const std::filesystem::path& path, const RawTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    const auto cols = table.values.cols();
    for (Eigen::Index c = 0; c < cols; ++c) {
        if (c) {
            out << ',';
        }
        if (std::size_t(c) < table.column_names.size()) {
            out << table.column_names[std::size_t(c)];
        } else {
            out << (c == 0 ? std::string("y") : "x" + std::to_string(c));
        }
    }
    out << '\n';
    char buf[32];
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", table.values(r, c));
            if (c) {
                out << ',';
            }
            out << buf;
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

Eigen::VectorXd least_squares_weights(const RawTable& raw) {
    const Eigen::MatrixXd centered = raw.values.rowwise() - raw.values.colwise().mean();
    const Eigen::MatrixXd X = centered.rightCols(centered.cols() - 1);
    const Eigen::VectorXd y = centered.col(0);
    return X.completeOrthogonalDecomposition().solve(y);
}

} // namespace vqr
