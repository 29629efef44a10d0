#pragma once

// Dense real matrices and the symmetric eigen machinery shared by every other
// module: cyclic Jacobi eigendecomposition, PSD verdicts, numeric rank and
// the centering projection P = I - J/n.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace hyperspec {

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const;
    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Square matrix with exactly symmetric, finite entries.
class SymMatrix {
public:
    SymMatrix() = default;
    /// Throws InputError unless `m` is square, finite and exactly symmetric.
    explicit SymMatrix(Matrix m);

    /// Copies the upper triangle onto the lower one; use for values that are
    /// symmetric in exact arithmetic but were computed in floating point.
    static SymMatrix from_upper(Matrix m);

    std::size_t size() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    const Matrix& matrix() const noexcept { return m_; }
    double max_abs() const noexcept { return m_.max_abs(); }

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    Matrix m_;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition. Each eigenvector is signed so that its
/// first component above round-off is positive.
EigenDecomposition sym_eigen(const SymMatrix& a);

/// Eigenvalues only, ascending.
std::vector<double> sym_eigenvalues(const SymMatrix& a);

struct RankReport {
    std::size_t rank = 0;
    std::vector<double> singular_values;  // nonincreasing
    double tolerance_used = 0.0;
};

inline constexpr double kDefaultRankTolerance = 1e-9;

/// Counts singular values above rel_tol * max(sigma_max, 1) * max(m, n).
/// Singular values come from one-sided Jacobi rotations.
RankReport numeric_rank(const Matrix& a, double rel_tol = kDefaultRankTolerance);

struct PsdVerdict {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    std::vector<double> witness;  // unit eigenvector of min_eigenvalue
    double tolerance = 0.0;
};

/// Default tolerance is 1e-9 * n * (1 + max|a_ij|).
PsdVerdict psd_verdict(const SymMatrix& a, std::optional<double> tol = std::nullopt);

/// P D P with P = I - J/n.
SymMatrix project_off_ones(const SymMatrix& d);

// Small helpers used across modules.
std::vector<double> multiply(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double quadratic_form(const SymMatrix& a, std::span<const double> x);

}  // namespace hyperspec
