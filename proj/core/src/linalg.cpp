#include "hyperspec/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "hyperspec/errors.hpp"

namespace hyperspec {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InputError("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw InputError("Matrix: ragged rows");
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InputError("Matrix product: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InputError("SymMatrix: matrix is not square");
    if (!m_.all_finite()) throw InputError("SymMatrix: non-finite entry");
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = i + 1; j < m_.cols(); ++j)
            if (m_(i, j) != m_(j, i))
                throw InputError("SymMatrix: entries (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") and (" + std::to_string(j) + "," + std::to_string(i) + ") differ");
}

SymMatrix SymMatrix::from_upper(Matrix m) {
    if (m.rows() != m.cols()) throw InputError("SymMatrix: matrix is not square");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
    return SymMatrix(std::move(m));
}

namespace {

// Cyclic-by-row Jacobi. `a` is overwritten (full symmetric storage); `vt`
// accumulates the rotations with eigenvectors stored as rows.
void jacobi_sweeps(Matrix& a, Matrix* vt) {
    const std::size_t n = a.rows();
    if (n < 2) return;

    double frob = 0.0;
    for (double x : a.data()) frob += x * x;
    frob = std::sqrt(frob);
    const double abs_floor = std::max(1e-300, 1e-18 * frob);

    constexpr int kMaxSweeps = 80;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double app = a(p, p);
                const double aqq = a(q, q);
                if (std::abs(apq) <= abs_floor ||
                    std::abs(apq) <= 0.5 * DBL_EPSILON * std::sqrt(std::abs(app * aqq))) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                rotated = true;

                const double theta = (aqq - app) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::hypot(t, 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;

                auto rp = a.row(p);
                auto rq = a.row(q);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double g = rp[r];
                    const double h = rq[r];
                    const double np = g - s * (h + g * tau);
                    const double nq = h + s * (g - h * tau);
                    rp[r] = np;
                    rq[r] = nq;
                    a(r, p) = np;
                    a(r, q) = nq;
                }
                if (vt != nullptr) {
                    auto vp = vt->row(p);
                    auto vq = vt->row(q);
                    for (std::size_t r = 0; r < n; ++r) {
                        const double g = vp[r];
                        const double h = vq[r];
                        vp[r] = g - s * (h + g * tau);
                        vq[r] = h + s * (g - h * tau);
                    }
                }
            }
        }
        if (!rotated) return;
    }
}

void check_finite(const SymMatrix& a) {
    if (!a.matrix().all_finite()) throw InputError("sym_eigen: non-finite entry");
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& a) {
    check_finite(a);
    const std::size_t n = a.size();
    Matrix work = a.matrix();
    Matrix vt = Matrix::identity(n);
    jacobi_sweeps(work, &vt);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return work(x, x) < work(y, y); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.values[k] = work(src, src);
        auto v = vt.row(src);
        double sign = 1.0;
        for (double x : v) {
            if (std::abs(x) > 1e-12) {
                sign = x > 0 ? 1.0 : -1.0;
                break;
            }
        }
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = sign * v[r];
    }
    return out;
}

std::vector<double> sym_eigenvalues(const SymMatrix& a) {
    check_finite(a);
    Matrix work = a.matrix();
    jacobi_sweeps(work, nullptr);
    std::vector<double> values(work.rows());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = work(i, i);
    std::sort(values.begin(), values.end());
    return values;
}

RankReport numeric_rank(const Matrix& a, double rel_tol) {
    if (a.empty()) throw InputError("numeric_rank: empty matrix");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InputError("numeric_rank: rel_tol must lie in (0, 1)");
    if (!a.all_finite()) throw InputError("numeric_rank: non-finite entry");

    // One-sided Jacobi on the rows of the wide orientation: rotate row pairs
    // until mutually orthogonal; the row norms are then the singular values.
    Matrix u = a.rows() <= a.cols() ? a : a.transposed();
    const std::size_t k = u.rows();
    const std::size_t len = u.cols();
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                auto up = u.row(p);
                auto uq = u.row(q);
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t t = 0; t < len; ++t) {
                    alpha += up[t] * up[t];
                    beta += uq[t] * uq[t];
                    gamma += up[t] * uq[t];
                }
                if (alpha < 1e-300 || beta < 1e-300) continue;
                if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < len; ++i) {
                    const double x = up[i];
                    const double y = uq[i];
                    up[i] = c * x - s * y;
                    uq[i] = s * x + c * y;
                }
            }
        }
        if (!rotated) break;
    }

    RankReport report;
    report.singular_values.reserve(k);
    for (std::size_t p = 0; p < k; ++p) report.singular_values.push_back(std::sqrt(dot(u.row(p), u.row(p))));
    std::sort(report.singular_values.begin(), report.singular_values.end(), std::greater<>());

    const double sigma_max = report.singular_values.front();
    report.tolerance_used =
        rel_tol * std::max(sigma_max, 1.0) * static_cast<double>(std::max(a.rows(), a.cols()));
    report.rank = static_cast<std::size_t>(
        std::count_if(report.singular_values.begin(), report.singular_values.end(),
                      [&](double s) { return s > report.tolerance_used; }));
    return report;
}

PsdVerdict psd_verdict(const SymMatrix& a, std::optional<double> tol) {
    if (a.size() == 0) throw InputError("psd_verdict: empty matrix");
    const double n = static_cast<double>(a.size());
    const double tolerance = tol.value_or(1e-9 * n * (1.0 + a.max_abs()));
    if (!(tolerance >= 0.0)) throw InputError("psd_verdict: tolerance must be nonnegative");

    auto eig = sym_eigen(a);
    PsdVerdict v;
    v.min_eigenvalue = eig.values.front();
    v.tolerance = tolerance;
    v.is_psd = v.min_eigenvalue >= -tolerance;
    v.witness.resize(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) v.witness[r] = eig.vectors(r, 0);
    return v;
}

SymMatrix project_off_ones(const SymMatrix& d) {
    const std::size_t n = d.size();
    if (n == 0) return d;
    const double nn = static_cast<double>(n);
    std::vector<double> row_sum(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row_sum[i] += d(i, j);
        total += row_sum[i];
    }
    const double mean = total / (nn * nn);
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            out(i, j) = d(i, j) - row_sum[i] / nn - row_sum[j] / nn + mean;
    return SymMatrix::from_upper(std::move(out));
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw InputError("multiply: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double quadratic_form(const SymMatrix& a, std::span<const double> x) {
    return dot(x, multiply(a.matrix(), x));
}

}  // namespace hyperspec
