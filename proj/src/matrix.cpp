#include "safeql/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "safeql/errors.hpp"

namespace safeql {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), a_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw InvariantViolation("matrix entries must be finite");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("ragged initializer for matrix");
        a_.insert(a_.end(), r.begin(), r.end());
    }
    check_finite();
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), a_(std::move(data)) {
    if (a_.size() != rows_ * cols_) throw DimensionMismatch("matrix data size mismatch");
    check_finite();
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Matrix Matrix::block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
    if (i0 + r > rows_ || j0 + c > cols_) throw DimensionMismatch("block out of range");
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
    return out;
}

Vector Matrix::col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_col(std::size_t j, const Vector& v) {
    if (v.size() != rows_) throw DimensionMismatch("column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

void Matrix::check_finite() const {
    for (double v : a_)
        if (!std::isfinite(v)) throw InvariantViolation("matrix entries must be finite");
}

namespace {

void require_same_shape(const Matrix& x, const Matrix& y, const char* op) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw DimensionMismatch(std::string("shape mismatch in ") + op);
}

}  // namespace

Matrix operator+(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "matrix addition");
    Matrix r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) + y(i, j);
    return r;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "matrix subtraction");
    Matrix r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) - y(i, j);
    return r;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols() != y.rows()) throw DimensionMismatch("shape mismatch in matrix product");
    Matrix r(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            const double xik = x(i, k);
            for (std::size_t j = 0; j < y.cols(); ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

Matrix operator*(double s, const Matrix& x) {
    Matrix r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = s * x(i, j);
    return r;
}

Vector operator*(const Matrix& x, const Vector& v) {
    if (x.cols() != v.size()) throw DimensionMismatch("shape mismatch in matrix-vector product");
    Vector r(x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < x.cols(); ++j) acc += x(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

Vector operator+(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("vector length mismatch");
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vector operator-(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("vector length mismatch");
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vector operator*(double s, const Vector& x) {
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = s * x[i];
    return r;
}

double dot(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("vector length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double norm(const Vector& x) { return std::sqrt(dot(x, x)); }

double frobenius_norm(const Matrix& x) {
    double acc = 0.0;
    for (double v : x.data()) acc += v * v;
    return std::sqrt(acc);
}

double frobenius_dot(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "frobenius inner product");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.data().size(); ++i) acc += x.data()[i] * y.data()[i];
    return acc;
}

bool is_symmetric(const Matrix& s, double tol) {
    if (s.rows() != s.cols()) return false;
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = i + 1; j < s.cols(); ++j)
            if (std::abs(s(i, j) - s(j, i)) > tol) return false;
    return true;
}

Vector solve_linear(Matrix a, Vector b) {
    constexpr double kPivotFloor = 1e-12;
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw DimensionMismatch("solve_linear needs square a and matching b");

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) < kPivotFloor) throw SingularMatrix("pivot below 1e-12 in solve_linear");
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= a(ii, j) * x[j];
        x[ii] = acc / a(ii, ii);
    }
    return x;
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("solve_linear needs matching row counts");
    Matrix x(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) x.set_col(j, solve_linear(a, b.col(j)));
    return x;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

namespace {

double off_diag_norm(const Matrix& d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (i != j) acc += d(i, j) * d(i, j);
    return std::sqrt(acc);
}

}  // namespace

double min_eig_sym(const Matrix& s) {
    const std::size_t n = s.rows();
    if (s.cols() != n) throw DimensionMismatch("min_eig_sym needs a square matrix");
    if (!is_symmetric(s, 1e-10)) throw NotSymmetric("min_eig_sym needs a symmetric matrix");
    if (n == 0) throw DimensionMismatch("min_eig_sym needs a nonempty matrix");

    // Work on the symmetrized copy so rotations see exact symmetry.
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d(i, j) = 0.5 * (s(i, j) + s(j, i));

    constexpr double kOffTol = 1e-12;
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    while (off_diag_norm(d) > kOffTol) {
        if (++sweep > kMaxSweeps) throw NoConvergence("Jacobi sweeps exceeded limit");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dij = d(i, j);
                if (dij == 0.0) continue;
                const double tau = (d(j, j) - d(i, i)) / (2.0 * dij);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                const double dii = d(i, i), djj = d(j, j);
                d(i, i) = dii - t * dij;
                d(j, j) = djj + t * dij;
                d(i, j) = 0.0;
                d(j, i) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    const double dik = d(i, k), djk = d(j, k);
                    d(i, k) = c * dik - sn * djk;
                    d(k, i) = d(i, k);
                    d(j, k) = sn * dik + c * djk;
                    d(k, j) = d(j, k);
                }
            }
    }
    double lo = d(0, 0);
    for (std::size_t i = 1; i < n; ++i) lo = std::min(lo, d(i, i));
    return lo;
}

bool is_positive_definite(const Matrix& s, double tol) { return min_eig_sym(s) > tol; }

}  // namespace safeql
