#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace safeql {

using Vector = std::vector<double>;

/// Dense row-major matrix sized for desk-scale control problems (dims <= ~8).
/// Entries are required to be finite; constructors taking data enforce this.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }

    Matrix transpose() const;
    Matrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;

    Vector col(std::size_t j) const;
    void set_col(std::size_t j, const Vector& v);

    /// Throws InvariantViolation if any entry is NaN or infinite.
    void check_finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Matrix operator+(const Matrix& x, const Matrix& y);
Matrix operator-(const Matrix& x, const Matrix& y);
Matrix operator*(const Matrix& x, const Matrix& y);
Matrix operator*(double s, const Matrix& x);
Vector operator*(const Matrix& x, const Vector& v);

Vector operator+(const Vector& x, const Vector& y);
Vector operator-(const Vector& x, const Vector& y);
Vector operator*(double s, const Vector& x);

double dot(const Vector& x, const Vector& y);
double norm(const Vector& x);

double frobenius_norm(const Matrix& x);
double frobenius_dot(const Matrix& x, const Matrix& y);

bool is_symmetric(const Matrix& s, double tol = 1e-10);

/// Solves a*x = b by Gaussian elimination with partial pivoting.
/// Throws SingularMatrix when a pivot magnitude drops below 1e-12.
Vector solve_linear(Matrix a, Vector b);

/// Column-wise multi-RHS variant of solve_linear.
Matrix solve_linear(const Matrix& a, const Matrix& b);

Matrix kron(const Matrix& a, const Matrix& b);

/// Smallest eigenvalue of a symmetric matrix, by cyclic Jacobi rotations.
/// Symmetry is checked to 1e-10 (NotSymmetric otherwise); sweeps stop once
/// the off-diagonal Frobenius norm falls below 1e-12.
double min_eig_sym(const Matrix& s);

bool is_positive_definite(const Matrix& s, double tol = 0.0);

}  // namespace safeql
