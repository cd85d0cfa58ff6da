#include "safeql/riccati.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "safeql/errors.hpp"
#include "safeql/qlearn.hpp"

namespace safeql {

void SystemModel::validate() const {
    const std::size_t nn = A.rows();
    if (A.cols() != nn) throw InvariantViolation("A must be square");
    if (nn == 0) throw InvariantViolation("state dimension must be positive");
    if (B.rows() != nn) throw InvariantViolation("B row count must match A");
    const std::size_t mm = B.cols();
    if (mm == 0) throw InvariantViolation("input dimension must be positive");
    if (M.rows() != nn || M.cols() != nn)
        throw InvariantViolation("M must be n x n");
    if (R.rows() != mm || R.cols() != mm)
        throw InvariantViolation("R must be m x m");
    if (!is_symmetric(M)) throw InvariantViolation("M must be symmetric");
    if (!is_symmetric(R)) throw InvariantViolation("R must be symmetric");
    if (min_eig_sym(M) < -1e-9)
        throw InvariantViolation("M must be positive semidefinite");
    if (min_eig_sym(R) <= 1e-9)
        throw InvariantViolation("R must be positive definite");
    if (min_eig_sym(B.transpose() * B) <= 1e-9)
        throw InvariantViolation("B must have full column rank");
}

Matrix solve_lyapunov(const Matrix& f, const Matrix& q) {
    if (f.rows() != f.cols()) throw DimensionMismatch("solve_lyapunov: F must be square");
    if (q.rows() != f.rows() || q.cols() != f.cols())
        throw DimensionMismatch("solve_lyapunov: Q must match F");
    if (!is_symmetric(q)) throw NotSymmetric("solve_lyapunov: Q must be symmetric");

    const std::size_t nn = f.rows();
    const Matrix ft = f.transpose();
    const Matrix id = Matrix::identity(nn);
    const Matrix op = kron(id, ft) + kron(ft, id);

    // Column-stacked vec: entry (i, j) lands at j*n + i.
    Vector rhs(nn * nn);
    for (std::size_t j = 0; j < nn; ++j)
        for (std::size_t i = 0; i < nn; ++i) rhs[j * nn + i] = -q(i, j);

    const Vector v = solve_linear(op, rhs);
    Matrix p(nn, nn);
    for (std::size_t j = 0; j < nn; ++j)
        for (std::size_t i = 0; i < nn; ++i) p(i, j) = v[j * nn + i];

    // The exact solution is symmetric; strip round-off skew.
    return 0.5 * (p + p.transpose());
}

bool is_hurwitz(const Matrix& f) {
    try {
        const Matrix p = solve_lyapunov(f, Matrix::identity(f.rows()));
        return is_positive_definite(p, 1e-12);
    } catch (const SingularMatrix&) {
        return false;  // eigenvalue pair summing to zero: not strictly stable
    }
}

Matrix stabilizing_initial_gain(const SystemModel& sys) {
    // Already-stable plants need no feedback; this also covers stabilizable
    // pairs whose uncontrollable modes would make the Bass Gramian singular.
    if (is_hurwitz(sys.A)) return Matrix(sys.m(), sys.n());

    const double beta = frobenius_norm(sys.A) + 1.0;
    Matrix shifted = sys.A;
    for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) += beta;

    const Matrix bbt = sys.B * sys.B.transpose();
    Matrix k0(sys.m(), sys.n());
    try {
        const Matrix x = solve_lyapunov(shifted.transpose(), -2.0 * bbt);
        // K0 = B^T X^{-1}, taken as the solution of X K0^T = B.
        k0 = solve_linear(x, sys.B).transpose();
    } catch (const SingularMatrix&) {
        throw NotStabilizable("Bass construction failed: (A, B) appears uncontrollable");
    }
    if (!is_hurwitz(sys.A - sys.B * k0))
        throw NotStabilizable("Bass gain does not stabilize the plant");
    return k0;
}

RiccatiSolution solve_care(const SystemModel& sys) {
    sys.validate();

    Matrix k = stabilizing_initial_gain(sys);
    Matrix p(sys.n(), sys.n());
    int iterations = 0;
    bool converged = false;
    Matrix p_prev(sys.n(), sys.n());

    for (int it = 1; it <= 100; ++it) {
        const Matrix acl = sys.A - sys.B * k;
        const Matrix q = sys.M + k.transpose() * (sys.R * k);
        p = solve_lyapunov(acl, q);
        iterations = it;
        if (it > 1 && frobenius_norm(p - p_prev) <= 1e-12) {
            converged = true;
            break;
        }
        p_prev = p;
        k = solve_linear(sys.R, sys.B.transpose() * p);
    }
    if (!converged) throw NoConvergence("Kleinman iteration did not settle in 100 steps");

    const Matrix kr = solve_linear(sys.R, sys.B.transpose() * p);
    const Matrix defect = sys.A.transpose() * p + p * sys.A -
                          (p * sys.B) * kr + sys.M;
    const double residual = frobenius_norm(defect);
    if (residual > 1e-8)
        throw NoConvergence("Riccati defect " + std::to_string(residual) +
                            " exceeds 1e-8");
    if (!is_positive_definite(p, 1e-12))
        throw NoConvergence("Riccati solution is not positive definite");

    const std::size_t nn = sys.n();
    const std::size_t mm = sys.m();
    Matrix qbar(nn + mm, nn + mm);
    const Matrix q11 = p * sys.A + sys.A.transpose() * p + p + sys.M;
    const Matrix q12 = p * sys.B;
    for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t j = 0; j < nn; ++j) qbar(i, j) = q11(i, j);
        for (std::size_t j = 0; j < mm; ++j) {
            qbar(i, nn + j) = q12(i, j);
            qbar(nn + j, i) = q12(i, j);
        }
    }
    for (std::size_t i = 0; i < mm; ++i)
        for (std::size_t j = 0; j < mm; ++j) qbar(nn + i, nn + j) = sys.R(i, j);

    RiccatiSolution sol;
    sol.P = p;
    sol.Wa = -1.0 * kr.transpose();
    sol.Wc = vech_weights(qbar);
    sol.Qbar = qbar;
    sol.residual = residual;
    sol.iterations = iterations;
    return sol;
}

}  // namespace safeql
