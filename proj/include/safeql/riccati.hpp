#pragma once

#include <cstddef>

#include "safeql/matrix.hpp"

namespace safeql {

/// Continuous-time plant x' = Ax + Bu with quadratic running cost
/// 1/2 (x^T M x + u^T R u).
struct SystemModel {
    Matrix A;  // n x n
    Matrix B;  // n x m
    Matrix M;  // n x n, symmetric positive semidefinite
    Matrix R;  // m x m, symmetric positive definite

    std::size_t n() const { return A.rows(); }
    std::size_t m() const { return B.cols(); }

    /// Throws InvariantViolation naming the offending field.
    void validate() const;
};

/// Model-based ground truth the learner is judged against.
struct RiccatiSolution {
    Matrix P;         // n x n symmetric positive definite
    Matrix Wa;        // n x m ideal actor weights, u*(x) = Wa^T x
    Vector Wc;        // ideal critic weights, length (n+m)(n+m+1)/2
    Matrix Qbar;      // (n+m) x (n+m) quadratic form of the state-action value
    double residual;  // Frobenius norm of the Riccati defect at P
    int iterations;   // Newton steps taken
};

/// Solves F^T P + P F + Q = 0 through the Kronecker identity
/// (I (x) F^T + F^T (x) I) vec(P) = -vec(Q). Throws NotSymmetric for a
/// non-symmetric Q and SingularMatrix when F has a resonant spectrum.
Matrix solve_lyapunov(const Matrix& f, const Matrix& q);

/// Bass preconditioning: with beta = ||A||_F + 1, solve
/// (A + beta I) X + X (A + beta I)^T = 2 B B^T and return K0 = B^T X^{-1}.
/// The returned gain is certified via is_hurwitz; NotStabilizable otherwise.
Matrix stabilizing_initial_gain(const SystemModel& sys);

/// Lyapunov test: F is Hurwitz iff F^T P + P F + I = 0 has a positive
/// definite solution. A resonant (singular) Lyapunov operator counts as not
/// Hurwitz.
bool is_hurwitz(const Matrix& f);

/// Kleinman iteration for A^T P + P A - P B R^{-1} B^T P + M = 0, started
/// from the Bass gain. Converges when ||P_{k+1} - P_k||_F <= 1e-12; throws
/// NoConvergence past 100 steps or if the final defect exceeds 1e-8.
RiccatiSolution solve_care(const SystemModel& sys);

}  // namespace safeql
