#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "safeql/matrix.hpp"

namespace safeql {

// Model-free actor-critic learner for the state-action value
//   Q(x, u) = 1/2 [x; u]^T Qbar [x; u],
// parameterized as Wc^T phi(X) over the quadratic monomial basis. The learner
// sees only sampled (x, u) pairs and the known cost matrices M, R; the plant
// matrix A never enters any update below.

std::size_t vech_dim(std::size_t d);

/// Quadratic monomials X_i*X_j for i <= j, row-scan order.
Vector basis_phi(const Vector& X);

/// Weights w with w^T phi(X) = 1/2 X^T Qbar X for symmetric Qbar:
/// diagonal entries contribute Qbar_ii/2, off-diagonals Qbar_ij.
Vector vech_weights(const Matrix& qbar);

/// Exact inverse of vech_weights (d is the side of the recovered matrix).
Matrix unvech(const Vector& w, std::size_t d);

struct GainBlocks {
    Matrix Q21;  // m x n
    Matrix Q22;  // m x m, nudged toward positive definiteness when needed
};

/// Recovers the gain-relevant blocks of the critic's Qbar estimate. If the
/// Q22 block has smallest eigenvalue below 1e-6 * min_eig(R) it is shifted
/// up to that floor so the actor target stays well defined.
GainBlocks extract_gain(const Vector& wc, std::size_t n, std::size_t m, const Matrix& R);

struct LearnGains {
    double eta_c = 20.0;
    double eta_a = 0.05;
    double T = 0.01;        // integration window, seconds
    double k_sb = 0.2;      // safety gain on the barrier-gradient control term
    double Wa_bound = 20.0; // Frobenius bound kept by the actor projection

    /// Throws InvariantViolation; returns human-readable warnings (e.g. a
    /// critic rate that is not well above the actor rate).
    std::vector<std::string> validate(double dt) const;
};

struct WindowSample {
    double t;
    Vector X;
    double g;  // instantaneous cost 1/2 (x^T M x + u^T R u)
};

/// Fixed-capacity ring buffer holding the last T/dt + 1 samples.
class SampleWindow {
public:
    SampleWindow() = default;
    SampleWindow(double T, double dt);

    void push(double t, Vector X, double g);
    bool warmed() const { return buf_.size() == cap_; }
    const WindowSample& front() const { return buf_.front(); }
    const WindowSample& back() const { return buf_.back(); }

    /// Trapezoidal integral of the stored cost samples over [t - T, t].
    double integrate() const;

private:
    std::size_t cap_ = 0;
    std::vector<WindowSample> buf_;  // oldest first
};

struct LearnerState {
    std::size_t n = 0, m = 0, p = 0;
    Vector Wc;   // critic weights, length p
    Matrix Wa;   // actor weights, n x m
    SampleWindow window;
    double last_ec = 0.0;  // most recent TD error (0 until warmed)
    Vector last_psi;       // most recent regressor (empty until warmed)
};

/// Critic starts from the known input-weight block of the cost (Q22 = R),
/// everything else zero; actor starts at zero.
LearnerState make_learner(std::size_t n, std::size_t m, double T, double dt, const Matrix& R);

/// Pushes a sample and returns the windowed cost integral. Throws NotWarmedUp
/// while the window does not yet span T.
double window_push_and_integrate(LearnerState& st, double t, const Vector& X, double g);

/// Boundary fix-up for the windowed cost integral. The input is held constant
/// across each integration step, so u^T R u is piecewise constant with jumps
/// at the sample nodes; the plain trapezoid then biases the integral by
/// 0.25*dt*(u_back^T R u_back - u_front^T R u_front). Subtracting this term
/// makes the control part of the integral exact for the held input. Requires
/// a warmed window.
double hold_correction(const LearnerState& st, const Matrix& R, double dt);

/// e_c = Wc^T (phi_now - phi_then) + integral; returns (e_c, psi).
std::pair<double, Vector> td_error(const Vector& Wc, const Vector& phi_now,
                                   const Vector& phi_then, double integral);

/// d/dt Wc = -eta_c * psi / (1 + psi^T psi)^2 * e_c
Vector critic_derivative(double ec, const Vector& psi, double eta_c);

/// d/dt Wa = proj(-eta_a (Q21^T Q22^{-1} + Wa)); the projection removes the
/// outward radial component once ||Wa||_F reaches the bound.
Matrix actor_derivative(const Matrix& Wa, const Matrix& Q21, const Matrix& Q22,
                        double eta_a, double Wa_bound);

/// One explicit-Euler learning step from the sample (t, x, u). Silently skips
/// updates until the window spans T. M and R are the known cost matrices.
void learner_step(LearnerState& st, const LearnGains& gains, const Matrix& M,
                  const Matrix& R, double t, const Vector& x, const Vector& u, double dt);

}  // namespace safeql
