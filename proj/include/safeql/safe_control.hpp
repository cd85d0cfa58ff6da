#pragma once

#include "safeql/barrier.hpp"
#include "safeql/matrix.hpp"
#include "safeql/riccati.hpp"

namespace safeql {

struct KktDiagnostics {
    double nu_star = 0.0;  // optimal multiplier, >= 0
    double C_b = 0.0;      // constraint slack of the unconstrained optimum
    double R_b = 0.0;      // curvature of the constraint along the input
    bool active = false;   // nu_star > 0
};

/// Certainty-equivalence control law the learner can actually run:
/// u = Wa_hat^T x - k_sb R^{-1} B^T grad B_s(x). Uses only the actor
/// estimate, the known B and R, and the barrier; never touches A or P.
Vector u_hat_safe(const Matrix& Wa_hat, double k_sb, const SystemModel& sys,
                  const BarrierSpec& spec, const Vector& x);

/// Multiplier of the barrier-constrained input optimization at x:
/// nu* = max(C_b / R_b, 0) with
///   C_b = -grad^T B R^{-1} B^T P x + grad^T A x - gamma(1/B_s)
///   R_b =  grad^T B R^{-1} B^T grad.
/// R_b <= 1e-12 (origin, or gradient orthogonal to the input map) gives
/// nu* = 0: the input cannot influence the constraint there.
KktDiagnostics nu_star(const SystemModel& sys, const BarrierSpec& spec,
                       const Matrix& P, const Vector& x);

/// Model-based constrained optimum u = -R^{-1} B^T P x - nu* R^{-1} B^T grad.
/// Coincides with the unconstrained LQR law whenever that law already keeps
/// the barrier inequality.
Vector u_star_safe(const SystemModel& sys, const BarrierSpec& spec,
                   const Matrix& P, const Vector& x);

}  // namespace safeql
