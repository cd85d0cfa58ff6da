#include "safeql/safe_control.hpp"

#include <algorithm>
#include <cstddef>

#include "safeql/errors.hpp"

namespace safeql {

namespace {

// R^{-1} B^T v for an n-vector v.
Vector r_inv_bt(const SystemModel& sys, const Vector& v) {
    return solve_linear(sys.R, sys.B.transpose() * v);
}

}  // namespace

Vector u_hat_safe(const Matrix& Wa_hat, double k_sb, const SystemModel& sys,
                  const BarrierSpec& spec, const Vector& x) {
    if (Wa_hat.rows() != sys.n() || Wa_hat.cols() != sys.m())
        throw DimensionMismatch("u_hat_safe: actor weights must be n x m");
    const Vector barrier_dir = r_inv_bt(sys, grad_B_s(spec, x));
    Vector u = Wa_hat.transpose() * x;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= k_sb * barrier_dir[i];
    return u;
}

KktDiagnostics nu_star(const SystemModel& sys, const BarrierSpec& spec,
                       const Matrix& P, const Vector& x) {
    const Vector grad = grad_B_s(spec, x);
    const Vector rinv_bt_grad = r_inv_bt(sys, grad);

    KktDiagnostics d;
    d.R_b = dot(sys.B.transpose() * grad, rinv_bt_grad);
    if (d.R_b <= 1e-12) return d;  // constraint insensitive to u: multiplier off

    const double b = B_s(spec, x);
    const double relief = (b <= 1e-12) ? 1e18 : gamma(spec, 1.0 / b);
    d.C_b = -dot(rinv_bt_grad, sys.B.transpose() * (P * x)) +
            dot(grad, sys.A * x) - relief;
    d.nu_star = std::max(d.C_b / d.R_b, 0.0);
    d.active = d.nu_star > 0.0;
    return d;
}

Vector u_star_safe(const SystemModel& sys, const BarrierSpec& spec,
                   const Matrix& P, const Vector& x) {
    const KktDiagnostics d = nu_star(sys, spec, P, x);
    Vector u = -1.0 * r_inv_bt(sys, P * x);
    if (d.nu_star > 0.0) {
        const Vector barrier_dir = r_inv_bt(sys, grad_B_s(spec, x));
        for (std::size_t i = 0; i < u.size(); ++i) u[i] -= d.nu_star * barrier_dir[i];
    }
    return u;
}

}  // namespace safeql
