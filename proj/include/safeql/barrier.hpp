#pragma once

#include "safeql/matrix.hpp"
#include "safeql/riccati.hpp"

namespace safeql {

/// Norm-ball safe set {x : ||x|| <= c} with reciprocal barrier
/// B_s(x) = (s / (c^2 - s))^2, s = x^T x, which blows up on the boundary.
struct BarrierSpec {
    double c = 1.5;
    double gamma0 = 1.0;
    double eps_interior = 1.5e-9;  // 1e-9 * c

    void validate() const;
};

/// Zeroing function h(x) = c^2 - x^T x: positive inside, zero on the edge.
double h(const BarrierSpec& spec, const Vector& x);

/// Reciprocal barrier value. Throws OutsideInterior when ||x|| >= c - eps.
double B_s(const BarrierSpec& spec, const Vector& x);

/// Analytic gradient 4 c^2 s x / (c^2 - s)^3.
Vector grad_B_s(const BarrierSpec& spec, const Vector& x);

/// Linear class-K gain gamma(s) = gamma0 * s; s must be nonnegative.
double gamma(const BarrierSpec& spec, double s);

/// grad B_s(x)^T (Ax + Bu) - gamma(1/B_s(x)). Nonpositive means the barrier
/// inequality holds at (x, u). When B_s <= 1e-12 the constraint cannot bind
/// and a -1e18 sentinel is returned. Needs the model; oracle use only.
double constraint_residual(const BarrierSpec& spec, const SystemModel& sys,
                           const Vector& x, const Vector& u);

}  // namespace safeql
