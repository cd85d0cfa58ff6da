#include "safeql/barrier.hpp"

#include <cmath>
#include <cstddef>

#include "safeql/errors.hpp"
#include "safeql/plant.hpp"

namespace safeql {

void BarrierSpec::validate() const {
    if (!(c > 0.0)) throw InvariantViolation("barrier radius c must be positive");
    if (!(gamma0 > 0.0)) throw InvariantViolation("gamma0 must be positive");
    if (!(eps_interior > 0.0) || eps_interior >= c)
        throw InvariantViolation("eps_interior must lie in (0, c)");
}

double h(const BarrierSpec& spec, const Vector& x) {
    return spec.c * spec.c - dot(x, x);
}

namespace {

// Squared radius, guarded against the boundary pole.
double interior_s(const BarrierSpec& spec, const Vector& x) {
    const double s = dot(x, x);
    const double lim = spec.c - spec.eps_interior;
    if (s >= lim * lim) throw OutsideInterior("state too close to the safe-set boundary");
    return s;
}

}  // namespace

double B_s(const BarrierSpec& spec, const Vector& x) {
    const double s = interior_s(spec, x);
    const double d = spec.c * spec.c - s;
    const double r = s / d;
    return r * r;
}

Vector grad_B_s(const BarrierSpec& spec, const Vector& x) {
    const double s = interior_s(spec, x);
    const double d = spec.c * spec.c - s;
    const double scale = 4.0 * spec.c * spec.c * s / (d * d * d);
    return scale * x;
}

double gamma(const BarrierSpec& spec, double s) {
    if (s < 0.0) throw NegativeArgument("gamma is only defined for s >= 0");
    return spec.gamma0 * s;
}

double constraint_residual(const BarrierSpec& spec, const SystemModel& sys,
                           const Vector& x, const Vector& u) {
    const double b = B_s(spec, x);
    if (b <= 1e-12) return -1e18;  // constraint never binds at the origin
    const Vector grad = grad_B_s(spec, x);
    return dot(grad, dynamics(sys, x, u)) - gamma(spec, 1.0 / b);
}

}  // namespace safeql
