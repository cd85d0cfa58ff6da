#include "safeql/plant.hpp"

#include <cmath>
#include <cstddef>

#include "safeql/errors.hpp"

namespace safeql {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || dt > 0.01)
        throw InvariantViolation("dt must lie in (0, 0.01]");
    if (t_end < dt) throw InvariantViolation("t_end must be at least dt");
    const double ratio = t_end / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw InvariantViolation("t_end must be an integral number of steps");
}

std::size_t IntegratorConfig::steps() const {
    return static_cast<std::size_t>(std::llround(t_end / dt));
}

Vector dynamics(const SystemModel& sys, const Vector& x, const Vector& u) {
    if (x.size() != sys.n() || u.size() != sys.m())
        throw DimensionMismatch("dynamics: state/input size mismatch");
    Vector out = sys.A * x;
    const Vector bu = sys.B * u;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bu[i];
    return out;
}

Vector rk4_step(const SystemModel& sys, const Vector& x, const Vector& u,
                double dt) {
    if (dt <= 0.0) throw InvariantViolation("rk4_step: dt must be positive");
    const Vector k1 = dynamics(sys, x, u);
    const Vector k2 = dynamics(sys, x + (0.5 * dt) * k1, u);
    const Vector k3 = dynamics(sys, x + (0.5 * dt) * k2, u);
    const Vector k4 = dynamics(sys, x + dt * k3, u);
    Vector out = x;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace safeql
