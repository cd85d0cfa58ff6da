#pragma once

#include "safeql/matrix.hpp"
#include "safeql/riccati.hpp"

namespace safeql {

struct PlantState {
    double t = 0.0;
    Vector x;
};

/// Fixed-step integration grid. dt is capped at 0.01 s so the control loop
/// stays well inside the learning window T.
struct IntegratorConfig {
    double dt = 1e-4;
    double t_end = 20.0;

    void validate() const;
    std::size_t steps() const;
};

/// Ax + Bu.
Vector dynamics(const SystemModel& sys, const Vector& x, const Vector& u);

/// Classical fourth-order Runge-Kutta update with u held constant across the
/// step (zero-order hold).
Vector rk4_step(const SystemModel& sys, const Vector& x, const Vector& u,
                double dt);

}  // namespace safeql
