#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "safeql/errors.hpp"
#include "safeql/plant.hpp"
#include "safeql/riccati.hpp"

using namespace safeql;

namespace {

SystemModel benchmark_system() {
    SystemModel sys;
    sys.A = Matrix{{0.0, 1.0}, {1.6, 2.8}};
    sys.B = Matrix{{0.0}, {1.0}};
    sys.M = Matrix::identity(2);
    sys.R = Matrix{{0.1}};
    return sys;
}

}  // namespace

TEST_CASE("integrator config validation") {
    IntegratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.steps() * cfg.dt == doctest::Approx(cfg.t_end));

    IntegratorConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);
    bad.dt = 0.02;  // exceeds the step ceiling
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);
    bad.dt = 1e-3;
    bad.t_end = 1e-4;
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);
    bad.t_end = 0.0105;  // not an integral number of steps
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);
}

TEST_CASE("dynamics evaluates Ax + Bu") {
    const SystemModel sys = benchmark_system();
    CHECK(dynamics(sys, Vector{0.0, 0.0}, Vector{0.0}) == Vector{0.0, 0.0});

    const Vector drift = dynamics(sys, Vector{1.0, 1.0}, Vector{0.0});
    CHECK(drift[0] == doctest::Approx(1.0));
    CHECK(drift[1] == doctest::Approx(4.4));

    const Vector push = dynamics(sys, Vector{0.0, 0.0}, Vector{1.0});
    CHECK(push[0] == doctest::Approx(0.0));
    CHECK(push[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(dynamics(sys, Vector{1.0}, Vector{0.0}), DimensionMismatch);
    CHECK_THROWS_AS(dynamics(sys, Vector{1.0, 1.0}, Vector{0.0, 0.0}),
                    DimensionMismatch);
}

TEST_CASE("rk4 matches the scalar exponential to fifth order") {
    SystemModel sys;
    sys.A = Matrix{{-1.0}};
    sys.B = Matrix{{1.0}};
    sys.M = Matrix{{1.0}};
    sys.R = Matrix{{1.0}};
    const Vector next = rk4_step(sys, Vector{1.0}, Vector{0.0}, 0.1);
    CHECK(next[0] == doctest::Approx(0.9048375).epsilon(1e-12));
    CHECK(std::abs(next[0] - std::exp(-0.1)) <= 8.3e-8);
}

TEST_CASE("rk4 leaves the state alone under zero dynamics") {
    SystemModel sys;
    sys.A = Matrix(2, 2, 0.0);
    sys.B = Matrix{{0.0}, {1.0}};
    sys.M = Matrix::identity(2);
    sys.R = Matrix{{1.0}};
    CHECK(rk4_step(sys, Vector{3.0, -2.0}, Vector{0.0}, 1e-3) == Vector{3.0, -2.0});
}

TEST_CASE("rk4 tracks the matrix exponential on the benchmark system") {
    const SystemModel sys = benchmark_system();
    const Vector x0{1.0, 1.0};
    const Vector got = rk4_step(sys, x0, Vector{0.0}, 1e-3);
    const Vector want = oracles::expm(sys.A, 1e-3) * x0;
    CHECK(norm(got - want) <= 1e-12);
}

TEST_CASE("rk4 converges at fourth order on the stabilized loop") {
    const SystemModel sys = benchmark_system();
    const RiccatiSolution sol = solve_care(sys);
    SystemModel closed = sys;
    closed.A = sys.A + sys.B * sol.Wa.transpose();

    auto integrate = [&](double dt, int steps) {
        Vector x{1.0, 1.0};
        for (int k = 0; k < steps; ++k) x = rk4_step(closed, x, Vector{0.0}, dt);
        return x;
    };
    const Vector coarse = integrate(1e-3, 200);
    const Vector half = integrate(5e-4, 400);
    const Vector quarter = integrate(2.5e-4, 800);
    const double ratio = norm(coarse - half) / norm(half - quarter);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("rk4 is linear in state and input") {
    const SystemModel sys = benchmark_system();
    const Vector x1{0.3, -0.7};
    const Vector x2{-1.1, 0.4};
    const Vector u1{2.0};
    const Vector u2{-0.5};
    const Vector joint = rk4_step(sys, x1 + x2, u1 + u2, 1e-3);
    const Vector split = rk4_step(sys, x1, u1, 1e-3) + rk4_step(sys, x2, u2, 1e-3);
    CHECK(norm(joint - split) <= 1e-12);
}
