#include <cmath>

#include "doctest.h"
#include "safeql/errors.hpp"
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

TEST_CASE("system model validation rejects malformed designs") {
    SystemModel sys = benchmark_system();
    CHECK_NOTHROW(sys.validate());

    SystemModel bad = sys;
    bad.R = Matrix{{-0.1}};
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);

    bad = sys;
    bad.M = Matrix{{0.0, 1.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);

    bad = sys;
    bad.B = Matrix(2, 1, 0.0);  // rank-deficient input map
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);

    bad = sys;
    bad.B = Matrix{{1.0}};
    CHECK_THROWS_AS(bad.validate(), InvariantViolation);
}

TEST_CASE("solve_lyapunov closed-form cases") {
    const Matrix p1 = solve_lyapunov(-1.0 * Matrix::identity(2), Matrix::identity(2));
    CHECK(p1(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p1(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p1(0, 1) == doctest::Approx(0.0));

    const Matrix p2 = solve_lyapunov(Matrix{{-1.0, 0.0}, {0.0, -2.0}},
                                     Matrix{{2.0, 0.0}, {0.0, 4.0}});
    CHECK(p2(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p2(1, 1) == doctest::Approx(1.0).epsilon(1e-12));

    const Matrix f{{0.0, 1.0}, {-1.0, -1.0}};
    const Matrix q = Matrix::identity(2);
    const Matrix p3 = solve_lyapunov(f, q);
    CHECK(frobenius_norm(f.transpose() * p3 + p3 * f + q) <= 1e-10);
    CHECK(is_symmetric(p3, 1e-14));

    CHECK_THROWS_AS(solve_lyapunov(f, Matrix{{0.0, 1.0}, {0.0, 0.0}}), NotSymmetric);
    // resonant pair: eigenvalues +1 and -1 sum to zero
    CHECK_THROWS_AS(
        solve_lyapunov(Matrix{{1.0, 0.0}, {0.0, -1.0}}, Matrix::identity(2)),
        SingularMatrix);
}

TEST_CASE("is_hurwitz classifies canonical and benchmark matrices") {
    CHECK(is_hurwitz(-1.0 * Matrix::identity(2)));
    CHECK_FALSE(is_hurwitz(Matrix::identity(2)));
    CHECK_FALSE(is_hurwitz(benchmark_system().A));  // trace 2.8 > 0
}

TEST_CASE("stabilizing_initial_gain certifies its output") {
    SystemModel sys = benchmark_system();
    const Matrix k0 = stabilizing_initial_gain(sys);
    CHECK(is_hurwitz(sys.A - sys.B * k0));

    SystemModel stable;
    stable.A = -1.0 * Matrix::identity(2);
    stable.B = Matrix{{1.0}, {0.5}};
    stable.M = Matrix::identity(2);
    stable.R = Matrix{{1.0}};
    const Matrix k1 = stabilizing_initial_gain(stable);
    CHECK(is_hurwitz(stable.A - stable.B * k1));

    SystemModel unreachable;
    unreachable.A = Matrix::identity(2);  // both modes unstable
    unreachable.B = Matrix{{1.0}, {0.0}};  // second mode unreachable
    unreachable.M = Matrix::identity(2);
    unreachable.R = Matrix{{1.0}};
    CHECK_THROWS_AS(stabilizing_initial_gain(unreachable), NotStabilizable);
}

TEST_CASE("solve_care recovers the scalar closed form") {
    SystemModel sys;
    sys.A = Matrix{{-1.0}};
    sys.B = Matrix{{1.0}};
    sys.M = Matrix{{1.0}};
    sys.R = Matrix{{1.0}};
    const RiccatiSolution sol = solve_care(sys);
    CHECK(std::abs(sol.P(0, 0) - (std::sqrt(2.0) - 1.0)) <= 1e-12);
    CHECK(sol.Wa(0, 0) == doctest::Approx(-(std::sqrt(2.0) - 1.0)).epsilon(1e-12));
}

TEST_CASE("solve_care on the decoupled double integrator design") {
    SystemModel sys;
    sys.A = Matrix(2, 2, 0.0);
    sys.B = Matrix::identity(2);
    sys.M = Matrix::identity(2);
    sys.R = Matrix::identity(2);
    const RiccatiSolution sol = solve_care(sys);
    CHECK(sol.P(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.P(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(sol.P(0, 1)) <= 1e-10);
}

TEST_CASE("solve_care solves the benchmark system") {
    const SystemModel sys = benchmark_system();
    const RiccatiSolution sol = solve_care(sys);

    CHECK(sol.residual <= 1e-8);
    CHECK(sol.iterations <= 50);

    // frozen reference (independent dense ARE solver)
    CHECK(sol.P(0, 0) == doctest::Approx(1.4315954533273023).epsilon(1e-9));
    CHECK(sol.P(0, 1) == doctest::Approx(0.5144009029333869).epsilon(1e-9));
    CHECK(sol.P(1, 0) == doctest::Approx(0.5144009029333869).epsilon(1e-9));
    CHECK(sol.P(1, 1) == doctest::Approx(0.8103585396565958).epsilon(1e-9));

    CHECK(sol.Wa.rows() == 2);
    CHECK(sol.Wa.cols() == 1);
    CHECK(sol.Wa(0, 0) == doctest::Approx(-5.144009029333869).epsilon(1e-9));
    CHECK(sol.Wa(1, 0) == doctest::Approx(-8.103585396565958).epsilon(1e-9));

    const Matrix k = solve_linear(sys.R, sys.B.transpose() * sol.P);
    CHECK(is_hurwitz(sys.A - sys.B * k));
    CHECK(is_positive_definite(sol.P, 1e-9));

    // Qbar block layout
    CHECK(sol.Qbar.rows() == 3);
    CHECK(sol.Qbar(2, 2) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(sol.Qbar(0, 2) == doctest::Approx((sol.P * sys.B)(0, 0)).epsilon(1e-12));
    CHECK(sol.Qbar(2, 0) == doctest::Approx((sol.P * sys.B)(0, 0)).epsilon(1e-12));
    const Matrix q11 = sol.P * sys.A + sys.A.transpose() * sol.P + sol.P + sys.M;
    CHECK(sol.Qbar(0, 0) == doctest::Approx(q11(0, 0)).epsilon(1e-12));
    CHECK(sol.Qbar(1, 1) == doctest::Approx(q11(1, 1)).epsilon(1e-12));

    CHECK(sol.Wc.size() == 6);
}

TEST_CASE("solve_care rejects unstabilizable pairs") {
    SystemModel sys;
    sys.A = Matrix::identity(2);
    sys.B = Matrix{{1.0}, {0.0}};
    sys.M = Matrix::identity(2);
    sys.R = Matrix{{1.0}};
    CHECK_THROWS_AS(solve_care(sys), NotStabilizable);
}
