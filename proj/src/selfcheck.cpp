#include "safeql/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include "safeql/barrier.hpp"
#include "safeql/config.hpp"
#include "safeql/errors.hpp"
#include "safeql/harness.hpp"
#include "safeql/plant.hpp"
#include "safeql/qlearn.hpp"
#include "safeql/safe_control.hpp"

namespace safeql {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Deterministic uniform draws; the raw-engine mapping keeps realizations
// identical across standard libraries.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double unit() { return static_cast<double>(eng() >> 11) / 9007199254740992.0; }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double lo, double hi) {
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out(i, j) = rng.range(lo, hi);
    return out;
}

Matrix random_symmetric(Rng& rng, std::size_t d, double lo, double hi) {
    Matrix s(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            const double v = rng.range(lo, hi);
            s(i, j) = v;
            s(j, i) = v;
        }
    return s;
}

Vector random_vector(Rng& rng, std::size_t d, double lo, double hi) {
    Vector v(d);
    for (auto& e : v) e = rng.range(lo, hi);
    return v;
}

// Uniform draw from the disc of the given radius (2-state scenarios).
Vector random_in_disc(Rng& rng, double radius) {
    for (;;) {
        Vector x{rng.range(-radius, radius), rng.range(-radius, radius)};
        if (norm(x) <= radius) return x;
    }
}

const ExperimentConfig& fixture_config() {
    static const ExperimentConfig cfg = default_config();
    return cfg;
}

const RiccatiSolution& fixture_oracle() {
    static const RiccatiSolution sol = solve_care(fixture_config().sys);
    return sol;
}

// The default scenario run, shared by the regulation/convergence checks and
// the learner-invariant scans.
const std::pair<TrajectoryLog, RunMetrics>& fixture_episode() {
    static const auto run = run_episode(fixture_config());
    return run;
}

ExperimentConfig with_seed(const ExperimentConfig& base, std::uint64_t seed) {
    ExperimentConfig cfg = base;
    cfg.seed = seed;
    cfg.noise = make_noise(cfg.sys.m(), seed, base.noise.amplitude,
                           base.noise.num_tones, base.noise.freq_lo,
                           base.noise.freq_hi, base.noise.t_off);
    return cfg;
}

struct SweepPoint {
    double k_sb = 0.0;
    RunMetrics metrics;
    double step_at_min = 0.0;  // ||x_{k+1} - x_k|| where the margin bottomed out
};

SweepPoint run_sweep_point(ExperimentConfig cfg, double ksb) {
    cfg.gains.k_sb = ksb;
    auto [log, metrics] = run_episode(cfg);
    SweepPoint pt;
    pt.k_sb = ksb;
    pt.metrics = metrics;
    std::size_t k_min = 0;
    for (std::size_t k = 1; k < log.size(); ++k)
        if (log.margin[k] < log.margin[k_min]) k_min = k;
    const std::size_t n = log.n;
    auto step_norm = [&](std::size_t k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = log.x[(k + 1) * n + i] - log.x[k * n + i];
            acc += d * d;
        }
        return std::sqrt(acc);
    };
    if (log.size() >= 2) {
        if (k_min + 1 < log.size()) pt.step_at_min = step_norm(k_min);
        if (k_min > 0) pt.step_at_min = std::max(pt.step_at_min, step_norm(k_min - 1));
    }
    return pt;
}

const std::vector<SweepPoint>& fixture_sweep() {
    static const std::vector<SweepPoint> pts = [] {
        const std::vector<double> grid{0.01, 0.1, 0.2, 0.3, 0.5};
        std::vector<std::future<SweepPoint>> jobs;
        for (double v : grid)
            jobs.push_back(std::async(std::launch::async,
                                      [v] { return run_sweep_point(fixture_config(), v); }));
        std::vector<SweepPoint> out;
        for (auto& j : jobs) out.push_back(j.get());
        return out;
    }();
    return pts;
}

const std::vector<RunMetrics>& fixture_seed_runs() {
    static const std::vector<RunMetrics> runs = [] {
        std::vector<RunMetrics> out(20);
        const std::size_t batch = 4;
        for (std::size_t lo = 0; lo < out.size(); lo += batch) {
            std::vector<std::future<RunMetrics>> jobs;
            for (std::size_t s = lo; s < std::min(lo + batch, out.size()); ++s)
                jobs.push_back(std::async(std::launch::async, [s] {
                    return run_episode(with_seed(fixture_config(), s + 1)).second;
                }));
            for (std::size_t i = 0; i < jobs.size(); ++i) out[lo + i] = jobs[i].get();
        }
        return out;
    }();
    return runs;
}

Vector fd_grad(const BarrierSpec& spec, const Vector& x, double h) {
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Vector hi = x;
        Vector lo = x;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (B_s(spec, hi) - B_s(spec, lo)) / (2.0 * h);
    }
    return g;
}

// ---------------------------------------------------------------- checks ---

CheckResult check_solve_linear_residual() {
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(rng.range(0.0, 4.999));
        Matrix a = random_matrix(rng, d, d, -1.0, 1.0);
        for (std::size_t i = 0; i < d; ++i) a(i, i) += static_cast<double>(d) + 1.0;
        const Vector b = random_vector(rng, d, -5.0, 5.0);
        const Vector x = solve_linear(a, b);
        worst = std::max(worst, norm(a * x - b) / (1.0 + norm(b)));
    }
    return {"matlib: linear solve residual stays below 1e-10",
            worst <= 1e-10, "worst relative residual " + num(worst)};
}

CheckResult check_kron_vec() {
    Rng rng(102);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = (trial % 2) ? 3 : 2;
        const Matrix a = random_matrix(rng, d, d, -2.0, 2.0);
        const Matrix b = random_matrix(rng, d, d, -2.0, 2.0);
        const Matrix x = random_matrix(rng, d, d, -2.0, 2.0);
        const Matrix lhs_m = a * x * b.transpose();
        const Matrix k = kron(b, a);
        Vector vec_x(d * d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) vec_x[j * d + i] = x(i, j);
        const Vector rhs = k * vec_x;
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i)
                worst = std::max(worst, std::abs(lhs_m(i, j) - rhs[j * d + i]));
    }
    return {"matlib: kron matches vec(A X B^T) identity", worst <= 1e-10,
            "worst entry error " + num(worst)};
}

CheckResult check_jacobi_eigs() {
    Rng rng(103);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix s = random_symmetric(rng, 2, -3.0, 3.0);
        const double mean = 0.5 * (s(0, 0) + s(1, 1));
        const double det = std::sqrt(0.25 * (s(0, 0) - s(1, 1)) * (s(0, 0) - s(1, 1)) +
                                     s(0, 1) * s(0, 1));
        worst = std::max(worst, std::abs(min_eig_sym(s) - (mean - det)));
    }
    return {"matlib: Jacobi eigenvalues match 2x2 closed form", worst <= 1e-9,
            "worst eigenvalue error " + num(worst)};
}

CheckResult check_lyapunov_residual() {
    Rng rng(104);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + static_cast<std::size_t>(rng.range(0.0, 2.999));
        Matrix f = random_matrix(rng, d, d, -1.0, 1.0);
        const double shift = frobenius_norm(f) + 0.2;
        for (std::size_t i = 0; i < d; ++i) f(i, i) -= shift;
        const Matrix q = random_symmetric(rng, d, -2.0, 2.0);
        const Matrix p = solve_lyapunov(f, q);
        worst = std::max(worst, frobenius_norm(f.transpose() * p + p * f + q));
    }
    return {"riccati: Lyapunov solve residual stays below 1e-10", worst <= 1e-10,
            "worst residual " + num(worst)};
}

CheckResult check_random_riccati() {
    Rng rng(105);
    double worst_res = 0.0;
    bool all_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0.0, 2.999));
        const std::size_t m = 1 + ((n > 1 && rng.unit() < 0.5) ? 1u : 0u);
        SystemModel sys;
        sys.A = random_matrix(rng, n, n, -1.0, 1.0);
        const double shift = frobenius_norm(sys.A) + 0.1;
        for (std::size_t i = 0; i < n; ++i) sys.A(i, i) -= shift;
        do {
            sys.B = random_matrix(rng, n, m, -1.0, 1.0);
        } while (min_eig_sym(sys.B.transpose() * sys.B) <= 1e-6);
        const Matrix g = random_matrix(rng, n, n, -1.0, 1.0);
        sys.M = g.transpose() * g;
        const Matrix h = random_matrix(rng, m, m, -1.0, 1.0);
        sys.R = h.transpose() * h + 0.1 * Matrix::identity(m);

        const RiccatiSolution sol = solve_care(sys);
        worst_res = std::max(worst_res, sol.residual);
        const Matrix k = solve_linear(sys.R, sys.B.transpose() * sol.P);
        if (!is_positive_definite(sol.P, 1e-12) || !is_hurwitz(sys.A - sys.B * k))
            all_ok = false;
    }
    return {"riccati: 100 random stable designs solve cleanly",
            all_ok && worst_res <= 1e-8,
            "worst residual " + num(worst_res) +
                (all_ok ? "" : "; definiteness or stability certificate failed")};
}

CheckResult check_ideal_q_consistency() {
    const RiccatiSolution& sol = fixture_oracle();
    const SystemModel& sys = fixture_config().sys;
    Rng rng(106);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Vector x = random_vector(rng, sys.n(), -2.0, 2.0);
        const Vector u = sol.Wa.transpose() * x;
        Vector X(sys.n() + sys.m());
        for (std::size_t i = 0; i < sys.n(); ++i) X[i] = x[i];
        for (std::size_t i = 0; i < sys.m(); ++i) X[sys.n() + i] = u[i];
        const double q_form = 0.5 * dot(X, sol.Qbar * X);
        const double v_form = 0.5 * dot(x, sol.P * x);
        worst = std::max(worst, std::abs(q_form - v_form));
    }
    return {"riccati: Q(x, u*(x)) equals the quadratic value function",
            worst <= 1e-9, "worst gap " + num(worst)};
}

CheckResult check_rk4_order() {
    const SystemModel& sys = fixture_config().sys;
    const RiccatiSolution& sol = fixture_oracle();
    const Matrix a_cl = sys.A + sys.B * sol.Wa.transpose();
    SystemModel closed;
    closed.A = a_cl;
    closed.B = sys.B;
    closed.M = sys.M;
    closed.R = sys.R;
    const Vector u_zero(sys.m(), 0.0);

    auto integrate = [&](double dt, int steps) {
        Vector x{1.0, 1.0};
        for (int k = 0; k < steps; ++k) x = rk4_step(closed, x, u_zero, dt);
        return x;
    };
    const double dt = 1e-3;
    const Vector x1 = integrate(dt, 200);
    const Vector x2 = integrate(dt / 2.0, 400);
    const Vector x4 = integrate(dt / 4.0, 800);
    const double ratio = norm(x1 - x2) / norm(x2 - x4);
    return {"plant: RK4 shows fourth-order step convergence",
            ratio >= 12.0 && ratio <= 20.0, "halving ratio " + num(ratio)};
}

CheckResult check_rk4_superposition() {
    const SystemModel& sys = fixture_config().sys;
    Rng rng(107);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x1 = random_vector(rng, sys.n(), -2.0, 2.0);
        const Vector x2 = random_vector(rng, sys.n(), -2.0, 2.0);
        const Vector u1 = random_vector(rng, sys.m(), -5.0, 5.0);
        const Vector u2 = random_vector(rng, sys.m(), -5.0, 5.0);
        const Vector lhs = rk4_step(sys, x1 + x2, u1 + u2, 1e-3);
        const Vector rhs = rk4_step(sys, x1, u1, 1e-3) + rk4_step(sys, x2, u2, 1e-3);
        worst = std::max(worst, norm(lhs - rhs));
    }
    return {"plant: RK4 is linear in (x, u) for the LTI plant", worst <= 1e-12,
            "worst deviation " + num(worst)};
}

CheckResult check_barrier_blowup() {
    const BarrierSpec& spec = fixture_config().spec;
    double prev = 0.0;
    bool monotone = true;
    for (int k = 1; k <= 40; ++k) {
        const double r = spec.c * (static_cast<double>(k) / 40.0) * (1.0 - 1e-4);
        const double b = B_s(spec, Vector{r, 0.0});
        if (b < prev) monotone = false;
        prev = b;
    }
    const double edge = B_s(spec, Vector{spec.c * (1.0 - 1e-4), 0.0});
    return {"barrier: value grows monotonically and blows up at the rim",
            monotone && edge > 1e6, "value at the rim " + num(edge)};
}

CheckResult check_barrier_gradient_fd() {
    const BarrierSpec& spec = fixture_config().spec;
    Rng rng(108);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double radius = rng.range(0.01, 0.95) * spec.c;
        const double ang = rng.range(0.0, 2.0 * 3.14159265358979323846);
        const Vector x{radius * std::cos(ang), radius * std::sin(ang)};
        const Vector a = grad_B_s(spec, x);
        const Vector f = fd_grad(spec, x, 1e-6);
        worst = std::max(worst, norm(a - f) / std::max(norm(f), 1e-12));
    }
    return {"barrier: analytic gradient matches central differences", worst <= 1e-5,
            "worst relative error " + num(worst)};
}

CheckResult check_barrier_h_consistency() {
    const BarrierSpec& spec = fixture_config().spec;
    bool ok = true;
    for (int k = 0; k <= 60; ++k) {
        const double r = spec.c * (0.99999 + 2e-5 * (static_cast<double>(k) / 60.0));
        const Vector x{r, 0.0};
        const bool inside = h(spec, x) > 0.0 && r < spec.c - spec.eps_interior;
        bool finite_b;
        try {
            finite_b = std::isfinite(B_s(spec, x));
        } catch (const OutsideInterior&) {
            finite_b = false;
        }
        if (inside != finite_b) ok = false;
    }
    for (double r : {0.0, 0.3, 0.9, 1.2, 1.49}) {
        const Vector x{r, 0.0};
        bool finite_b;
        try {
            finite_b = std::isfinite(B_s(spec, x));
        } catch (const OutsideInterior&) {
            finite_b = false;
        }
        if (!(h(spec, x) > 0.0) || !finite_b) ok = false;
    }
    return {"barrier: h > 0, strict interior, and finite value coincide", ok, ""};
}

CheckResult check_parameterization_identity() {
    Rng rng(109);
    double worst = 0.0;
    bool roundtrip_exact = true;
    const std::size_t dims[4] = {2, 3, 4, 5};
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = dims[trial % 4];
        const Matrix q = random_symmetric(rng, d, -2.0, 2.0);
        const Vector x = random_vector(rng, d, -2.0, 2.0);
        const Vector w = vech_weights(q);
        const double lhs = dot(w, basis_phi(x));
        const double rhs = 0.5 * dot(x, q * x);
        worst = std::max(worst, std::abs(lhs - rhs));
        const Matrix back = unvech(w, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (back(i, j) != q(i, j)) roundtrip_exact = false;
    }
    return {"qlearn: weight basis reproduces the quadratic form",
            worst <= 1e-12 && roundtrip_exact,
            "worst identity gap " + num(worst) +
                (roundtrip_exact ? "" : "; vech roundtrip not exact")};
}

CheckResult check_projection_invariant() {
    const auto& [log, metrics] = fixture_episode();
    const double bound = fixture_config().gains.Wa_bound;
    const std::size_t nm = log.n * log.m;
    double worst = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < log.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < nm; ++i) {
            const double v = log.Wa[k * nm + i];
            if (!std::isfinite(v)) finite = false;
            acc += v * v;
        }
        worst = std::max(worst, std::sqrt(acc));
        if (!std::isfinite(log.norm_x[k])) finite = false;
    }
    for (double v : log.Wc)
        if (!std::isfinite(v)) finite = false;
    (void)metrics;
    return {"qlearn: actor stays inside the projection ball, signals bounded",
            finite && worst <= bound + 1e-9,
            "max ||Wa||_F " + num(worst) + " vs bound " + num(bound)};
}

// Recomputes the learner's regressor from the logged (x, u) samples.
struct ExcitationScan {
    double min_gram_eig = 0.0;
    double max_normalized_regressor = 0.0;
};

ExcitationScan excitation_scan() {
    const auto& [log, metrics] = fixture_episode();
    (void)metrics;
    const ExperimentConfig& cfg = fixture_config();
    const std::size_t lag =
        static_cast<std::size_t>(std::llround(cfg.gains.T / cfg.integ.dt));
    const std::size_t d = log.n + log.m;
    const std::size_t p = vech_dim(d);
    const std::size_t horizon = std::min<std::size_t>(
        log.size(), static_cast<std::size_t>(std::llround(
                        std::min(cfg.noise.t_off, cfg.integ.t_end) / cfg.integ.dt)));

    Matrix gram(p, p);
    std::size_t count = 0;
    ExcitationScan out;
    auto sample_x = [&](std::size_t k) {
        Vector X(d);
        for (std::size_t i = 0; i < log.n; ++i) X[i] = log.x[k * log.n + i];
        for (std::size_t i = 0; i < log.m; ++i) X[log.n + i] = log.u[k * log.m + i];
        return X;
    };
    for (std::size_t k = lag; k < horizon; ++k) {
        const Vector psi = basis_phi(sample_x(k)) - basis_phi(sample_x(k - lag));
        const double den = 1.0 + dot(psi, psi);
        out.max_normalized_regressor =
            std::max(out.max_normalized_regressor, norm(psi) / den);
        const double w = 1.0 / (den * den);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) gram(i, j) += w * psi[i] * psi[j];
        ++count;
    }
    if (count > 0) gram = (1.0 / static_cast<double>(count)) * gram;
    out.min_gram_eig = min_eig_sym(gram);
    return out;
}

const ExcitationScan& fixture_excitation() {
    static const ExcitationScan scan = excitation_scan();
    return scan;
}

CheckResult check_regressor_bound() {
    const double worst = fixture_excitation().max_normalized_regressor;
    return {"qlearn: normalized regressor magnitude stays below 1/2",
            worst <= 0.5 + 1e-12, "max ||psi||/(1+psi'psi) = " + num(worst)};
}

CheckResult check_excitation_level() {
    const double level = fixture_excitation().min_gram_eig;
    return {"qlearn: exploration phase excites every weight direction",
            level > 0.0, "min eig of averaged regressor Gram " + num(level)};
}

std::pair<bool, std::string> td_fixed_point_outcome() {
    ExperimentConfig cfg = fixture_config();
    cfg.baseline = true;  // pure u = Wa^T x, no barrier term
    cfg.noise = make_noise(cfg.sys.m(), cfg.seed, 0.0, cfg.noise.num_tones,
                           cfg.noise.freq_lo, cfg.noise.freq_hi, cfg.noise.t_off);
    EpisodeOverrides ov;
    ov.Wc0 = fixture_oracle().Wc;
    ov.Wa0 = fixture_oracle().Wa;
    ov.freeze_learning = true;
    const auto [log, metrics] = run_episode(cfg, ov);
    (void)metrics;
    double worst = 0.0;
    for (double e : log.ec) worst = std::max(worst, std::abs(e));
    return {worst <= 1e-6, "max |e_c| " + num(worst) + " over " +
                               num(cfg.integ.t_end) + " s with ideal weights"};
}

CheckResult check_td_fixed_point() {
    const auto [ok, detail] = td_fixed_point_outcome();
    return {"qlearn: TD error vanishes at the ideal fixed point", ok, detail};
}

struct KktScanResult {
    double worst_projection_gap = 0.0;
    double worst_slackness = 0.0;
    double worst_residual = -1e300;
    bool slack_multiplier_zero = true;
};

KktScanResult kkt_scan(int samples) {
    const SystemModel& sys = fixture_config().sys;
    const BarrierSpec& spec = fixture_config().spec;
    const Matrix& P = fixture_oracle().P;
    Rng rng(110);
    KktScanResult out;
    for (int trial = 0; trial < samples; ++trial) {
        const Vector x = random_in_disc(rng, spec.c - 0.05);
        const KktDiagnostics d = nu_star(sys, spec, P, x);
        const Vector us = u_star_safe(sys, spec, P, x);

        // Independent oracle: R-weighted projection of the unconstrained
        // optimum onto the half-space where the barrier inequality holds.
        const Vector u0 = -1.0 * solve_linear(sys.R, sys.B.transpose() * (P * x));
        Vector uproj = u0;
        const double b = B_s(spec, x);
        if (b > 1e-12) {
            const Vector grad = grad_B_s(spec, x);
            const Vector a = sys.B.transpose() * grad;
            const Vector rinv_a = solve_linear(sys.R, a);
            const double curv = dot(a, rinv_a);
            const double bound = gamma(spec, 1.0 / b) - dot(grad, sys.A * x);
            if (curv > 1e-12 && dot(a, u0) > bound) {
                const double scale = (bound - dot(a, u0)) / curv;
                uproj = u0 + scale * rinv_a;
            }
        }
        out.worst_projection_gap = std::max(out.worst_projection_gap, norm(us - uproj));

        const double res = constraint_residual(spec, sys, x, us);
        out.worst_slackness = std::max(out.worst_slackness, std::abs(d.nu_star * res));
        if (d.R_b > 1e-12) {
            out.worst_residual = std::max(out.worst_residual, res);
            if (d.C_b <= 0.0 && d.nu_star != 0.0) out.slack_multiplier_zero = false;
        }
    }
    return out;
}

std::pair<bool, std::string> kkt_outcome() {
    const KktScanResult r = kkt_scan(10000);
    const bool ok = r.worst_projection_gap <= 1e-9 && r.worst_slackness <= 1e-9 &&
                    r.worst_residual <= 1e-9 && r.slack_multiplier_zero;
    std::ostringstream os;
    os << "projection gap " << num(r.worst_projection_gap) << ", slackness "
       << num(r.worst_slackness) << ", max residual " << num(r.worst_residual);
    if (!r.slack_multiplier_zero) os << ", multiplier fired while feasible";
    return {ok, os.str()};
}

CheckResult check_kkt_scan() {
    const auto [ok, detail] = kkt_outcome();
    return {"safecontrol: constrained optimum matches projection oracle", ok, detail};
}

CheckResult check_certainty_equivalence_gap() {
    const SystemModel& sys = fixture_config().sys;
    const BarrierSpec& spec = fixture_config().spec;
    const RiccatiSolution& sol = fixture_oracle();
    const double k_sb = fixture_config().gains.k_sb;
    Rng rng(111);
    double worst = 0.0;
    int used = 0;
    for (int trial = 0; trial < 2000 && used < 500; ++trial) {
        const Vector x = random_in_disc(rng, spec.c - 0.05);
        const KktDiagnostics d = nu_star(sys, spec, sol.P, x);
        if (d.active) continue;  // gap formula applies off the constraint
        ++used;
        const Vector gap = u_hat_safe(sol.Wa, k_sb, sys, spec, x) -
                           u_star_safe(sys, spec, sol.P, x);
        const Vector expected =
            (-k_sb) * solve_linear(sys.R, sys.B.transpose() * grad_B_s(spec, x));
        worst = std::max(worst, norm(gap - expected));
    }
    return {"safecontrol: learned-law gap is exactly the barrier push-off",
            worst <= 1e-12 && used > 0,
            "worst gap error " + num(worst) + " over " + std::to_string(used) +
                " inactive-constraint states"};
}

CheckResult check_determinism() {
    ExperimentConfig cfg = fixture_config();
    cfg.integ.t_end = 2.0;
    const auto run1 = run_episode(cfg);
    const auto run2 = run_episode(cfg);
    const TrajectoryLog& a = run1.first;
    const TrajectoryLog& b = run2.first;
    const bool same = a.t == b.t && a.x == b.x && a.u == b.u && a.norm_x == b.norm_x &&
                      a.Bs == b.Bs && a.ec == b.ec && a.margin == b.margin &&
                      a.Wc == b.Wc && a.Wa == b.Wa;
    return {"harness: identical configs give bit-identical trajectories", same,
            same ? "" : "repeat run diverged"};
}

CheckResult check_sweep_consistency() {
    ExperimentConfig cfg = fixture_config();
    cfg.integ.t_end = 2.0;
    const std::vector<double> grid{0.1, 0.3};
    const std::vector<SweepRow> rows = sweep_ksb(cfg, grid);
    bool ok = rows.size() == grid.size();
    for (std::size_t i = 0; ok && i < grid.size(); ++i) {
        ExperimentConfig one = cfg;
        one.gains.k_sb = grid[i];
        const RunMetrics direct = run_episode(one).second;
        ok = rows[i].k_sb == grid[i] && rows[i].metrics.total_cost == direct.total_cost &&
             rows[i].metrics.peak_control == direct.peak_control &&
             rows[i].metrics.min_margin == direct.min_margin &&
             rows[i].metrics.actor_error == direct.actor_error &&
             rows[i].metrics.safety_violated == direct.safety_violated;
    }
    return {"harness: sweep rows equal individually run episodes", ok, ""};
}

std::pair<bool, std::string> seed_safety_outcome() {
    const auto& runs = fixture_seed_runs();
    double worst = std::numeric_limits<double>::infinity();
    for (const RunMetrics& r : runs) worst = std::min(worst, r.min_margin);
    return {worst >= 0.0,
            "smallest margin over 20 seeded runs " + num(worst)};
}

CheckResult check_seed_safety() {
    const auto [ok, detail] = seed_safety_outcome();
    return {"harness: every seeded run keeps the state inside the safe set", ok, detail};
}

std::pair<bool, std::string> regulation_outcome() {
    const auto& [log, metrics] = fixture_episode();
    (void)metrics;
    const double final_norm = log.norm_x.back();
    return {final_norm <= 0.05, "||x(t_end)|| = " + num(final_norm)};
}

CheckResult check_regulation() {
    const auto [ok, detail] = regulation_outcome();
    return {"harness: state settles near the origin after excitation stops", ok, detail};
}

std::pair<bool, std::string> margin_ordering_outcome() {
    const auto& pts = fixture_sweep();
    bool ok = true;
    std::ostringstream os;
    os << "margins";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        os << " " << num(pts[i].metrics.min_margin);
        if (i + 1 < pts.size()) {
            const double slack = std::max(pts[i].step_at_min, pts[i + 1].step_at_min);
            if (pts[i + 1].metrics.min_margin < pts[i].metrics.min_margin - slack)
                ok = false;
        }
    }
    return {ok, os.str()};
}

CheckResult check_margin_ordering() {
    const auto [ok, detail] = margin_ordering_outcome();
    return {"harness: stronger safety gain never shrinks the worst margin", ok, detail};
}

// ------------------------------------------------------------- criteria ---

CheckResult criterion_riccati() {
    const auto t0 = Clock::now();
    const RiccatiSolution sol = solve_care(fixture_config().sys);
    const double ms = seconds_since(t0) * 1e3;
    const SystemModel& sys = fixture_config().sys;
    const Matrix k = solve_linear(sys.R, sys.B.transpose() * sol.P);
    const bool hurwitz = is_hurwitz(sys.A - sys.B * k);
    const bool ok = sol.residual <= 1e-8 && sol.iterations <= 50 && hurwitz && ms < 10.0;
    std::ostringstream os;
    os << "residual " << num(sol.residual) << ", " << sol.iterations
       << " iterations, closed loop " << (hurwitz ? "stable" : "UNSTABLE") << ", "
       << num(ms) << " ms";
    return {"riccati oracle: accurate, convergent, stabilizing, fast", ok, os.str()};
}

CheckResult criterion_scalar_closed_form() {
    SystemModel sys;
    sys.A = Matrix(1, 1, {-1.0});
    sys.B = Matrix(1, 1, {1.0});
    sys.M = Matrix(1, 1, {1.0});
    sys.R = Matrix(1, 1, {1.0});
    const double p = solve_care(sys).P(0, 0);
    const double expected = std::sqrt(2.0) - 1.0;
    const double err = std::abs(p - expected);
    return {"scalar design recovers the closed-form value", err <= 1e-12,
            "P = " + num(p) + ", error " + num(err)};
}

CheckResult criterion_parameterization() {
    CheckResult inner = check_parameterization_identity();
    inner.name = "quadratic weight basis is exact and invertible";
    return inner;
}

CheckResult criterion_barrier_gradient() {
    CheckResult inner = check_barrier_gradient_fd();
    inner.name = "barrier gradient matches finite differences";
    return inner;
}

CheckResult criterion_td_fixed_point() {
    const auto [ok, detail] = td_fixed_point_outcome();
    return {"TD error vanishes under ideal weights and controller", ok, detail};
}

CheckResult criterion_kkt() {
    const auto [ok, detail] = kkt_outcome();
    return {"constrained optimum satisfies the KKT conditions", ok, detail};
}

CheckResult criterion_seed_safety() {
    const auto [ok, detail] = seed_safety_outcome();
    return {"learning runs stay safe across 20 exploration seeds", ok, detail};
}

CheckResult criterion_regulation() {
    const auto [ok, detail] = regulation_outcome();
    return {"default scenario regulates the state to the origin", ok, detail};
}

CheckResult criterion_actor_convergence() {
    const double err = fixture_episode().second.actor_error;
    return {"actor weights approach the optimal gain", err <= 0.25,
            "relative gain error " + num(err) + " at t_end"};
}

CheckResult criterion_sweep_trends() {
    const auto& pts = fixture_sweep();
    bool cost_ok = true;
    bool peak_ok = true;
    bool none_violated = true;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1].metrics.total_cost > pts[i].metrics.total_cost * 1.02)
            cost_ok = false;
    for (std::size_t i = 2; i + 1 < pts.size(); ++i)
        if (pts[i + 1].metrics.peak_control < pts[i].metrics.peak_control)
            peak_ok = false;
    for (const auto& pt : pts)
        if (pt.metrics.safety_violated) none_violated = false;
    const auto [margin_ok, margin_detail] = margin_ordering_outcome();

    std::ostringstream os;
    os << "costs";
    for (const auto& pt : pts) os << " " << num(pt.metrics.total_cost);
    os << "; peaks";
    for (const auto& pt : pts) os << " " << num(pt.metrics.peak_control);
    os << "; " << margin_detail;
    if (!cost_ok) os << "; cost trend not non-increasing";
    if (!peak_ok) os << "; peak trend not non-decreasing";
    if (!none_violated) os << "; a sweep run violated safety";
    return {"safety-gain sweep shows the expected cost/margin/peak trends",
            cost_ok && peak_ok && margin_ok && none_violated, os.str()};
}

CheckResult criterion_forward_invariance() {
    const SystemModel& sys = fixture_config().sys;
    const BarrierSpec& spec = fixture_config().spec;
    const Matrix& P = fixture_oracle().P;
    const double dt = fixture_config().integ.dt;
    const int steps = static_cast<int>(std::llround(20.0 / dt));

    auto worst_margin_from = [&](Vector x) {
        double worst = spec.c - norm(x);
        for (int k = 0; k < steps; ++k) {
            const Vector u = u_star_safe(sys, spec, P, x);
            x = rk4_step(sys, x, u, dt);
            worst = std::min(worst, spec.c - norm(x));
        }
        return worst;
    };

    Rng rng(112);
    std::vector<Vector> starts;
    for (int trial = 0; trial < 100; ++trial) starts.push_back(random_in_disc(rng, 1.4));

    double worst = std::numeric_limits<double>::infinity();
    const std::size_t batch = 8;
    for (std::size_t lo = 0; lo < starts.size(); lo += batch) {
        std::vector<std::future<double>> jobs;
        for (std::size_t i = lo; i < std::min(lo + batch, starts.size()); ++i)
            jobs.push_back(std::async(std::launch::async,
                                      [&, i] { return worst_margin_from(starts[i]); }));
        for (auto& j : jobs) worst = std::min(worst, j.get());
    }
    return {"oracle safe controller keeps 100 random starts inside the set",
            worst >= 0.0, "worst margin " + num(worst)};
}

}  // namespace

bool SuiteReport::all_passed() const {
    for (const auto& c : properties)
        if (!c.pass) return false;
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

bool are_residual_ok(const SystemModel& sys, const Matrix& P, double tol) {
    const Matrix kr = solve_linear(sys.R, sys.B.transpose() * P);
    const Matrix defect =
        sys.A.transpose() * P + P * sys.A - (P * sys.B) * kr + sys.M;
    return frobenius_norm(defect) <= tol;
}

SuiteReport run_suite() {
    const auto t0 = Clock::now();
    SuiteReport report;

    report.properties.push_back(check_solve_linear_residual());
    report.properties.push_back(check_kron_vec());
    report.properties.push_back(check_jacobi_eigs());
    report.properties.push_back(check_lyapunov_residual());
    report.properties.push_back(check_random_riccati());
    report.properties.push_back(check_ideal_q_consistency());
    report.properties.push_back(check_rk4_order());
    report.properties.push_back(check_rk4_superposition());
    report.properties.push_back(check_barrier_blowup());
    report.properties.push_back(check_barrier_gradient_fd());
    report.properties.push_back(check_barrier_h_consistency());
    report.properties.push_back(check_parameterization_identity());
    report.properties.push_back(check_projection_invariant());
    report.properties.push_back(check_regressor_bound());
    report.properties.push_back(check_excitation_level());
    report.properties.push_back(check_td_fixed_point());
    report.properties.push_back(check_kkt_scan());
    report.properties.push_back(check_certainty_equivalence_gap());
    report.properties.push_back(check_determinism());
    report.properties.push_back(check_sweep_consistency());
    report.properties.push_back(check_seed_safety());
    report.properties.push_back(check_regulation());
    report.properties.push_back(check_margin_ordering());

    {
        const SystemModel& sys = fixture_config().sys;
        const bool clean = are_residual_ok(sys, fixture_oracle().P);
        Matrix bad = fixture_oracle().P;
        bad(0, 0) += 1e-3;
        const bool tripped = !are_residual_ok(sys, bad);
        report.properties.push_back(
            {"verify detects an injected Riccati defect", clean && tripped,
             clean ? (tripped ? "" : "perturbed solution slipped through")
                   : "clean solution rejected"});
    }

    report.criteria.push_back(criterion_riccati());
    report.criteria.push_back(criterion_scalar_closed_form());
    report.criteria.push_back(criterion_parameterization());
    report.criteria.push_back(criterion_barrier_gradient());
    report.criteria.push_back(criterion_td_fixed_point());
    report.criteria.push_back(criterion_kkt());
    report.criteria.push_back(criterion_seed_safety());
    report.criteria.push_back(criterion_regulation());
    report.criteria.push_back(criterion_actor_convergence());
    report.criteria.push_back(criterion_sweep_trends());
    report.criteria.push_back(criterion_forward_invariance());

    report.total_seconds = seconds_since(t0);
    report.criteria.push_back(
        {"full verification completes within the time budget",
         report.total_seconds < 60.0, num(report.total_seconds) + " s elapsed"});
    return report;
}

int run_verify(std::ostream& out) {
    const SuiteReport report = run_suite();
    auto print = [&out](const char* tag, const std::vector<CheckResult>& list) {
        std::size_t idx = 0;
        for (const auto& c : list) {
            ++idx;
            out << tag << " " << (idx < 10 ? " " : "") << idx << ": "
                << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
            if (!c.detail.empty()) out << "  [" << c.detail << "]";
            out << "\n";
        }
    };
    print("property ", report.properties);
    print("criterion", report.criteria);
    out << (report.all_passed() ? "all checks passed" : "CHECK FAILURES PRESENT")
        << " (" << num(report.total_seconds) << " s)\n";
    return report.all_passed() ? 0 : 1;
}

}  // namespace safeql
