#include "safeql/harness.hpp"

#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <random>

#include "safeql/errors.hpp"
#include "safeql/safe_control.hpp"

namespace safeql {

void NoiseSpec::validate(std::size_t m) const {
    if (amplitude < 0.0) throw InvariantViolation("noise amplitude must be >= 0");
    if (num_tones == 0) throw InvariantViolation("noise needs at least one tone");
    if (!(freq_lo > 0.0)) throw InvariantViolation("noise_freq_lo must be > 0");
    if (num_tones > 1 && !(freq_hi > freq_lo))
        throw InvariantViolation("noise_freq_hi must exceed noise_freq_lo");
    if (t_off < 0.0) throw InvariantViolation("noise_t_off must be >= 0");
    if (omegas.size() != num_tones)
        throw InvariantViolation("noise tone table not initialized");
    for (std::size_t k = 0; k + 1 < omegas.size(); ++k)
        if (!(omegas[k] < omegas[k + 1]))
            throw InvariantViolation("noise frequencies must be strictly increasing");
    if (phases.size() != m * num_tones)
        throw InvariantViolation("noise phases not initialized for this input dimension");
}

NoiseSpec make_noise(std::size_t m, std::uint64_t seed, double amplitude,
                     std::size_t num_tones, double freq_lo, double freq_hi,
                     double t_off) {
    NoiseSpec ns;
    ns.amplitude = amplitude;
    ns.num_tones = num_tones;
    ns.freq_lo = freq_lo;
    ns.freq_hi = freq_hi;
    ns.t_off = t_off;

    ns.omegas.resize(num_tones);
    for (std::size_t k = 0; k < num_tones; ++k)
        ns.omegas[k] = (num_tones == 1)
                           ? freq_lo
                           : freq_lo * std::pow(freq_hi / freq_lo,
                                                static_cast<double>(k) /
                                                    static_cast<double>(num_tones - 1));

    // 53-bit engine draws mapped to [0, 2pi); avoids distribution objects so
    // the realization is identical across standard libraries.
    std::mt19937_64 eng(seed);
    const double two_pi = 2.0 * 3.14159265358979323846;
    ns.phases.resize(m * num_tones);
    for (auto& ph : ns.phases)
        ph = static_cast<double>(eng() >> 11) * (two_pi / 9007199254740992.0);
    ns.validate(m);
    return ns;
}

Vector exploration_noise(const NoiseSpec& noise, double t) {
    const std::size_t m = noise.num_tones ? noise.phases.size() / noise.num_tones : 0;
    Vector out(m, 0.0);
    if (noise.amplitude == 0.0 || t >= noise.t_off) return out;
    for (std::size_t ch = 0; ch < m; ++ch) {
        double acc = 0.0;
        for (std::size_t k = 0; k < noise.num_tones; ++k)
            acc += std::sin(noise.omegas[k] * t + noise.phases[ch * noise.num_tones + k]);
        out[ch] = noise.amplitude * acc;
    }
    return out;
}

std::vector<std::string> ExperimentConfig::validate() const {
    sys.validate();
    spec.validate();
    integ.validate();
    std::vector<std::string> warnings = gains.validate(integ.dt);
    if (x0.size() != sys.n())
        throw InvariantViolation("x0 length must match the state dimension");
    for (double v : x0)
        if (!std::isfinite(v)) throw InvariantViolation("x0 must be finite");
    if (!(norm(x0) < spec.c))
        throw InvariantViolation("x0 must start strictly inside the safe set");
    noise.validate(sys.m());
    return warnings;
}

namespace {

void append_row(TrajectoryLog& log, double t, const Vector& x, const Vector& u,
                double nx, double bs, double ec, double mg, const Vector& Wc,
                const Matrix& Wa) {
    log.t.push_back(t);
    log.x.insert(log.x.end(), x.begin(), x.end());
    log.u.insert(log.u.end(), u.begin(), u.end());
    log.norm_x.push_back(nx);
    log.Bs.push_back(bs);
    log.ec.push_back(ec);
    log.margin.push_back(mg);
    log.Wc.insert(log.Wc.end(), Wc.begin(), Wc.end());
    for (std::size_t i = 0; i < Wa.rows(); ++i)
        for (std::size_t j = 0; j < Wa.cols(); ++j) log.Wa.push_back(Wa(i, j));
}

// TD bookkeeping without the weight update: the frozen learner still fills
// its window and records e_c.
void frozen_learner_step(LearnerState& st, const Matrix& M, const Matrix& R,
                         double t, const Vector& x, const Vector& u, double dt) {
    Vector X(st.n + st.m);
    for (std::size_t i = 0; i < st.n; ++i) X[i] = x[i];
    for (std::size_t i = 0; i < st.m; ++i) X[st.n + i] = u[i];
    const double g = 0.5 * (dot(x, M * x) + dot(u, R * u));
    try {
        const double integral = window_push_and_integrate(st, t, X, g) -
                                hold_correction(st, R, dt);
        auto [ec, psi] = td_error(st.Wc, basis_phi(st.window.back().X),
                                  basis_phi(st.window.front().X), integral);
        st.last_ec = ec;
        st.last_psi = std::move(psi);
    } catch (const NotWarmedUp&) {
    }
}

}  // namespace

std::pair<TrajectoryLog, RunMetrics> run_episode(const ExperimentConfig& cfg) {
    return run_episode(cfg, EpisodeOverrides{});
}

std::pair<TrajectoryLog, RunMetrics> run_episode(const ExperimentConfig& cfg,
                                                 const EpisodeOverrides& ov) {
    cfg.validate();
    const SystemModel& sys = cfg.sys;
    const std::size_t n = sys.n();
    const std::size_t m = sys.m();
    const double dt = cfg.integ.dt;
    const std::size_t steps = cfg.integ.steps();
    const double ksb_eff = cfg.baseline ? 0.0 : cfg.gains.k_sb;
    const double inf = std::numeric_limits<double>::infinity();

    LearnerState st = make_learner(n, m, cfg.gains.T, dt, sys.R);
    if (ov.Wc0) {
        if (ov.Wc0->size() != st.p) throw DimensionMismatch("Wc0 override length mismatch");
        st.Wc = *ov.Wc0;
    }
    if (ov.Wa0) {
        if (ov.Wa0->rows() != n || ov.Wa0->cols() != m)
            throw DimensionMismatch("Wa0 override shape mismatch");
        st.Wa = *ov.Wa0;
    }

    const RiccatiSolution oracle = solve_care(sys);

    TrajectoryLog log;
    log.n = n;
    log.m = m;
    log.p = st.p;
    log.t.reserve(steps + 1);
    log.x.reserve((steps + 1) * n);
    log.u.reserve((steps + 1) * m);
    log.norm_x.reserve(steps + 1);
    log.Bs.reserve(steps + 1);
    log.ec.reserve(steps + 1);
    log.margin.reserve(steps + 1);
    log.Wc.reserve((steps + 1) * st.p);
    log.Wa.reserve((steps + 1) * n * m);

    RunMetrics metrics;
    metrics.min_margin = inf;
    double prev_g = 0.0;
    Vector x = cfg.x0;

    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double nx = norm(x);
        if (nx > 1e6) throw NumericalDivergence("state norm exceeded 1e6");

        const double mg = cfg.spec.c - nx;
        const bool interior = nx < cfg.spec.c - cfg.spec.eps_interior;
        const bool breach = nx >= cfg.spec.c * (1.0 + 1e-6) ||
                            (!interior && ksb_eff > 0.0);
        if (breach) {
            // Controller is undefined here; log the offending state and stop.
            const Vector u_zero(m, 0.0);
            append_row(log, t, x, u_zero, nx, inf, st.last_ec, mg, st.Wc, st.Wa);
            if (mg < metrics.min_margin) metrics.min_margin = mg;
            const double g = 0.5 * dot(x, sys.M * x);
            if (k > 0) metrics.total_cost += 0.5 * (prev_g + g) * dt;
            break;
        }

        Vector u = (ksb_eff > 0.0)
                       ? u_hat_safe(st.Wa, ksb_eff, sys, cfg.spec, x)
                       : st.Wa.transpose() * x;
        const Vector excite = exploration_noise(cfg.noise, t);
        for (std::size_t i = 0; i < m; ++i) u[i] += excite[i];

        const double bs = interior ? B_s(cfg.spec, x) : inf;
        append_row(log, t, x, u, nx, bs, 0.0, mg, st.Wc, st.Wa);

        if (ov.freeze_learning)
            frozen_learner_step(st, sys.M, sys.R, t, x, u, dt);
        else
            learner_step(st, cfg.gains, sys.M, sys.R, t, x, u, dt);
        log.ec.back() = st.last_ec;

        const double g = 0.5 * (dot(x, sys.M * x) + dot(u, sys.R * u));
        if (k > 0) metrics.total_cost += 0.5 * (prev_g + g) * dt;
        prev_g = g;

        const double nu = norm(u);
        if (nu > metrics.peak_control) metrics.peak_control = nu;
        if (mg < metrics.min_margin) metrics.min_margin = mg;

        if (k < steps) x = rk4_step(sys, x, u, dt);
    }

    metrics.safety_violated = metrics.min_margin < 0.0;
    const std::size_t last = log.size() - 1;
    Matrix wa_final(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            wa_final(i, j) = log.Wa[last * n * m + i * m + j];
    metrics.actor_error =
        frobenius_norm(wa_final - oracle.Wa) / frobenius_norm(oracle.Wa);
    return {std::move(log), metrics};
}

std::vector<SweepRow> sweep_ksb(const ExperimentConfig& cfg,
                                const std::vector<double>& ksb_values) {
    if (ksb_values.size() < 2)
        throw InvariantViolation("sweep needs at least two k_sb values");
    std::vector<std::future<RunMetrics>> jobs;
    jobs.reserve(ksb_values.size());
    for (double v : ksb_values) {
        ExperimentConfig row_cfg = cfg;
        row_cfg.gains.k_sb = v;
        jobs.push_back(std::async(std::launch::async, [row_cfg]() {
            return run_episode(row_cfg).second;
        }));
    }
    std::vector<SweepRow> rows;
    rows.reserve(ksb_values.size());
    for (std::size_t i = 0; i < ksb_values.size(); ++i)
        rows.push_back(SweepRow{ksb_values[i], jobs[i].get()});
    return rows;
}

CompareResult compare_baseline(const ExperimentConfig& cfg) {
    ExperimentConfig proposed_cfg = cfg;
    proposed_cfg.baseline = false;
    ExperimentConfig baseline_cfg = cfg;
    baseline_cfg.baseline = true;

    auto proposed_job = std::async(std::launch::async, [proposed_cfg]() {
        return run_episode(proposed_cfg);
    });
    auto [baseline_log, baseline_metrics] = run_episode(baseline_cfg);
    auto [proposed_log, proposed_metrics] = proposed_job.get();

    CompareResult out;
    out.proposed_log = std::move(proposed_log);
    out.baseline_log = std::move(baseline_log);
    out.proposed = proposed_metrics;
    out.baseline = baseline_metrics;
    return out;
}

}  // namespace safeql
