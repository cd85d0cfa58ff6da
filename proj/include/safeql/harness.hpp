#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "safeql/barrier.hpp"
#include "safeql/matrix.hpp"
#include "safeql/plant.hpp"
#include "safeql/qlearn.hpp"
#include "safeql/riccati.hpp"

namespace safeql {

/// Sum of seeded-phase sinusoids, log-spaced in [freq_lo, freq_hi], switched
/// off at t_off. Phases are drawn once (make_noise) so identical specs give
/// identical signals.
struct NoiseSpec {
    double amplitude = 2.0;
    std::size_t num_tones = 10;
    double freq_lo = 0.05; // rad/s
    double freq_hi = 5.0;  // rad/s
    double t_off = 10.0;   // seconds of excitation
    std::vector<double> omegas;  // strictly increasing
    std::vector<double> phases;  // channel-major, m * num_tones, in [0, 2pi)

    void validate(std::size_t m) const;
};

NoiseSpec make_noise(std::size_t m, std::uint64_t seed, double amplitude = 2.0,
                     std::size_t num_tones = 10, double freq_lo = 0.05,
                     double freq_hi = 5.0, double t_off = 10.0);

Vector exploration_noise(const NoiseSpec& noise, double t);

struct ExperimentConfig {
    SystemModel sys;
    BarrierSpec spec;
    LearnGains gains;
    IntegratorConfig integ;
    Vector x0;
    NoiseSpec noise;
    std::uint64_t seed = 223;
    bool baseline = false;  // forces the barrier term off (k_sb treated as 0)

    /// Throws InvariantViolation on hard violations; returns warnings.
    std::vector<std::string> validate() const;
};

/// Per-step episode record, stored column-wise. Row k holds the state at
/// t = k*dt, the control applied over [t, t+dt), the learner's TD error
/// computed at t, and the weight estimates the control was computed from.
struct TrajectoryLog {
    std::size_t n = 0, m = 0, p = 0;
    std::vector<double> t;
    std::vector<double> x;   // n per row
    std::vector<double> u;   // m per row
    std::vector<double> norm_x;
    std::vector<double> Bs;  // +inf once outside the strict interior
    std::vector<double> ec;
    std::vector<double> margin;  // c - ||x||
    std::vector<double> Wc;  // p per row
    std::vector<double> Wa;  // n*m per row

    std::size_t size() const { return t.size(); }
};

struct RunMetrics {
    double total_cost = 0.0;    // trapezoidal 1/2 integral of x'Mx + u'Ru
    double peak_control = 0.0;  // max ||u(t)||
    double min_margin = 0.0;    // min (c - ||x(t)||)
    double actor_error = 0.0;   // ||Wa_hat(t_end) - Wa*||_F / ||Wa*||_F
    bool safety_violated = false;  // min_margin < 0
};

/// Test hooks: preset weights and/or keep them frozen (TD error still
/// computed and logged). Plain runs pass no overrides.
struct EpisodeOverrides {
    std::optional<Vector> Wc0;
    std::optional<Matrix> Wa0;
    bool freeze_learning = false;
};

/// Closed-loop episode: u = u_hat_safe(x) + exploration noise, RK4 plant
/// step, one learner step per plant step. Aborts early (with the breach row
/// logged) once ||x|| >= c*(1 + 1e-6); throws NumericalDivergence past
/// ||x|| > 1e6.
std::pair<TrajectoryLog, RunMetrics> run_episode(const ExperimentConfig& cfg);
std::pair<TrajectoryLog, RunMetrics> run_episode(const ExperimentConfig& cfg,
                                                 const EpisodeOverrides& ov);

struct SweepRow {
    double k_sb = 0.0;
    RunMetrics metrics;
};

/// One episode per k_sb value, identical seed/noise across rows, rows run in
/// parallel. Requires at least two values.
std::vector<SweepRow> sweep_ksb(const ExperimentConfig& cfg,
                                const std::vector<double>& ksb_values);

struct CompareResult {
    TrajectoryLog proposed_log;
    TrajectoryLog baseline_log;
    RunMetrics proposed;
    RunMetrics baseline;
};

/// Same scenario with and without the barrier term (baseline = unconstrained
/// learner), identical seed and noise.
CompareResult compare_baseline(const ExperimentConfig& cfg);

}  // namespace safeql
