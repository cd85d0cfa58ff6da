#include "safeql/qlearn.hpp"

#include <cmath>
#include <string>

#include "safeql/errors.hpp"

namespace safeql {

namespace {

// Index of the (i, j) monomial, i <= j, in row-scan order over a d x d form.
std::size_t vech_index(std::size_t i, std::size_t j, std::size_t d) {
    return i * d - i * (i - 1) / 2 + (j - i);
}

}  // namespace

std::size_t vech_dim(std::size_t d) { return d * (d + 1) / 2; }

Vector basis_phi(const Vector& X) {
    const std::size_t d = X.size();
    Vector phi(vech_dim(d));
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) phi[k++] = X[i] * X[j];
    return phi;
}

Vector vech_weights(const Matrix& qbar) {
    const std::size_t d = qbar.rows();
    if (qbar.cols() != d) throw DimensionMismatch("vech_weights needs a square matrix");
    if (!is_symmetric(qbar)) throw NotSymmetric("vech_weights needs a symmetric matrix");
    Vector w(vech_dim(d));
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) w[k++] = (i == j) ? 0.5 * qbar(i, j) : qbar(i, j);
    return w;
}

Matrix unvech(const Vector& w, std::size_t d) {
    if (w.size() != vech_dim(d)) throw DimensionMismatch("unvech weight length mismatch");
    Matrix q(d, d);
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            if (i == j) {
                q(i, i) = 2.0 * w[k];
            } else {
                q(i, j) = w[k];
                q(j, i) = w[k];
            }
            ++k;
        }
    return q;
}

GainBlocks extract_gain(const Vector& wc, std::size_t n, std::size_t m, const Matrix& R) {
    const std::size_t d = n + m;
    const Matrix qhat = unvech(wc, d);
    GainBlocks out;
    out.Q21 = qhat.block(n, 0, m, n);
    out.Q22 = qhat.block(n, n, m, m);

    const double floor = 1e-6 * min_eig_sym(R);
    const double lo = min_eig_sym(out.Q22);
    if (lo < floor) {
        const double shift = floor - lo;
        for (std::size_t i = 0; i < m; ++i) out.Q22(i, i) += shift;
    }
    return out;
}

std::vector<std::string> LearnGains::validate(double dt) const {
    if (!(eta_c > 0.0)) throw InvariantViolation("eta_c must be > 0");
    if (!(eta_a > 0.0)) throw InvariantViolation("eta_a must be > 0");
    if (!(T > 0.0)) throw InvariantViolation("window T must be > 0");
    if (k_sb < 0.0) throw InvariantViolation("k_sb must be >= 0");
    if (!(Wa_bound > 0.0)) throw InvariantViolation("Wa_bound must be > 0");
    const double ratio = T / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw InvariantViolation("window T must be an integral multiple of dt");
    std::vector<std::string> warnings;
    if (eta_c < 10.0 * eta_a)
        warnings.push_back("critic rate eta_c is not well above actor rate eta_a (expected eta_c >= 10*eta_a)");
    return warnings;
}

SampleWindow::SampleWindow(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0)) throw InvariantViolation("window needs positive T and dt");
    const double ratio = T / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw InvariantViolation("window T must be an integral multiple of dt");
    cap_ = static_cast<std::size_t>(std::llround(ratio)) + 1;
    buf_.reserve(cap_);
}

void SampleWindow::push(double t, Vector X, double g) {
    if (buf_.size() == cap_) buf_.erase(buf_.begin());
    buf_.push_back(WindowSample{t, std::move(X), g});
}

double SampleWindow::integrate() const {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < buf_.size(); ++k)
        acc += 0.5 * (buf_[k].g + buf_[k + 1].g) * (buf_[k + 1].t - buf_[k].t);
    return acc;
}

LearnerState make_learner(std::size_t n, std::size_t m, double T, double dt, const Matrix& R) {
    if (R.rows() != m || R.cols() != m) throw DimensionMismatch("R must be m x m");
    LearnerState st;
    st.n = n;
    st.m = m;
    st.p = vech_dim(n + m);
    st.Wc = Vector(st.p, 0.0);
    const std::size_t d = n + m;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b)
            st.Wc[vech_index(n + a, n + b, d)] = (a == b) ? 0.5 * R(a, a) : R(a, b);
    st.Wa = Matrix(n, m);
    st.window = SampleWindow(T, dt);
    return st;
}

double window_push_and_integrate(LearnerState& st, double t, const Vector& X, double g) {
    if (X.size() != st.n + st.m) throw DimensionMismatch("sample X must have length n + m");
    st.window.push(t, X, g);
    if (!st.window.warmed()) throw NotWarmedUp("window does not span T yet");
    return st.window.integrate();
}

double hold_correction(const LearnerState& st, const Matrix& R, double dt) {
    Vector u_front(st.m), u_back(st.m);
    for (std::size_t i = 0; i < st.m; ++i) {
        u_front[i] = st.window.front().X[st.n + i];
        u_back[i] = st.window.back().X[st.n + i];
    }
    return 0.25 * dt * (dot(u_back, R * u_back) - dot(u_front, R * u_front));
}

std::pair<double, Vector> td_error(const Vector& Wc, const Vector& phi_now,
                                   const Vector& phi_then, double integral) {
    Vector psi = phi_now - phi_then;
    return {dot(Wc, psi) + integral, std::move(psi)};
}

Vector critic_derivative(double ec, const Vector& psi, double eta_c) {
    const double den = 1.0 + dot(psi, psi);
    return (-eta_c * ec / (den * den)) * psi;
}

Matrix actor_derivative(const Matrix& Wa, const Matrix& Q21, const Matrix& Q22,
                        double eta_a, double Wa_bound) {
    const Matrix target = solve_linear(Q22, Q21).transpose();  // (Q22^{-1} Q21)^T = Q21^T Q22^{-1}
    Matrix raw = -eta_a * (target + Wa);
    const double nw = frobenius_norm(Wa);
    if (nw >= Wa_bound) {
        const double outward = frobenius_dot(Wa, raw);
        if (outward > 0.0) raw = raw - (outward / (nw * nw)) * Wa;
    }
    return raw;
}

void learner_step(LearnerState& st, const LearnGains& gains, const Matrix& M,
                  const Matrix& R, double t, const Vector& x, const Vector& u, double dt) {
    Vector X(st.n + st.m);
    for (std::size_t i = 0; i < st.n; ++i) X[i] = x[i];
    for (std::size_t i = 0; i < st.m; ++i) X[st.n + i] = u[i];
    const double g = 0.5 * (dot(x, M * x) + dot(u, R * u));

    // Push first; once warmed the post-push front sits exactly at t - T.
    double integral = 0.0;
    try {
        integral = window_push_and_integrate(st, t, X, g);
    } catch (const NotWarmedUp&) {
        return;  // no updates until one full window has been observed
    }
    integral -= hold_correction(st, R, dt);

    const Vector phi_now = basis_phi(st.window.back().X);
    const Vector phi_then = basis_phi(st.window.front().X);
    auto [ec, psi] = td_error(st.Wc, phi_now, phi_then, integral);
    st.last_ec = ec;
    st.last_psi = psi;

    const Vector wc_dot = critic_derivative(ec, psi, gains.eta_c);
    const GainBlocks blocks = extract_gain(st.Wc, st.n, st.m, R);
    const Matrix wa_dot = actor_derivative(st.Wa, blocks.Q21, blocks.Q22, gains.eta_a, gains.Wa_bound);

    st.Wc = st.Wc + dt * wc_dot;
    st.Wa = st.Wa + dt * wa_dot;
    const double nw = frobenius_norm(st.Wa);
    if (nw > gains.Wa_bound) st.Wa = (gains.Wa_bound / nw) * st.Wa;
}

}  // namespace safeql
