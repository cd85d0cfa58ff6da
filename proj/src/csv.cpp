#include "safeql/csv.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "safeql/errors.hpp"

namespace safeql {

namespace {

void append_num(std::string& buf, double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.12g", v);
    buf += tmp;
}

void flush_chunk(std::ofstream& os, std::string& buf, const std::string& path) {
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw IoError("write failed: " + path);
    buf.clear();
}

}  // namespace

void emit_csv(const TrajectoryLog& log, const std::string& path) {
    if (log.size() == 0) throw InvariantViolation("refusing to emit an empty trajectory log");
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);

    std::string buf;
    buf.reserve(1 << 20);
    buf += "t";
    for (std::size_t i = 1; i <= log.n; ++i) buf += ",x" + std::to_string(i);
    for (std::size_t i = 1; i <= log.m; ++i) buf += ",u" + std::to_string(i);
    buf += ",norm_x,B_s,e_c,margin";
    for (std::size_t i = 1; i <= log.p; ++i) buf += ",Wc_" + std::to_string(i);
    for (std::size_t i = 1; i <= log.n; ++i)
        for (std::size_t j = 1; j <= log.m; ++j)
            buf += ",Wa_" + std::to_string(i) + std::to_string(j);
    buf += "\n";

    const std::size_t nm = log.n * log.m;
    for (std::size_t k = 0; k < log.size(); ++k) {
        append_num(buf, log.t[k]);
        for (std::size_t i = 0; i < log.n; ++i) {
            buf += ',';
            append_num(buf, log.x[k * log.n + i]);
        }
        for (std::size_t i = 0; i < log.m; ++i) {
            buf += ',';
            append_num(buf, log.u[k * log.m + i]);
        }
        buf += ',';
        append_num(buf, log.norm_x[k]);
        buf += ',';
        append_num(buf, log.Bs[k]);
        buf += ',';
        append_num(buf, log.ec[k]);
        buf += ',';
        append_num(buf, log.margin[k]);
        for (std::size_t i = 0; i < log.p; ++i) {
            buf += ',';
            append_num(buf, log.Wc[k * log.p + i]);
        }
        for (std::size_t i = 0; i < nm; ++i) {
            buf += ',';
            append_num(buf, log.Wa[k * nm + i]);
        }
        buf += '\n';
        if (buf.size() > (1 << 20) - 1024) flush_chunk(os, buf, path);
    }
    flush_chunk(os, buf, path);
    os.close();
    if (!os) throw IoError("write failed: " + path);
}

void emit_summary(const std::vector<SweepRow>& rows, const std::string& path) {
    if (rows.empty()) throw InvariantViolation("refusing to emit an empty sweep summary");
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);

    std::string buf = "k_sb,total_cost,peak_control,min_margin,actor_error,safety_violated\n";
    for (const SweepRow& r : rows) {
        append_num(buf, r.k_sb);
        buf += ',';
        append_num(buf, r.metrics.total_cost);
        buf += ',';
        append_num(buf, r.metrics.peak_control);
        buf += ',';
        append_num(buf, r.metrics.min_margin);
        buf += ',';
        append_num(buf, r.metrics.actor_error);
        buf += ',';
        buf += r.metrics.safety_violated ? '1' : '0';
        buf += '\n';
    }
    // Reference cost/peak values for the same gain grid, kept as comments so
    // the file stays machine-readable.
    buf +=
        "#ref,0.01,43.652,18.746\n"
        "#ref,0.1,40.631,18.45\n"
        "#ref,0.2,40.021,18.39\n"
        "#ref,0.3,39.833,24\n"
        "#ref,0.5,39.293,40\n";
    flush_chunk(os, buf, path);
    os.close();
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace safeql
