#pragma once

#include <string>
#include <vector>

#include "safeql/harness.hpp"

namespace safeql {

/// Writes `t,x1..xn,u1..um,norm_x,B_s,e_c,margin,Wc_1..Wc_p,Wa_11..Wa_nm`
/// with one row per step, 12 significant digits, LF line endings.
void emit_csv(const TrajectoryLog& log, const std::string& path);

/// Sweep table `k_sb,total_cost,peak_control,min_margin,actor_error,
/// safety_violated`, followed by `#ref,` comment rows carrying fixed
/// reference costs/peaks for side-by-side reading.
void emit_summary(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace safeql
