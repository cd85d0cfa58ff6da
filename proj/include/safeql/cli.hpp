#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace safeql {

/// Command-line front end. args excludes the program name. Returns the
/// process exit code; all output goes to the given streams so tests can
/// drive the CLI in-process.
///
/// Commands:
///   run     [-c cfg] [-o dir]          one episode -> trajectory.csv + metrics
///   sweep   [-c cfg] [-o dir] [--ksb]  safety-gain sweep -> summary.csv
///   compare [-c cfg] [-o dir]          with/without barrier -> two CSVs
///   oracle  [-c cfg]                   print P, W_a, W_c, residual
///   verify                             full property/criteria suite
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace safeql
