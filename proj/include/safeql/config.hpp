#pragma once

#include <string>

#include "safeql/harness.hpp"

namespace safeql {

/// The default scenario: unstable 2-state plant, unit state weight, R = 0.1,
/// norm-ball radius 1.5, x0 = [1, 1], 10 s of exploration, 20 s horizon.
ExperimentConfig default_config();

/// Flat key = value text. Matrices are written `RxC: v1, v2, ...` row-major;
/// x0 is a comma list; everything else is a scalar. Unknown keys, malformed
/// values, and wrong element counts raise ParseError with the line number;
/// violated invariants raise InvariantViolation. Missing keys keep defaults.
ExperimentConfig parse_config_text(const std::string& text);

/// Reads the file (IoError when unreadable) and parses it.
ExperimentConfig parse_config(const std::string& path);

}  // namespace safeql
