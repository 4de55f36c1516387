// Line-oriented configuration files: [section] headers and key = value
// pairs, '#' comments. Unknown sections or keys are hard errors naming the
// offender and its line; physics parameters have no defaults. Only output
// paths default (directory from $W2GAS_OUTDIR, file names from the run
// name).
//
//   [run]     name?, family, seed, n, d?, dtau, tau_end + record_every or
//             schedule, replica_slack?
//   [model]   e, b_rate (homogeneous, diffusive), a_heat + p_diff
//             (diffusive), cross_section (unit_rate: constant | linear |
//             file:<path>)
//   [kac]     p                        (family kac only)
//   [ic]      kind, theta0, mean, path (per-kind requirements)
//   [pair]    same keys as [ic]; presence makes the run paired
//   [output]  dir?, csv?, svg?, snapshot?, report_csv?
#pragma once

#include <string>

#include "w2gas/dynamics.hpp"

namespace w2gas {

// $W2GAS_OUTDIR when set and nonempty, else ".".
std::string default_outdir();

// Parses and fully validates; throws std::runtime_error with the path, key
// and line for format errors, std::invalid_argument for range and
// consistency violations.
SimConfig parse_config(const std::string& path);

}  // namespace w2gas
