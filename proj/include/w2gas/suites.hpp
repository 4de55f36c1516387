// Verification suites: each block below checks one closed-form or contraction
// claim with a fixed desk-scale experiment driven by the caller's master seed, and
// returns auditable rows (bound, measured value, statistical slack). Suites
// compose blocks; `all` runs everything. Blocks are deterministic functions
// of the seed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "w2gas/report.hpp"

namespace w2gas {

struct SimConfig;

namespace checks {

// Closed-form constants: contraction factors, relaxation rates, quartic-flow
// coefficients and the sign of its linear drift.
std::vector<CheckRow> analytic_constants(std::uint64_t seed);

// Assignment solver vs factorial oracle, sorted 1D route, dilation equality,
// and the coordinate-marginal lower bound on weighted LP instances.
std::vector<CheckRow> ot_exactness(std::uint64_t seed);

// Sphere-pair map cost identities plus sampled sphere/circle distances
// against their closed-form bounds.
std::vector<CheckRow> sphere_circle(std::uint64_t seed);

// One application of the gain operator contracts pair distances by
// sqrt((3+e^2)/4).
std::vector<CheckRow> gain_contraction(std::uint64_t seed);

// Freely cooling gas: exponential decay in its own clock, algebraic decay in
// physical time, and the clock round trip.
std::vector<CheckRow> temperature_laws(std::uint64_t seed);

// Two-ensemble transport bound along the cooling flow; the point-mass
// comparison realizes it as an identity.
std::vector<CheckRow> flow_contraction(std::uint64_t seed);

// Thermostatted gas: the same pair bound, plus the closed-form steady
// temperature for two forcing exponents.
std::vector<CheckRow> diffusive_laws(std::uint64_t seed);

// One-dimensional model: fitted distance and energy relaxation rates.
std::vector<CheckRow> kac_relaxation(std::uint64_t seed);

// Quartic moment of the rescaled gas against its closed linear flow, and
// uniform boundedness.
std::vector<CheckRow> moment_ode(std::uint64_t seed);

// Rate-free convergence surrogate: consecutive-time distances of the
// rescaled gas shrink to the sampling noise floor.
std::vector<CheckRow> cooling_convergence(std::uint64_t seed);

// General kernels: quadrature factor, sampler goodness of fit, and the
// mean-field energy decay rate under a tilted kernel.
std::vector<CheckRow> cross_section_checks(std::uint64_t seed);

}  // namespace checks

const std::vector<std::string>& suite_names();
bool known_suite(const std::string& name);

// Runs one named suite with the config's master seed. Output files are the
// caller's concern.
VerificationReport run_suite(const std::string& suite, const SimConfig& cfg);

}  // namespace w2gas
