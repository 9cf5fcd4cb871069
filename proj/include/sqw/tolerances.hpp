#pragma once

// Numerical tolerances shared by every module.

namespace sqw::tol {

inline constexpr double hermiticity = 1e-10;   // max |A - A^dag| entry
inline constexpr double unitarity = 1e-10;     // max |C^dag C - I| entry
inline constexpr double trace_drift = 1e-9;    // |tr(rho) - 1|
inline constexpr double positivity = -1e-8;    // floor for lambda_min(rho)
inline constexpr double stochastic = 1e-12;    // row / column sums
inline constexpr double amplitude_norm = 1e-10;
inline constexpr double population_dust = 1e-12;

// Hard limits used by the integrator before it gives up and asks for a
// smaller step.
inline constexpr double integrator_trace_limit = 1e-6;
inline constexpr double integrator_eigen_limit = -1e-6;

inline constexpr double default_dt = 0.005;

} // namespace sqw::tol
