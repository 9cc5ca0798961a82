#pragma once

// Centralized numerical tolerances. Structural checks (hermiticity, trace,
// closed-form agreement) use the tight tolerance; spectral slack (PSD checks,
// negative-eigenvalue detection) uses the looser one. Operations that accept a
// tolerance parameter default to these.

namespace qmzi {

inline constexpr double structural_tol = 1e-10;  // hermiticity / trace / entrywise
inline constexpr double spectral_tol = 1e-9;     // eigenvalue slack; lambda < -spectral_tol counts as negative
inline constexpr double unitary_param_tol = 1e-9;  // |t^2+x^2+y^2+z^2 - 1| bound at construction
inline constexpr double degenerate_fringe_tol = 1e-12;  // visibility below this has no usable phase

inline constexpr double jacobi_off_tol = 1e-13;  // off-diagonal Frobenius target, relative
inline constexpr int jacobi_max_sweeps = 100;

}  // namespace qmzi
