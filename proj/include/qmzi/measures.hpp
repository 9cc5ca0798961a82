#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmzi/channels.hpp"
#include "qmzi/complex_matrix.hpp"
#include "qmzi/density_matrix.hpp"
#include "qmzi/spectrum.hpp"
#include "qmzi/tolerances.hpp"

namespace qmzi {

// Entanglement negativity: twice the magnitude of the negative part of the
// partially transposed spectrum. The internal subsystem is transposed; the
// spectrum (hence the value) is the same for either choice.
inline double negativity(const DensityMatrix& rho) {
  const ComplexMatrix pt = partial_transpose(rho, 1);
  const Spectrum ev = hermitian_eigenvalues(pt);
  double neg = 0.0;
  for (double l : ev)
    if (l < -spectral_tol) neg += -l;
  return 2.0 * neg;
}

// Noise-free closed form on the t = 0 slice: N = sqrt(b0^2 - Gamma^2).
inline double negativity_t0_closed(double b0, double gamma_vis) {
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument("negativity_t0_closed: b0 = " + std::to_string(b0) +
                                " outside [0,1]");
  if (gamma_vis < 0.0 || gamma_vis > b0 + 1e-12)
    throw std::domain_error("negativity_t0_closed: Gamma = " + std::to_string(gamma_vis) +
                            " outside [0, b0 = " + std::to_string(b0) + "]");
  return std::sqrt(std::max(0.0, b0 * b0 - gamma_vis * gamma_vis));
}

namespace detail {

inline void require_noisy_closed_domain(double b0, double gamma_vis, const NoiseParams& noise,
                                        const char* op) {
  require_probability(noise.p, "p");
  require_probability(noise.q, "q");
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument(std::string(op) + ": b0 = " + std::to_string(b0) +
                                " outside [0,1]");
  if (noise.alpha_q() == 0.0)
    throw std::domain_error(std::string(op) +
                            ": q = 1/2 makes the fringe flat; use the numeric path");
  const double gmax = std::abs(noise.alpha_q()) * b0;
  if (gamma_vis < -1e-12 || gamma_vis > gmax + 1e-12)
    throw std::domain_error(std::string(op) + ": Gamma = " + std::to_string(gamma_vis) +
                            " outside the reachable range [0, " + std::to_string(gmax) + "]");
}

}  // namespace detail

// Closed-form spectrum of the partially transposed noisy output state on the
// t = x = 0 slice, as a function of visibility. Sorted ascending.
inline std::array<double, 4> pt_spectrum_tx0(double b0, double gamma_vis,
                                             const NoiseParams& noise) {
  detail::require_noisy_closed_domain(b0, gamma_vis, noise, "pt_spectrum_tx0");
  const double ap = noise.alpha_p(), aq = noise.alpha_q();
  const double g2 = gamma_vis * gamma_vis;
  const double r1 = std::max(0.0, b0 * b0 * (ap + aq) * (ap + aq) - 4.0 * g2 * ap / aq);
  const double r2 = std::max(0.0, b0 * b0 * (ap - aq) * (ap - aq) + 4.0 * g2 * ap / aq);
  const double s1 = std::sqrt(r1), s2 = std::sqrt(r2);
  std::array<double, 4> ev = {0.25 * (1.0 - ap * aq - s1), 0.25 * (1.0 + ap * aq - s2),
                              0.25 * (1.0 - ap * aq + s1), 0.25 * (1.0 + ap * aq + s2)};
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Closed-form negativity on the t = x = 0 slice, clamped at zero.
inline double negativity_noisy_closed(double b0, double gamma_vis, const NoiseParams& noise) {
  detail::require_noisy_closed_domain(b0, gamma_vis, noise, "negativity_noisy_closed");
  const double ap = std::abs(noise.alpha_p()), aq = std::abs(noise.alpha_q());
  const double rad =
      std::max(0.0, b0 * b0 * (ap + aq) * (ap + aq) - 4.0 * gamma_vis * gamma_vis * ap / aq);
  return std::max(0.0, 0.5 * (-1.0 + ap * aq + std::sqrt(rad)));
}

// Residual of the entanglement-visibility conic in the entangled region:
//   (N + (1 - |ap||aq|)/2)^2 / A^2 + Gamma^2 / B^2 - 1,
// with A = b0 (|ap| + |aq|)/2 and B = sqrt(|aq| / |ap|) A. Zero when the
// closed forms are consistent.
inline double ellipse_residual(double b0, double gamma_vis, const NoiseParams& noise) {
  detail::require_noisy_closed_domain(b0, gamma_vis, noise, "ellipse_residual");
  const double ap = std::abs(noise.alpha_p()), aq = std::abs(noise.alpha_q());
  if (ap == 0.0)
    throw std::domain_error("ellipse_residual: p = 1/2 degenerates the conic");
  if (b0 == 0.0)
    throw std::domain_error("ellipse_residual: b0 = 0 degenerates the conic");
  const double n = negativity_noisy_closed(b0, gamma_vis, noise);
  const double np = n + 0.5 * (1.0 - ap * aq);
  const double a_axis = 0.5 * b0 * (ap + aq);
  const double b_axis2 = (aq / ap) * a_axis * a_axis;
  return np * np / (a_axis * a_axis) + gamma_vis * gamma_vis / b_axis2 - 1.0;
}

// Bit-flip strengths bounding the separable window at fixed visibility
// (phase noise off): entangled for p < p_minus or p > p_plus.
struct SeparabilityBoundary {
  double p_minus = 0.0;
  double p_plus = 0.0;
};

inline SeparabilityBoundary separability_boundary(double b0, double gamma_vis) {
  if (b0 < 0.0 || b0 >= 1.0)
    throw std::domain_error("separability_boundary: b0 = " + std::to_string(b0) +
                            " must lie in [0, 1)");
  if (gamma_vis < 0.0 || gamma_vis > b0 + 1e-12)
    throw std::domain_error("separability_boundary: Gamma = " + std::to_string(gamma_vis) +
                            " outside [0, b0 = " + std::to_string(b0) + "]");
  const double u = std::sqrt(std::max(0.0, 1.0 - gamma_vis * gamma_vis));
  const double v = std::sqrt(std::max(0.0, b0 * b0 - gamma_vis * gamma_vis));
  SeparabilityBoundary s;
  s.p_minus = v * (u - v) / (1.0 - b0 * b0);
  s.p_plus = u * (u - v) / (1.0 - b0 * b0);
  return s;
}

// Coefficients of the noise-free characteristic quartic in the convenient form
//   F(l) = l^4 - l^3 + alpha l^2 + beta l - beta gamma,
// parametrized by (b0, Gamma, gamma_g). delta = 1 - (1 - b0^2) cos^2(gamma_g)
// is the combination entering the monotonicity argument.
struct QuarticForm {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

inline QuarticForm quartic_form(double b0, double gamma_vis, double gamma_g) {
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument("quartic_form: b0 = " + std::to_string(b0) + " outside [0,1]");
  if (gamma_vis < 0.0 || gamma_vis > 1.0 + 1e-12)
    throw std::invalid_argument("quartic_form: Gamma = " + std::to_string(gamma_vis) +
                                " outside [0,1]");
  const double c2 = std::cos(gamma_g) * std::cos(gamma_g);
  QuarticForm f;
  f.alpha = (1.0 - b0 * b0) / 4.0;
  f.delta = 1.0 - (1.0 - b0 * b0) * c2;
  f.beta = (b0 * b0 - f.delta * gamma_vis * gamma_vis) / 4.0;
  f.gamma = (1.0 - gamma_vis * gamma_vis) / 4.0;
  return f;
}

inline double quartic_eval(const QuarticForm& f, double l) {
  return (((l - 1.0) * l + f.alpha) * l + f.beta) * l - f.beta * f.gamma;
}

// Closed-form entanglement along a visibility grid, with finite-difference
// slopes (central in the interior, one-sided at the ends). Rows are
// (Gamma, N, dN/dGamma).
inline std::vector<std::array<double, 3>> monotonicity_check(double b0, const NoiseParams& noise,
                                                             const std::vector<double>& grid) {
  if (grid.size() < 5)
    throw std::invalid_argument("monotonicity_check: need at least 5 grid points, got " +
                                std::to_string(grid.size()));
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("monotonicity_check: grid must be strictly increasing");
  std::vector<double> n(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    n[i] = negativity_noisy_closed(b0, grid[i], noise);
  std::vector<std::array<double, 3>> rows(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double slope;
    if (i == 0)
      slope = (n[1] - n[0]) / (grid[1] - grid[0]);
    else if (i + 1 == grid.size())
      slope = (n[i] - n[i - 1]) / (grid[i] - grid[i - 1]);
    else
      slope = (n[i + 1] - n[i - 1]) / (grid[i + 1] - grid[i - 1]);
    rows[i] = {grid[i], n[i], slope};
  }
  return rows;
}

// Von Neumann entropy in bits.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const Spectrum ev = hermitian_eigenvalues(rho.matrix());
  double e = 0.0;
  for (double l : ev)
    if (l > 0.0) e -= l * std::log2(l);
  return std::max(0.0, e);
}

// Entropy of a qubit with spectrum {(1 +- Gamma)/2}: the path-qubit marginal
// of the noise-free output has exactly this spectrum, so for pure internal
// inputs this is the entanglement entropy as a function of visibility.
inline double entropy_from_visibility(double gamma_vis) {
  if (gamma_vis < -1e-12 || gamma_vis > 1.0 + 1e-12)
    throw std::invalid_argument("entropy_from_visibility: Gamma = " + std::to_string(gamma_vis) +
                                " outside [0,1]");
  const double lp = 0.5 * (1.0 + std::min(1.0, std::max(0.0, gamma_vis)));
  const double lm = 1.0 - lp;
  double e = 0.0;
  if (lp > 0.0) e -= lp * std::log2(lp);
  if (lm > 0.0) e -= lm * std::log2(lm);
  return e;
}

// Characteristic-polynomial coefficients (a1..a4) of the partially transposed
// noisy output on the t = x = 0 slice, as explicit polynomials in the noise
// weights. Cross-checked against the trace-identity route.
inline std::array<double, 4> char_poly_tx0_closed(double b0, double z, const NoiseParams& noise) {
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument("char_poly_tx0_closed: b0 = " + std::to_string(b0) +
                                " outside [0,1]");
  if (std::abs(z) > 1.0 + 1e-12)
    throw std::invalid_argument("char_poly_tx0_closed: |z| = " + std::to_string(std::abs(z)) +
                                " exceeds 1");
  detail::require_probability(noise.p, "char_poly_tx0_closed: p");
  detail::require_probability(noise.q, "char_poly_tx0_closed: q");
  const double b2 = b0 * b0, b4 = b2 * b2;
  const double z2 = z * z, z4 = z2 * z2;
  const double mp = noise.mu_p(), mq = noise.mu_q();
  const double ms = mp + mq, mm = mp * mq;

  const double a2 = ((1.0 - b2) + 2.0 * (1.0 + b2) * ms - 8.0 * mm) / 4.0;
  const double a3 = (-b2 * (1.0 - z2) + (1.0 + b2 * (3.0 - 4.0 * z2)) * ms -
                     4.0 * (1.0 + 2.0 * b2 * (1.0 - 2.0 * z2)) * mm) /
                    4.0;
  const double a4 = (-b2 * (1.0 - z2) * (1.0 - b2 * z2) * (1.0 - 4.0 * ms) +
                     (1.0 - b2) * (1.0 - b2) * (mp * mp + mq * mq) +
                     2.0 * (1.0 - 8.0 * b2 * (1.0 - z2) - b4 * (1.0 - 8.0 * z2 + 8.0 * z4)) * mm -
                     8.0 * (1.0 - b2) * mm * ms + 16.0 * mm * mm) /
                    16.0;
  return {1.0, a2, a3, a4};
}

}  // namespace qmzi
