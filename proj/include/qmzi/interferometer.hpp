#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmzi/complex_matrix.hpp"
#include "qmzi/density_matrix.hpp"
#include "qmzi/tolerances.hpp"

namespace qmzi {

// Two-arm interferometer acting on a path qubit (subsystem 0, leftmost tensor
// factor) coupled to an internal qubit (subsystem 1). The particle enters in
// path |0>, splits at a balanced beam splitter, picks up a phase chi on the
// |0> arm and a unitary U on its internal state along the |1> arm, is swapped
// by mirrors, and recombines at a second beam splitter. Detection probability
// at the |0> output port shows fringes in chi.

// Real four-vector parametrization of the internal unitary,
//   U = [[t + iz, ix + y], [ix - y, t - iz]],   t^2 + x^2 + y^2 + z^2 = 1.
struct UnitaryParams {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm2() const { return t * t + x * x + y * y + z * z; }
};

// Result of a fringe analysis: P(chi) = (1 + visibility * cos(chi - phase)) / 2.
// When the fringe is flat the phase is meaningless; it is reported as 0 with
// the degenerate flag set.
struct FringeFit {
  double visibility = 0.0;
  double phase = 0.0;
  bool degenerate = false;
};

inline ComplexMatrix build_internal_unitary(const UnitaryParams& p) {
  const double defect = std::abs(p.norm2() - 1.0);
  if (defect > unitary_param_tol)
    throw std::invalid_argument("build_internal_unitary: |t^2+x^2+y^2+z^2 - 1| = " +
                                std::to_string(defect) + " exceeds tolerance");
  return ComplexMatrix::mat2(cplx(p.t, p.z), cplx(p.y, p.x), cplx(-p.y, p.x), cplx(p.t, -p.z));
}

inline ComplexMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return ComplexMatrix::mat2(s, s, s, -s);
}

inline ComplexMatrix mirror() { return pauli_x(); }

namespace detail {

inline ComplexMatrix lift_path(const ComplexMatrix& op) { return kron(op, ComplexMatrix::identity(2)); }

// Conditional arm action: phase chi on path |0>, internal unitary U on path |1>.
inline ComplexMatrix arm_action(double chi, const ComplexMatrix& u) {
  ComplexMatrix p0(2), p1(2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return kron(p1, u) + std::exp(cplx(0.0, chi)) * kron(p0, ComplexMatrix::identity(2));
}

}  // namespace detail

// Full circuit: beam splitter, conditional arm action, mirrors, beam splitter.
inline ComplexMatrix build_circuit(double chi, const ComplexMatrix& u) {
  if (u.dim() != 2)
    throw std::invalid_argument("build_circuit: internal unitary must be 2x2, got " +
                                std::to_string(u.dim()) + "x" + std::to_string(u.dim()));
  if (!is_unitary(u, structural_tol))
    throw std::invalid_argument("build_circuit: internal operator is not unitary within tolerance");
  const ComplexMatrix bs = detail::lift_path(hadamard());
  const ComplexMatrix mr = detail::lift_path(mirror());
  return bs * (mr * (detail::arm_action(chi, u) * bs));
}

// Particle entering in path |0> with internal state rho0.
inline DensityMatrix input_state(const DensityMatrix& rho0_int) {
  if (rho0_int.dim() != 2)
    throw std::invalid_argument("input_state: internal state must be a single qubit, dim " +
                                std::to_string(rho0_int.dim()));
  ComplexMatrix p0(2);
  p0(0, 0) = 1.0;
  return DensityMatrix(kron(p0, rho0_int.matrix()), {2, 2});
}

inline DensityMatrix output_state(const DensityMatrix& rho0_int, double chi,
                                  const ComplexMatrix& u) {
  const ComplexMatrix v = build_circuit(chi, u);
  const ComplexMatrix rho_in = input_state(rho0_int).matrix();
  return DensityMatrix(v * rho_in * dagger(v), {2, 2});
}

// Probability of detecting the particle in path |0>.
inline double detection_probability(const DensityMatrix& rho_out) {
  detail::require_bipartite(rho_out.dims(), "detection_probability");
  if (rho_out.dims()[0] != 2 || rho_out.dims()[1] != 2)
    throw std::invalid_argument("detection_probability: expected a 2x2 bipartite state");
  const ComplexMatrix& m = rho_out.matrix();
  const double p = (m(0, 0) + m(1, 1)).real();
  if (p < -structural_tol || p > 1.0 + structural_tol)
    throw std::invalid_argument("detection_probability: value " + std::to_string(p) +
                                " outside [0,1]");
  return std::min(1.0, std::max(0.0, p));
}

// Closed-form fringe parameters for an internal state polarized along z with
// length b0: visibility sqrt(t^2 + b0^2 z^2) and phase atan2(b0 z, t).
inline FringeFit analytic_visibility_phase(double t, double z, double b0) {
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument("analytic_visibility_phase: b0 = " + std::to_string(b0) +
                                " outside [0,1]");
  FringeFit f;
  f.visibility = std::sqrt(t * t + b0 * b0 * z * z);
  if (f.visibility < degenerate_fringe_tol) {
    f.visibility = std::max(f.visibility, 0.0);
    f.degenerate = true;
    return f;
  }
  f.phase = std::atan2(b0 * z, t);
  return f;
}

// Sample a probability function on the uniform fringe grid chi_k = 2 pi k / K.
inline std::vector<std::pair<double, double>> sample_fringe(
    std::size_t k_samples, const std::function<double(double)>& probability) {
  if (k_samples < 3)
    throw std::invalid_argument("sample_fringe: need at least 3 samples, got " +
                                std::to_string(k_samples));
  std::vector<std::pair<double, double>> s;
  s.reserve(k_samples);
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < k_samples; ++k) {
    const double chi = 2.0 * pi * static_cast<double>(k) / static_cast<double>(k_samples);
    s.emplace_back(chi, probability(chi));
  }
  return s;
}

// First-harmonic projection of uniformly spaced fringe samples. On a uniform
// grid this is also the least-squares fit of (1 + V cos(chi - phase)) / 2, and
// it is exact for data of that form whenever K >= 3.
inline FringeFit extract_fringe(const std::vector<std::pair<double, double>>& samples) {
  const std::size_t k_samples = samples.size();
  if (k_samples < 3)
    throw std::invalid_argument("extract_fringe: need at least 3 samples, got " +
                                std::to_string(k_samples));
  const double pi = std::acos(-1.0);
  cplx c{};
  for (std::size_t k = 0; k < k_samples; ++k) {
    const double expected = 2.0 * pi * static_cast<double>(k) / static_cast<double>(k_samples);
    if (std::abs(samples[k].first - expected) > 1e-9)
      throw std::invalid_argument("extract_fringe: samples not uniformly spaced (chi[" +
                                  std::to_string(k) + "] = " + std::to_string(samples[k].first) +
                                  ", expected " + std::to_string(expected) + ")");
    const double p = samples[k].second;
    if (p < -spectral_tol || p > 1.0 + spectral_tol)
      throw std::invalid_argument("extract_fringe: probability " + std::to_string(p) +
                                  " outside [0,1]");
    c += p * std::exp(cplx(0.0, -samples[k].first));
  }
  c *= 2.0 / static_cast<double>(k_samples);

  FringeFit f;
  f.visibility = std::min(1.0, 2.0 * std::abs(c));
  if (f.visibility < degenerate_fringe_tol) {
    f.degenerate = true;
    return f;
  }
  f.phase = -std::arg(c);
  return f;
}

}  // namespace qmzi
