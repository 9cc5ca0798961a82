#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qmzi/complex_matrix.hpp"
#include "qmzi/density_matrix.hpp"
#include "qmzi/interferometer.hpp"

namespace qmzi {

// Mixing weights of the two noise channels: bit-flip strength p on the
// internal qubit, phase-noise strength q on the path qubit.
struct NoiseParams {
  double p = 0.0;
  double q = 0.0;

  double alpha_p() const { return 1.0 - 2.0 * p; }
  double alpha_q() const { return 1.0 - 2.0 * q; }
  double mu_p() const { return p * (1.0 - p); }
  double mu_q() const { return q * (1.0 - q); }
};

namespace detail {

inline void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(name) + " = " + std::to_string(v) +
                                " outside [0,1]");
}

inline void require_two_qubit(const DensityMatrix& rho, const char* op) {
  if (rho.dims().size() != 2 || rho.dims()[0] != 2 || rho.dims()[1] != 2)
    throw std::invalid_argument(std::string(op) + ": expected a two-qubit state");
}

}  // namespace detail

// rho -> (1-p) rho + p (I ox X) rho (I ox X): bit flips on the internal qubit.
inline DensityMatrix apply_bit_flip(const DensityMatrix& rho, double p) {
  detail::require_probability(p, "apply_bit_flip: p");
  detail::require_two_qubit(rho, "apply_bit_flip");
  const ComplexMatrix a = kron(ComplexMatrix::identity(2), pauli_x());
  const ComplexMatrix m =
      cplx(1.0 - p) * rho.matrix() + cplx(p) * (a * rho.matrix() * dagger(a));
  return DensityMatrix(m, rho.dims());
}

// rho -> (1-q) rho + q (Z ox I) rho (Z ox I): dephasing on the path qubit.
inline DensityMatrix apply_phase_noise(const DensityMatrix& rho, double q) {
  detail::require_probability(q, "apply_phase_noise: q");
  detail::require_two_qubit(rho, "apply_phase_noise");
  const ComplexMatrix a = kron(pauli_z(), ComplexMatrix::identity(2));
  const ComplexMatrix m =
      cplx(1.0 - q) * rho.matrix() + cplx(q) * (a * rho.matrix() * dagger(a));
  return DensityMatrix(m, rho.dims());
}

// Noisy pipeline: evolve through the first beam splitter, arm action, and
// mirrors, apply both noise channels, then recombine at the final beam
// splitter. The internal input is polarized along z with length b0.
inline DensityMatrix noisy_output_state(double b0, double chi, const ComplexMatrix& u,
                                        const NoiseParams& noise) {
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument("noisy_output_state: b0 = " + std::to_string(b0) +
                                " outside [0,1]");
  detail::require_probability(noise.p, "noisy_output_state: p");
  detail::require_probability(noise.q, "noisy_output_state: q");
  if (u.dim() != 2 || !is_unitary(u, structural_tol))
    throw std::invalid_argument("noisy_output_state: internal operator is not a 2x2 unitary");

  const ComplexMatrix bs = detail::lift_path(hadamard());
  const ComplexMatrix pre = detail::lift_path(mirror()) * (detail::arm_action(chi, u) * bs);
  const ComplexMatrix rho_in = input_state(qubit_state(0.0, 0.0, b0)).matrix();
  DensityMatrix rho(pre * rho_in * dagger(pre), {2, 2});
  rho = apply_bit_flip(rho, noise.p);
  rho = apply_phase_noise(rho, noise.q);
  return DensityMatrix(bs * rho.matrix() * dagger(bs), {2, 2});
}

inline DensityMatrix noisy_output_state(double b0, double chi, const UnitaryParams& up,
                                        const NoiseParams& noise) {
  return noisy_output_state(b0, chi, build_internal_unitary(up), noise);
}

// Pauli components of a two-qubit state,
//   rho = (1/4) [I ox I + a.sigma ox I + I ox b.sigma + c_ij sigma_i ox sigma_j],
// with a the path-local vector, b the internal-local vector, c the correlation
// matrix (rows indexed by the path Pauli axis).
struct PauliDecomposition {
  std::array<double, 3> a{};
  std::array<double, 3> b{};
  std::array<std::array<double, 3>, 3> c{};
};

inline PauliDecomposition pauli_decompose(const DensityMatrix& rho) {
  detail::require_two_qubit(rho, "pauli_decompose");
  const std::array<ComplexMatrix, 3> sig = {pauli_x(), pauli_y(), pauli_z()};
  const ComplexMatrix id = ComplexMatrix::identity(2);
  PauliDecomposition d;
  for (std::size_t i = 0; i < 3; ++i) {
    d.a[i] = trace(rho.matrix() * kron(sig[i], id)).real();
    d.b[i] = trace(rho.matrix() * kron(id, sig[i])).real();
    for (std::size_t j = 0; j < 3; ++j)
      d.c[i][j] = trace(rho.matrix() * kron(sig[i], sig[j])).real();
  }
  return d;
}

inline ComplexMatrix pauli_reconstruct(const PauliDecomposition& d) {
  const std::array<ComplexMatrix, 3> sig = {pauli_x(), pauli_y(), pauli_z()};
  const ComplexMatrix id = ComplexMatrix::identity(2);
  ComplexMatrix m = kron(id, id);
  for (std::size_t i = 0; i < 3; ++i) {
    m = m + cplx(d.a[i]) * kron(sig[i], id);
    m = m + cplx(d.b[i]) * kron(id, sig[i]);
    for (std::size_t j = 0; j < 3; ++j) m = m + cplx(d.c[i][j]) * kron(sig[i], sig[j]);
  }
  return cplx(0.25) * m;
}

// Closed-form Pauli components of the noisy output state for an internal input
// polarized along z. Matches the gate-level pipeline entrywise.
inline PauliDecomposition model_pauli_closed_form(double b0, double chi, const UnitaryParams& up,
                                                  const NoiseParams& noise) {
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument("model_pauli_closed_form: b0 = " + std::to_string(b0) +
                                " outside [0,1]");
  if (std::abs(up.norm2() - 1.0) > unitary_param_tol)
    throw std::invalid_argument("model_pauli_closed_form: unitary parameters not normalized");
  detail::require_probability(noise.p, "model_pauli_closed_form: p");
  detail::require_probability(noise.q, "model_pauli_closed_form: q");

  const double t = up.t, x = up.x, y = up.y, z = up.z;
  const double ap = noise.alpha_p(), aq = noise.alpha_q();
  const double co = std::cos(chi), si = std::sin(chi);

  PauliDecomposition d;
  d.a = {0.0, aq * (-(t * si - b0 * z * co)), aq * (t * co + b0 * z * si)};
  d.b = {b0 * (-t * y + x * z), b0 * ap * (t * x + y * z), b0 * ap * (t * t + z * z)};
  d.c[0] = {b0 * (-t * y + x * z), b0 * ap * (t * x + y * z), -b0 * ap * (x * x + y * y)};
  d.c[1] = {aq * (x * co + b0 * y * si), aq * ap * (y * co - b0 * x * si),
            aq * ap * (z * co - b0 * t * si)};
  d.c[2] = {aq * (x * si - b0 * y * co), aq * ap * (y * si + b0 * x * co),
            aq * ap * (z * si + b0 * t * co)};
  return d;
}

}  // namespace qmzi
