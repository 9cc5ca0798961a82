#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qmzi/complex_matrix.hpp"
#include "qmzi/tolerances.hpp"

namespace qmzi {

// Coefficients (a1, a2, a3, a4) of the monic characteristic polynomial
//   F(l) = l^4 - a1 l^3 + a2 l^2 - a3 l + a4
// of a unit-trace Hermitian 4x4 matrix, computed from power traces via the
// Newton-Girard identities (specialized to Tr = 1):
//   a1 = 1
//   2! a2 = 1 - Tr(m^2)
//   3! a3 = 1 - 3 Tr(m^2) + 2 Tr(m^3)
//   4! a4 = 1 - 6 Tr(m^2) + 8 Tr(m^3) + 3 [Tr(m^2)]^2 - 6 Tr(m^4)
inline std::array<double, 4> char_poly_coeffs_from_traces(const ComplexMatrix& m) {
  if (m.dim() != 4)
    throw std::invalid_argument("char_poly_coeffs_from_traces: need 4x4, got " +
                                std::to_string(m.dim()) + "x" + std::to_string(m.dim()));
  const double herm = hermiticity_defect(m);
  if (herm > structural_tol)
    throw std::invalid_argument("char_poly_coeffs_from_traces: not Hermitian (defect " +
                                std::to_string(herm) + ")");
  const double tr = trace(m).real();
  if (std::abs(tr - 1.0) > spectral_tol)
    throw std::invalid_argument("char_poly_coeffs_from_traces: trace " + std::to_string(tr) +
                                " is not 1; identities assume a unit-trace matrix");

  const ComplexMatrix m2 = m * m;
  const ComplexMatrix m3 = m2 * m;
  const ComplexMatrix m4 = m2 * m2;
  const double p2 = trace(m2).real();
  const double p3 = trace(m3).real();
  const double p4 = trace(m4).real();

  const double a2 = (1.0 - p2) / 2.0;
  const double a3 = (1.0 - 3.0 * p2 + 2.0 * p3) / 6.0;
  const double a4 = (1.0 - 6.0 * p2 + 8.0 * p3 + 3.0 * p2 * p2 - 6.0 * p4) / 24.0;
  return {1.0, a2, a3, a4};
}

// Evaluate the quartic F at l from its coefficients.
inline double char_poly_eval(const std::array<double, 4>& a, double l) {
  return (((l - a[0]) * l + a[1]) * l - a[2]) * l + a[3];
}

}  // namespace qmzi
