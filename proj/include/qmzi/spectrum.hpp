#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qmzi/complex_matrix.hpp"
#include "qmzi/tolerances.hpp"

namespace qmzi {

// Real eigenvalues of a Hermitian matrix, sorted ascending.
using Spectrum = std::vector<double>;

namespace detail {

inline double off_diagonal_frobenius(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi eigensolver for Hermitian matrices. Each rotation zeroes one
// off-diagonal pair; sweeps repeat until the off-diagonal Frobenius norm falls
// below jacobi_off_tol (relative to the matrix norm) or the sweep cap is hit.
inline Spectrum hermitian_eigenvalues(const ComplexMatrix& m, double herm_tol = structural_tol) {
  const std::size_t n = m.dim();
  if (!all_finite(m))
    throw std::invalid_argument("hermitian_eigenvalues: matrix has non-finite entries");
  const double defect = hermiticity_defect(m);
  if (defect > herm_tol)
    throw std::invalid_argument("hermitian_eigenvalues: matrix not Hermitian (defect " +
                                std::to_string(defect) + " > " + std::to_string(herm_tol) + ")");
  if (n == 1) return {m(0, 0).real()};

  ComplexMatrix a = m;
  const double scale = std::max(1.0, frobenius_norm(a));
  const double target = jacobi_off_tol * scale;

  int sweep = 0;
  while (detail::off_diagonal_frobenius(a) > target) {
    if (++sweep > jacobi_max_sweeps)
      throw std::runtime_error("hermitian_eigenvalues: no convergence after " +
                               std::to_string(jacobi_max_sweeps) + " sweeps (residual " +
                               std::to_string(detail::off_diagonal_frobenius(a)) + ")");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx beta = a(p, q);
        const double r = std::abs(beta);
        if (r <= 1e-300) continue;
        const double alpha = a(p, p).real();
        const double gamma = a(q, q).real();
        // Rotation angle from the classic tangent formula; the complex phase of
        // the pivot folds into the rotation's off-diagonal element.
        const double theta = (gamma - alpha) / (2.0 * r);
        const double sgn = theta >= 0.0 ? 1.0 : -1.0;
        const double t = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const cplx s = (t * c) * (beta / r);

        // A <- J^dagger A J with J = I except J(p,p)=J(q,q)=c, J(p,q)=s, J(q,p)=-conj(s).
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - std::conj(s) * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = std::conj(s) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  Spectrum ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace qmzi
