#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmzi/complex_matrix.hpp"
#include "qmzi/spectrum.hpp"
#include "qmzi/tolerances.hpp"

namespace qmzi {

// Validated density matrix over a tensor product of subsystems. Construction
// enforces hermiticity, unit trace, and positive semidefiniteness (up to the
// centralized tolerances), so downstream code can rely on a well-formed state.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix m, std::vector<std::size_t> dims)
      : m_(std::move(m)), dims_(std::move(dims)) {
    std::size_t prod = 1;
    for (std::size_t d : dims_) prod *= d;
    if (dims_.empty() || prod != m_.dim())
      throw std::invalid_argument("DensityMatrix: subsystem dims do not multiply to " +
                                  std::to_string(m_.dim()));
    if (!all_finite(m_))
      throw std::invalid_argument("DensityMatrix: non-finite entries");
    const double herm = hermiticity_defect(m_);
    if (herm > structural_tol)
      throw std::invalid_argument("DensityMatrix: not Hermitian (defect " +
                                  std::to_string(herm) + ")");
    const cplx tr = trace(m_);
    if (std::abs(tr - cplx(1.0)) > structural_tol)
      throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr.real()) +
                                  " not 1 within tolerance");
    const Spectrum ev = hermitian_eigenvalues(m_);
    if (ev.front() < -spectral_tol)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                  std::to_string(ev.front()));
  }

  const ComplexMatrix& matrix() const { return m_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim() const { return m_.dim(); }

 private:
  ComplexMatrix m_;
  std::vector<std::size_t> dims_;
};

// Single-qubit state from a Bloch vector, rho = (I + b.sigma)/2.
inline DensityMatrix qubit_state(double bx, double by, double bz) {
  const double len = std::sqrt(bx * bx + by * by + bz * bz);
  if (len > 1.0 + 1e-12)
    throw std::invalid_argument("qubit_state: Bloch vector length " + std::to_string(len) +
                                " exceeds 1");
  ComplexMatrix m(2);
  m(0, 0) = 0.5 * (1.0 + bz);
  m(1, 1) = 0.5 * (1.0 - bz);
  m(0, 1) = 0.5 * cplx(bx, -by);
  m(1, 0) = 0.5 * cplx(bx, by);
  return DensityMatrix(std::move(m), {2});
}

// Outer product |v><v| of a normalized state vector.
inline DensityMatrix pure_state(const std::vector<cplx>& v, std::vector<std::size_t> dims) {
  double n2 = 0.0;
  for (const cplx& a : v) n2 += std::norm(a);
  if (std::abs(n2 - 1.0) > 1e-9)
    throw std::invalid_argument("pure_state: vector norm^2 = " + std::to_string(n2));
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return DensityMatrix(std::move(m), std::move(dims));
}

namespace detail {

inline void require_bipartite(const std::vector<std::size_t>& dims, const char* op) {
  if (dims.size() != 2)
    throw std::invalid_argument(std::string(op) + ": state must be bipartite, has " +
                                std::to_string(dims.size()) + " subsystems");
}

}  // namespace detail

// Transpose one subsystem of a bipartite operator. Result is Hermitian and
// trace-preserving but generally not positive, so it is a plain matrix.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t da, std::size_t db,
                                       std::size_t subsystem) {
  if (da * db != m.dim())
    throw std::invalid_argument("partial_transpose: dims " + std::to_string(da) + "x" +
                                std::to_string(db) + " do not match matrix dim " +
                                std::to_string(m.dim()));
  if (subsystem > 1)
    throw std::invalid_argument("partial_transpose: subsystem index " +
                                std::to_string(subsystem) + " out of range for bipartite state");
  ComplexMatrix r(m.dim());
  for (std::size_t ia = 0; ia < da; ++ia)
    for (std::size_t ib = 0; ib < db; ++ib)
      for (std::size_t ja = 0; ja < da; ++ja)
        for (std::size_t jb = 0; jb < db; ++jb) {
          const cplx v = m(ia * db + ib, ja * db + jb);
          if (subsystem == 0)
            r(ja * db + ib, ia * db + jb) = v;
          else
            r(ia * db + jb, ja * db + ib) = v;
        }
  return r;
}

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem) {
  detail::require_bipartite(rho.dims(), "partial_transpose");
  return partial_transpose(rho.matrix(), rho.dims()[0], rho.dims()[1], subsystem);
}

// Trace out one subsystem of a bipartite state.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t traced) {
  detail::require_bipartite(rho.dims(), "partial_trace");
  if (traced > 1)
    throw std::invalid_argument("partial_trace: subsystem index " + std::to_string(traced) +
                                " out of range for bipartite state");
  const std::size_t da = rho.dims()[0], db = rho.dims()[1];
  const ComplexMatrix& m = rho.matrix();
  if (traced == 1) {
    ComplexMatrix r(da);
    for (std::size_t ia = 0; ia < da; ++ia)
      for (std::size_t ja = 0; ja < da; ++ja) {
        cplx s{};
        for (std::size_t b = 0; b < db; ++b) s += m(ia * db + b, ja * db + b);
        r(ia, ja) = s;
      }
    return DensityMatrix(std::move(r), {da});
  }
  ComplexMatrix r(db);
  for (std::size_t ib = 0; ib < db; ++ib)
    for (std::size_t jb = 0; jb < db; ++jb) {
      cplx s{};
      for (std::size_t a = 0; a < da; ++a) s += m(a * db + ib, a * db + jb);
      r(ib, jb) = s;
    }
  return DensityMatrix(std::move(r), {db});
}

}  // namespace qmzi
