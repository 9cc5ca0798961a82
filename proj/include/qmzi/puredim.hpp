#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmzi/complex_matrix.hpp"
#include "qmzi/measures.hpp"
#include "qmzi/rng.hpp"
#include "qmzi/tolerances.hpp"

namespace qmzi {

// Schmidt weights of a pure bipartite state: nonnegative, summing to one,
// at least two of them.
class SchmidtState {
 public:
  explicit SchmidtState(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.size() < 2)
      throw std::invalid_argument("SchmidtState: need at least 2 weights, got " +
                                  std::to_string(c_.size()));
    double sum = 0.0;
    for (double v : c_) {
      if (!(v >= 0.0))
        throw std::invalid_argument("SchmidtState: weight " + std::to_string(v) +
                                    " is negative or non-finite");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("SchmidtState: weights sum to " + std::to_string(sum) +
                                  ", expected 1");
  }

  const std::vector<double>& coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }

  std::size_t argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] > c_[best]) best = i;
    return best;
  }

 private:
  std::vector<double> c_;
};

// Real Schmidt amplitudes (a, b) of a two-term pure internal state,
// a^2 + b^2 = 1.
struct PureQubitPair {
  double a = 1.0;
  double b = 0.0;

  PureQubitPair(double a_in, double b_in) : a(a_in), b(b_in) {
    if (!(a >= 0.0) || !(b >= 0.0))
      throw std::invalid_argument("PureQubitPair: amplitudes must be nonnegative");
    if (std::abs(a * a + b * b - 1.0) > 1e-12)
      throw std::invalid_argument("PureQubitPair: a^2 + b^2 = " + std::to_string(a * a + b * b) +
                                  ", expected 1");
  }
};

// Full output state of the interferometer for the pure internal input with
// amplitudes (a, b) and the internal arm applying a phase flip. Basis order
// (path, internal) = {00, 01, 10, 11}. Matches the gate-level circuit exactly.
inline std::vector<cplx> pure_output_state(const PureQubitPair& s, double chi) {
  const double ch = std::cos(0.5 * chi), sh = std::sin(0.5 * chi);
  return {cplx(s.a * ch, 0.0), cplx(0.0, s.b * sh), cplx(0.0, -s.a * sh), cplx(-s.b * ch, 0.0)};
}

struct PureComplementarity {
  double visibility = 0.0;
  double negativity = 0.0;
  double entropy = 0.0;
};

// Complementary observables of the pure two-amplitude family:
// Gamma = |a^2 - b^2|, N = 2ab (so N^2 + Gamma^2 = 1), E = h((1 + Gamma)/2).
inline PureComplementarity pure_complementarity(const PureQubitPair& s) {
  PureComplementarity out;
  out.visibility = std::abs(s.a * s.a - s.b * s.b);
  out.negativity = 2.0 * s.a * s.b;
  out.entropy = entropy_from_visibility(out.visibility);
  return out;
}

// Fringe visibility of an n-term Schmidt state probed through one output port:
// Gamma = 2 (c_max - 1/n), clamped at zero.
inline double schmidt_visibility(const SchmidtState& s) {
  const double cmax = s.coeffs()[s.argmax()];
  return std::max(0.0, 2.0 * (cmax - 1.0 / static_cast<double>(s.size())));
}

// Entanglement entropy of the Schmidt weights, in bits.
inline double schmidt_entropy(const SchmidtState& s) {
  double e = 0.0;
  for (double c : s.coeffs())
    if (c > 0.0) e -= c * std::log2(c);
  return e;
}

// Exchange between entropy and visibility when weight `step` moves from
// coefficient k to the largest coefficient. Returns the exact differences
// (dE, dGamma) for the shifted state; their ratio tends to
// -log2(c_max / c_k) / 2 as step -> 0. Ties for the maximum resolve to the
// lowest index.
inline std::pair<double, double> entropy_visibility_tradeoff(const SchmidtState& s, std::size_t k,
                                                             double step) {
  const std::size_t m = s.argmax();
  if (k >= s.size())
    throw std::invalid_argument("entropy_visibility_tradeoff: index " + std::to_string(k) +
                                " out of range for " + std::to_string(s.size()) + " weights");
  if (k == m)
    throw std::invalid_argument(
        "entropy_visibility_tradeoff: donor index equals the largest weight");
  const double cmax = s.coeffs()[m], ck = s.coeffs()[k];
  if (!(step > 0.0) || step > std::min(ck, 1.0 - cmax) + 1e-15)
    throw std::invalid_argument("entropy_visibility_tradeoff: step " + std::to_string(step) +
                                " outside (0, min(c_k, 1 - c_max)]");
  std::vector<double> shifted = s.coeffs();
  shifted[m] += step;
  shifted[k] -= step;
  if (shifted[k] < 0.0) shifted[k] = 0.0;
  const SchmidtState t(std::move(shifted));
  const double de = schmidt_entropy(t) - schmidt_entropy(s);
  const double dg = schmidt_visibility(t) - schmidt_visibility(s);
  // Moving weight onto the largest coefficient can only sharpen the fringe
  // and flatten the spectrum's entropy contribution from c_max.
  if (dg < -structural_tol)
    throw std::runtime_error("entropy_visibility_tradeoff: visibility decreased");
  return {de, dg};
}

// Haar-random unitary: QR of a complex Gaussian matrix via modified
// Gram-Schmidt with the positive-diagonal phase convention.
inline ComplexMatrix haar_unitary(std::size_t n, GaussianRng& rng) {
  if (n == 0) throw std::invalid_argument("haar_unitary: dimension must be positive");
  std::vector<std::vector<cplx>> cols(n, std::vector<cplx>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) cols[j][i] = cplx(rng.gaussian(), rng.gaussian());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx dot(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(cols[k][i]) * cols[j][i];
      for (std::size_t i = 0; i < n; ++i) cols[j][i] -= dot * cols[k][i];
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(cols[j][i]);
    norm = std::sqrt(norm);
    if (norm < 1e-300) throw std::runtime_error("haar_unitary: degenerate Gaussian draw");
    for (std::size_t i = 0; i < n; ++i) cols[j][i] /= norm;
  }
  ComplexMatrix u(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) = cols[j][i];
  return u;
}

// Detection probability through port 0 after a unitary mixes the Schmidt
// modes: sum_m c_m |U(0, m)|^2.
inline double schmidt_detection_probability(const SchmidtState& s, const ComplexMatrix& u) {
  if (u.dim() != s.size())
    throw std::invalid_argument("schmidt_detection_probability: unitary is " +
                                std::to_string(u.dim()) + "x" + std::to_string(u.dim()) +
                                " but the state has " + std::to_string(s.size()) + " weights");
  double p = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) p += s.coeffs()[m] * std::norm(u(0, m));
  return p;
}

// Permutation routing the largest Schmidt weight into the detected port; it
// attains the maximum detection probability c_max.
inline ComplexMatrix max_detection_unitary(const SchmidtState& s) {
  const std::size_t m = s.argmax();
  ComplexMatrix u = ComplexMatrix::identity(s.size());
  if (m != 0) {
    u(0, 0) = u(m, m) = cplx(0.0, 0.0);
    u(0, m) = u(m, 0) = cplx(1.0, 0.0);
  }
  return u;
}

struct HaarProbe {
  double mean = 0.0;
  double max = 0.0;
  double std_error = 0.0;
};

// Sample detection probabilities over Haar-random mode mixers. The mean tends
// to 1/n and the maximum approaches (but never exceeds) c_max.
inline HaarProbe haar_probe(const SchmidtState& s, std::size_t samples, std::uint64_t seed) {
  if (samples < 1000)
    throw std::invalid_argument("haar_probe: need at least 1000 samples, got " +
                                std::to_string(samples));
  GaussianRng rng(seed);
  double sum = 0.0, sum2 = 0.0, best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const ComplexMatrix u = haar_unitary(s.size(), rng);
    const double p = schmidt_detection_probability(s, u);
    sum += p;
    sum2 += p * p;
    best = std::max(best, p);
  }
  HaarProbe out;
  const double n = static_cast<double>(samples);
  out.mean = sum / n;
  out.max = best;
  const double var = std::max(0.0, sum2 / n - out.mean * out.mean);
  out.std_error = std::sqrt(var / n);
  return out;
}

}  // namespace qmzi
