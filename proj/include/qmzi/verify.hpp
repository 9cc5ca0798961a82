#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmzi/channels.hpp"
#include "qmzi/char_poly.hpp"
#include "qmzi/complex_matrix.hpp"
#include "qmzi/csv.hpp"
#include "qmzi/datasets.hpp"
#include "qmzi/density_matrix.hpp"
#include "qmzi/interferometer.hpp"
#include "qmzi/measures.hpp"
#include "qmzi/puredim.hpp"
#include "qmzi/rng.hpp"
#include "qmzi/spectrum.hpp"
#include "qmzi/tolerances.hpp"

namespace qmzi {

// Outcome of one self-check property: the residual is the worst deviation
// observed and passes when it stays at or below the property's tolerance.
struct PropertyResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string note;
};

namespace detail {

class PropertyRunner {
 public:
  explicit PropertyRunner(std::optional<double> tol_override)
      : tol_override_(tol_override) {}

  void run(const std::string& name, double pinned_tol,
           const std::function<double(std::string&)>& body) {
    PropertyResult r;
    r.name = name;
    r.tolerance = tol_override_ ? *tol_override_ : pinned_tol;
    try {
      r.residual = body(r.note);
      r.pass = r.residual <= r.tolerance;
    } catch (const std::exception& e) {
      r.residual = std::numeric_limits<double>::infinity();
      r.pass = false;
      r.note = e.what();
    }
    results_.push_back(std::move(r));
  }

  std::vector<PropertyResult> take() { return std::move(results_); }

 private:
  std::optional<double> tol_override_;
  std::vector<PropertyResult> results_;
};

inline cplx det2(cplx a, cplx b, cplx c, cplx d) { return a * d - b * c; }

inline cplx det3(const std::array<std::array<cplx, 3>, 3>& m) {
  return m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2]) -
         m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2]) +
         m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1]);
}

// Cofactor expansion along the first row; independent of the eigensolver and
// of the power-trace identities.
inline cplx det4(const ComplexMatrix& m) {
  if (m.dim() != 4) throw std::invalid_argument("det4: need a 4x4 matrix");
  cplx out(0.0, 0.0);
  double sign = 1.0;
  for (std::size_t c = 0; c < 4; ++c) {
    std::array<std::array<cplx, 3>, 3> minor{};
    for (std::size_t i = 1; i < 4; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        if (j == c) continue;
        minor[i - 1][jj++] = m(i, j);
      }
    }
    out += sign * m(0, c) * det3(minor);
    sign = -sign;
  }
  return out;
}

inline UnitaryParams random_unitary_params(GaussianRng& rng) {
  for (;;) {
    const double t = rng.gaussian(), x = rng.gaussian(), y = rng.gaussian(),
                 z = rng.gaussian();
    const double n = std::sqrt(t * t + x * x + y * y + z * z);
    if (n > 1e-6) return UnitaryParams{t / n, x / n, y / n, z / n};
  }
}

// Noise weights bounded away from the degenerate alpha = 0 line when asked.
inline NoiseParams random_noise(GaussianRng& rng, bool avoid_half) {
  auto draw = [&]() {
    if (!avoid_half) return rng.uniform();
    const double v = 0.48 * rng.uniform();
    return rng.uniform() < 0.5 ? v : 1.0 - v;
  };
  return NoiseParams{draw(), draw()};
}

inline DensityMatrix random_mixed_state(GaussianRng& rng, std::vector<std::size_t> dims) {
  std::size_t d = 1;
  for (std::size_t v : dims) d *= v;
  ComplexMatrix g(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = cplx(rng.gaussian(), rng.gaussian());
  ComplexMatrix rho = g * dagger(g);
  const double tr = trace(rho).real();
  rho = (1.0 / tr) * rho;
  return DensityMatrix(rho, std::move(dims));
}

inline double angle_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * 3.14159265358979323846));
}

inline double physicality_defect(const ComplexMatrix& m) {
  double r = hermiticity_defect(m);
  r = std::max(r, std::abs(trace(m).real() - 1.0));
  r = std::max(r, std::abs(trace(m).imag()));
  const Spectrum ev = hermitian_eigenvalues(m);
  r = std::max(r, std::max(0.0, -ev.front()));
  return r;
}

}  // namespace detail

// Run the full self-check suite. Every closed-form expression the library
// exposes is compared against the gate-level pipeline or an independent
// computation; structural identities are exercised on random inputs. The
// optional tolerance override replaces every property's pinned tolerance.
inline std::vector<PropertyResult> run_properties(std::uint64_t seed,
                                                  std::optional<double> tol_override) {
  detail::PropertyRunner runner(tol_override);
  GaussianRng rng(seed);
  const double pi = std::acos(-1.0);

  // --- structural numerics -------------------------------------------------

  runner.run("kron-mixed-product", 1e-13, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
      ComplexMatrix a(2), b(2), c(2), d(2);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
          a(i, j) = cplx(rng.gaussian(), rng.gaussian());
          b(i, j) = cplx(rng.gaussian(), rng.gaussian());
          c(i, j) = cplx(rng.gaussian(), rng.gaussian());
          d(i, j) = cplx(rng.gaussian(), rng.gaussian());
        }
      const ComplexMatrix lhs = kron(a, b) * kron(c, d);
      const ComplexMatrix rhs = kron(a * c, b * d);
      if (lhs.dim() != 4) return 1.0;
      worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
    return worst;
  });

  runner.run("eigensolver-recovers-known-spectrum", 1e-12, [&](std::string&) {
    double worst = 0.0;
    const std::vector<std::vector<double>> spectra = {
        {0.1, 0.2, 0.3, 0.4}, {0.0, 0.0, 0.5, 0.5}, {0.25, 0.25, 0.25, 0.25}};
    for (const auto& diag : spectra) {
      const ComplexMatrix u = haar_unitary(4, rng);
      ComplexMatrix d(4);
      for (std::size_t i = 0; i < 4; ++i) d(i, i) = diag[i];
      const Spectrum ev = hermitian_eigenvalues(u * d * dagger(u));
      for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(ev[i] - diag[i]));
    }
    return worst;
  });

  runner.run("eigensolver-preserves-trace-moments", 1e-11, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
      ComplexMatrix g(4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) g(i, j) = cplx(rng.gaussian(), rng.gaussian());
      const ComplexMatrix h = g + dagger(g);
      const Spectrum ev = hermitian_eigenvalues(h);
      ComplexMatrix pw = ComplexMatrix::identity(4);
      for (int k = 1; k <= 4; ++k) {
        pw = pw * h;
        double s = 0.0;
        for (double l : ev) s += std::pow(l, k);
        worst = std::max(worst, std::abs(s - trace(pw).real()) / std::max(1.0, std::abs(s)));
      }
    }
    return worst;
  });

  runner.run("partial-transpose-involution", 1e-14, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
      const DensityMatrix rho = detail::random_mixed_state(rng, {2, 2});
      for (std::size_t s = 0; s < 2; ++s) {
        const ComplexMatrix pt = partial_transpose(rho, s);
        worst = std::max(worst, std::abs(trace(pt).real() - 1.0));
        const ComplexMatrix back = partial_transpose(pt, 2, 2, s);
        worst = std::max(worst, max_abs_diff(back, rho.matrix()));
      }
      // Transposing one side then the other is a full transpose.
      const ComplexMatrix both = partial_transpose(partial_transpose(rho, 0), 2, 2, 1);
      ComplexMatrix full(4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) full(i, j) = rho.matrix()(j, i);
      worst = std::max(worst, max_abs_diff(both, full));
    }
    return worst;
  });

  runner.run("char-poly-matches-determinant", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
      const UnitaryParams up = detail::random_unitary_params(rng);
      const NoiseParams noise = detail::random_noise(rng, false);
      const double b0 = rng.uniform();
      const DensityMatrix rho =
          noisy_output_state(b0, 2.0 * pi * rng.uniform(), up, noise);
      const ComplexMatrix pt = partial_transpose(rho, 1);
      const auto coeffs = char_poly_coeffs_from_traces(pt);
      for (double l : {0.0, 0.25, -0.3, 0.7, 1.1}) {
        ComplexMatrix shifted = ComplexMatrix::identity(4);
        shifted = l * shifted + (-1.0) * pt;
        const double det = detail::det4(shifted).real();
        worst = std::max(worst, std::abs(det - char_poly_eval(coeffs, l)));
      }
    }
    return worst;
  });

  runner.run("char-poly-annihilates-spectrum", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
      const DensityMatrix rho = detail::random_mixed_state(rng, {2, 2});
      const ComplexMatrix pt = partial_transpose(rho, 1);
      for (const ComplexMatrix& m : {rho.matrix(), pt}) {
        const auto coeffs = char_poly_coeffs_from_traces(m);
        for (double l : hermitian_eigenvalues(m))
          worst = std::max(worst, std::abs(char_poly_eval(coeffs, l)));
      }
    }
    return worst;
  });

  // --- interferometer ------------------------------------------------------

  runner.run("circuit-is-unitary", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
      const ComplexMatrix u = build_internal_unitary(detail::random_unitary_params(rng));
      const ComplexMatrix v = build_circuit(2.0 * pi * rng.uniform(), u);
      worst = std::max(worst, max_abs_diff(dagger(v) * v, ComplexMatrix::identity(4)));
    }
    return worst;
  });

  runner.run("output-matches-four-term-expansion", 1e-12, [&](std::string&) {
    const ComplexMatrix j = ComplexMatrix::mat2(1, 1, 1, 1);
    const ComplexMatrix k = ComplexMatrix::mat2(1, -1, -1, 1);
    const ComplexMatrix l = ComplexMatrix::mat2(1, -1, 1, -1);
    const ComplexMatrix lp = ComplexMatrix::mat2(1, 1, -1, -1);
    double worst = 0.0;
    for (int it = 0; it < 30; ++it) {
      const double b0 = rng.uniform(), chi = 2.0 * pi * rng.uniform();
      const ComplexMatrix u = build_internal_unitary(detail::random_unitary_params(rng));
      const DensityMatrix rho0 = qubit_state(0.0, 0.0, b0);
      const ComplexMatrix& r = rho0.matrix();
      const ComplexMatrix gate = output_state(rho0, chi, u).matrix();
      const cplx ph = std::exp(cplx(0.0, chi));
      const ComplexMatrix sum = kron(j, u * r * dagger(u)) + kron(k, r) +
                                (1.0 / ph) * kron(l, u * r) + ph * kron(lp, r * dagger(u));
      worst = std::max(worst, max_abs_diff(gate, 0.25 * sum));
    }
    return worst;
  });

  runner.run("detection-probability-closed-form", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
      const double b0 = rng.uniform(), chi = 2.0 * pi * rng.uniform();
      const UnitaryParams up = detail::random_unitary_params(rng);
      const double p_gate =
          detection_probability(output_state(qubit_state(0.0, 0.0, b0), chi,
                                             build_internal_unitary(up)));
      const FringeFit f = analytic_visibility_phase(up.t, up.z, b0);
      const double p_closed = 0.5 * (1.0 + f.visibility * std::cos(chi - f.phase));
      worst = std::max(worst, std::abs(p_gate - p_closed));
    }
    return worst;
  });

  runner.run("fringe-round-trip", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
      const double b0 = 0.05 + 0.95 * rng.uniform();
      UnitaryParams up = detail::random_unitary_params(rng);
      FringeFit expect = analytic_visibility_phase(up.t, up.z, b0);
      if (expect.visibility < 0.05) continue;
      const ComplexMatrix u = build_internal_unitary(up);
      const std::size_t k_samples = 3 + static_cast<std::size_t>(rng.uniform() * 14.0);
      const auto samples = sample_fringe(k_samples, [&](double chi) {
        return detection_probability(output_state(qubit_state(0.0, 0.0, b0), chi, u));
      });
      const FringeFit got = extract_fringe(samples);
      worst = std::max(worst, std::abs(got.visibility - expect.visibility));
      worst = std::max(worst, detail::angle_distance(got.phase, expect.phase));
    }
    return worst;
  });

  runner.run("visibility-ignores-transverse-split", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
      const double b0 = 0.1 + 0.9 * rng.uniform();
      const NoiseParams noise = detail::random_noise(rng, true);
      const double t = 0.6 * rng.uniform(), z = 0.6 * rng.uniform();
      const double r = std::sqrt(std::max(0.0, 1.0 - t * t - z * z));
      std::vector<double> vis;
      for (double th : {0.0, 0.4, 1.1, 0.5 * pi, 2.4}) {
        const UnitaryParams up{t, r * std::cos(th), r * std::sin(th), z};
        const auto samples = sample_fringe(8, [&](double chi) {
          return detection_probability(noisy_output_state(b0, chi, up, noise));
        });
        vis.push_back(extract_fringe(samples).visibility);
      }
      const auto [lo, hi] = std::minmax_element(vis.begin(), vis.end());
      worst = std::max(worst, *hi - *lo);
    }
    return worst;
  });

  // --- noise channels ------------------------------------------------------

  runner.run("output-states-are-physical", 1e-9, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 30; ++it) {
      const DensityMatrix rho =
          noisy_output_state(rng.uniform(), 2.0 * pi * rng.uniform(),
                             detail::random_unitary_params(rng),
                             detail::random_noise(rng, false));
      worst = std::max(worst, detail::physicality_defect(rho.matrix()));
      const double p = detection_probability(rho);
      worst = std::max(worst, std::max(0.0, -p));
      worst = std::max(worst, std::max(0.0, p - 1.0));
    }
    return worst;
  });

  runner.run("noise-maps-preserve-states", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
      const DensityMatrix rho = detail::random_mixed_state(rng, {2, 2});
      const DensityMatrix a = apply_bit_flip(rho, rng.uniform());
      const DensityMatrix b = apply_phase_noise(rho, rng.uniform());
      worst = std::max(worst, detail::physicality_defect(a.matrix()));
      worst = std::max(worst, detail::physicality_defect(b.matrix()));
    }
    return worst;
  });

  runner.run("noise-maps-commute", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
      const DensityMatrix rho = detail::random_mixed_state(rng, {2, 2});
      const double p = rng.uniform(), q = rng.uniform();
      const ComplexMatrix ab = apply_phase_noise(apply_bit_flip(rho, p), q).matrix();
      const ComplexMatrix ba = apply_bit_flip(apply_phase_noise(rho, q), p).matrix();
      worst = std::max(worst, max_abs_diff(ab, ba));
    }
    return worst;
  });

  runner.run("noisy-output-matches-component-form", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double b0 = rng.uniform(), chi = 2.0 * pi * rng.uniform();
      const UnitaryParams up = detail::random_unitary_params(rng);
      const NoiseParams noise = detail::random_noise(rng, false);
      const ComplexMatrix gate = noisy_output_state(b0, chi, up, noise).matrix();
      const ComplexMatrix closed =
          pauli_reconstruct(model_pauli_closed_form(b0, chi, up, noise));
      worst = std::max(worst, max_abs_diff(gate, closed));
    }
    return worst;
  });

  runner.run("component-decomposition-round-trip", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
      const DensityMatrix rho = detail::random_mixed_state(rng, {2, 2});
      const ComplexMatrix back = pauli_reconstruct(pauli_decompose(rho));
      worst = std::max(worst, max_abs_diff(back, rho.matrix()));
    }
    return worst;
  });

  runner.run("noisy-fringe-scaling", 1e-9, [&](std::string&) {
    double worst = 0.0;
    int kept = 0;
    while (kept < 40) {
      const double b0 = rng.uniform();
      const UnitaryParams up = detail::random_unitary_params(rng);
      const NoiseParams noise = detail::random_noise(rng, false);
      const double aq = noise.alpha_q();
      const double gamma_expect =
          std::abs(aq) * std::sqrt(up.t * up.t + b0 * b0 * up.z * up.z);
      if (gamma_expect < 0.05 || std::abs(aq) < 0.05) continue;
      ++kept;
      const auto samples = sample_fringe(12, [&](double chi) {
        return detection_probability(noisy_output_state(b0, chi, up, noise));
      });
      const FringeFit got = extract_fringe(samples);
      worst = std::max(worst, std::abs(got.visibility - gamma_expect));
      double phase_expect = std::atan2(b0 * up.z, up.t);
      if (aq < 0.0) phase_expect += pi;
      worst = std::max(worst, detail::angle_distance(got.phase, phase_expect));
    }
    return worst;
  });

  // --- entanglement measures ----------------------------------------------

  runner.run("transposed-spectrum-single-negative", 0.0, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
      const DensityMatrix rho =
          noisy_output_state(rng.uniform(), 2.0 * pi * rng.uniform(),
                             detail::random_unitary_params(rng),
                             detail::random_noise(rng, false));
      const Spectrum ev = hermitian_eigenvalues(partial_transpose(rho, 1));
      int negatives = 0;
      for (double l : ev)
        if (l < -spectral_tol) ++negatives;
      worst = std::max(worst, static_cast<double>(std::max(0, negatives - 1)));
    }
    return worst;
  });

  runner.run("negativity-subsystem-invariant", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
      const DensityMatrix rho = detail::random_mixed_state(rng, {2, 2});
      double n[2];
      for (std::size_t s = 0; s < 2; ++s) {
        const Spectrum ev = hermitian_eigenvalues(partial_transpose(rho, s));
        double acc = 0.0;
        for (double l : ev)
          if (l < -spectral_tol) acc += -l;
        n[s] = 2.0 * acc;
      }
      worst = std::max(worst, std::abs(n[0] - n[1]));
    }
    return worst;
  });

  runner.run("negativity-matches-root-law", 1e-9, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
      const double b0 = rng.uniform();
      const double z = 2.0 * rng.uniform() - 1.0;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double th = 2.0 * pi * rng.uniform();
      const UnitaryParams up{0.0, r * std::cos(th), r * std::sin(th), z};
      const DensityMatrix rho =
          noisy_output_state(b0, 2.0 * pi * rng.uniform(), up, NoiseParams{0.0, 0.0});
      const double gamma_vis = b0 * std::abs(z);
      worst = std::max(worst,
                       std::abs(negativity(rho) - negativity_t0_closed(b0, gamma_vis)));
    }
    return worst;
  });

  runner.run("transposed-spectrum-closed-form", 1e-9, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double b0 = rng.uniform();
      const double z = 2.0 * rng.uniform() - 1.0;
      const double y = std::sqrt(std::max(0.0, 1.0 - z * z));
      const NoiseParams noise = detail::random_noise(rng, true);
      const UnitaryParams up{0.0, 0.0, y, z};
      const DensityMatrix rho =
          noisy_output_state(b0, 2.0 * pi * rng.uniform(), up, noise);
      const Spectrum ev = hermitian_eigenvalues(partial_transpose(rho, 1));
      const double gamma_vis = std::abs(noise.alpha_q()) * b0 * std::abs(z);
      const auto closed = pt_spectrum_tx0(b0, gamma_vis, noise);
      for (std::size_t i = 0; i < 4; ++i)
        worst = std::max(worst, std::abs(ev[i] - closed[i]));
    }
    return worst;
  });

  runner.run("noisy-negativity-closed-form", 1e-9, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
      const double b0 = rng.uniform();
      const double z = 2.0 * rng.uniform() - 1.0;
      const double y = std::sqrt(std::max(0.0, 1.0 - z * z));
      const NoiseParams noise = detail::random_noise(rng, true);
      const UnitaryParams up{0.0, 0.0, y, z};
      const DensityMatrix rho =
          noisy_output_state(b0, 2.0 * pi * rng.uniform(), up, noise);
      const double gamma_vis = std::abs(noise.alpha_q()) * b0 * std::abs(z);
      worst = std::max(worst, std::abs(negativity(rho) -
                                       negativity_noisy_closed(b0, gamma_vis, noise)));
    }
    return worst;
  });

  runner.run("noise-free-coefficient-formulas", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
      const double b0 = rng.uniform();
      const UnitaryParams up = detail::random_unitary_params(rng);
      const DensityMatrix rho = noisy_output_state(b0, 2.0 * pi * rng.uniform(), up,
                                                   NoiseParams{0.0, 0.0});
      const auto coeffs = char_poly_coeffs_from_traces(partial_transpose(rho, 1));
      const double b2 = b0 * b0, s2 = up.x * up.x + up.y * up.y;
      const double a2 = (1.0 - b2) / 4.0;
      const double a3 = -b2 * s2 / 4.0;
      const double a4 = -b2 * s2 * (s2 + up.z * up.z * (1.0 - b2)) / 16.0;
      worst = std::max(worst, std::abs(coeffs[1] - a2));
      worst = std::max(worst, std::abs(coeffs[2] - a3));
      worst = std::max(worst, std::abs(coeffs[3] - a4));
      // The constant coefficient never turns positive, and it vanishes only
      // when the rotation keeps the initial basis (x = y = 0).
      if (coeffs[3] > 1e-12) worst = std::max(worst, 1.0);
      if (s2 > 0.01 && coeffs[3] > -1e-12) worst = std::max(worst, 1.0);
    }
    {
      const UnitaryParams up{0.6, 0.0, 0.0, 0.8};
      const DensityMatrix rho = noisy_output_state(0.7, 0.3, up, NoiseParams{0.0, 0.0});
      const auto coeffs = char_poly_coeffs_from_traces(partial_transpose(rho, 1));
      worst = std::max(worst, std::abs(coeffs[3]));
    }
    return worst;
  });

  runner.run("closed-coefficients-match-trace-route", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double b0 = rng.uniform();
      const double z = 2.0 * rng.uniform() - 1.0;
      const double y = std::sqrt(std::max(0.0, 1.0 - z * z));
      const NoiseParams noise = detail::random_noise(rng, false);
      const DensityMatrix rho = noisy_output_state(
          b0, 2.0 * pi * rng.uniform(), UnitaryParams{0.0, 0.0, y, z}, noise);
      const auto traced = char_poly_coeffs_from_traces(partial_transpose(rho, 1));
      const auto closed = char_poly_tx0_closed(b0, z, noise);
      for (std::size_t i = 0; i < 4; ++i)
        worst = std::max(worst, std::abs(traced[i] - closed[i]));
    }
    return worst;
  });

  runner.run("quartic-annihilates-transposed-spectrum", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
      const double b0 = rng.uniform();
      const UnitaryParams up = detail::random_unitary_params(rng);
      const DensityMatrix rho = noisy_output_state(b0, 2.0 * pi * rng.uniform(), up,
                                                   NoiseParams{0.0, 0.0});
      const FringeFit f = analytic_visibility_phase(up.t, up.z, b0);
      const QuarticForm q = quartic_form(b0, f.visibility, f.phase);
      for (double l : hermitian_eigenvalues(partial_transpose(rho, 1)))
        worst = std::max(worst, std::abs(quartic_eval(q, l)));
      worst = std::max(worst, std::max(0.0, -q.alpha));
      worst = std::max(worst, std::max(0.0, q.alpha - 0.25));
      worst = std::max(worst, std::max(0.0, -q.gamma));
      worst = std::max(worst, std::max(0.0, q.gamma - 0.25));
      worst = std::max(worst, std::max(0.0, b0 * b0 - q.delta));
      worst = std::max(worst, std::max(0.0, q.delta - 1.0));
    }
    return worst;
  });

  runner.run("separability-boundary-bisection", 1e-8, [&](std::string&) {
    double worst = 0.0;
    auto crossing = [&](double b0, double g, double lo, double hi) {
      // Invariant: exactly one side of [lo, hi] is entangled.
      auto entangled = [&](double p) {
        return negativity_noisy_closed(b0, g, NoiseParams{p, 0.0}) > 0.0;
      };
      const bool at_lo = entangled(lo);
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (entangled(mid) == at_lo)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    };
    for (const double g : {0.0, 0.2, 0.4, 0.55}) {
      const double b0 = 0.7;
      const SeparabilityBoundary s = separability_boundary(b0, g);
      worst = std::max(worst, std::abs(crossing(b0, g, 0.0, 0.5) - s.p_minus));
      worst = std::max(worst, std::abs(crossing(b0, g, 1.0, 0.5) - s.p_plus));
      worst = std::max(
          worst, std::abs(negativity_noisy_closed(b0, g, NoiseParams{s.p_minus, 0.0})));
    }
    // Zero-visibility window in closed rational form.
    const SeparabilityBoundary s0 = separability_boundary(0.7, 0.0);
    worst = std::max(worst, std::abs(s0.p_minus - 7.0 / 17.0));
    worst = std::max(worst, std::abs(s0.p_plus - 10.0 / 17.0));
    return worst;
  });

  runner.run("entanglement-visibility-ellipse", 1e-10, [&](std::string&) {
    double worst = 0.0;
    int kept = 0;
    while (kept < 50) {
      const double b0 = 0.2 + 0.8 * rng.uniform();
      const NoiseParams noise = detail::random_noise(rng, true);
      const double gmax = std::abs(noise.alpha_q()) * b0;
      const double g = gmax * rng.uniform();
      if (negativity_noisy_closed(b0, g, noise) <= 1e-6) continue;
      ++kept;
      worst = std::max(worst, std::abs(ellipse_residual(b0, g, noise)));
    }
    return worst;
  });

  runner.run("entanglement-monotone-in-visibility", 1e-9, [&](std::string&) {
    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
      const double b0 = 0.3 + 0.7 * rng.uniform();
      NoiseParams noise = detail::random_noise(rng, true);
      const double gmax = std::abs(noise.alpha_q()) * b0;
      std::vector<double> grid(41);
      for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = gmax * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
      grid.back() = gmax * (1.0 - 1e-12);
      const auto rows = monotonicity_check(b0, noise, grid);
      for (const auto& row : rows)
        if (row[1] > 1e-6) worst = std::max(worst, std::max(0.0, row[2]));
    }
    return worst;
  });

  runner.run("marginal-entropy-matches-visibility-formula", 1e-11, [&](std::string&) {
    const ComplexMatrix sz = ComplexMatrix::mat2(1, 0, 0, -1);
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
      const double a = std::sqrt(rng.uniform());
      const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
      const DensityMatrix rho0 = pure_state({cplx(a, 0.0), cplx(b, 0.0)}, {2});
      const DensityMatrix out = output_state(rho0, 2.0 * pi * rng.uniform(), sz);
      const double e0 = von_neumann_entropy(partial_trace(out, 1));
      const double e1 = von_neumann_entropy(partial_trace(out, 0));
      const double ev = entropy_from_visibility(std::abs(a * a - b * b));
      worst = std::max(worst, std::abs(e0 - e1));
      worst = std::max(worst, std::abs(e0 - ev));
    }
    return worst;
  });

  // --- pure-state family and higher Schmidt rank ---------------------------

  runner.run("pure-output-matches-gate", 1e-12, [&](std::string&) {
    const ComplexMatrix sz = ComplexMatrix::mat2(1, 0, 0, -1);
    double worst = 0.0;
    for (int it = 0; it < 30; ++it) {
      const double a = std::sqrt(rng.uniform());
      const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
      const PureQubitPair pair(a, b);
      const double chi = 2.0 * pi * rng.uniform();
      const DensityMatrix out =
          output_state(pure_state({cplx(a, 0.0), cplx(b, 0.0)}, {2}), chi, sz);
      const std::vector<cplx> v = pure_output_state(pair, chi);
      cplx overlap(0.0, 0.0);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          overlap += std::conj(v[i]) * out.matrix()(i, j) * v[j];
      worst = std::max(worst, std::abs(overlap.real() - 1.0));
      worst = std::max(worst, std::abs(overlap.imag()));
      const PureComplementarity c = pure_complementarity(pair);
      const double p_closed = 0.5 * (1.0 + (a * a - b * b) * std::cos(chi));
      worst = std::max(worst, std::abs(detection_probability(out) - p_closed));
      worst = std::max(worst, std::abs(negativity(out) - c.negativity));
    }
    return worst;
  });

  runner.run("complementarity-identity-pure", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double a = std::sqrt(static_cast<double>(i) / 200.0);
      const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
      const PureComplementarity c = pure_complementarity(PureQubitPair(a, b));
      worst = std::max(worst, std::abs(c.negativity * c.negativity +
                                       c.visibility * c.visibility - 1.0));
    }
    const PureComplementarity even =
        pure_complementarity(PureQubitPair(std::sqrt(0.5), std::sqrt(0.5)));
    worst = std::max(worst, std::abs(even.entropy - 1.0));
    worst = std::max(worst, std::abs(even.negativity - 1.0));
    return worst;
  });

  runner.run("entropy-visibility-tradeoff-slope", 1e-4, [&](std::string&) {
    const SchmidtState s({0.5, 0.3, 0.2});
    const auto [de, dg] = entropy_visibility_tradeoff(s, 2, 1e-7);
    const double expect = -std::log2(0.5 / 0.2) / 2.0;
    double worst = std::abs(de / dg - expect);
    const auto [de2, dg2] = entropy_visibility_tradeoff(s, 2, 0.05);
    worst = std::max(worst, std::max(0.0, de2));
    worst = std::max(worst, std::max(0.0, -dg2));
    return worst;
  });

  runner.run("haar-probe-statistics", 1e-9, [&](std::string& note) {
    double worst = 0.0;
    const std::vector<std::vector<double>> states = {
        {0.6, 0.4}, {0.5, 0.3, 0.2}, {0.4, 0.2, 0.2, 0.2}};
    for (std::size_t i = 0; i < states.size(); ++i) {
      const SchmidtState s(states[i]);
      const double cmax = s.coeffs()[s.argmax()];
      const HaarProbe probe = haar_probe(s, 2000, seed + 17 * (i + 1));
      const double n = static_cast<double>(s.size());
      worst = std::max(worst, std::max(0.0, std::abs(probe.mean - 1.0 / n) -
                                                5.0 * probe.std_error));
      worst = std::max(worst, std::max(0.0, probe.max - cmax));
      const double attained =
          schmidt_detection_probability(s, max_detection_unitary(s));
      worst = std::max(worst, std::abs(attained - cmax));
    }
    GaussianRng local(seed + 99);
    const ComplexMatrix u = haar_unitary(4, local);
    worst = std::max(worst, max_abs_diff(dagger(u) * u, ComplexMatrix::identity(4)));
    note = "statistical bounds use 5 standard errors";
    return worst;
  });

  runner.run("schmidt-visibility-bounds", 1e-12, [&](std::string&) {
    double worst = 0.0;
    worst = std::max(worst, std::abs(schmidt_visibility(SchmidtState({0.25, 0.25, 0.25, 0.25}))));
    const SchmidtState peaked({0.7, 0.1, 0.1, 0.1});
    worst = std::max(worst, std::abs(schmidt_visibility(peaked) - 0.9));
    worst = std::max(worst, std::abs(schmidt_entropy(peaked) - 1.3567796494470397));
    for (int it = 0; it < 20; ++it) {
      double c = rng.uniform();
      std::vector<double> w = {c, 1.0 - c};
      const SchmidtState s(w);
      const double a = std::sqrt(std::max(c, 1.0 - c));
      const double b = std::sqrt(std::min(c, 1.0 - c));
      worst = std::max(worst, std::abs(schmidt_visibility(s) -
                                       pure_complementarity(PureQubitPair(a, b)).visibility));
      const double n = static_cast<double>(s.size());
      const double g = schmidt_visibility(s);
      worst = std::max(worst, std::max(0.0, -g));
      worst = std::max(worst, std::max(0.0, g - 2.0 * (1.0 - 1.0 / n)));
    }
    return worst;
  });

  // --- datasets and serialization ------------------------------------------

  runner.run("dataset-grids-monotone", 1e-9, [&](std::string&) {
    double worst = 0.0;
    auto scan = [&](const CsvTable& table) {
      std::size_t present = 0;
      for (std::size_t r = 1; r < table.rows.size(); ++r) {
        const auto& prev = table.rows[r - 1];
        const auto& cur = table.rows[r];
        if (!prev[2] || !cur[2]) continue;
        if (*prev[0] != *cur[0]) continue;  // new grid row
        ++present;
        if (*cur[2] > 1e-6 || *prev[2] > 1e-6)
          worst = std::max(worst, *cur[2] - *prev[2]);
      }
      if (present == 0) worst = std::max(worst, 1.0);
    };
    scan(fig4_dataset(0.7, 21));
    scan(fig6_dataset(0.7, 0.4, NoiseParams{0.4, 0.0}, 15));
    const CsvTable flat = fig6_dataset(0.7, 0.4, NoiseParams{0.5, 0.0}, 9);
    for (const auto& row : flat.rows)
      if (row[2]) worst = std::max(worst, std::abs(*row[2]));
    const CsvTable fam = fig8_dataset(51);
    for (std::size_t r = 1; r < fam.rows.size(); ++r)
      worst = std::max(worst, *fam.rows[r][1] - *fam.rows[r - 1][1]);
    return worst;
  });

  runner.run("dataset-matches-closed-form", 1e-9, [&](std::string&) {
    double worst = 0.0;
    const NoiseParams noise{0.1, 0.05};
    const CsvTable table = fig6_dataset(0.7, 0.0, noise, 11);
    std::size_t checked = 0;
    for (const auto& row : table.rows) {
      if (*row[0] != 0.0 || !row[2]) continue;
      ++checked;
      worst = std::max(worst,
                       std::abs(*row[2] - negativity_noisy_closed(0.7, *row[1], noise)));
    }
    if (checked < 5) worst = std::max(worst, 1.0);
    const CsvTable fam = fig8_dataset(21);
    for (const auto& row : fam.rows)
      worst = std::max(worst, std::abs(*row[1] - entropy_from_visibility(*row[0])));
    const UnitaryParams up{0.5, std::sqrt(0.5), 0.0, 0.5};
    const CsvTable fr = fringe_dataset(0.7, up, noise, 16);
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : fr.rows) samples.emplace_back(*row[0], *row[1]);
    const double expect =
        std::abs(noise.alpha_q()) * std::sqrt(0.25 + 0.49 * 0.25);
    worst = std::max(worst, std::abs(extract_fringe(samples).visibility - expect));
    return worst;
  });

  runner.run("csv-round-trip-stable", 0.0, [&](std::string&) {
    CsvTable table;
    table.header = {"alpha", "beta", "gamma"};
    table.rows.push_back({1.0 / 3.0, std::nullopt, 1e-15});
    table.rows.push_back({-0.0, 12345.678901234, 2.0});
    table.rows.push_back({std::nullopt, std::nullopt, -7.25e8});
    const std::string once = to_csv(table);
    const CsvTable parsed = parse_csv(once);
    const std::string twice = to_csv(parsed);
    if (once != twice) return 1.0;
    if (parsed.rows.size() != table.rows.size()) return 1.0;
    if (parsed.rows[0][1] || !parsed.rows[2][2]) return 1.0;
    if (once.back() != '\n' || once.find("\r") != std::string::npos) return 1.0;
    return 0.0;
  });

  runner.run("sweep-respects-unit-rotation", 1e-9, [&](std::string&) {
    double worst = 0.0;
    SweepSettings base;
    const double z0 = base.u.z;
    const CsvTable swept = sweep_dataset("t", 0.0, 1.0, 21, base);
    for (const auto& row : swept.rows) {
      const double t = *row[0];
      const double z = z0 * std::sqrt(std::max(0.0, 1.0 - t * t));
      const double expect = std::sqrt(t * t + 0.49 * z * z);
      worst = std::max(worst, std::abs(*row[1] - expect));
      if (!row[2] || !row[3]) return 1.0;
      worst = std::max(worst, std::max(0.0, *row[3] - 1.0));
      worst = std::max(worst, std::max(0.0, -*row[3]));
    }
    const CsvTable phased = sweep_dataset("chi", 0.0, 2.0 * pi, 16, base);
    const FringeFit f = analytic_visibility_phase(base.u.t, base.u.z, base.b0);
    for (const auto& row : phased.rows) {
      const double p_closed =
          0.5 * (1.0 + f.visibility * std::cos(*row[0] - f.phase));
      worst = std::max(worst, std::abs(*row[2] - p_closed));
    }
    return worst;
  });

  return runner.take();
}

}  // namespace qmzi
