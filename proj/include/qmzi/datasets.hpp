#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmzi/channels.hpp"
#include "qmzi/csv.hpp"
#include "qmzi/density_matrix.hpp"
#include "qmzi/interferometer.hpp"
#include "qmzi/measures.hpp"
#include "qmzi/tolerances.hpp"

namespace qmzi {

namespace detail {

inline std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  if (steps < 2) throw std::invalid_argument("linspace: need at least 2 steps");
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  return out;
}

// Solve for the z >= 0 that realizes a requested noise-free visibility at
// fixed t on the b0 fringe, i.e. Gamma^2 = t^2 + b0^2 z^2 with the remaining
// weight x^2 + y^2 = 1 - t^2 - z^2. Empty when the cell is unreachable.
inline std::optional<double> solve_z_for_visibility(double b0, double t, double gamma_vis) {
  const double slack = 1e-12;
  const double g2 = gamma_vis * gamma_vis, t2 = t * t;
  if (g2 < t2 - slack) return std::nullopt;  // visibility floor is |t|
  if (b0 == 0.0) {
    // Visibility is |t| regardless of z; reachable only on the floor.
    if (std::abs(gamma_vis - std::abs(t)) > 1e-9) return std::nullopt;
    return 0.0;
  }
  double z2 = (g2 - t2) / (b0 * b0);
  if (z2 < 0.0) z2 = 0.0;
  if (z2 > 1.0 - t2 + slack) return std::nullopt;  // no unit vector left
  z2 = std::min(z2, 1.0 - t2);
  return std::sqrt(z2);
}

inline double negativity_of_noisy_cell(double b0, double chi, const UnitaryParams& u,
                                       const NoiseParams& noise) {
  const DensityMatrix rho = noisy_output_state(b0, chi, u, noise);
  return negativity(rho);
}

}  // namespace detail

// Detection probability across one fringe period: K samples of P(chi) at
// chi_k = 2 pi k / K for the given internal rotation and noise weights.
inline CsvTable fringe_dataset(double b0, const UnitaryParams& u, const NoiseParams& noise,
                               std::size_t k_samples) {
  if (k_samples < 3)
    throw std::invalid_argument("fringe_dataset: need at least 3 samples, got " +
                                std::to_string(k_samples));
  CsvTable table;
  table.header = {"chi", "P"};
  for (std::size_t k = 0; k < k_samples; ++k) {
    const double chi =
        2.0 * 3.14159265358979323846 * static_cast<double>(k) / static_cast<double>(k_samples);
    const DensityMatrix rho = noisy_output_state(b0, chi, u, noise);
    table.rows.push_back({chi, detection_probability(rho)});
  }
  return table;
}

// Noise-free entanglement over the (t, Gamma) product grid. For each cell the
// internal rotation is completed with y = 0, x = sqrt(1 - t^2 - z^2), and z
// solved from the requested visibility. Unreachable cells are left empty.
inline CsvTable fig4_dataset(double b0, std::size_t steps) {
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument("fig4_dataset: b0 = " + std::to_string(b0) + " outside [0,1]");
  CsvTable table;
  table.header = {"t", "Gamma", "N"};
  const std::vector<double> ts = detail::linspace(0.0, 1.0, steps);
  const std::vector<double> gs = detail::linspace(0.0, 1.0, steps);
  const NoiseParams clean{0.0, 0.0};
  for (double t : ts) {
    for (double g : gs) {
      const std::optional<double> z = detail::solve_z_for_visibility(b0, t, g);
      if (!z) {
        table.rows.push_back({t, g, std::nullopt});
        continue;
      }
      const double rem = std::max(0.0, 1.0 - t * t - *z * *z);
      const UnitaryParams u{t, std::sqrt(rem), 0.0, *z};
      table.rows.push_back({t, g, detail::negativity_of_noisy_cell(b0, 0.0, u, clean)});
    }
  }
  return table;
}

// Entanglement under bit-flip and phase noise over the (t, Gamma) grid, with
// the x component of the internal rotation pinned and y completing the unit
// vector. The requested Gamma is the observed (noise-scaled) visibility.
inline CsvTable fig6_dataset(double b0, double x, const NoiseParams& noise, std::size_t steps) {
  if (b0 < 0.0 || b0 > 1.0 + 1e-12)
    throw std::invalid_argument("fig6_dataset: b0 = " + std::to_string(b0) + " outside [0,1]");
  if (std::abs(x) > 1.0 + 1e-12)
    throw std::invalid_argument("fig6_dataset: |x| = " + std::to_string(std::abs(x)) +
                                " exceeds 1");
  const double aq = std::abs(noise.alpha_q());
  CsvTable table;
  table.header = {"t", "Gamma", "N"};
  const std::vector<double> ts = detail::linspace(0.0, 1.0, steps);
  const std::vector<double> gs = detail::linspace(0.0, 1.0, steps);
  for (double t : ts) {
    for (double g : gs) {
      std::optional<double> z;
      if (aq == 0.0) {
        // The fringe is flat: only Gamma = 0 cells are reachable.
        z = (g == 0.0) ? detail::solve_z_for_visibility(b0, t, 0.0) : std::nullopt;
        if (z && t * t + x * x + *z * *z > 1.0 + 1e-12) z = std::nullopt;
      } else {
        z = detail::solve_z_for_visibility(b0, t, g / aq);
        if (z && t * t + x * x + *z * *z > 1.0 + 1e-12) z = std::nullopt;
      }
      if (!z) {
        table.rows.push_back({t, g, std::nullopt});
        continue;
      }
      const double rem = std::max(0.0, 1.0 - t * t - x * x - *z * *z);
      const UnitaryParams u{t, x, std::sqrt(rem), *z};
      table.rows.push_back({t, g, detail::negativity_of_noisy_cell(b0, 0.0, u, noise)});
    }
  }
  return table;
}

// Entanglement entropy against visibility for the pure two-amplitude family:
// S = h((1 + Gamma)/2) in bits.
inline CsvTable fig8_dataset(std::size_t steps) {
  CsvTable table;
  table.header = {"Gamma", "S"};
  for (double g : detail::linspace(0.0, 1.0, steps))
    table.rows.push_back({g, entropy_from_visibility(g)});
  return table;
}

// One-parameter sweep: vary a single model parameter across [lo, hi] and
// record visibility, detection probability at the swept chi, and
// entanglement, all from the gate-level pipeline. When a component of the
// internal rotation is swept, the remaining three are rescaled to keep the
// rotation unitary.
struct SweepSettings {
  double b0 = 0.7;
  UnitaryParams u{0.0, 0.4, 0.0, std::sqrt(1.0 - 0.16)};
  NoiseParams noise{0.0, 0.0};
  double chi = 0.0;
};

inline CsvTable sweep_dataset(const std::string& param, double lo, double hi, std::size_t steps,
                              const SweepSettings& base) {
  static const std::vector<std::string> allowed = {"b0", "t", "x", "y", "z", "p", "q", "chi"};
  if (std::find(allowed.begin(), allowed.end(), param) == allowed.end())
    throw std::invalid_argument("sweep_dataset: unknown parameter '" + param +
                                "' (expected b0, t, x, y, z, p, q, or chi)");
  if (!(lo <= hi))
    throw std::invalid_argument("sweep_dataset: empty range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  CsvTable table;
  table.header = {param, "Gamma", "P", "N"};
  for (double v : detail::linspace(lo, hi, steps)) {
    double b0 = base.b0, chi = base.chi;
    UnitaryParams u = base.u;
    NoiseParams noise = base.noise;
    if (param == "b0")
      b0 = v;
    else if (param == "p")
      noise.p = v;
    else if (param == "q")
      noise.q = v;
    else if (param == "chi")
      chi = v;
    else {
      // Pin the swept component and rescale the other three onto the sphere.
      double* target = param == "t" ? &u.t : param == "x" ? &u.x : param == "y" ? &u.y : &u.z;
      if (std::abs(v) > 1.0 + 1e-12)
        throw std::invalid_argument("sweep_dataset: rotation component " + std::to_string(v) +
                                    " exceeds unit magnitude");
      const double rest2 = u.norm2() - *target * *target;
      const double need2 = 1.0 - std::min(1.0, v * v);
      if (rest2 < 1e-15) {
        if (need2 > 1e-12)
          throw std::invalid_argument(
              "sweep_dataset: cannot rescale a zero remainder to complete the rotation; choose a "
              "base with weight outside '" +
              param + "'");
        *target = v < 0.0 ? -1.0 : 1.0;
      } else {
        const double scale = std::sqrt(need2 / rest2);
        u.t *= scale;
        u.x *= scale;
        u.y *= scale;
        u.z *= scale;
        *target = v;
      }
    }
    const DensityMatrix rho = noisy_output_state(b0, chi, u, noise);
    const double p_det = detection_probability(rho);
    const double n = negativity(rho);
    const double gamma_vis =
        std::abs(noise.alpha_q()) * std::sqrt(u.t * u.t + b0 * b0 * u.z * u.z);
    table.rows.push_back({v, gamma_vis, p_det, n});
  }
  return table;
}

}  // namespace qmzi
