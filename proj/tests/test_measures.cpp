#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qmzi/channels.hpp"
#include "qmzi/char_poly.hpp"
#include "qmzi/complex_matrix.hpp"
#include "qmzi/density_matrix.hpp"
#include "qmzi/interferometer.hpp"
#include "qmzi/measures.hpp"
#include "qmzi/rng.hpp"
#include "qmzi/spectrum.hpp"

using namespace qmzi;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("negativity of reference states") {
  const double s = 1.0 / std::sqrt(2.0);
  const DensityMatrix bell = pure_state({cplx(s, 0.0), 0.0, 0.0, cplx(s, 0.0)}, {2, 2});
  CHECK_THAT(negativity(bell), Catch::Matchers::WithinAbs(1.0, 1e-12));

  const DensityMatrix product(
      kron(qubit_state(0.0, 0.0, 0.3).matrix(), qubit_state(0.2, 0.0, 0.0).matrix()), {2, 2});
  CHECK(negativity(product) == 0.0);
}

TEST_CASE("root law on the noise-free t = 0 slice") {
  CHECK_THAT(negativity_t0_closed(0.7, 0.35),
             Catch::Matchers::WithinAbs(0.6062177826491071, 1e-15));
  CHECK_THAT(negativity_t0_closed(0.7, 0.0), Catch::Matchers::WithinAbs(0.7, 1e-15));
  CHECK_THAT(negativity_t0_closed(0.7, 0.7), Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS(negativity_t0_closed(0.7, 0.8), std::domain_error);

  GaussianRng rng(53);
  for (int it = 0; it < 25; ++it) {
    const double b0 = rng.uniform();
    const double z = 2.0 * rng.uniform() - 1.0;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = 2.0 * kPi * rng.uniform();
    const UnitaryParams up{0.0, r * std::cos(th), r * std::sin(th), z};
    const double numeric =
        negativity(noisy_output_state(b0, 2.0 * kPi * rng.uniform(), up, NoiseParams{0.0, 0.0}));
    CHECK_THAT(numeric,
               Catch::Matchers::WithinAbs(negativity_t0_closed(b0, b0 * std::abs(z)), 1e-9));
  }
}

TEST_CASE("noise-free t = 0 transposed spectrum has the split form") {
  const double b0 = 0.8, z = 0.6;
  const double sperp = std::sqrt(1.0 - z * z);
  const UnitaryParams up{0.0, 0.0, sperp, z};
  const DensityMatrix rho = noisy_output_state(b0, 0.4, up, NoiseParams{0.0, 0.0});
  const Spectrum ev = hermitian_eigenvalues(partial_transpose(rho, 1));
  std::vector<double> want = {-0.5 * b0 * sperp, 0.5 * (1.0 - b0 * z), 0.5 * b0 * sperp,
                              0.5 * (1.0 + b0 * z)};
  std::sort(want.begin(), want.end());
  for (std::size_t i = 0; i < 4; ++i)
    CHECK_THAT(ev[i], Catch::Matchers::WithinAbs(want[i], 1e-12));
}

TEST_CASE("noisy transposed spectrum matches its closed form") {
  GaussianRng rng(59);
  for (int it = 0; it < 50; ++it) {
    const double b0 = rng.uniform();
    const double z = 2.0 * rng.uniform() - 1.0;
    const double y = std::sqrt(std::max(0.0, 1.0 - z * z));
    const NoiseParams noise{0.48 * rng.uniform(), 0.48 * rng.uniform()};
    const DensityMatrix rho =
        noisy_output_state(b0, 2.0 * kPi * rng.uniform(), UnitaryParams{0.0, 0.0, y, z}, noise);
    const Spectrum ev = hermitian_eigenvalues(partial_transpose(rho, 1));
    const auto closed = pt_spectrum_tx0(b0, std::abs(noise.alpha_q()) * b0 * std::abs(z), noise);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK_THAT(ev[i], Catch::Matchers::WithinAbs(closed[i], 1e-9));
  }
}

TEST_CASE("closed noisy negativity reproduces the reference point") {
  CHECK_THAT(negativity_noisy_closed(0.7, 0.3, NoiseParams{0.1, 0.0}),
             Catch::Matchers::WithinAbs(0.47, 1e-12));
  CHECK_THROWS_AS(negativity_noisy_closed(0.7, 0.75, NoiseParams{0.1, 0.0}), std::domain_error);
  CHECK_THROWS_AS(negativity_noisy_closed(0.7, 0.1, NoiseParams{0.0, 0.5}), std::domain_error);
}

TEST_CASE("separability window in closed form") {
  const SeparabilityBoundary s = separability_boundary(0.7, 0.0);
  CHECK_THAT(s.p_minus, Catch::Matchers::WithinAbs(7.0 / 17.0, 1e-15));
  CHECK_THAT(s.p_plus, Catch::Matchers::WithinAbs(10.0 / 17.0, 1e-15));
  CHECK_THROWS_AS(separability_boundary(1.0, 0.5), std::domain_error);

  // The window endpoints carry zero entanglement and separate the regions.
  for (double g : {0.0, 0.2, 0.4}) {
    const SeparabilityBoundary b = separability_boundary(0.7, g);
    CHECK(b.p_minus > 0.0);
    CHECK(b.p_plus < 1.0);
    CHECK(b.p_minus < b.p_plus);
    CHECK_THAT(negativity_noisy_closed(0.7, g, NoiseParams{b.p_minus, 0.0}),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(negativity_noisy_closed(0.7, g, NoiseParams{b.p_plus, 0.0}),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK(negativity_noisy_closed(0.7, g, NoiseParams{b.p_minus - 1e-6, 0.0}) > 0.0);
    CHECK(negativity_noisy_closed(0.7, g, NoiseParams{b.p_plus + 1e-6, 0.0}) > 0.0);
  }
}

TEST_CASE("quartic form annihilates the noise-free transposed spectrum") {
  GaussianRng rng(61);
  for (int it = 0; it < 20; ++it) {
    const double b0 = rng.uniform();
    double raw[4] = {rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double n =
        std::sqrt(raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2] + raw[3] * raw[3]);
    if (n < 1e-6) continue;
    const UnitaryParams up{raw[0] / n, raw[1] / n, raw[2] / n, raw[3] / n};
    const DensityMatrix rho =
        noisy_output_state(b0, 2.0 * kPi * rng.uniform(), up, NoiseParams{0.0, 0.0});
    const FringeFit f = analytic_visibility_phase(up.t, up.z, b0);
    const QuarticForm q = quartic_form(b0, f.visibility, f.phase);
    CHECK_THAT(q.alpha, Catch::Matchers::WithinAbs((1.0 - b0 * b0) / 4.0, 1e-15));
    for (double l : hermitian_eigenvalues(partial_transpose(rho, 1)))
      CHECK_THAT(quartic_eval(q, l), Catch::Matchers::WithinAbs(0.0, 1e-10));
    CHECK(q.delta >= b0 * b0 - 1e-12);
    CHECK(q.delta <= 1.0 + 1e-12);
  }
}

TEST_CASE("entanglement decreases along the visibility axis") {
  const NoiseParams noise{0.05, 0.1};
  const double gmax = std::abs(noise.alpha_q()) * 0.8;
  std::vector<double> grid(21);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = gmax * (1.0 - 1e-9) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  const auto rows = monotonicity_check(0.8, noise, grid);
  REQUIRE(rows.size() == grid.size());
  for (const auto& row : rows)
    if (row[1] > 1e-6) CHECK(row[2] <= 1e-9);

  CHECK_THROWS_AS(monotonicity_check(0.8, noise, {0.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(monotonicity_check(0.8, noise, {0.0, 0.1, 0.1, 0.2, 0.3}),
                  std::invalid_argument);
}

TEST_CASE("entropies of reference spectra") {
  const DensityMatrix mixed(0.25 * ComplexMatrix::identity(4), {2, 2});
  CHECK_THAT(von_neumann_entropy(mixed), Catch::Matchers::WithinAbs(2.0, 1e-12));

  const DensityMatrix pure = qubit_state(0.0, 0.0, 1.0);
  CHECK_THAT(von_neumann_entropy(pure), Catch::Matchers::WithinAbs(0.0, 1e-12));

  CHECK_THAT(entropy_from_visibility(0.0), Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(entropy_from_visibility(1.0), Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK_THAT(entropy_from_visibility(0.5),
             Catch::Matchers::WithinAbs(0.8112781244591328, 1e-15));
  CHECK_THAT(entropy_from_visibility(0.6),
             Catch::Matchers::WithinAbs(0.7219280948873623, 1e-15));
  CHECK_THROWS_AS(entropy_from_visibility(1.5), std::invalid_argument);
}

TEST_CASE("closed coefficients match the trace route under noise") {
  GaussianRng rng(67);
  for (int it = 0; it < 25; ++it) {
    const double b0 = rng.uniform();
    const double z = 2.0 * rng.uniform() - 1.0;
    const double y = std::sqrt(std::max(0.0, 1.0 - z * z));
    const NoiseParams noise{rng.uniform(), rng.uniform()};
    const DensityMatrix rho =
        noisy_output_state(b0, 2.0 * kPi * rng.uniform(), UnitaryParams{0.0, 0.0, y, z}, noise);
    const auto traced = char_poly_coeffs_from_traces(partial_transpose(rho, 1));
    const auto closed = char_poly_tx0_closed(b0, z, noise);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK_THAT(traced[i], Catch::Matchers::WithinAbs(closed[i], 1e-10));
  }
}

TEST_CASE("entanglement-visibility pairs trace the closed conic") {
  const NoiseParams noise{0.1, 0.05};
  for (double frac : {0.05, 0.3, 0.6, 0.9}) {
    const double g = frac * std::abs(noise.alpha_q()) * 0.7;
    if (negativity_noisy_closed(0.7, g, noise) <= 0.0) continue;
    CHECK_THAT(ellipse_residual(0.7, g, noise), Catch::Matchers::WithinAbs(0.0, 1e-10));
  }
}
