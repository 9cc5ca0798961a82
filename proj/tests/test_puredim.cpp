#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qmzi/complex_matrix.hpp"
#include "qmzi/density_matrix.hpp"
#include "qmzi/interferometer.hpp"
#include "qmzi/measures.hpp"
#include "qmzi/puredim.hpp"
#include "qmzi/rng.hpp"

using namespace qmzi;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("schmidt weights are validated") {
  CHECK_THROWS_AS(SchmidtState({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SchmidtState({0.6, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(SchmidtState({1.2, -0.2}), std::invalid_argument);
  CHECK_NOTHROW(SchmidtState({0.5, 0.5}));
  CHECK(SchmidtState({0.2, 0.5, 0.3}).argmax() == 1);
}

TEST_CASE("pure amplitudes are validated") {
  CHECK_THROWS_AS(PureQubitPair(0.9, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(PureQubitPair(-0.6, 0.8), std::invalid_argument);
  CHECK_NOTHROW(PureQubitPair(0.6, 0.8));
}

TEST_CASE("pure output state matches the gate-level circuit") {
  const ComplexMatrix sz = pauli_z();
  GaussianRng rng(71);
  for (int it = 0; it < 20; ++it) {
    const double a = std::sqrt(rng.uniform());
    const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
    const double chi = 2.0 * kPi * rng.uniform();
    const DensityMatrix out = output_state(pure_state({cplx(a, 0.0), cplx(b, 0.0)}, {2}), chi, sz);
    const std::vector<cplx> v = pure_output_state(PureQubitPair(a, b), chi);

    cplx overlap(0.0, 0.0);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) overlap += std::conj(v[i]) * out.matrix()(i, j) * v[j];
    CHECK_THAT(overlap.real(), Catch::Matchers::WithinAbs(1.0, 1e-12));

    const double p_closed = 0.5 * (1.0 + (a * a - b * b) * std::cos(chi));
    CHECK_THAT(detection_probability(out), Catch::Matchers::WithinAbs(p_closed, 1e-12));
  }
}

TEST_CASE("pure output at zero phase is a two-term superposition") {
  const PureQubitPair s(0.6, 0.8);
  const std::vector<cplx> v = pure_output_state(s, 0.0);
  CHECK(v[0] == cplx(0.6, 0.0));
  CHECK(v[1] == cplx(0.0, 0.0));
  CHECK(v[2] == cplx(0.0, 0.0));
  CHECK(v[3] == cplx(-0.8, 0.0));
}

TEST_CASE("complementarity of the pure family is exact") {
  for (int i = 0; i <= 100; ++i) {
    const double a = std::sqrt(static_cast<double>(i) / 100.0);
    const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
    const PureComplementarity c = pure_complementarity(PureQubitPair(a, b));
    CHECK_THAT(c.negativity * c.negativity + c.visibility * c.visibility,
               Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  const PureComplementarity even = pure_complementarity(PureQubitPair(std::sqrt(0.5), std::sqrt(0.5)));
  CHECK_THAT(even.entropy, Catch::Matchers::WithinAbs(1.0, 1e-12));

  const PureComplementarity tilted = pure_complementarity(PureQubitPair(std::sqrt(0.75), 0.5));
  CHECK_THAT(tilted.visibility, Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(tilted.entropy, Catch::Matchers::WithinAbs(0.8112781244591328, 1e-12));
}

TEST_CASE("schmidt visibility and entropy of reference states") {
  CHECK(schmidt_visibility(SchmidtState({0.25, 0.25, 0.25, 0.25})) == 0.0);
  const SchmidtState peaked({0.7, 0.1, 0.1, 0.1});
  CHECK_THAT(schmidt_visibility(peaked), Catch::Matchers::WithinAbs(0.9, 1e-12));
  CHECK_THAT(schmidt_entropy(peaked), Catch::Matchers::WithinAbs(1.3567796494470397, 1e-15));
  CHECK_THAT(schmidt_entropy(SchmidtState({0.5, 0.5})), Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("entropy-visibility exchange has the expected slope") {
  const SchmidtState s({0.5, 0.3, 0.2});
  const auto [de, dg] = entropy_visibility_tradeoff(s, 2, 1e-7);
  CHECK(dg > 0.0);
  CHECK(de < 0.0);
  CHECK_THAT(de / dg, Catch::Matchers::WithinAbs(-std::log2(0.5 / 0.2) / 2.0, 1e-5));

  CHECK_THROWS_AS(entropy_visibility_tradeoff(s, 0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(entropy_visibility_tradeoff(s, 5, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(entropy_visibility_tradeoff(s, 2, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(entropy_visibility_tradeoff(s, 2, 0.0), std::invalid_argument);
}

TEST_CASE("haar draws are unitary and reproducible") {
  GaussianRng rng(73);
  for (std::size_t n : {2, 3, 4, 5}) {
    const ComplexMatrix u = haar_unitary(n, rng);
    CHECK(max_abs_diff(dagger(u) * u, ComplexMatrix::identity(n)) < 1e-12);
  }
  GaussianRng r1(99), r2(99);
  CHECK(max_abs_diff(haar_unitary(3, r1), haar_unitary(3, r2)) == 0.0);
}

TEST_CASE("detection through random mode mixers stays below the largest weight") {
  const SchmidtState s({0.6, 0.4});
  const HaarProbe probe = haar_probe(s, 2000, 4242);
  CHECK(probe.max <= 0.6 + 1e-12);
  CHECK(std::abs(probe.mean - 0.5) <= 5.0 * probe.std_error);

  const ComplexMatrix best = max_detection_unitary(s);
  CHECK_THAT(schmidt_detection_probability(s, best), Catch::Matchers::WithinAbs(0.6, 1e-15));

  const SchmidtState shifted({0.1, 0.2, 0.7});
  const ComplexMatrix router = max_detection_unitary(shifted);
  CHECK(is_unitary(router, 1e-15));
  CHECK_THAT(schmidt_detection_probability(shifted, router),
             Catch::Matchers::WithinAbs(0.7, 1e-15));

  CHECK_THROWS_AS(schmidt_detection_probability(s, ComplexMatrix::identity(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(haar_probe(s, 10, 1), std::invalid_argument);
}

TEST_CASE("pure family marginal entropy equals the visibility formula") {
  GaussianRng rng(79);
  for (int it = 0; it < 10; ++it) {
    const double a = std::sqrt(rng.uniform());
    const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
    const DensityMatrix out =
        output_state(pure_state({cplx(a, 0.0), cplx(b, 0.0)}, {2}), 0.7, pauli_z());
    CHECK_THAT(von_neumann_entropy(partial_trace(out, 1)),
               Catch::Matchers::WithinAbs(entropy_from_visibility(std::abs(a * a - b * b)), 1e-11));
  }
}
