#include <doctest.h>

#include <cmath>

#include "qnlse/bethe.hpp"

using namespace qnlse;

TEST_CASE("single-particle roots sit near n pi / d with radiative width") {
  const double d = 30.0;
  const auto roots = single_particle_roots(d, 4);
  REQUIRE(roots.size() == 4);
  for (int n = 1; n <= 4; ++n) {
    const cplx k = roots[n - 1];
    CHECK(std::abs(k.real() - n * M_PI / d) < 0.3 * M_PI / d);
    CHECK(k.imag() < 0.0);  // leaky box, decaying modes
    CHECK(std::abs(k.imag()) < 0.1 * k.real());
  }
}

TEST_CASE("free pair at vanishing kappa decouples into single-particle roots") {
  const double d = 30.0, kappa = 1e-6;
  const auto singles = single_particle_roots(d, 2);
  const auto root = two_particle_roots(d, kappa, seed_free(d, 1, 2));
  CHECK(root.converged);
  CHECK(root.residual < 1e-10);
  CHECK(root.branch == Branch::free_pair);
  CHECK(std::abs(root.k1 - singles[0]) < 1e-4);
  CHECK(std::abs(root.k2 - singles[1]) < 1e-4);
}

TEST_CASE("found roots satisfy the quantization condition independently") {
  const double d = 30.0, kappa = -0.18;
  const auto spectrum = bound_state_spectrum(d, kappa, 4);
  REQUIRE(spectrum.size() == 4);
  for (const auto& r : spectrum) {
    CHECK(r.converged);
    CHECK(quantization_residual(r.k1, r.k2, d, kappa) < 1e-10);
    CHECK(is_bound_pair(r.k1, r.k2, kappa));
  }
}

TEST_CASE("bound family at kappa d = -5.4 (frozen momenta)") {
  // Branches are spaced ~pi/(2d) in Re k, labelled by family index.
  const double d = 30.0, kappa = -5.4 / d;
  const auto spectrum = bound_state_spectrum(d, kappa, 4);
  REQUIRE(spectrum.size() == 4);
  const double re_k1_expected[4] = {0.0754, 0.1371, 0.1941, 0.2491};
  for (int i = 0; i < 4; ++i) {
    CHECK(spectrum[i].k1.real() ==
          doctest::Approx(re_k1_expected[i]).epsilon(2e-2));
    // Attractive pair: Im split approaches +- kappa/2.
    CHECK(spectrum[i].k1.imag() > 0.02);
    CHECK(spectrum[i].k2.imag() < -0.02);
  }
  // Canonical ordering by Re(k1 + k2).
  for (int i = 1; i < 4; ++i) {
    CHECK(spectrum[i].energy.real() > spectrum[i - 1].energy.real());
  }
}

TEST_CASE("deep binding: energy approaches -kappa^2/2 + kinetic part") {
  const double d = 30.0, kappa = -1.0;
  const auto spectrum = bound_state_spectrum(d, kappa, 1);
  REQUIRE(!spectrum.empty());
  const auto& r = spectrum[0];
  // k1,2 -> K/2 +- i kappa/2 with K ~ pi/d: E ~ K^2/2 - kappa^2/2.
  const double K = (r.k1 + r.k2).real();
  CHECK(r.energy.real() ==
        doctest::Approx(0.5 * K * K - 0.5 * kappa * kappa).epsilon(0.05));
  CHECK(std::abs(r.k1.imag() - 0.5 * std::abs(kappa)) < 0.1 * std::abs(kappa));
}

TEST_CASE("large box, weak attraction: asymptotic seeds are exact") {
  const double d = 200.0, kappa = -0.025;
  for (int n : {3, 4, 5}) {
    const auto root = two_particle_roots(d, kappa, seed_bound(d, kappa, n));
    CHECK(root.converged);
    CHECK(root.residual < 1e-10);
    const cplx expect(n * M_PI / d, 0.5 * std::abs(kappa));
    CHECK(std::abs(root.k1 - expect) < 0.05 * std::abs(expect));
    CHECK(std::abs(root.k2 - std::conj(expect)) < 0.05 * std::abs(expect));
  }
}

TEST_CASE("family energies at kappa = -1/6 (frozen)") {
  const double d = 30.0, kappa = -1.0 / 6.0;
  const auto spectrum = bound_state_spectrum(d, kappa, 3);
  REQUIRE(spectrum.size() == 3);
  CHECK(spectrum[1].energy.real() == doctest::Approx(0.024564).epsilon(2e-2));
  CHECK(spectrum[2].energy.real() == doctest::Approx(0.061498).epsilon(2e-2));
  // Open boundaries: the pair decays, Im(E) < 0.
  CHECK(spectrum[2].energy.imag() < 0.0);
  CHECK(spectrum[2].energy.imag() == doctest::Approx(-0.010753).epsilon(5e-2));
}

TEST_CASE("track_root follows a branch continuously") {
  const double d = 30.0;
  const auto start = two_particle_roots(d, -0.5, seed_bound(d, -0.5, 1));
  const auto moved = track_root(d, -0.5, -0.3, start);
  CHECK(moved.converged);
  CHECK(quantization_residual(moved.k1, moved.k2, d, -0.3) < 1e-10);
  // Weaker attraction, smaller Im split.
  CHECK(moved.k1.imag() < start.k1.imag());
}

TEST_CASE("resonance crossings of the bound family (frozen)") {
  const double d = 30.0;
  const double delta_res = std::pow(M_PI / d, 2);
  const auto crossings = resonance_kappas(d, delta_res, {2, 3}, -12.0 / d, -1.0 / d);
  REQUIRE(crossings.size() == 2);
  CHECK(crossings[0].n == 2);
  CHECK(crossings[0].kappa * d == doctest::Approx(-5.3396).epsilon(1e-3));
  CHECK(crossings[1].n == 3);
  CHECK(crossings[1].kappa * d == doctest::Approx(-9.1609).epsilon(1e-3));
}

TEST_CASE("branch 1 never reaches the resonance energy") {
  const double d = 30.0;
  const double delta_res = std::pow(M_PI / d, 2);
  const auto crossings = resonance_kappas(d, delta_res, {1}, -12.0 / d, -1e-3 / d);
  CHECK(crossings.empty());
}

TEST_CASE("divergent seeds throw with the last iterate in the message") {
  const double d = 30.0;
  ModeRoot bad;
  bad.k1 = cplx(50.0, 40.0);
  bad.k2 = cplx(60.0, -70.0);
  CHECK_THROWS_AS(two_particle_roots(d, -0.2, bad), std::runtime_error);
}
