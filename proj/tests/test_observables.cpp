#include <doctest.h>

#include <cmath>

#include "qnlse/linear.hpp"
#include "qnlse/nlse2.hpp"
#include "qnlse/observables.hpp"

using namespace qnlse;

namespace {

const double kDeltaRes = std::pow(M_PI / 30.0, 2);

EffectiveParams base(double kappa, double a0 = 1e-3) {
  return make_effective(0.5, kappa, 30.0, kDeltaRes, a0);
}

}  // namespace

TEST_CASE("g2 of a factorized coherent state is 1") {
  const Grid g(200, 30.0);
  const auto p = base(0.0, 1e-5);
  const auto lin = analytic_single_photon(p, g);
  const FieldState st = coherent_factorized(lin.theta, g);
  CHECK(g2_zero(st, g) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("g2 scales out the drive amplitude") {
  const Grid g(200, 30.0);
  for (double a0 : {1e-5, 1e-4}) {
    const auto p = base(0.0, a0);
    const auto lin = analytic_single_photon(p, g);
    CHECK(g2_zero(coherent_factorized(lin.theta, g), g) ==
          doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("g2 throws on a dark output") {
  const Grid g(64, 30.0);
  FieldState st;
  st.theta = VecC::Zero(64);
  st.phi = MatC::Zero(64, 64);
  CHECK_THROWS(g2_zero(st, g));
}

TEST_CASE("full pipeline: kappa = 0 reproduces the coherent value") {
  const Grid g(200, 30.0);
  const auto p = base(0.0, 1e-4);
  const auto lin = solve_single_photon(p, g);
  const MatC phi = solve_two_photon_steady(p, g, lin.theta);
  FieldState st;
  st.theta = lin.theta;
  st.phi = phi;
  CHECK(g2_zero(st, g) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("repulsive interactions antibunch, attractive ones can bunch") {
  const Grid g(200, 30.0);
  const auto run = [&](double kd) {
    const auto p = base(kd / 30.0);
    const auto lin = solve_single_photon(p, g);
    FieldState st;
    st.theta = lin.theta;
    st.phi = solve_two_photon_steady(p, g, lin.theta);
    return g2_zero(st, g);
  };
  CHECK(run(3.0) < 0.1);
  CHECK(run(-5.4) > 2.0);
}

TEST_CASE("g2_scan matches the manual pipeline and is worker-invariant") {
  const Grid g(120, 30.0);
  std::vector<double> kappas;
  for (double kd : {1.0, 3.0, 6.0}) kappas.push_back(kd / 30.0);
  const auto s1 = g2_scan(base(0.0), kappas, g, 1);
  const auto s3 = g2_scan(base(0.0), kappas, g, 3);
  REQUIRE(s1.size() == 3);
  REQUIRE(s3.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(s1[i].error.empty());
    CHECK(s1[i].kappa_d == doctest::Approx(kappas[i] * 30.0));
    CHECK(s1[i].g2 == s3[i].g2);  // bit-identical regardless of workers
    CHECK(s1[i].T == doctest::Approx(1.0).epsilon(1e-2));
  }
  // Repulsive g2 falls monotonically with kappa d.
  CHECK(s1[0].g2 > s1[1].g2);
  CHECK(s1[1].g2 > s1[2].g2);
}

TEST_CASE("bunching_peaks finds and refines interior maxima") {
  // Synthetic parabola g2 = 5 - (kd + 4.03)^2 sampled on a 0.1 lattice.
  std::vector<ScanPoint> scan;
  for (int i = 0; i <= 60; ++i) {
    const double kd = -7.0 + 0.1 * i;
    ScanPoint pt;
    pt.kappa_d = kd;
    pt.g2 = 5.0 - std::pow(kd + 4.03, 2);
    scan.push_back(pt);
  }
  const auto peaks = bunching_peaks(scan);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].kappa_d == doctest::Approx(-4.03).epsilon(1e-6));
  CHECK(peaks[0].g2 == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("bunching_peaks ignores sub-coherent maxima and failed points") {
  std::vector<ScanPoint> scan;
  for (int i = 0; i <= 40; ++i) {
    const double kd = -4.0 + 0.1 * i;
    ScanPoint pt;
    pt.kappa_d = kd;
    pt.g2 = 0.9 - kd * kd;  // peak below 1
    if (i == 7) pt.error = "synthetic failure";
    scan.push_back(pt);
  }
  CHECK(bunching_peaks(scan).empty());
}
