#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support/scalar_series.hpp"
#include "support/test_util.hpp"
#include "wishmom/gpi.hpp"

using namespace wishmom;
using testutil::rel_err;

TEST_CASE("contraction matrix membership in D_m") {
  CHECK_THROWS_AS(ContractionMatrix{SymMatrix(2)}, DomainError);  // zero: not PD
  SymMatrix over = SymMatrix::identity(2);
  over.at(0, 0) = 1.2;
  CHECK_THROWS_AS(ContractionMatrix{over}, DomainError);  // I - M not PD
  for (double eps : {0.05, 0.5, 0.95}) {
    SymMatrix eye = SymMatrix::identity(3);
    for (int i = 0; i < 3; ++i) eye.at(i, i) = eps;
    CHECK_NOTHROW(ContractionMatrix{eye});
  }
}

TEST_CASE("hypergeom_bound degenerate and scalar cases") {
  std::mt19937_64 rng(151);
  ContractionMatrix m(testutil::random_contraction(2, rng, 0.1, 0.7));
  GpiReport r0 = hypergeom_bound(0.0, 1.3, 2.0, m);
  CHECK(r0.lhs == doctest::Approx(1.0));
  CHECK(r0.middle == doctest::Approx(1.0));
  CHECK(std::abs(r0.slack_upper) < 1e-14);
  CHECK(std::abs(r0.slack_lower) < 1e-14);

  // Scalar oracle: a=b=1, c=2.5, M=[0.25].
  ContractionMatrix s(SymMatrix(1, {0.25}));
  GpiReport r = hypergeom_bound(1.0, 1.0, 2.5, s);
  CHECK(rel_err(r.lhs, 1.1) < 1e-13);
  const double f01 = testutil::scalar_pfq({}, std::vector<double>{2.5}, 0.25);
  const double middle = 1.0 + std::pow(0.75, 4.5) * (f01 - 1.0);
  CHECK(rel_err(r.middle, middle) < 1e-12);
  CHECK(r.slack_upper >= 0.0);
  CHECK(r.slack_lower >= 0.0);
}

TEST_CASE("the chain holds across a fuzzed family") {
  // The one-variable cases probe spectra near the boundary of D_m, where the
  // series is cheap even at high truncation degree; higher dimensions use
  // moderate spectra so the run stays fast.
  std::mt19937_64 rng(157);
  std::uniform_real_distribution<double> uab(0.0, 5.0);
  std::uniform_real_distribution<double> uc(0.05, 10.0);
  std::uniform_int_distribution<int> ud(1, 3);
  const double caps[4] = {0.0, 0.9, 0.6, 0.4};
  const int degrees[4] = {0, 800, 400, 300};
  for (int rep = 0; rep < 200; ++rep) {
    const int dim = ud(rng);
    ContractionMatrix m(testutil::random_contraction(dim, rng, 0.02, caps[dim]));
    const double a = uab(rng), b = uab(rng);
    const double c = 0.5 * (dim - 1) + uc(rng);
    GpiReport r = hypergeom_bound(a, b, c, m, 1e-12, degrees[dim]);
    CHECK(r.slack_upper >= -1e-12 * std::abs(r.lhs));
    CHECK(r.slack_lower >= -1e-12);
  }
}

TEST_CASE("middle collapses to 1 as a -> 0") {
  std::mt19937_64 rng(163);
  ContractionMatrix m(testutil::random_contraction(2, rng, 0.2, 0.6));
  double prev_slack = 1e9;
  for (double a : {1.0, 0.1, 0.01, 0.001}) {
    GpiReport r = hypergeom_bound(a, 1.5, 2.0, m);
    CHECK(r.slack_lower < prev_slack);
    prev_slack = r.slack_lower;
  }
  GpiReport r = hypergeom_bound(0.0, 1.5, 2.0, m);
  CHECK(r.slack_lower == 0.0);
}

TEST_CASE("wishart_gpi_bound: independence collapses the chain") {
  SpdMatrix bd(3, {1.5, 0.2, 0, 0.2, 2.0, 0, 0, 0, 1.0});
  WishartModel m(4.0, bd, 2);
  MomentQuery q;
  q.nu1 = 1.2;
  q.nu2 = 0.7;
  WishartGpiReport r = wishart_gpi_bound(m, q);
  CHECK(rel_err(r.expectation, r.with_bracket) < 1e-13);
  CHECK(rel_err(r.with_bracket, r.factor_product) < 1e-13);
}

TEST_CASE("wishart_gpi_bound bivariate example: lhs/product = 1.1") {
  WishartModel m(5.0, SpdMatrix(2, {1, 0.5, 0.5, 1}), 1);
  MomentQuery q;
  q.nu1 = 1.0;
  q.nu2 = 1.0;
  WishartGpiReport r = wishart_gpi_bound(m, q);
  CHECK(rel_err(r.expectation / r.factor_product, 1.1) < 1e-12);
  CHECK(r.chain.lhs >= r.chain.middle - 1e-12);
  CHECK(r.chain.middle >= 1.0 - 1e-12);
  CHECK(r.expectation >= r.with_bracket * (1 - 1e-12));
  CHECK(r.with_bracket >= r.factor_product * (1 - 1e-12));
}

TEST_CASE("wishart_gpi_bound fuzz never violates the chain") {
  std::mt19937_64 rng(167);
  std::uniform_real_distribution<double> un(0.0, 2.0);
  std::uniform_real_distribution<double> un0(-0.4, 0.8);
  for (int rep = 0; rep < 60; ++rep) {
    // Keep the cross-block coupling away from 1 so the series stays in the
    // fast regime; stronger coupling hits the preemptive convergence guard.
    SpdMatrix sigma = testutil::random_spd(4, rng, 0.4, 2.0);
    while (true) {
      WishartModel probe(5.5, sigma, 2);
      CouplingData cd = coupling(probe, SymMatrix(4));
      if (cd.ppt_eigenvalues.back() < 0.6) break;
      sigma = testutil::random_spd(4, rng, 0.4, 2.0);
    }
    WishartModel m(5.5, sigma, rep % 2 ? 1 : 2);
    MomentQuery q;
    q.nu0 = un0(rng);
    q.nu1 = un(rng);
    q.nu2 = un(rng);
    if (rep % 3 == 0) {
      // mild symmetric tilt keeping Sigma^{-1} - 2T safely PD
      SymMatrix t = testutil::random_sym(4, rng, 0.05);
      q.tilt = t;
    }
    WishartGpiReport r = wishart_gpi_bound(m, q);
    CHECK(r.expectation >= r.with_bracket * (1 - 1e-11));
    CHECK(r.with_bracket >= r.factor_product * (1 - 1e-11));
  }
}

TEST_CASE("conjecture_probe: d = 1 agrees with the closed form") {
  std::mt19937_64 rng(173);
  SpdMatrix sigma = testutil::random_spd(2, rng, 0.5, 1.5);
  McConfig cfg;
  cfg.samples = 100000;
  cfg.seed = 7;
  std::vector<int> splits = {2};
  std::vector<double> nus = {1.3};
  ProbeReport r = conjecture_probe(4.0, sigma, splits, nus, cfg);
  CHECK(std::abs(r.z) <= 4.0);
}

TEST_CASE("conjecture_probe: block-diagonal models have zero gap") {
  SpdMatrix sigma(3, {1.2, 0, 0, 0, 0.8, 0, 0, 0, 1.5});
  McConfig cfg;
  cfg.samples = 100000;
  cfg.seed = 11;
  std::vector<int> splits = {1, 1, 1};
  std::vector<double> nus = {1.0, 0.5, 1.5};
  ProbeReport r = conjecture_probe(4.0, sigma, splits, nus, cfg);
  CHECK(std::abs(r.z) <= 4.0);
}

TEST_CASE("conjecture_probe: equicorrelated trivariate gap is positive") {
  const double rho = 0.5;
  SpdMatrix sigma(3, {1, rho, rho, rho, 1, rho, rho, rho, 1});
  McConfig cfg;
  cfg.samples = 200000;
  cfg.seed = 13;
  std::vector<int> splits = {1, 1, 1};
  std::vector<double> nus = {1.0, 1.0, 1.0};
  ProbeReport r = conjecture_probe(4.0, sigma, splits, nus, cfg);
  CHECK(r.gap > 0.0);
  CHECK(r.z > 4.0);  // the dependence effect is far beyond noise here
}

TEST_CASE("probe standard error shrinks like sqrt(2) when N doubles") {
  std::mt19937_64 rng(179);
  SpdMatrix sigma = testutil::random_spd(3, rng, 0.5, 1.5);
  std::vector<int> splits = {1, 2};
  std::vector<double> nus = {1.0, 0.8};
  McConfig a;
  a.samples = 80000;
  a.seed = 3;
  McConfig b = a;
  b.samples = 160000;
  ProbeReport ra = conjecture_probe(4.5, sigma, splits, nus, a);
  ProbeReport rb = conjecture_probe(4.5, sigma, splits, nus, b);
  const double ratio = ra.estimate.std_error / rb.estimate.std_error;
  CHECK(ratio > std::sqrt(2.0) * 0.9);
  CHECK(ratio < std::sqrt(2.0) * 1.1);
}
