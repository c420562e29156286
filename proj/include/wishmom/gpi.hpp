#pragma once

#include <span>

#include "wishmom/hypergeom.hpp"
#include "wishmom/matrix.hpp"
#include "wishmom/mc.hpp"
#include "wishmom/wishart.hpp"

namespace wishmom {

/// Matrix in the set D_m: both M and I - M positive definite.
struct ContractionMatrix {
  SpdMatrix m;
  explicit ContractionMatrix(const SymMatrix& candidate);
};

/// Both sides of the chain 2F1(-a,-b;c;M) >= middle >= 1 with
/// middle = 1 + |I-M|^{c+a+b} (0F1(c; ab M) - 1).
struct GpiReport {
  double lhs = 1.0;
  double middle = 1.0;
  double slack_upper = 0.0;  // lhs - middle
  double slack_lower = 0.0;  // middle - 1
};

GpiReport hypergeom_bound(double a, double b, double c, const ContractionMatrix& m,
                          double tol = 1e-12, int max_degree = 200);

/// The quantitative two-minor bound at the moment level: the generalized
/// moment, the four-factor product times the bracket, and the bare product.
struct WishartGpiReport {
  GpiReport chain;         // on the 2F1-level quantities
  double expectation = 0;  // E{etr(TX)|X|^nu0 |X11|^nu1 |X22|^nu2}
  double with_bracket = 0; // factor product * middle
  double factor_product = 0;
};

WishartGpiReport wishart_gpi_bound(const WishartModel& model, const MomentQuery& q,
                                   double tol = 1e-12, int max_degree = 200);

/// Monte Carlo probe of the d-minor product inequality: estimate of
/// E(prod |X_ii|^{nu_i}) against the closed-form product of marginal minor
/// moments. Reports evidence only; a strongly negative z flags a candidate
/// counterexample for human review.
struct ProbeReport {
  McEstimate estimate;
  double marginal_product = 0.0;
  double gap = 0.0;  // estimate.mean - marginal_product
  double z = 0.0;    // gap / std_error
};

ProbeReport conjecture_probe(double alpha, const SpdMatrix& sigma,
                             std::span<const int> splits, std::span<const double> nus,
                             const McConfig& mc);

}  // namespace wishmom
