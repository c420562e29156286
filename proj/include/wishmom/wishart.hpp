#pragma once

#include <optional>
#include <vector>

#include "wishmom/hypergeom.hpp"
#include "wishmom/matrix.hpp"

namespace wishmom {

/// Wishart model W_p(alpha, Sigma) with a two-block split of the index set.
/// Requires alpha > p - 1 so the density exists.
struct WishartModel {
  double alpha;
  SpdMatrix sigma;
  BlockSplit split;

  WishartModel(double alpha_, SpdMatrix sigma_, int p1);
  int p() const { return sigma.dim(); }
};

/// Coupling data of a (possibly tilted) model: A = Sigma^{-1}/2 - T, the
/// cross-block coupling P = A11^{-1/2} A12 A22^{-1/2}, and the eigenvalues of
/// P P^T, which lie in [0, 1) whenever A is positive definite.
struct CouplingData {
  SpdMatrix a_mat;
  std::vector<double> p_mat;  // p1 x p2, row-major
  std::vector<double> ppt_eigenvalues;
};

/// Query for the generalized moment E{etr(TX) |X|^nu0 |X11|^nu1 |X22|^nu2}.
/// A missing tilt means T = 0.
struct MomentQuery {
  double nu0 = 0.0;
  double nu1 = 0.0;
  double nu2 = 0.0;
  std::optional<SymMatrix> tilt;
};

/// E{etr(T X)} = |I - 2 T Sigma|^{-alpha/2}; requires Sigma^{-1} - 2T PD.
double mgf(const WishartModel& model, const SymMatrix& t);

CouplingData coupling(const WishartModel& model, const SymMatrix& t);

/// E(|X_ii|^nu) = |2 Sigma_ii|^nu Gamma_{p_i}(alpha/2 + nu) / Gamma_{p_i}(alpha/2)
/// for block i in {1, 2}; requires nu > -alpha/2 + (p_i - 1)/2 (strict).
double minor_moment(const WishartModel& model, int block, double nu);

/// Same with the whole matrix: |2 Sigma|^nu Gamma_p(alpha/2+nu)/Gamma_p(alpha/2).
double det_moment(const WishartModel& model, double nu);

/// Factor breakdown of the generalized moment, in linear scale.
struct MomentFactors {
  double mgf = 1.0;
  double det_moment_inv = 1.0;
  double minor1 = 1.0;
  double minor2 = 1.0;
  double f21 = 1.0;
};

struct MomentValue {
  double value = 0.0;
  HypergeomResult diagnostics;
  MomentFactors factors;
};

/// E(|X11|^nu1 |X22|^nu2) = E|X11|^nu1 E|X22|^nu2 2F1(-nu1,-nu2; alpha/2; PP^T).
/// Models with p1 > p2 are handled by an internal block swap.
MomentValue product_moment(const WishartModel& model, double nu1, double nu2,
                           double tol = 1e-12, int max_degree = 200,
                           TwoF1Route route = TwoF1Route::automatic);

/// E{etr(TX) |X|^nu0 |X11|^nu1 |X22|^nu2} assembled from the tilted model
/// W_p(alpha + 2 nu0, (Sigma^{-1} - 2T)^{-1}) and the coupling 2F1 factor.
MomentValue generalized_moment(const WishartModel& model, const MomentQuery& q,
                               double tol = 1e-12, int max_degree = 200,
                               TwoF1Route route = TwoF1Route::automatic);

}  // namespace wishmom
