#include "wishmom/gpi.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wishmom/special.hpp"

namespace wishmom {

ContractionMatrix::ContractionMatrix(const SymMatrix& candidate) : m(candidate) {
  SymMatrix complement = SymMatrix::identity(candidate.dim());
  for (int i = 0; i < candidate.dim(); ++i)
    for (int j = 0; j < candidate.dim(); ++j)
      complement.at(i, j) -= candidate(i, j);
  try {
    SpdMatrix check(complement);
  } catch (const NotPositiveDefinite&) {
    throw DomainError("ContractionMatrix: I - M is not positive definite");
  }
}

GpiReport hypergeom_bound(double a, double b, double c, const ContractionMatrix& m,
                          double tol, int max_degree) {
  if (a < 0.0 || b < 0.0)
    throw DomainError("hypergeom_bound: a and b must be nonnegative");
  const std::vector<double>& eig = m.m.eig().values;
  const int dim = m.m.dim();
  if (!(c > 0.5 * (dim - 1)))
    throw DomainError("hypergeom_bound: c must exceed (m-1)/2");

  GpiReport r;
  r.lhs = gauss_2f1(-a, -b, c, eig, tol, max_degree).value;

  double ld = 0.0;
  for (double v : eig) ld += std::log1p(-v);
  std::vector<double> scaled(eig.begin(), eig.end());
  for (double& v : scaled) v *= a * b;
  const double f01 = bessel_0f1(c, scaled, tol, max_degree).value;
  r.middle = 1.0 + std::exp((c + a + b) * ld) * (f01 - 1.0);
  r.slack_upper = r.lhs - r.middle;
  r.slack_lower = r.middle - 1.0;
  return r;
}

WishartGpiReport wishart_gpi_bound(const WishartModel& model, const MomentQuery& q,
                                   double tol, int max_degree) {
  if (q.nu1 < 0.0 || q.nu2 < 0.0)
    throw DomainError("wishart_gpi_bound: nu1 and nu2 must be nonnegative");

  MomentValue mv = generalized_moment(model, q, tol, max_degree);
  const MomentFactors& f = mv.factors;
  const double product = f.mgf * f.det_moment_inv * f.minor1 * f.minor2;

  // Bracket factor on the coupling eigenvalues. Orientation is immaterial:
  // the nonzero eigenvalues of P P^T and P^T P coincide, and both |I - .|
  // and 0F1 ignore padded zeros.
  const SymMatrix tilt = q.tilt ? *q.tilt : SymMatrix(model.p());
  CouplingData cp = coupling(model, tilt);

  const double alpha0 = model.alpha + 2.0 * q.nu0;
  double ld = 0.0;
  for (double v : cp.ppt_eigenvalues) ld += std::log1p(-v);
  std::vector<double> scaled = cp.ppt_eigenvalues;
  for (double& v : scaled) v *= q.nu1 * q.nu2;
  const double f01 = bessel_0f1(0.5 * alpha0, scaled, tol, max_degree).value;
  const double middle = 1.0 + std::exp((0.5 * alpha0 + q.nu1 + q.nu2) * ld) * (f01 - 1.0);

  WishartGpiReport out;
  out.chain.lhs = f.f21;
  out.chain.middle = middle;
  out.chain.slack_upper = f.f21 - middle;
  out.chain.slack_lower = middle - 1.0;
  out.expectation = mv.value;
  out.with_bracket = product * middle;
  out.factor_product = product;
  return out;
}

ProbeReport conjecture_probe(double alpha, const SpdMatrix& sigma,
                             std::span<const int> splits, std::span<const double> nus,
                             const McConfig& mc) {
  for (double nu : nus)
    if (nu < 0.0) throw DomainError("conjecture_probe: exponents must be nonnegative");

  ProbeReport r;
  r.estimate = estimate_general_product(alpha, sigma, splits, nus, mc);

  // Closed-form product of marginal minor moments (Lemma-2 form per block).
  double log_prod = 0.0;
  int off = 0;
  for (size_t i = 0; i < splits.size(); ++i) {
    const int pi = splits[i];
    SpdMatrix blk(sym_block(sigma, off, off, pi));
    log_prod += nus[i] * (pi * 0.6931471805599453094 + logdet(blk)) +
                multivariate_log_gamma_ratio(pi, 0.5 * alpha, nus[i]);
    off += pi;
  }
  r.marginal_product = std::exp(log_prod);
  r.gap = r.estimate.mean - r.marginal_product;
  r.z = r.estimate.std_error > 0.0 ? r.gap / r.estimate.std_error
                                   : (r.gap == 0.0 ? 0.0 : std::copysign(
                                          std::numeric_limits<double>::infinity(), r.gap));
  return r;
}

}  // namespace wishmom
