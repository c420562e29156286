#include "wishmom/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wishmom {

namespace {

bool is_nonpositive_integer(double v) {
  const double r = std::round(v);
  return r <= 0.0 && std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v));
}

void validate_lower(std::span<const double> lower, int m) {
  for (double b : lower)
    for (int i = 0; i < m; ++i)
      if (is_nonpositive_integer(b - 0.5 * i))
        throw DomainError("hypergeom: lower parameter " + std::to_string(b) +
                          " puts (b)_kappa on a pole for m = " + std::to_string(m));
}

HypergeomResult run_series(const HypergeomParams& params,
                           std::span<const double> eig) {
  const int m = static_cast<int>(eig.size());
  if (m < 1) throw DomainError("hypergeom: empty matrix");
  if (params.tolerance <= 0.0) throw DomainError("hypergeom: tolerance must be positive");
  if (params.max_degree < 1) throw DomainError("hypergeom: max_degree must be positive");
  validate_lower(params.lower, m);

  const size_t np = params.upper.size(), nq = params.lower.size();
  double nrm = 0.0;
  for (double v : eig) nrm = std::max(nrm, std::abs(v));
  bool terminating = false;
  for (double a : params.upper)
    if (is_nonpositive_integer(a)) terminating = true;

  if (np == nq + 1) {
    if (nrm >= 1.0 && !terminating)
      throw DomainError("hypergeom: spectral norm " + std::to_string(nrm) +
                        " >= 1, series diverges");
    if (nrm > 0.999 && !terminating)
      throw NotConverged("hypergeom: spectral norm " + std::to_string(nrm) +
                         " too close to 1");
  } else if (np > nq + 1) {
    if (!terminating)
      throw DomainError("hypergeom: p > q+1 series diverges for non-terminating parameters");
  }

  detail::SeriesSum s = detail::matrix_series(params.upper, params.lower, eig,
                                              params.tolerance, params.max_degree,
                                              params.parallel);
  if (!s.converged && !s.terminated)
    throw NotConverged("hypergeom: degree cap " + std::to_string(params.max_degree) +
                       " reached with last layer " + std::to_string(s.last_layer_abs));
  HypergeomResult r;
  r.value = s.value;
  r.degree_reached = s.degree;
  r.last_layer_abs = s.last_layer_abs;
  r.terminated_exactly = s.terminated;
  return r;
}

}  // namespace

HypergeomResult hypergeom_matrix(const HypergeomParams& params,
                                 std::span<const double> eigenvalues) {
  return run_series(params, eigenvalues);
}

HypergeomResult hypergeom_matrix(const HypergeomParams& params, const SymMatrix& m) {
  EigenSystem es = sym_eigen(m);
  return run_series(params, es.values);
}

HypergeomResult gauss_2f1(double a, double b, double c,
                          std::span<const double> eigenvalues, double tol,
                          int max_degree, TwoF1Route route) {
  const int m = static_cast<int>(eigenvalues.size());
  if (m < 1) throw DomainError("gauss_2f1: empty matrix");
  if (!(c > 0.5 * (m - 1)))
    throw DomainError("gauss_2f1: lower parameter c = " + std::to_string(c) +
                      " must exceed (m-1)/2 = " + std::to_string(0.5 * (m - 1)));

  const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  bool use_euler = route == TwoF1Route::euler;
  if (route == TwoF1Route::automatic)
    // Non-terminating signed series mix signs for non-integer negative
    // parameters; the transformed series has parameters c-a, c-b and all
    // positive terms for PSD arguments, so convergence is monotone.
    use_euler = !terminating && (c - a > 0.0) && (c - b > 0.0);

  HypergeomParams p;
  p.tolerance = tol;
  p.max_degree = max_degree;
  p.lower = {c};
  if (!use_euler) {
    p.upper = {a, b};
    return hypergeom_matrix(p, eigenvalues);
  }

  p.upper = {c - a, c - b};
  HypergeomResult r = hypergeom_matrix(p, eigenvalues);
  double ld = 0.0;
  for (double v : eigenvalues) {
    if (v >= 1.0)
      throw DomainError("gauss_2f1: spectral norm >= 1, series diverges");
    ld += std::log1p(-v);
  }
  const double factor = std::exp((c - a - b) * ld);
  r.value *= factor;
  r.last_layer_abs *= factor;
  r.terminated_exactly = false;
  return r;
}

HypergeomResult gauss_2f1(double a, double b, double c, const SymMatrix& m,
                          double tol, int max_degree, TwoF1Route route) {
  EigenSystem es = sym_eigen(m);
  return gauss_2f1(a, b, c, es.values, tol, max_degree, route);
}

HypergeomResult bessel_0f1(double c, std::span<const double> eigenvalues,
                           double tol, int max_degree) {
  HypergeomParams p;
  p.lower = {c};
  p.tolerance = tol;
  p.max_degree = max_degree;
  return hypergeom_matrix(p, eigenvalues);
}

}  // namespace wishmom
