#pragma once

#include <span>
#include <vector>

#include "wishmom/matrix.hpp"
#include "wishmom/zonal.hpp"

namespace wishmom {

/// Parameters of a generalized hypergeometric function of matrix argument:
/// upper a_1..a_p, lower b_1..b_q, truncation tolerance and degree cap.
struct HypergeomParams {
  std::vector<double> upper;
  std::vector<double> lower;
  double tolerance = 1e-12;
  int max_degree = 200;
  bool parallel = false;  // evaluate degree layers with OpenMP
};

struct HypergeomResult {
  double value = 0.0;
  int degree_reached = 0;
  double last_layer_abs = 0.0;
  bool terminated_exactly = false;
};

/// pFq(a_1..a_p; b_1..b_q; M) as the zonal polynomial series, summed by
/// total degree. For p = q+1 the series requires spectral norm < 1
/// (DomainError otherwise, NotConverged preemptively above 0.999); for
/// p <= q it is entire. For p > q+1 only terminating parameter sets are
/// accepted.
HypergeomResult hypergeom_matrix(const HypergeomParams& params, const SymMatrix& m);

/// Same, with the argument given by its eigenvalues.
HypergeomResult hypergeom_matrix(const HypergeomParams& params,
                                 std::span<const double> eigenvalues);

/// Evaluation route for the Gaussian 2F1 of matrix argument.
enum class TwoF1Route {
  automatic,  // terminating parameters -> direct; otherwise Euler-transformed
  direct,     // signed series as written
  euler,      // |I-M|^{c-a-b} 2F1(c-a, c-b; c; M), positive-term series
};

/// 2F1(a, b; c; M). Requires c > (m-1)/2 and spectral norm < 1. When -a or
/// -b is a nonnegative integer the series terminates and the result carries
/// terminated_exactly.
HypergeomResult gauss_2f1(double a, double b, double c, const SymMatrix& m,
                          double tol = 1e-12, int max_degree = 200,
                          TwoF1Route route = TwoF1Route::automatic);

HypergeomResult gauss_2f1(double a, double b, double c,
                          std::span<const double> eigenvalues, double tol = 1e-12,
                          int max_degree = 200,
                          TwoF1Route route = TwoF1Route::automatic);

/// 0F1(c; M), entire in M.
HypergeomResult bessel_0f1(double c, std::span<const double> eigenvalues,
                           double tol = 1e-12, int max_degree = 200);

}  // namespace wishmom
