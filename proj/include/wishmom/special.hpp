#pragma once

#include "wishmom/partition.hpp"

namespace wishmom {

/// Classical rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
double rising_factorial(double a, int k);

/// Partitional rising factorial (a)_kappa = prod_j (a - (j-1)/2)_{k_j},
/// with kappa padded by zero parts up to m.
double partitional_rising(double a, const Partition& kappa, int m);

/// log Gamma_m(beta) = log[ pi^{m(m-1)/4} prod_j Gamma(beta - (j-1)/2) ].
/// Requires beta > (m-1)/2 (real-domain restriction of the cone integral).
double multivariate_log_gamma(int m, double beta);

/// log of Gamma_m(beta + nu) / Gamma_m(beta); both arguments must be in
/// domain. Ratios like this dominate the dynamic range of the moment
/// formulas, so they are always assembled in log space.
double multivariate_log_gamma_ratio(int m, double beta, double nu);

}  // namespace wishmom
