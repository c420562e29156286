#pragma once

#include <span>

#include "wishmom/partition.hpp"

namespace wishmom {

/// Zonal polynomial C_kappa evaluated at a symmetric matrix with the given
/// eigenvalues, normalized so that sum_{|kappa|=k} C_kappa(M) = (tr M)^k.
/// Returns exactly 0 when kappa has more parts than there are eigenvalues.
/// The value depends on the eigenvalues only as a set: they are sorted
/// internally, so permutations leave the result bit-unchanged.
double zonal(const Partition& kappa, std::span<const double> eigenvalues);

namespace detail {

/// Truncated zonal-polynomial series
///   sum_k sum_{kappa of k} [prod (a_i)_kappa / prod (b_j)_kappa]
///     C_kappa(X) / k!
/// over eigenvalues of X, summed by total degree in ascending order.
///
/// Stops when two consecutive degree layers each contribute less than
/// tol * |running value|, or when every surviving partition has been included
/// (a nonpositive-integer upper parameter caps the first part), or at
/// max_degree. Callers decide whether !converged is an error.
struct SeriesSum {
  double value = 1.0;
  int degree = 0;             // last degree whose layer was accumulated
  double last_layer_abs = 0.0;
  bool terminated = false;    // all remaining terms are provably zero
  bool converged = false;     // two-consecutive-small-layers rule fired
};

SeriesSum matrix_series(std::span<const double> upper,
                        std::span<const double> lower,
                        std::span<const double> eigenvalues, double tol,
                        int max_degree, bool parallel_layers = false);

}  // namespace detail

}  // namespace wishmom
