#pragma once

#include <cstdint>
#include <span>

#include "wishmom/matrix.hpp"
#include "wishmom/wishart.hpp"

namespace wishmom {

/// Monte Carlo run configuration. A fixed (seed, shards, samples) triple
/// yields a bit-identical estimate; changing only the shard count regroups
/// the reduction and can move the mean by rounding at the 1e-12 level.
struct McConfig {
  long long samples = 1'000'000;
  uint64_t seed = 0;
  int shards = 1;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long n = 0;
  uint64_t seed = 0;
  long long resamples = 0;  // draws redone after numerical underflow
};

/// One W_p(alpha, Sigma) draw via the Bartlett decomposition
/// X = (L B)(L B)^T, Sigma = L L^T, B lower triangular with
/// B_jj ~ sqrt(chi^2_{alpha-j+1}) and B_ij ~ N(0,1).
SpdMatrix sample_wishart(const WishartModel& model, uint64_t seed,
                         uint64_t sample_index = 0);

/// MC mean of etr(T X) |X|^nu0 |X11|^nu1 |X22|^nu2 over Wishart draws,
/// with per-sample weights kept in log space and exponentiated under a
/// running max shift. Shards run in parallel (OpenMP) and reduce in shard
/// order.
McEstimate estimate_moment(const WishartModel& model, const MomentQuery& q,
                           const McConfig& cfg);

/// Plain single-loop reference implementation of the same estimator, kept
/// for correctness tests and benchmarks against the sharded kernel.
McEstimate estimate_moment_serial(const WishartModel& model, const MomentQuery& q,
                                  const McConfig& cfg);

/// MC mean of prod_i |X_ii|^{nu_i} for a d-way block split of W_p(alpha, Sigma).
McEstimate estimate_general_product(double alpha, const SpdMatrix& sigma,
                                    std::span<const int> splits,
                                    std::span<const double> nus, const McConfig& cfg);

McEstimate estimate_general_product_serial(double alpha, const SpdMatrix& sigma,
                                           std::span<const int> splits,
                                           std::span<const double> nus,
                                           const McConfig& cfg);

}  // namespace wishmom
