#pragma once

#include <array>
#include <cstdint>

namespace wishmom {

/// Philox4x32-10 counter-based generator. Outputs are a pure function of
/// (key, counter), so any sample index owns its own substream: draws do not
/// depend on how samples are scheduled across shards or threads.
class Philox4x32 {
 public:
  explicit Philox4x32(uint64_t seed) : k0_(static_cast<uint32_t>(seed)),
                                       k1_(static_cast<uint32_t>(seed >> 32)) {}

  std::array<uint32_t, 4> block(uint64_t sample_index, uint32_t intra) const;

 private:
  uint32_t k0_, k1_;
};

/// Deterministic per-(seed, sample_index) stream of variates. Rejection
/// samplers consume the stream sequentially, so results are reproducible for
/// a fixed seed regardless of scheduling.
class SampleStream {
 public:
  SampleStream(uint64_t seed, uint64_t sample_index)
      : gen_(seed), index_(sample_index) {}

  /// Uniform on (0, 1), open at both ends.
  double uniform();

  /// Standard normal (Box-Muller; the pair partner is cached).
  double normal();

  /// Gamma(shape, scale 1) via Marsaglia-Tsang squeeze, with the boost
  /// Gamma(a) = Gamma(a+1) U^{1/a} for shape < 1.
  double gamma(double shape);

  /// chi^2 with (possibly non-integer) df > 0.
  double chi_square(double df) { return 2.0 * gamma(0.5 * df); }

 private:
  Philox4x32 gen_;
  uint64_t index_;
  uint32_t counter_ = 0;
  double buf_[2];
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace wishmom
