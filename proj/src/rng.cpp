#include "wishmom/rng.hpp"

#include <cmath>
#include <numbers>

namespace wishmom {

namespace {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

}  // namespace

std::array<uint32_t, 4> Philox4x32::block(uint64_t sample_index, uint32_t intra) const {
  uint32_t c0 = intra;
  uint32_t c1 = static_cast<uint32_t>(sample_index);
  uint32_t c2 = static_cast<uint32_t>(sample_index >> 32);
  uint32_t c3 = 0u;
  uint32_t k0 = k0_, k1 = k1_;
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c0, hi0, lo0);
    mulhilo(kPhiloxM1, c2, hi1, lo1);
    const uint32_t n0 = hi1 ^ c1 ^ k0;
    const uint32_t n1 = lo1;
    const uint32_t n2 = hi0 ^ c3 ^ k1;
    const uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {c0, c1, c2, c3};
}

double SampleStream::uniform() {
  if (buffered_ == 0) {
    const std::array<uint32_t, 4> b = gen_.block(index_, counter_++);
    const uint64_t u0 = (static_cast<uint64_t>(b[0]) << 32) | b[1];
    const uint64_t u1 = (static_cast<uint64_t>(b[2]) << 32) | b[3];
    buf_[0] = (static_cast<double>(u0 >> 11) + 0.5) * 0x1.0p-53;
    buf_[1] = (static_cast<double>(u1 >> 11) + 0.5) * 0x1.0p-53;
    buffered_ = 2;
  }
  return buf_[2 - buffered_--];
}

double SampleStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_normal_ = true;
  return r * std::cos(a);
}

double SampleStream::gamma(double shape) {
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace wishmom
