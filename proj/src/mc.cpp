#include "wishmom/mc.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wishmom/rng.hpp"

namespace wishmom {

namespace {

// Streaming sum of exp(w_i) under a running max shift; merges are performed
// in shard order so reductions are deterministic for a fixed shard count.
struct ShiftAccum {
  double mx = -std::numeric_limits<double>::infinity();
  double s1 = 0.0;
  double s2 = 0.0;
  long long n = 0;

  void add(double w) {
    if (w <= mx) {
      const double d = std::exp(w - mx);
      s1 += d;
      s2 += d * d;
    } else {
      const double f = std::exp(mx - w);
      s1 = s1 * f + 1.0;
      s2 = s2 * f * f + 1.0;
      mx = w;
    }
    ++n;
  }

  void merge(const ShiftAccum& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    if (o.mx <= mx) {
      const double f = std::exp(o.mx - mx);
      s1 += o.s1 * f;
      s2 += o.s2 * f * f;
    } else {
      const double f = std::exp(mx - o.mx);
      s1 = s1 * f + o.s1;
      s2 = s2 * f * f + o.s2;
      mx = o.mx;
    }
    n += o.n;
  }
};

McEstimate finalize(const ShiftAccum& acc, uint64_t seed, long long resamples) {
  McEstimate e;
  e.n = acc.n;
  e.seed = seed;
  e.resamples = resamples;
  const double n = static_cast<double>(acc.n);
  e.mean = std::exp(acc.mx) * (acc.s1 / n);
  const double var_num = std::max(0.0, acc.s2 - acc.s1 * acc.s1 / n);
  e.std_error = std::exp(acc.mx) * std::sqrt(var_num / ((n - 1.0) * n));
  if (!std::isfinite(e.mean) || !std::isfinite(e.std_error))
    throw NonFinite("mc: weight sum overflowed after max shift");
  return e;
}

// Per-sample workspace: Bartlett factor B, the lower-triangular C = L B, and
// a gram/cholesky scratch block.
struct Workspace {
  std::vector<double> b, c, gram, tc;
  void resize(int p) {
    b.assign(static_cast<size_t>(p) * p, 0.0);
    c.assign(static_cast<size_t>(p) * p, 0.0);
    gram.assign(static_cast<size_t>(p) * p, 0.0);
    tc.assign(static_cast<size_t>(p) * p, 0.0);
  }
};

// Draw the Bartlett factor C = L B for one sample; redraws on underflow.
// Returns the number of redraws.
long long draw_bartlett(SampleStream& st, const std::vector<double>& chol_l, int p,
                        double alpha, Workspace& ws) {
  long long redraws = 0;
  for (;;) {
    std::vector<double>& B = ws.b;
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < i; ++j) B[static_cast<size_t>(i) * p + j] = st.normal();
      B[static_cast<size_t>(i) * p + i] = std::sqrt(st.chi_square(alpha - i));
    }
    std::vector<double>& C = ws.c;
    bool ok = true;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j <= i; ++j) {
        double s = 0.0;
        for (int k = j; k <= i; ++k)
          s += chol_l[static_cast<size_t>(i) * p + k] * B[static_cast<size_t>(k) * p + j];
        C[static_cast<size_t>(i) * p + j] = s;
        if (i == j && !(s > 1e-300 && std::isfinite(s))) ok = false;
      }
    if (ok) return redraws;
    ++redraws;
  }
}

// log det of the gram block C[rows off..off+n) C[rows ...]^T via an in-place
// Cholesky; returns NaN if the pivot test fails (caller redraws).
double block_logdet(const std::vector<double>& C, int p, int off, int n,
                    std::vector<double>& gram) {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b <= a; ++b) {
      double s = 0.0;
      const int ra = off + a, rb = off + b;
      const int kmax = std::min(ra, rb);
      for (int k = 0; k <= kmax; ++k)
        s += C[static_cast<size_t>(ra) * p + k] * C[static_cast<size_t>(rb) * p + k];
      gram[static_cast<size_t>(a) * n + b] = s;
    }
  double ld = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = gram[static_cast<size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      const double v = gram[static_cast<size_t>(j) * n + k];
      d -= v * v;
    }
    if (!(d > 1e-300)) return std::numeric_limits<double>::quiet_NaN();
    const double r = std::sqrt(d);
    ld += std::log(r);
    gram[static_cast<size_t>(j) * n + j] = r;
    for (int i = j + 1; i < n; ++i) {
      double s = gram[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= gram[static_cast<size_t>(i) * n + k] * gram[static_cast<size_t>(j) * n + k];
      gram[static_cast<size_t>(i) * n + j] = s / r;
    }
  }
  return 2.0 * ld;
}

struct MomentIntegrand {
  double alpha;
  const SpdMatrix* sigma;
  int p1, p2;
  const SymMatrix* tilt;  // nullptr for T = 0
  double nu0, nu1, nu2;

  int p() const { return sigma->dim(); }

  double log_weight(SampleStream& st, Workspace& ws, long long& redraws) const {
    const int p = sigma->dim();
    for (;;) {
      redraws += draw_bartlett(st, sigma->chol(), p, alpha, ws);
      const std::vector<double>& C = ws.c;
      double ld_x = 0.0, ld_x11 = 0.0;
      for (int i = 0; i < p; ++i) {
        const double d = std::log(C[static_cast<size_t>(i) * p + i]);
        ld_x += d;
        if (i < p1) ld_x11 += d;
      }
      ld_x *= 2.0;
      ld_x11 *= 2.0;
      double w = nu0 * ld_x + nu1 * ld_x11;
      if (nu2 != 0.0) {
        const double ld22 = block_logdet(C, p, p1, p2, ws.gram);
        if (std::isnan(ld22)) {
          ++redraws;
          continue;
        }
        w += nu2 * ld22;
      }
      if (tilt != nullptr) {
        // tr(T C C^T) = sum_{i>=j} (T C)_{ij} C_{ij}
        const SymMatrix& T = *tilt;
        double tr = 0.0;
        for (int i = 0; i < p; ++i)
          for (int j = 0; j <= i; ++j) {
            double tc = 0.0;
            for (int k = j; k < p; ++k) tc += T(i, k) * C[static_cast<size_t>(k) * p + j];
            tr += tc * C[static_cast<size_t>(i) * p + j];
          }
        w += tr;
      }
      return w;
    }
  }
};

struct ProductIntegrand {
  double alpha;
  const SpdMatrix* sigma;
  std::span<const int> splits;
  std::span<const double> nus;

  int p() const { return sigma->dim(); }

  double log_weight(SampleStream& st, Workspace& ws, long long& redraws) const {
    const int p = sigma->dim();
    for (;;) {
      redraws += draw_bartlett(st, sigma->chol(), p, alpha, ws);
      double w = 0.0;
      int off = 0;
      bool ok = true;
      for (size_t i = 0; i < splits.size(); ++i) {
        const double ld = block_logdet(ws.c, p, off, splits[i], ws.gram);
        if (std::isnan(ld)) {
          ok = false;
          break;
        }
        w += nus[i] * ld;
        off += splits[i];
      }
      if (ok) return w;
      ++redraws;
    }
  }
};

void validate_config(const McConfig& cfg) {
  if (cfg.samples < 2) throw DomainError("mc: need at least 2 samples");
  if (cfg.shards < 1) throw DomainError("mc: shards must be positive");
}

template <typename Integrand>
McEstimate run_sharded(const Integrand& ig, uint64_t seed, long long n, int shards) {
  std::vector<ShiftAccum> acc(shards);
  std::vector<long long> redraws(shards, 0);
  const long long base = n / shards, rem = n % shards;
#pragma omp parallel for schedule(static, 1)
  for (int s = 0; s < shards; ++s) {
    Workspace ws;
    ws.resize(ig.p());
    const long long begin = s * base + std::min<long long>(s, rem);
    const long long len = base + (s < rem ? 1 : 0);
    for (long long i = begin; i < begin + len; ++i) {
      SampleStream st(seed, static_cast<uint64_t>(i));
      acc[s].add(ig.log_weight(st, ws, redraws[s]));
    }
  }
  ShiftAccum total;
  long long total_redraws = 0;
  for (int s = 0; s < shards; ++s) {
    total.merge(acc[s]);
    total_redraws += redraws[s];
  }
  return finalize(total, seed, total_redraws);
}

template <typename Integrand>
McEstimate run_serial(const Integrand& ig, uint64_t seed, long long n) {
  ShiftAccum acc;
  long long redraws = 0;
  Workspace ws;
  ws.resize(ig.p());
  for (long long i = 0; i < n; ++i) {
    SampleStream st(seed, static_cast<uint64_t>(i));
    acc.add(ig.log_weight(st, ws, redraws));
  }
  return finalize(acc, seed, redraws);
}

void validate_query(const WishartModel& model, const MomentQuery& q) {
  const int p = model.p(), p1 = model.split.p1, p2 = model.split.p2;
  auto reject = [](const char* name, double nu, double bound) {
    if (!(nu > bound))
      throw DomainError(std::string("mc: ") + name + " = " + std::to_string(nu) +
                        " violates the strict range > " + std::to_string(bound) +
                        "; the estimator would not be finite");
  };
  reject("nu0", q.nu0, -0.5 * model.alpha + 0.5 * (p - 1));
  const double alpha0 = model.alpha + 2.0 * q.nu0;
  reject("nu1", q.nu1, -0.5 * alpha0 + 0.5 * (p1 - 1));
  reject("nu2", q.nu2, -0.5 * alpha0 + 0.5 * (p2 - 1));
  if (q.tilt) {
    SpdMatrix sig_inv = spd_inverse(model.sigma);
    SymMatrix g(p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) g.at(i, j) = sig_inv(i, j) - 2.0 * (*q.tilt)(i, j);
    try {
      SpdMatrix check(g);
    } catch (const NotPositiveDefinite&) {
      throw DomainError("mc: Sigma^{-1} - 2T is not positive definite");
    }
  }
}

}  // namespace

SpdMatrix sample_wishart(const WishartModel& model, uint64_t seed, uint64_t sample_index) {
  const int p = model.p();
  Workspace ws;
  ws.resize(p);
  SampleStream st(seed, sample_index);
  draw_bartlett(st, model.sigma.chol(), p, model.alpha, ws);
  SymMatrix x(p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k <= std::min(i, j); ++k)
        s += ws.c[static_cast<size_t>(i) * p + k] * ws.c[static_cast<size_t>(j) * p + k];
      x.at(i, j) = s;
      x.at(j, i) = s;
    }
  return SpdMatrix(x);
}

McEstimate estimate_moment(const WishartModel& model, const MomentQuery& q,
                           const McConfig& cfg) {
  validate_config(cfg);
  validate_query(model, q);
  MomentIntegrand ig{model.alpha,     &model.sigma,
                     model.split.p1,  model.split.p2,
                     q.tilt ? &*q.tilt : nullptr,
                     q.nu0,           q.nu1,
                     q.nu2};
  return run_sharded(ig, cfg.seed, cfg.samples, cfg.shards);
}

McEstimate estimate_moment_serial(const WishartModel& model, const MomentQuery& q,
                                  const McConfig& cfg) {
  validate_config(cfg);
  validate_query(model, q);
  MomentIntegrand ig{model.alpha,     &model.sigma,
                     model.split.p1,  model.split.p2,
                     q.tilt ? &*q.tilt : nullptr,
                     q.nu0,           q.nu1,
                     q.nu2};
  return run_serial(ig, cfg.seed, cfg.samples);
}

namespace {

void validate_general(double alpha, const SpdMatrix& sigma, std::span<const int> splits,
                      std::span<const double> nus) {
  if (splits.empty() || splits.size() != nus.size())
    throw DomainError("mc: splits and nus must be nonempty and match");
  int total = 0;
  for (int s : splits) {
    if (s < 1) throw DomainError("mc: block sizes must be positive");
    total += s;
  }
  if (total != sigma.dim()) throw DomainError("mc: block sizes must sum to p");
  if (!(alpha > sigma.dim() - 1))
    throw DomainError("mc: alpha must exceed p - 1 = " + std::to_string(sigma.dim() - 1));
  for (size_t i = 0; i < nus.size(); ++i)
    if (!(nus[i] > -0.5 * alpha + 0.5 * (splits[i] - 1)))
      throw DomainError("mc: nu[" + std::to_string(i) + "] out of range");
}

}  // namespace

McEstimate estimate_general_product(double alpha, const SpdMatrix& sigma,
                                    std::span<const int> splits,
                                    std::span<const double> nus, const McConfig& cfg) {
  validate_config(cfg);
  validate_general(alpha, sigma, splits, nus);
  ProductIntegrand ig{alpha, &sigma, splits, nus};
  return run_sharded(ig, cfg.seed, cfg.samples, cfg.shards);
}

McEstimate estimate_general_product_serial(double alpha, const SpdMatrix& sigma,
                                           std::span<const int> splits,
                                           std::span<const double> nus,
                                           const McConfig& cfg) {
  validate_config(cfg);
  validate_general(alpha, sigma, splits, nus);
  ProductIntegrand ig{alpha, &sigma, splits, nus};
  return run_serial(ig, cfg.seed, cfg.samples);
}

}  // namespace wishmom
