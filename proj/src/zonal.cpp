#include "wishmom/zonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace wishmom {
namespace {

constexpr double kLn2 = 0.6931471805599453094;

// Partition lattice restricted to at most `max_parts` rows, grown on demand
// by total weight. Nodes are stored in graded order: by weight, and in
// reverse-lexicographic order within a weight, matching for_each_partition.
// Indices are stable under extension. One lattice per (thread, max_parts).
struct Lattice {
  explicit Lattice(int m) : max_parts(m) { degree_off = {0, 1}; }

  int max_parts;
  int built = 0;  // all degrees <= built are present

  struct Node {
    int32_t offset;        // into parts arena
    int32_t len;
    int32_t pred;          // index with one box removed from the last row
    double added_pos;      // (col-1) - (row-1)/2 of that box
    double log_hook_star;  // sum over boxes of log(2*arm + leg + 2)
  };
  std::vector<Node> nodes{Node{0, 0, -1, 0.0, 0.0}};  // the empty partition
  std::vector<int32_t> arena;
  std::vector<int32_t> degree_off;  // nodes of weight k: [degree_off[k], degree_off[k+1])

  // count_le[j][s*(W+1)+c] = #partitions of s into at most j parts, each <= c.
  std::vector<std::vector<int32_t>> count_le;
  int table_w = -1;

  // Prefix products of the mu-side hook ratio at fixed leg count:
  //   tl[l][d] = prod_{d'=0}^{d-1} (2d'+l+1)/(2d'+l+2).
  // A run of columns with constant legs contributes a ratio of two entries.
  std::vector<std::vector<double>> tl;

  const int32_t* parts(int idx) const { return arena.data() + nodes[idx].offset; }

  void build_tables(int w) {
    if (w <= table_w) return;
    const int W = w;
    count_le.assign(max_parts + 1, std::vector<int32_t>());
    for (int j = 0; j <= max_parts; ++j) {
      auto& t = count_le[j];
      t.assign(static_cast<size_t>(W + 1) * (W + 1), 0);
      for (int c = 0; c <= W; ++c) t[c] = 1;  // s = 0
      if (j == 0) continue;
      const auto& prev = count_le[j - 1];
      for (int s = 1; s <= W; ++s)
        for (int c = 1; c <= W; ++c) {
          int32_t v = t[static_cast<size_t>(s) * (W + 1) + (c - 1)];
          if (c <= s) v += prev[static_cast<size_t>(s - c) * (W + 1) + std::min(c, s - c)];
          t[static_cast<size_t>(s) * (W + 1) + c] = v;
        }
    }
    table_w = w;
  }

  // Graded index of a partition given as a weakly decreasing positive list.
  int index_of(const int32_t* mu, int len, int weight) const {
    const int W = table_w;
    int rank = 0, s = weight, cap = weight, rem = max_parts;
    for (int i = 0; i < len && s > 0; ++i) {
      const int v = mu[i];
      const auto& t = count_le[rem];
      // partitions of s with <= rem parts whose first part lies in (v, cap]
      rank += t[static_cast<size_t>(s) * (W + 1) + std::min(cap, s)] -
              t[static_cast<size_t>(s) * (W + 1) + v];
      cap = v;
      s -= v;
      rem -= 1;
    }
    return degree_off[weight] + rank;
  }

  void extend(int w) {
    if (w <= built) return;
    build_tables(std::max(w, 2 * built));  // geometric growth limits rebuilds
    if (tl.empty()) tl.assign(max_parts, std::vector<double>{1.0});
    for (int l = 0; l < max_parts; ++l) {
      auto& t = tl[l];
      while (static_cast<int>(t.size()) <= w + 1) {
        const double d = static_cast<double>(t.size()) - 1.0;
        t.push_back(t.back() * (2.0 * d + l + 1.0) / (2.0 * d + l + 2.0));
      }
    }
    std::vector<int32_t> conj;
    for (int k = built + 1; k <= w; ++k) {
      for_each_partition(k, max_parts, [&](const std::vector<int>& p) {
        Node n;
        n.offset = static_cast<int32_t>(arena.size());
        n.len = static_cast<int32_t>(p.size());
        for (int v : p) arena.push_back(v);
        // Predecessor: remove one box from the last row.
        std::vector<int32_t> pp(p.begin(), p.end());
        const int last = static_cast<int>(pp.size()) - 1;
        n.added_pos = (pp[last] - 1) - 0.5 * last;
        pp[last] -= 1;
        const int plen = pp[last] == 0 ? last : last + 1;
        n.pred = index_of(pp.data(), plen, k - 1);
        // Upper hook products over the boxes of p.
        conj.assign(static_cast<size_t>(p[0]) + 1, 0);
        for (int c = 1; c <= p[0]; ++c) {
          int cnt = 0;
          for (int v : p)
            if (v >= c) ++cnt;
          conj[c] = cnt;
        }
        double lh = 0.0;
        for (int r = 1; r <= static_cast<int>(p.size()); ++r)
          for (int c = 1; c <= p[r - 1]; ++c) {
            const int arm = p[r - 1] - c;
            const int leg = conj[c] - r;
            lh += std::log(2.0 * arm + leg + 2.0);
          }
        n.log_hook_star = lh;
        nodes.push_back(n);
      });
      degree_off.push_back(static_cast<int32_t>(nodes.size()));
    }
    built = w;
  }
};

Lattice& lattice_for(int max_parts) {
  thread_local std::map<int, Lattice> cache;
  auto it = cache.find(max_parts);
  if (it == cache.end()) it = cache.emplace(max_parts, Lattice(max_parts)).first;
  return it->second;
}

// Branching factor contributed by row i (0-based) when mu_i = v inside the
// horizontal-strip enumeration for the Jack P-normalization at parameter 2.
// For a touched row (v < kappa_i) the factor is the product over boxes (i,j),
// j <= v, whose column is untouched by the strip, of
//   b_mu(i,j) / b_kappa(i,j),  with b(s) = (2*arm + leg + 1)/(2*arm + leg + 2).
// Legs only involve rows below i. The product is walked in maximal column
// runs where the mu-side leg count is constant and nothing is blocked by the
// strip intervals (mu_r, kappa_r] of lower rows, so each run costs two
// prefix-table lookups: the mu side from Lattice::tl, the kappa side from
// the per-row prefix products in bl_prefix.
double row_factor(const Lattice& lat, int kappa_i, int v, const int32_t* musuf,
                  int nsuf, const std::pair<int32_t, int32_t>* iv, int niv,
                  const double* bl_prefix) {
  if (v == kappa_i) return 1.0;
  double num = 1.0, den = 1.0;
  int cnt = 0;       // #mu suffix parts >= current column
  int ip = niv - 1;  // intervals ascending in value; walk from the largest
  int j_hi = v;
  while (j_hi >= 1) {
    while (cnt < nsuf && musuf[cnt] >= j_hi) ++cnt;
    while (ip >= 0 && j_hi <= iv[ip].first) --ip;
    if (ip >= 0 && j_hi <= iv[ip].second) {  // blocked run (lo, hi]
      j_hi = iv[ip].first;
      --ip;
      continue;
    }
    int j_lo = 1;
    if (cnt < nsuf) j_lo = std::max(j_lo, musuf[cnt] + 1);
    if (ip >= 0) j_lo = std::max(j_lo, iv[ip].second + 1);
    const auto& t = lat.tl[cnt];
    num *= t[v - j_lo + 1] / t[v - j_hi];
    den *= bl_prefix[j_hi] / bl_prefix[j_lo - 1];
    j_hi = j_lo - 1;
  }
  return num / den;
}

// P_kappa(x_1..x_t) = sum over horizontal strips kappa/mu of
//   psi_{kappa/mu} x_t^{|kappa/mu|} P_mu(x_1..x_{t-1}),
// enumerating mu bottom row first so legs are known when a row's factor is
// computed.
double strip_sum(const Lattice& lat, const int32_t* kp, int len, double xt,
                 const std::vector<double>& p_prev) {
  double acc = 0.0;
  std::vector<int32_t> mu(len);
  std::vector<std::pair<int32_t, int32_t>> ivs;  // (mu_r, kappa_r], rows below

  // Per-row prefix products of the kappa-side ratio:
  //   bl[i][j] = prod_{j'=1..j} b_kappa(i,j'), legs over rows below i.
  std::vector<int> off(len + 1, 0);
  for (int i = 0; i < len; ++i) off[i + 1] = off[i] + kp[i] + 1;
  std::vector<double> bl(off[len]);
  for (int i = 0; i < len; ++i) {
    double* row = bl.data() + off[i];
    row[0] = 1.0;
    int legs = 0;  // #rows r > i with kp[r] >= j, walked j descending
    const int nsuf = len - 1 - i;
    for (int j = kp[i], c = 0; j >= 1; --j) {
      while (c < nsuf && kp[i + 1 + c] >= j) ++c;
      legs = c;
      const double arm = kp[i] - j;
      row[j] = (2.0 * arm + legs + 1.0) / (2.0 * arm + legs + 2.0);
    }
    for (int j = 1; j <= kp[i]; ++j) row[j] *= row[j - 1];
  }

  auto rec = [&](auto&& self, int i, double psi, double xpow) -> void {
    if (i < 0) {
      int mulen = 0;
      int w = 0;
      while (mulen < len && mu[mulen] > 0) w += mu[mulen++];
      acc += psi * xpow * p_prev[lat.index_of(mu.data(), mulen, w)];
      return;
    }
    const int lo = (i + 1 < len) ? kp[i + 1] : 0;
    double xp = xpow;
    for (int v = kp[i]; v >= lo; --v) {
      mu[i] = v;
      const double f =
          row_factor(lat, kp[i], v, mu.data() + i + 1, len - 1 - i, ivs.data(),
                     static_cast<int>(ivs.size()), bl.data() + off[i]);
      const size_t mark = ivs.size();
      if (v < kp[i]) ivs.emplace_back(v, kp[i]);
      self(self, i - 1, psi * f, xp);
      ivs.resize(mark);
      xp *= xt;
    }
  };
  rec(rec, len - 1, 1.0, 1.0);
  return acc;
}

}  // namespace

namespace detail {

SeriesSum matrix_series(std::span<const double> upper, std::span<const double> lower,
                        std::span<const double> eigenvalues, double tol, int max_degree,
                        bool parallel_layers) {
  const int m = static_cast<int>(eigenvalues.size());
  if (m < 1) throw DomainError("matrix_series: empty eigenvalue list");
  std::vector<double> x(eigenvalues.begin(), eigenvalues.end());
  std::sort(x.begin(), x.end(), std::greater<double>());  // canonical order

  // A nonpositive-integer upper parameter a = -n zeroes every partition with
  // first part > n, so the series is a polynomial of degree <= m*n.
  int cap = std::numeric_limits<int>::max();
  for (double a : upper) {
    const double r = std::round(a);
    if (r <= 0.0 && std::abs(a - r) <= 1e-12 * std::max(1.0, std::abs(a)))
      cap = std::min(cap, static_cast<int>(-r));
  }
  const bool finite_sum = cap != std::numeric_limits<int>::max() &&
                          static_cast<long long>(m) * cap <= max_degree;
  const int k_max = finite_sum ? m * cap : max_degree;

  Lattice& lat = lattice_for(m);

  SeriesSum out;
  long double value = 1.0L;  // degree-0 layer
  int small_streak = 0;

  std::vector<double> log_r{0.0};
  std::vector<signed char> sign_r{1};
  std::vector<unsigned char> dead{0};
  std::vector<std::vector<double>> P(m + 1);
  for (int t = 0; t <= m; ++t) P[t] = {1.0};  // P of the empty partition

  for (int k = 1; k <= k_max; ++k) {
    lat.extend(k);
    const int b = lat.degree_off[k], e = lat.degree_off[k + 1];
    log_r.resize(e);
    sign_r.resize(e);
    dead.resize(e);
    for (int t = 0; t <= m; ++t) P[t].resize(e, 0.0);

    // Coefficient pass: one new box against each upper/lower parameter.
    // Zero factors propagate along containment, so a dead predecessor or a
    // first part beyond the cap kills the node and everything above it.
    for (int n = b; n < e; ++n) {
      const Lattice::Node& nd = lat.nodes[n];
      if (dead[nd.pred] || lat.parts(n)[0] > cap) {
        dead[n] = 1;
        continue;
      }
      double lr = log_r[nd.pred];
      int sg = sign_r[nd.pred];
      bool zero = false;
      for (double a : upper) {
        const double fac = a + nd.added_pos;
        if (fac == 0.0) {
          zero = true;
          break;
        }
        lr += std::log(std::abs(fac));
        if (fac < 0.0) sg = -sg;
      }
      if (zero) {
        dead[n] = 1;
        continue;
      }
      for (double bp : lower) {
        const double fac = bp + nd.added_pos;
        lr -= std::log(std::abs(fac));
        if (fac < 0.0) sg = -sg;
      }
      dead[n] = 0;
      log_r[n] = lr;
      sign_r[n] = static_cast<signed char>(sg);
    }

    // Jack DP pass. Survivors only reference survivors (strips go downward in
    // containment), so dead nodes are skipped. Entries of a (degree, t) slice
    // are independent; each is computed by the same serial sequence of
    // operations whether or not the slice runs in parallel.
    for (int t = 1; t <= m; ++t) {
      const std::vector<double>& prev = P[t - 1];
      std::vector<double>& cur = P[t];
#pragma omp parallel for schedule(dynamic, 8) if (parallel_layers)
      for (int n = b; n < e; ++n) {
        const Lattice::Node& nd = lat.nodes[n];
        if (dead[n] || nd.len > t)
          cur[n] = 0.0;
        else if (t == 1)
          cur[n] = std::pow(x[0], k);  // single row in one variable
        else
          cur[n] = strip_sum(lat, lat.parts(n), nd.len, x[t - 1], prev);
      }
    }

    // Layer accumulation in node order (deterministic for any thread count).
    long double layer = 0.0L;
    for (int n = b; n < e; ++n) {
      if (dead[n]) continue;
      const double pv = P[m][n];
      if (pv == 0.0) continue;
      const double lmag =
          log_r[n] + k * kLn2 - lat.nodes[n].log_hook_star + std::log(std::abs(pv));
      const double term = std::copysign(std::exp(lmag), pv) * sign_r[n];
      layer += term;
    }
    value += layer;
    out.degree = k;
    out.last_layer_abs = static_cast<double>(std::abs(static_cast<double>(layer)));

    if (!finite_sum) {
      const double scale = std::max(std::abs(static_cast<double>(value)), 1e-300);
      if (out.last_layer_abs < tol * scale) {
        if (++small_streak >= 2) {
          out.converged = true;
          break;
        }
      } else {
        small_streak = 0;
      }
    }
  }

  out.value = static_cast<double>(value);
  if (finite_sum) {
    out.terminated = true;
    out.converged = true;
  }
  return out;
}

}  // namespace detail

double zonal(const Partition& kappa, std::span<const double> eigenvalues) {
  const int m = static_cast<int>(eigenvalues.size());
  if (m < 1) throw DomainError("zonal: empty eigenvalue list");
  if (kappa.length() > m) return 0.0;
  const int k = kappa.weight();
  if (k == 0) return 1.0;

  std::vector<double> x(eigenvalues.begin(), eigenvalues.end());
  std::sort(x.begin(), x.end(), std::greater<double>());

  Lattice& lat = lattice_for(m);
  lat.extend(k);

  const int total = lat.degree_off[k + 1];
  std::vector<std::vector<double>> P(m + 1, std::vector<double>(total, 0.0));
  for (int t = 0; t <= m; ++t) P[t][0] = 1.0;
  for (int w = 1; w <= k; ++w) {
    const int b = lat.degree_off[w], e = lat.degree_off[w + 1];
    for (int t = 1; t <= m; ++t)
      for (int n = b; n < e; ++n) {
        const Lattice::Node& nd = lat.nodes[n];
        if (nd.len > t)
          P[t][n] = 0.0;
        else if (t == 1)
          P[t][n] = std::pow(x[0], w);
        else
          P[t][n] = strip_sum(lat, lat.parts(n), nd.len, x[t - 1], P[t - 1]);
      }
  }
  std::vector<int32_t> kp(kappa.parts().begin(), kappa.parts().end());
  const int idx = lat.index_of(kp.data(), static_cast<int>(kp.size()), k);
  const double pv = P[m][idx];
  if (pv == 0.0) return 0.0;
  const double lmag = k * kLn2 + std::lgamma(k + 1.0) -
                      lat.nodes[idx].log_hook_star + std::log(std::abs(pv));
  return std::copysign(std::exp(lmag), pv);
}

}  // namespace wishmom
