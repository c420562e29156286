// Acceptance suite: one function per criterion, each printing a PASS/FAIL
// line with its runtime. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "wishmom/gpi.hpp"
#include "wishmom/hypergeom.hpp"
#include "wishmom/mc.hpp"
#include "wishmom/partition.hpp"
#include "wishmom/wishart.hpp"
#include "wishmom/zonal.hpp"

using namespace wishmom;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max({std::abs(got), std::abs(want), 1e-300});
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

SymMatrix random_sym_with_eigs(int dim, std::mt19937_64& rng, const std::vector<double>& lam) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> q(static_cast<size_t>(dim) * dim);
  for (double& x : q) x = g(rng);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < j; ++k) {
      double dot = 0.0;
      for (int i = 0; i < dim; ++i) dot += q[i * dim + j] * q[i * dim + k];
      for (int i = 0; i < dim; ++i) q[i * dim + j] -= dot * q[i * dim + k];
    }
    double nrm = 0.0;
    for (int i = 0; i < dim; ++i) nrm += q[i * dim + j] * q[i * dim + j];
    nrm = std::sqrt(nrm);
    for (int i = 0; i < dim; ++i) q[i * dim + j] /= nrm;
  }
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += q[i * dim + k] * lam[k] * q[j * dim + k];
      m.at(i, j) = s;
      m.at(j, i) = s;
    }
  return m;
}

SpdMatrix random_spd(int dim, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> lam(dim);
  for (double& v : lam) v = u(rng);
  return SpdMatrix(random_sym_with_eigs(dim, rng, lam));
}

// Random PD scale matrix with moderate cross-block coupling, so the closed
// form stays within the fast convergence regime of the series.
SpdMatrix random_model_sigma(int p, int p1, std::mt19937_64& rng) {
  for (;;) {
    SpdMatrix sigma = random_spd(p, rng, 0.5, 2.0);
    WishartModel probe(p + 1.5, sigma, p1);
    CouplingData cd = coupling(probe, SymMatrix(p));
    if (cd.ppt_eigenvalues.back() < 0.75) return sigma;
  }
}

struct Criterion {
  int id;
  const char* label;
  bool (*run)(std::string& detail);
};

// 1. product_moment(1,1) equals alpha^2 + 2 alpha rho^2 for 20 random
//    bivariate unit-variance models, relative 1e-10.
bool crit_second_moment(std::string& detail) {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> ua(1.0 + 1e-6, 10.0);
  std::uniform_real_distribution<double> ur(-0.999, 0.999);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double alpha = ua(rng), rho = ur(rng);
    WishartModel m(alpha, SpdMatrix(2, {1.0, rho, rho, 1.0}), 1);
    const double got = product_moment(m, 1.0, 1.0).value;
    worst = std::max(worst, rel_err(got, alpha * alpha + 2.0 * alpha * rho * rho));
  }
  detail = "worst rel err " + sci(worst);
  return worst < 1e-10;
}

// 2. sum over |kappa| = k of C_kappa(M) equals (tr M)^k for k <= 8, dim <= 4.
bool crit_zonal_sum(std::string& detail) {
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> u(-0.5, 1.2);
  double worst = 0.0;
  for (int dim = 1; dim <= 4; ++dim)
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> lam(dim);
      double tr = 0.0;
      do {
        tr = 0.0;
        for (double& v : lam) tr += (v = u(rng));
      } while (std::abs(tr) < 0.8);
      SymMatrix m = random_sym_with_eigs(dim, rng, lam);
      EigenSystem es = sym_eigen(m);
      for (int k = 1; k <= 8; ++k) {
        double sum = 0.0;
        for (const Partition& kappa : partitions_of(k, dim))
          sum += zonal(kappa, es.values);
        worst = std::max(worst, rel_err(sum, std::pow(tr, k)));
      }
    }
  detail = "worst rel err " + sci(worst);
  return worst < 1e-9;
}

// 3. 0F0 = etr and 1F0(a;M) = |I-M|^{-a} over 50 random arguments.
bool crit_series_identities(std::string& detail) {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> ua(1e-3, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int dim = 1 + (i % 3);
    const double cap = dim == 3 ? 0.6 : 0.8;
    std::uniform_real_distribution<double> ue(-cap, cap);
    std::vector<double> lam(dim);
    for (double& v : lam) v = ue(rng);

    HypergeomParams f00;
    f00.tolerance = 1e-14;
    double tr = 0.0;
    for (double v : lam) tr += v;
    worst = std::max(worst, rel_err(hypergeom_matrix(f00, lam).value, std::exp(tr)));

    const double a = ua(rng);
    HypergeomParams f10;
    f10.upper = {a};
    f10.tolerance = 1e-13;
    f10.max_degree = 300;
    double ld = 0.0;
    for (double v : lam) ld += std::log1p(-v);
    worst = std::max(worst, rel_err(hypergeom_matrix(f10, lam).value, std::exp(-a * ld)));
  }
  detail = "worst rel err " + sci(worst);
  return worst < 1e-8;
}

// 4. Euler/Herz transformation, non-integer at 1e-7 and integer at 1e-12.
bool crit_euler_transform(std::string& detail) {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> uc(0.1, 2.5);
  std::uniform_real_distribution<double> uab(0.05, 3.0);
  double worst_frac = 0.0, worst_int = 0.0;
  for (int i = 0; i < 12; ++i) {
    const int dim = 1 + (i % 3);
    const double cap = dim == 3 ? 0.45 : (dim == 2 ? 0.65 : 0.8);
    std::uniform_real_distribution<double> ue(0.02, cap);
    std::vector<double> lam(dim);
    for (double& v : lam) v = ue(rng);
    const double c = 0.5 * (dim - 1) + 0.6 + uc(rng);
    double ld = 0.0;
    for (double v : lam) ld += std::log1p(-v);

    const double a = uab(rng) + 0.317, b = uab(rng) + 0.131;
    const double lhs =
        std::exp((c + a + b) * ld) *
        gauss_2f1(c + a, c + b, c, lam, 1e-13, 400, TwoF1Route::direct).value;
    const double rhs = gauss_2f1(-a, -b, c, lam, 1e-13, 400, TwoF1Route::direct).value;
    worst_frac = std::max(worst_frac, rel_err(lhs, rhs));

    if (i < 9) {
      const double ia = 1.0 + (i % 3), ib = 3.0 - (i % 3);
      const double l2 =
          std::exp((c + ia + ib) * ld) *
          gauss_2f1(c + ia, c + ib, c, lam, 1e-14, 400, TwoF1Route::direct).value;
      const double r2 =
          gauss_2f1(-ia, -ib, c, lam, 1e-14, 400, TwoF1Route::direct).value;
      worst_int = std::max(worst_int, rel_err(l2, r2));
    }
  }
  detail = "worst non-integer " + sci(worst_frac) + ", integer " + sci(worst_int);
  return worst_frac < 1e-7 && worst_int < 1e-12;
}

// 5. Theorem-level check: closed product moment within 4 SE of Monte Carlo at
//    N = 1e6 for three block shapes.
bool crit_closed_vs_mc(std::string& detail) {
  std::mt19937_64 rng(1005);
  const int shapes[3][2] = {{1, 1}, {1, 2}, {2, 2}};
  double worst_z = 0.0;
  for (const auto& s : shapes) {
    const int p = s[0] + s[1];
    const double alpha = p + 1.5;
    SpdMatrix sigma = random_model_sigma(p, s[0], rng);
    WishartModel model(alpha, sigma, s[0]);
    std::uniform_real_distribution<double> un(-0.3, 2.0);
    const double nu1 = un(rng), nu2 = un(rng);
    MomentValue closed = product_moment(model, nu1, nu2);
    MomentQuery q;
    q.nu1 = nu1;
    q.nu2 = nu2;
    McConfig cfg;
    cfg.samples = 1000000;
    cfg.seed = 500 + s[0] * 10 + s[1];
    cfg.shards = 4;
    McEstimate e = estimate_moment(model, q, cfg);
    worst_z = std::max(worst_z, std::abs(closed.value - e.mean) / e.std_error);
  }
  detail = "worst |z| " + sci(worst_z);
  return worst_z <= 4.0;
}

// 6. Generalized (tilted) moment within 4 SE of the weighted MC estimate.
bool crit_tilted_vs_mc(std::string& detail) {
  std::mt19937_64 rng(1006);
  const int shapes[3][2] = {{1, 1}, {1, 2}, {2, 2}};
  double worst_z = 0.0;
  for (const auto& s : shapes) {
    const int p = s[0] + s[1];
    const double alpha = p + 1.5;
    SpdMatrix sigma = random_model_sigma(p, s[0], rng);
    WishartModel model(alpha, sigma, s[0]);

    // Random symmetric T scaled so Sigma^{-1} - 2T stays safely PD.
    std::uniform_real_distribution<double> ut(-1.0, 1.0);
    SymMatrix t(p);
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) {
        const double v = ut(rng);
        t.at(i, j) = v;
        t.at(j, i) = v;
      }
    const double lam_min_inv = 1.0 / sigma.eig().values.back();
    const double scale = 0.3 * lam_min_inv / spectral_norm(t);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) t.at(i, j) *= scale;

    std::uniform_real_distribution<double> un0(0.0, 1.0);
    MomentQuery q;
    q.nu0 = un0(rng);
    q.nu1 = 0.9;
    q.nu2 = 1.3;
    q.tilt = t;

    MomentValue closed = generalized_moment(model, q);
    McConfig cfg;
    cfg.samples = 1000000;
    cfg.seed = 800 + s[0] * 10 + s[1];
    cfg.shards = 4;
    McEstimate e = estimate_moment(model, q, cfg);
    worst_z = std::max(worst_z, std::abs(closed.value - e.mean) / e.std_error);
  }
  detail = "worst |z| " + sci(worst_z);
  return worst_z <= 4.0;
}

// 7. The Corollary chain over 1000 fuzzed (a, b, c, M), dims <= 3. The
//    one-variable slice probes spectra near the boundary of D_m; the
//    larger dimensions use moderate spectra to stay in the fast regime.
bool crit_gpi_chain(std::string& detail) {
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> uab(0.0, 5.0);
  std::uniform_real_distribution<double> uc(0.05, 10.0);
  std::uniform_int_distribution<int> ud(1, 3);
  const double caps[4] = {0.0, 0.9, 0.55, 0.4};
  const int degrees[4] = {0, 800, 400, 300};
  double worst_upper = 0.0, worst_lower = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const int dim = ud(rng);
    std::uniform_real_distribution<double> ue(0.02, caps[dim]);
    std::vector<double> lam(dim);
    for (double& v : lam) v = ue(rng);
    ContractionMatrix m(SymMatrix::diagonal(lam));
    const double a = uab(rng), b = uab(rng);
    const double c = 0.5 * (dim - 1) + uc(rng);
    GpiReport r = hypergeom_bound(a, b, c, m, 1e-12, degrees[dim]);
    worst_upper = std::min(worst_upper, r.slack_upper / std::max(std::abs(r.lhs), 1.0));
    worst_lower = std::min(worst_lower, r.slack_lower);
  }
  detail = "worst rel slacks " + sci(worst_upper) + " / " + sci(worst_lower);
  return worst_upper >= -1e-12 && worst_lower >= -1e-12;
}

// 8. Block-swap: models with p1 > p2 equal the unswapped assembly to 1e-12.
bool crit_block_swap(std::string& detail) {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> un(0.1, 1.8);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int p1 = 2 + (i % 2), p2 = 1 + (i % 2);  // (2,1) and (3,2)
    const int p = p1 + p2;
    SpdMatrix sigma = random_spd(p, rng, 0.6, 1.7);
    WishartModel m(p + 1.5, sigma, p1);
    const double nu1 = un(rng), nu2 = un(rng);
    const double got = product_moment(m, nu1, nu2, 1e-13, 300).value;
    CouplingData cd = coupling(m, SymMatrix(p));
    HypergeomResult f =
        gauss_2f1(-nu1, -nu2, 0.5 * m.alpha, cd.ppt_eigenvalues, 1e-13, 300);
    const double want =
        minor_moment(m, 1, nu1) * minor_moment(m, 2, nu2) * f.value;
    worst = std::max(worst, rel_err(got, want));
  }
  detail = "worst rel err " + sci(worst);
  return worst < 1e-12;
}

// 9. Lemma-2 minor moment for a 3x3 block against MC at N = 1e6.
bool crit_minor_vs_mc(std::string& detail) {
  std::mt19937_64 rng(1009);
  SpdMatrix sigma = random_spd(6, rng, 0.6, 1.6);
  WishartModel model(7.0, sigma, 3);
  const double closed = minor_moment(model, 1, 1.25);
  MomentQuery q;
  q.nu1 = 1.25;
  McConfig cfg;
  cfg.samples = 1000000;
  cfg.seed = 909;
  cfg.shards = 4;
  McEstimate e = estimate_moment(model, q, cfg);
  const double z = std::abs(closed - e.mean) / e.std_error;
  detail = "|z| " + sci(z);
  return z <= 4.0;
}

// 10. Bit-identical estimates for a fixed (seed, shards).
bool crit_reproducibility(std::string& detail) {
  std::mt19937_64 rng(1010);
  SpdMatrix sigma = random_spd(3, rng, 0.5, 1.5);
  WishartModel model(4.5, sigma, 1);
  MomentQuery q;
  q.nu0 = 0.3;
  q.nu1 = 1.1;
  q.nu2 = 0.7;
  McConfig cfg;
  cfg.samples = 200000;
  cfg.seed = 4242;
  cfg.shards = 4;
  McEstimate a = estimate_moment(model, q, cfg);
  McEstimate b = estimate_moment(model, q, cfg);
  const bool ok = a.mean == b.mean && a.std_error == b.std_error;
  detail = ok ? "bit-identical" : "estimates differ";
  return ok;
}

const Criterion kCriteria[] = {
    {1, "second-moment identity, 20 bivariate models, rel 1e-10", crit_second_moment},
    {2, "zonal sum identity, k <= 8, dim <= 4, rel 1e-9", crit_zonal_sum},
    {3, "0F0 = etr and 1F0 = |I-M|^{-a}, 50 draws, rel 1e-8", crit_series_identities},
    {4, "Euler transformation, rel 1e-7 / exact 1e-12", crit_euler_transform},
    {5, "closed product moment vs MC, 4 SE at N = 1e6", crit_closed_vs_mc},
    {6, "tilted generalized moment vs MC, 4 SE at N = 1e6", crit_tilted_vs_mc},
    {7, "bound chain over 1000 fuzzed cases, slack >= -1e-12", crit_gpi_chain},
    {8, "block swap consistency, 20 models, rel 1e-12", crit_block_swap},
    {9, "3x3 minor moment vs MC, 4 SE at N = 1e6", crit_minor_vs_mc},
    {10, "bit-identical MC estimates for fixed seed and shards", crit_reproducibility},
};

const double kBudgets[] = {1.0, 5.0, 10.0, 30.0, 180.0, 90.0, 60.0, 30.0, 60.0, 30.0};

}  // namespace

int main() {
  int failures = 0;
  for (size_t i = 0; i < std::size(kCriteria); ++i) {
    const Criterion& c = kCriteria[i];
    std::string detail;
    const double t0 = now_s();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double dt = now_s() - t0;
    if (dt > kBudgets[i]) {
      ok = false;
      detail += " [over budget " + std::to_string(kBudgets[i]) + " s]";
    }
    std::printf("criterion %2d: %s (%6.2f s) %s -- %s\n", c.id,
                ok ? "PASS" : "FAIL", dt, c.label, detail.c_str());
    if (!ok) ++failures;
  }
  return failures;
}
