#include "support/zonal_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace wishmom::testutil {

namespace {

using Parts = std::vector<int>;

// rho_kappa = sum_i k_i (k_i - i), 1-based i.
double rho(const Parts& p) {
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += static_cast<double>(p[i]) * (p[i] - static_cast<int>(i) - 1);
  return s;
}

bool dominated_by(const Parts& lo, const Parts& hi) {  // lo <= hi in dominance
  int slo = 0, shi = 0;
  const size_t n = std::max(lo.size(), hi.size());
  for (size_t i = 0; i < n; ++i) {
    slo += i < lo.size() ? lo[i] : 0;
    shi += i < hi.size() ? hi[i] : 0;
    if (slo > shi) return false;
  }
  return true;
}

// Leading coefficient of C_kappa in the monomial basis:
//   2^k k! / prod_boxes (2*arm + leg + 2).
double leading_coefficient(const Parts& p, int k) {
  double hook = 1.0;
  for (int r = 1; r <= static_cast<int>(p.size()); ++r)
    for (int c = 1; c <= p[r - 1]; ++c) {
      int conj = 0;
      for (int v : p)
        if (v >= c) ++conj;
      hook *= 2.0 * (p[r - 1] - c) + (conj - r) + 2.0;
    }
  double num = std::pow(2.0, k);
  for (int i = 2; i <= k; ++i) num *= i;
  return num / hook;
}

// Monomial symmetric function m_lambda(x_1..x_n): sum of x^sigma(lambda) over
// distinct permutations of lambda padded with zeros.
double monomial_sym(const Parts& lambda, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(lambda.size()) > n) return 0.0;
  Parts padded(lambda);
  padded.resize(n, 0);
  std::sort(padded.begin(), padded.end());
  double s = 0.0;
  do {
    double t = 1.0;
    for (int i = 0; i < n; ++i) t *= std::pow(x[i], padded[i]);
    s += t;
  } while (std::next_permutation(padded.begin(), padded.end()));
  return s;
}

}  // namespace

double zonal_by_monomials(const Partition& kappa, std::span<const double> x) {
  const int k = kappa.weight();
  if (static_cast<int>(kappa.length()) > static_cast<int>(x.size())) return 0.0;
  if (k == 0) return 1.0;

  // All partitions of k (unrestricted parts) in reverse-lex order, which is a
  // linear extension of dominance: coefficients are filled top-down.
  std::vector<Partition> all = partitions_of(k, k);
  const Parts kp = kappa.parts();
  const double rho_k = rho(kp);

  std::map<Parts, double> coeff;
  coeff[kp] = leading_coefficient(kp, k);

  for (const Partition& lam : all) {
    const Parts lp = lam.parts();
    if (lp == kp || !dominated_by(lp, kp)) continue;
    // c_{kappa,lambda} = sum over single moves lambda -> mu of
    //   (l_i - l_j + 2t) c_{kappa,mu} / (rho_kappa - rho_lambda),
    // mu = sort(lambda + t e_i - t e_j), i < j, 1 <= t <= l_j, mu <= kappa.
    double s = 0.0;
    const int L = static_cast<int>(lp.size());
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j)
        for (int t = 1; t <= lp[j]; ++t) {
          Parts mu = lp;
          mu[i] += t;
          mu[j] -= t;
          std::sort(mu.begin(), mu.end(), std::greater<int>());
          while (!mu.empty() && mu.back() == 0) mu.pop_back();
          auto it = coeff.find(mu);
          if (it == coeff.end()) continue;  // mu not <= kappa
          s += (lp[i] - lp[j] + 2.0 * t) * it->second;
        }
    coeff[lp] = s / (rho_k - rho(lp));
  }

  double value = 0.0;
  for (const auto& [lp, c] : coeff) value += c * monomial_sym(lp, x);
  return value;
}

}  // namespace wishmom::testutil
