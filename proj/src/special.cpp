#include "wishmom/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace wishmom {

double rising_factorial(double a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

double partitional_rising(double a, const Partition& kappa, int m) {
  if (kappa.length() > m)
    throw DomainError("partitional_rising: partition has more than m parts");
  double r = 1.0;
  for (int j = 0; j < kappa.length(); ++j)
    r *= rising_factorial(a - 0.5 * j, kappa.part(j));
  return r;
}

double multivariate_log_gamma(int m, double beta) {
  if (m < 1) throw DomainError("multivariate_log_gamma: m must be positive");
  if (!(beta > 0.5 * (m - 1)))
    throw DomainError("multivariate_log_gamma: beta = " + std::to_string(beta) +
                      " must exceed (m-1)/2 = " + std::to_string(0.5 * (m - 1)));
  double s = 0.25 * m * (m - 1) * std::log(std::numbers::pi);
  for (int j = 0; j < m; ++j) s += std::lgamma(beta - 0.5 * j);
  return s;
}

double multivariate_log_gamma_ratio(int m, double beta, double nu) {
  return multivariate_log_gamma(m, beta + nu) - multivariate_log_gamma(m, beta);
}

}  // namespace wishmom
