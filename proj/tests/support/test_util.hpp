#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "wishmom/matrix.hpp"

namespace wishmom::testutil {

inline double rel_err(double got, double want) {
  const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
  return std::abs(got - want) / scale;
}

/// Random symmetric matrix with entries in [-range, range].
inline SymMatrix random_sym(int dim, std::mt19937_64& rng, double range = 1.0) {
  std::uniform_real_distribution<double> u(-range, range);
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double v = u(rng);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

/// Random SPD matrix with eigenvalues in [lo, hi]: V diag(lam) V^T for a
/// random rotation V built from a QR-like Gram-Schmidt of a Gaussian matrix.
inline SpdMatrix random_spd(int dim, std::mt19937_64& rng, double lo = 0.5,
                            double hi = 2.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> q(static_cast<size_t>(dim) * dim);
  for (double& x : q) x = g(rng);
  // Gram-Schmidt columns.
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < j; ++k) {
      double dot = 0.0;
      for (int i = 0; i < dim; ++i) dot += q[static_cast<size_t>(i) * dim + j] * q[static_cast<size_t>(i) * dim + k];
      for (int i = 0; i < dim; ++i) q[static_cast<size_t>(i) * dim + j] -= dot * q[static_cast<size_t>(i) * dim + k];
    }
    double nrm = 0.0;
    for (int i = 0; i < dim; ++i) nrm += q[static_cast<size_t>(i) * dim + j] * q[static_cast<size_t>(i) * dim + j];
    nrm = std::sqrt(nrm);
    for (int i = 0; i < dim; ++i) q[static_cast<size_t>(i) * dim + j] /= nrm;
  }
  std::vector<double> lam(dim);
  for (double& x : lam) x = u(rng);
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += q[static_cast<size_t>(i) * dim + k] * lam[k] * q[static_cast<size_t>(j) * dim + k];
      m.at(i, j) = s;
      m.at(j, i) = s;
    }
  return SpdMatrix(m);
}

/// Symmetric matrix with prescribed eigenvalue range scaled to spectral
/// norm <= cap (eigenvalues drawn in [lo, cap]).
inline SpdMatrix random_contraction(int dim, std::mt19937_64& rng, double lo,
                                    double cap) {
  return random_spd(dim, rng, lo, cap);
}

/// Symmetric matrix with the given (possibly signed) eigenvalues on a random
/// orthonormal basis.
inline SymMatrix random_sym_with_eigs(int dim, std::mt19937_64& rng,
                                      const std::vector<double>& lam) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> q(static_cast<size_t>(dim) * dim);
  for (double& x : q) x = g(rng);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < j; ++k) {
      double dot = 0.0;
      for (int i = 0; i < dim; ++i) dot += q[static_cast<size_t>(i) * dim + j] * q[static_cast<size_t>(i) * dim + k];
      for (int i = 0; i < dim; ++i) q[static_cast<size_t>(i) * dim + j] -= dot * q[static_cast<size_t>(i) * dim + k];
    }
    double nrm = 0.0;
    for (int i = 0; i < dim; ++i) nrm += q[static_cast<size_t>(i) * dim + j] * q[static_cast<size_t>(i) * dim + j];
    nrm = std::sqrt(nrm);
    for (int i = 0; i < dim; ++i) q[static_cast<size_t>(i) * dim + j] /= nrm;
  }
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += q[static_cast<size_t>(i) * dim + k] * lam[k] * q[static_cast<size_t>(j) * dim + k];
      m.at(i, j) = s;
      m.at(j, i) = s;
    }
  return m;
}

/// Determinant via eigenvalues (test-side oracle).
inline double det_by_eigen(const SymMatrix& m) {
  EigenSystem es = sym_eigen(m);
  double d = 1.0;
  for (double v : es.values) d *= v;
  return d;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace wishmom::testutil
