#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wishmom/errors.hpp"

namespace wishmom {

class SpdMatrix;

/// Dense real symmetric matrix. Construction symmetrizes the input as
/// (E + E^T)/2, so entries[i][j] == entries[j][i] holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);  // zero matrix
  SymMatrix(int dim, std::vector<double> row_major);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::span<const double> d);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return e_[static_cast<size_t>(i) * dim_ + j]; }
  double& at(int i, int j) { return e_[static_cast<size_t>(i) * dim_ + j]; }
  const std::vector<double>& data() const { return e_; }

  double trace() const;
  SymMatrix scaled(double c) const;

 protected:
  int dim_ = 0;
  std::vector<double> e_;
};

/// Result of a symmetric eigendecomposition: m = V diag(values) V^T with
/// eigenvalues ascending and V orthonormal (columns are eigenvectors).
struct EigenSystem {
  std::vector<double> values;
  std::vector<double> vectors;  // row-major, column j = eigenvector j
  int dim = 0;
  double vec(int i, int j) const { return vectors[static_cast<size_t>(i) * dim + j]; }
};

/// Symmetric positive definite matrix. The Cholesky factor and the
/// eigendecomposition are computed at construction, so values are immutable
/// afterwards and safe to share across threads.
class SpdMatrix : public SymMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(const SymMatrix& m);
  SpdMatrix(int dim, std::vector<double> row_major);

  static SpdMatrix identity(int dim);
  static SpdMatrix diagonal(std::span<const double> d);

  /// Lower-triangular L with L L^T = m, row-major with zero upper part.
  const std::vector<double>& chol() const { return chol_; }
  const EigenSystem& eig() const { return eig_; }

 private:
  void factorize();
  std::vector<double> chol_;
  EigenSystem eig_;
};

/// Two-block partition sizes of a p x p matrix, p = p1 + p2.
struct BlockSplit {
  int p1 = 0;
  int p2 = 0;
  BlockSplit(int first, int second);
  int p() const { return p1 + p2; }
};

// Factorizations and matrix functions.

/// Lower-triangular Cholesky factor; throws NotPositiveDefinite when a pivot
/// falls below 1e-12 * max diagonal.
std::vector<double> cholesky(const SymMatrix& m);

/// Cyclic Jacobi eigensolver: threshold 1e-13 on the off-diagonal norm,
/// cap of 64*dim sweeps.
EigenSystem sym_eigen(const SymMatrix& m);

SpdMatrix spd_sqrt(const SpdMatrix& m);
SpdMatrix spd_inv_sqrt(const SpdMatrix& m);
SpdMatrix spd_inverse(const SpdMatrix& m);

/// Inverse assembled blockwise from the Schur complement over the (2,2)
/// block.
SpdMatrix block_inverse(const SpdMatrix& m, const BlockSplit& split);

enum class SchurPivot { over_11, over_22 };

/// M/M_22 = M_11 - M_12 M_22^{-1} M_21 (and symmetrically for over_11).
SymMatrix schur_complement(const SymMatrix& m, const BlockSplit& split,
                           SchurPivot which);

double logdet(const SpdMatrix& m);
double spectral_norm(const SymMatrix& m);

// Small dense helpers shared by the statistical modules.

SymMatrix sym_block(const SymMatrix& m, int row0, int col0, int n);
SymMatrix sym_product_sym(const SymMatrix& a, const SymMatrix& b,
                          const SymMatrix& c);  // symmetrized a*b*c
double trace_product(const SymMatrix& a, const SymMatrix& b);

/// General m x n row-major product helper (c = a * b).
std::vector<double> mat_mul(std::span<const double> a, int ar, int ac,
                            std::span<const double> b, int bc);

}  // namespace wishmom
