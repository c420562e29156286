#include "wishmom/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wishmom {

namespace {

std::string dim_msg(const char* op, int dim) {
  return std::string(op) + ": dim " + std::to_string(dim);
}

}  // namespace

SymMatrix::SymMatrix(int dim) : dim_(dim), e_(static_cast<size_t>(dim) * dim, 0.0) {
  if (dim <= 0) throw DomainError("SymMatrix: dim must be positive");
}

SymMatrix::SymMatrix(int dim, std::vector<double> row_major) : dim_(dim) {
  if (dim <= 0) throw DomainError("SymMatrix: dim must be positive");
  if (row_major.size() != static_cast<size_t>(dim) * dim)
    throw DomainError("SymMatrix: entry count does not match dim");
  e_ = std::move(row_major);
  // Symmetrize: user matrices arrive from JSON with rounding.
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      const double s = 0.5 * (at(i, j) + at(j, i));
      at(i, j) = s;
      at(j, i) = s;
    }
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m.at(i, i) = d[i];
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

SymMatrix SymMatrix::scaled(double c) const {
  SymMatrix m(*this);
  for (double& v : m.e_) v *= c;
  return m;
}

SpdMatrix::SpdMatrix(const SymMatrix& m) : SymMatrix(m) { factorize(); }

SpdMatrix::SpdMatrix(int dim, std::vector<double> row_major)
    : SymMatrix(dim, std::move(row_major)) {
  factorize();
}

SpdMatrix SpdMatrix::identity(int dim) { return SpdMatrix(SymMatrix::identity(dim)); }

SpdMatrix SpdMatrix::diagonal(std::span<const double> d) {
  return SpdMatrix(SymMatrix::diagonal(d));
}

void SpdMatrix::factorize() {
  chol_ = cholesky(*this);
  eig_ = sym_eigen(*this);
}

BlockSplit::BlockSplit(int first, int second) : p1(first), p2(second) {
  if (p1 < 1 || p2 < 1) throw DomainError("BlockSplit: both blocks must be nonempty");
}

std::vector<double> cholesky(const SymMatrix& m) {
  const int n = m.dim();
  std::vector<double> L(static_cast<size_t>(n) * n, 0.0);
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
  const double pivot_tol = 1e-12 * std::max(max_diag, 1e-300);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= L[static_cast<size_t>(j) * n + k] * L[static_cast<size_t>(j) * n + k];
    if (d <= pivot_tol)
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(d) + " at " +
                                std::to_string(j) + " (" + dim_msg("", n) + ")");
    const double ljj = std::sqrt(d);
    L[static_cast<size_t>(j) * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= L[static_cast<size_t>(i) * n + k] * L[static_cast<size_t>(j) * n + k];
      L[static_cast<size_t>(i) * n + j] = s / ljj;
    }
  }
  return L;
}

EigenSystem sym_eigen(const SymMatrix& m) {
  const int n = m.dim();
  EigenSystem es;
  es.dim = n;
  es.values.resize(n);
  es.vectors.assign(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> a = m.data();
  std::vector<double>& v = es.vectors;
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += a[static_cast<size_t>(i) * n + j] * a[static_cast<size_t>(i) * n + j];
    return std::sqrt(2.0 * s);
  };
  double fro = 0.0;
  for (double x : a) fro += x * x;
  fro = std::sqrt(fro);
  const double thresh = 1e-13 * std::max(fro, 1e-300);

  const int max_sweeps = 64 * n;
  int sweep = 0;
  while (off_norm() > thresh) {
    if (++sweep > max_sweeps)
      throw ConvergenceFailure("sym_eigen: sweep cap reached (" + dim_msg("", n) + ")");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[static_cast<size_t>(p) * n + q];
        if (std::abs(apq) == 0.0) continue;
        const double app = a[static_cast<size_t>(p) * n + p];
        const double aqq = a[static_cast<size_t>(q) * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[static_cast<size_t>(k) * n + p];
          const double akq = a[static_cast<size_t>(k) * n + q];
          a[static_cast<size_t>(k) * n + p] = c * akp - s * akq;
          a[static_cast<size_t>(k) * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[static_cast<size_t>(p) * n + k];
          const double aqk = a[static_cast<size_t>(q) * n + k];
          a[static_cast<size_t>(p) * n + k] = c * apk - s * aqk;
          a[static_cast<size_t>(q) * n + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[static_cast<size_t>(k) * n + p];
          const double vkq = v[static_cast<size_t>(k) * n + q];
          v[static_cast<size_t>(k) * n + p] = c * vkp - s * vkq;
          v[static_cast<size_t>(k) * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) es.values[i] = a[static_cast<size_t>(i) * n + i];

  // Sort eigenvalues ascending, permuting eigenvector columns alongside.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return es.values[x] < es.values[y]; });
  EigenSystem out;
  out.dim = n;
  out.values.resize(n);
  out.vectors.assign(static_cast<size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    out.values[j] = es.values[order[j]];
    for (int i = 0; i < n; ++i)
      out.vectors[static_cast<size_t>(i) * n + j] = v[static_cast<size_t>(i) * n + order[j]];
  }
  return out;
}

namespace {

// V f(diag) V^T for an SPD input; used for sqrt / inv-sqrt / inverse so the
// result stays exactly symmetric.
SpdMatrix spd_spectral_map(const SpdMatrix& m, double (*f)(double), const char* op) {
  const EigenSystem& es = m.eig();
  const int n = m.dim();
  for (double lam : es.values)
    if (lam <= 0.0) throw NotPositiveDefinite(std::string(op) + ": nonpositive eigenvalue");
  std::vector<double> fd(n);
  for (int i = 0; i < n; ++i) fd[i] = f(es.values[i]);
  SymMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += es.vec(i, k) * fd[k] * es.vec(j, k);
      r.at(i, j) = s;
      r.at(j, i) = s;
    }
  return SpdMatrix(r);
}

}  // namespace

SpdMatrix spd_sqrt(const SpdMatrix& m) {
  return spd_spectral_map(m, [](double x) { return std::sqrt(x); }, "spd_sqrt");
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& m) {
  return spd_spectral_map(m, [](double x) { return 1.0 / std::sqrt(x); }, "spd_inv_sqrt");
}

SpdMatrix spd_inverse(const SpdMatrix& m) {
  return spd_spectral_map(m, [](double x) { return 1.0 / x; }, "spd_inverse");
}

namespace {

// Solve A X = B for SPD A via its Cholesky factor (B given column count).
std::vector<double> spd_solve(const SpdMatrix& a, std::span<const double> b, int bc) {
  const int n = a.dim();
  const std::vector<double>& L = a.chol();
  std::vector<double> x(b.begin(), b.end());
  // forward: L y = b
  for (int c = 0; c < bc; ++c) {
    for (int i = 0; i < n; ++i) {
      double s = x[static_cast<size_t>(i) * bc + c];
      for (int k = 0; k < i; ++k) s -= L[static_cast<size_t>(i) * n + k] * x[static_cast<size_t>(k) * bc + c];
      x[static_cast<size_t>(i) * bc + c] = s / L[static_cast<size_t>(i) * n + i];
    }
    // backward: L^T x = y
    for (int i = n - 1; i >= 0; --i) {
      double s = x[static_cast<size_t>(i) * bc + c];
      for (int k = i + 1; k < n; ++k) s -= L[static_cast<size_t>(k) * n + i] * x[static_cast<size_t>(k) * bc + c];
      x[static_cast<size_t>(i) * bc + c] = s / L[static_cast<size_t>(i) * n + i];
    }
  }
  return x;
}

std::vector<double> block_of(const SymMatrix& m, int r0, int c0, int nr, int nc) {
  std::vector<double> b(static_cast<size_t>(nr) * nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b[static_cast<size_t>(i) * nc + j] = m(r0 + i, c0 + j);
  return b;
}

}  // namespace

std::vector<double> mat_mul(std::span<const double> a, int ar, int ac,
                            std::span<const double> b, int bc) {
  std::vector<double> c(static_cast<size_t>(ar) * bc, 0.0);
  for (int i = 0; i < ar; ++i)
    for (int k = 0; k < ac; ++k) {
      const double aik = a[static_cast<size_t>(i) * ac + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < bc; ++j)
        c[static_cast<size_t>(i) * bc + j] += aik * b[static_cast<size_t>(k) * bc + j];
    }
  return c;
}

SpdMatrix block_inverse(const SpdMatrix& m, const BlockSplit& split) {
  const int p = m.dim();
  if (split.p() != p) throw DomainError("block_inverse: split does not match dim");
  const int p1 = split.p1, p2 = split.p2;

  // Both diagonal blocks of an SPD matrix are SPD.
  SpdMatrix m22(SymMatrix(p2, block_of(m, p1, p1, p2, p2)));
  std::vector<double> m12 = block_of(m, 0, p1, p1, p2);
  std::vector<double> m21 = block_of(m, p1, 0, p2, p1);

  // W = M22^{-1} M21  (p2 x p1)
  std::vector<double> w = spd_solve(m22, m21, p1);
  // S = M11 - M12 W, the Schur complement M/M22, SPD for SPD m.
  SymMatrix s(p1);
  for (int i = 0; i < p1; ++i)
    for (int j = 0; j < p1; ++j) {
      double acc = m(i, j);
      for (int k = 0; k < p2; ++k) acc -= m12[static_cast<size_t>(i) * p2 + k] * w[static_cast<size_t>(k) * p1 + j];
      s.at(i, j) = acc;
    }
  SpdMatrix schur(s);
  SpdMatrix sinv = spd_inverse(schur);

  // Top-left: S^{-1}; off-diagonal: -(M22^{-1} M21 S^{-1}) and its transpose;
  // bottom-right: M22^{-1} + M22^{-1} M21 S^{-1} M12 M22^{-1}.
  std::vector<double> u = mat_mul(w, p2, p1, sinv.data(), p1);  // p2 x p1
  SpdMatrix m22inv = spd_inverse(m22);
  std::vector<double> br = mat_mul(u, p2, p1, m12, p2);  // M22^{-1} M21 S^{-1} M12
  br = mat_mul(br, p2, p2, m22inv.data(), p2);           // ... M22^{-1}

  SymMatrix inv(p);
  for (int i = 0; i < p1; ++i)
    for (int j = 0; j < p1; ++j) inv.at(i, j) = sinv(i, j);
  for (int i = 0; i < p2; ++i)
    for (int j = 0; j < p1; ++j) {
      inv.at(p1 + i, j) = -u[static_cast<size_t>(i) * p1 + j];
      inv.at(j, p1 + i) = -u[static_cast<size_t>(i) * p1 + j];
    }
  for (int i = 0; i < p2; ++i)
    for (int j = 0; j < p2; ++j)
      inv.at(p1 + i, p1 + j) = m22inv(i, j) + br[static_cast<size_t>(i) * p2 + j];
  return SpdMatrix(inv);
}

SymMatrix schur_complement(const SymMatrix& m, const BlockSplit& split, SchurPivot which) {
  const int p = m.dim();
  if (split.p() != p) throw DomainError("schur_complement: split does not match dim");
  const int p1 = split.p1, p2 = split.p2;
  const bool over22 = which == SchurPivot::over_22;
  const int nk = over22 ? p1 : p2;  // size of the kept block
  const int np = over22 ? p2 : p1;  // size of the pivoted block
  const int k0 = over22 ? 0 : p1;
  const int v0 = over22 ? p1 : 0;

  std::vector<double> piv = block_of(m, v0, v0, np, np);
  std::vector<double> cross = block_of(m, v0, k0, np, nk);  // pivot-block rows

  // Solve piv * W = cross by Gaussian elimination with partial pivoting; the
  // pivoted block of a SymMatrix need not be definite.
  std::vector<double> a = piv;
  std::vector<double> w = cross;
  for (int col = 0; col < np; ++col) {
    int best = col;
    for (int r = col + 1; r < np; ++r)
      if (std::abs(a[static_cast<size_t>(r) * np + col]) > std::abs(a[static_cast<size_t>(best) * np + col])) best = r;
    double pivval = a[static_cast<size_t>(best) * np + col];
    if (std::abs(pivval) < 1e-13 * std::max(1.0, std::abs(piv[0])))
      throw SingularBlock("schur_complement: pivoted block is singular");
    if (best != col) {
      for (int c = 0; c < np; ++c) std::swap(a[static_cast<size_t>(col) * np + c], a[static_cast<size_t>(best) * np + c]);
      for (int c = 0; c < nk; ++c) std::swap(w[static_cast<size_t>(col) * nk + c], w[static_cast<size_t>(best) * nk + c]);
    }
    pivval = a[static_cast<size_t>(col) * np + col];
    for (int r = col + 1; r < np; ++r) {
      const double f = a[static_cast<size_t>(r) * np + col] / pivval;
      if (f == 0.0) continue;
      for (int c = col; c < np; ++c) a[static_cast<size_t>(r) * np + c] -= f * a[static_cast<size_t>(col) * np + c];
      for (int c = 0; c < nk; ++c) w[static_cast<size_t>(r) * nk + c] -= f * w[static_cast<size_t>(col) * nk + c];
    }
  }
  for (int col = np - 1; col >= 0; --col) {
    const double d = a[static_cast<size_t>(col) * np + col];
    for (int c = 0; c < nk; ++c) {
      double s = w[static_cast<size_t>(col) * nk + c];
      for (int r = col + 1; r < np; ++r) s -= a[static_cast<size_t>(col) * np + r] * w[static_cast<size_t>(r) * nk + c];
      w[static_cast<size_t>(col) * nk + c] = s / d;
    }
  }

  SymMatrix out(nk);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      double s = m(k0 + i, k0 + j);
      for (int k = 0; k < np; ++k) s -= m(k0 + i, v0 + k) * w[static_cast<size_t>(k) * nk + j];
      out.at(i, j) = s;
    }
  // Symmetrize roundoff.
  for (int i = 0; i < nk; ++i)
    for (int j = i + 1; j < nk; ++j) {
      const double s = 0.5 * (out(i, j) + out(j, i));
      out.at(i, j) = s;
      out.at(j, i) = s;
    }
  return out;
}

double logdet(const SpdMatrix& m) {
  const std::vector<double>& L = m.chol();
  const int n = m.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::log(L[static_cast<size_t>(i) * n + i]);
  return 2.0 * s;
}

double spectral_norm(const SymMatrix& m) {
  EigenSystem es = sym_eigen(m);
  double mx = 0.0;
  for (double v : es.values) mx = std::max(mx, std::abs(v));
  return mx;
}

SymMatrix sym_block(const SymMatrix& m, int row0, int col0, int n) {
  SymMatrix b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.at(i, j) = m(row0 + i, col0 + j);
  return b;
}

SymMatrix sym_product_sym(const SymMatrix& a, const SymMatrix& b, const SymMatrix& c) {
  const int n = a.dim();
  std::vector<double> ab = mat_mul(a.data(), n, n, b.data(), n);
  std::vector<double> abc = mat_mul(ab, n, n, c.data(), n);
  return SymMatrix(n, std::move(abc));
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
  const int n = a.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += a(i, j) * b(j, i);
  return s;
}

}  // namespace wishmom
