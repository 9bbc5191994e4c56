#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "gfrht/types.hpp"

namespace gfrht::detail {

enum class SnapMode {
  /// |Im| <= tol snaps every eigenvalue onto the real axis.
  AllReal,
  /// Only eigenvalues near the negative real axis are snapped (to +0 imaginary
  /// part), which pins the principal-logarithm branch.
  NegativeReal,
};

template <typename Real>
struct DiagonalizeOptions {
  Real snap_rel = Real(1e-9);
  SnapMode snap_mode = SnapMode::AllReal;
  Real cluster_rel = Real(1e-8);
  Real cond_max = Real(1e12);
  Real residual_rel = Real(1e-8);
};

template <typename Real>
struct Diagonalization {
  CVector<Real> values;
  CMatrix<Real> vectors;
  CMatrix<Real> vectors_inv;
  Real cond = Real(1);
  Real snap_tol = Real(0);
  bool normal = false;
};

// Unit 2-norm, and the first component of (numerically) largest magnitude made
// real positive.
template <typename Real>
void normalize_columns(CMatrix<Real>& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    auto col = u.col(c);
    const Real norm = col.norm();
    if (norm == Real(0)) continue;
    col /= norm;
    const Real peak = col.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= peak * (Real(1) - Real(1e-9))) {
        pivot = i;
        break;
      }
    }
    const std::complex<Real> z = col(pivot);
    col *= std::conj(z) / std::abs(z);
  }
}

// Orthonormal basis of span(B) that depends only on the subspace: rows of B
// are chosen greedily by residual norm (ties to the lower index), the
// corresponding projections P e_i = B b_i^H are orthonormalized in that order.
template <typename Real>
CMatrix<Real> canonical_basis(const CMatrix<Real>& b) {
  const Eigen::Index n = b.rows();
  const Eigen::Index k = b.cols();
  if (k <= 1) return b;

  CMatrix<Real> residual = b;
  std::vector<Eigen::Index> picked;
  picked.reserve(static_cast<std::size_t>(k));
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index step = 0; step < k; ++step) {
    Real best = Real(-1);
    Eigen::Index arg = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const Real r = residual.row(i).norm();
      if (r > best * (Real(1) + Real(1e-10))) {
        best = r;
        arg = i;
      }
    }
    used[static_cast<std::size_t>(arg)] = true;
    picked.push_back(arg);
    // Project every row off the chosen direction.
    const CVector<Real> dir = residual.row(arg).adjoint() / best;
    const CVector<Real> coeff = residual * dir;
    residual -= coeff * dir.adjoint();
  }

  CMatrix<Real> rows(k, k);
  for (Eigen::Index j = 0; j < k; ++j) rows.col(j) = b.row(picked[static_cast<std::size_t>(j)]).adjoint();
  const CMatrix<Real> projected = b * rows;
  Eigen::HouseholderQR<CMatrix<Real>> qr(projected);
  return qr.householderQ() * CMatrix<Real>::Identity(n, k);
}

// Single-linkage clusters of points closer than tol.
template <typename Real>
std::vector<std::vector<Eigen::Index>> cluster(const CVector<Real>& values, Real tol) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(values(i) - values(j)) <= tol) {
        const Eigen::Index a = find(i);
        const Eigen::Index b = find(j);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) groups[static_cast<std::size_t>(find(i))].push_back(i);
  std::vector<std::vector<Eigen::Index>> out;
  for (auto& g : groups) {
    if (!g.empty()) out.push_back(std::move(g));
  }
  return out;
}

template <typename Real>
void snap(CVector<Real>& values, Real tol, SnapMode mode) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const auto v = values(i);
    if (std::abs(v.imag()) > tol) continue;
    if (mode == SnapMode::AllReal || v.real() < Real(0)) values(i) = std::complex<Real>(v.real(), Real(0));
  }
}

// Sort key: principal argument, then magnitude, then the eigenvector rounded to
// 12 decimals. Values are quantized so floating noise does not reorder ties.
template <typename Real>
std::vector<Eigen::Index> spectral_order(const CVector<Real>& values, const CMatrix<Real>& vectors,
                                         Real scale) {
  const Eigen::Index n = values.size();
  auto quantize = [](Real x, Real unit) { return static_cast<long long>(std::llround(x / unit)); };
  struct Key {
    long long arg;
    long long mag;
  };
  std::vector<Key> keys(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto v = values(i);
    const Real arg = (v == std::complex<Real>(0)) ? Real(0) : std::arg(v);
    keys[static_cast<std::size_t>(i)] = {quantize(arg, Real(1e-10)), quantize(std::abs(v), Real(1e-10) * scale)};
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const Key& ka = keys[static_cast<std::size_t>(a)];
    const Key& kb = keys[static_cast<std::size_t>(b)];
    if (ka.arg != kb.arg) return ka.arg < kb.arg;
    if (ka.mag != kb.mag) return ka.mag < kb.mag;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const long long ra = quantize(vectors(r, a).real(), Real(1e-12));
      const long long rb = quantize(vectors(r, b).real(), Real(1e-12));
      if (ra != rb) return ra < rb;
      const long long ia = quantize(vectors(r, a).imag(), Real(1e-12));
      const long long ib = quantize(vectors(r, b).imag(), Real(1e-12));
      if (ia != ib) return ia < ib;
    }
    return false;
  });
  return order;
}

template <typename Real>
bool is_normal(const CMatrix<Real>& m) {
  const Real norm = m.norm();
  if (norm == Real(0)) return true;
  const CMatrix<Real> commutator = m * m.adjoint() - m.adjoint() * m;
  return commutator.norm() <= Real(1e-10) * norm * norm;
}

// Eigenpairs of a normal matrix through a Hermitian surrogate sharing its
// eigenvectors; blocks where the surrogate is degenerate are resolved by a
// small Schur decomposition. Returns false if the blocks turn out non-normal.
template <typename Real>
bool normal_eigenpairs(const CMatrix<Real>& m, bool real_input, CVector<Real>& values,
                       CMatrix<Real>& vectors) {
  const Eigen::Index n = m.rows();
  CMatrix<Real> q;
  Vector<Real> surrogate;
  if (real_input) {
    const Matrix<Real> re = m.real();
    const Matrix<Real> sym = (re + re.transpose()) / Real(2);
    Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(sym);
    if (solver.info() != Eigen::Success) return false;
    q = solver.eigenvectors().template cast<std::complex<Real>>();
    surrogate = solver.eigenvalues();
  } else {
    // Hermitian part plus an irrational multiple of the skew part.
    const Real t = Real(0.5772156649015329);
    const std::complex<Real> j(Real(0), Real(1));
    const CMatrix<Real> herm = (m + m.adjoint()) / Real(2) + (t / (Real(2) * j)) * (m - m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(herm);
    if (solver.info() != Eigen::Success) return false;
    q = solver.eigenvectors();
    surrogate = solver.eigenvalues();
  }

  const Real scale = std::max(m.norm() / std::sqrt(Real(n)), std::numeric_limits<Real>::min());
  const Real gap = Real(1e-6) * scale;
  const CMatrix<Real> mq = m * q;
  values.resize(n);
  vectors.resize(n, n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && surrogate(end) - surrogate(end - 1) <= gap) ++end;
    const Eigen::Index k = end - start;
    const CMatrix<Real> block = q.middleCols(start, k).adjoint() * mq.middleCols(start, k);
    if (k == 1) {
      values(start) = block(0, 0);
      vectors.col(start) = q.col(start);
    } else {
      Eigen::ComplexSchur<CMatrix<Real>> schur(block);
      if (schur.info() != Eigen::Success) return false;
      const CMatrix<Real>& tri = schur.matrixT();
      const Real off = tri.template triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
      if (off > Real(1e-8) * std::max(block.norm(), scale)) return false;
      values.segment(start, k) = tri.diagonal();
      vectors.middleCols(start, k) = q.middleCols(start, k) * schur.matrixU();
    }
    start = end;
  }
  return true;
}

/// Diagonalizes a square complex matrix: M = U diag(values) U^-1, with
/// deterministic ordering and canonical bases inside eigenvalue clusters.
/// Throws NotDiagonalizable when M is defective or U is too ill conditioned.
template <typename Real>
Diagonalization<Real> diagonalize(const CMatrix<Real>& m, const DiagonalizeOptions<Real>& opt = {}) {
  using Complex = std::complex<Real>;
  const Eigen::Index n = m.rows();
  const bool real_input = m.imag().isZero(Real(0));
  const Real scale = std::max(m.norm() / std::sqrt(Real(n)), std::numeric_limits<Real>::min());

  Diagonalization<Real> out;
  CVector<Real> values;
  CMatrix<Real> vectors;
  bool normal = is_normal(m) && normal_eigenpairs(m, real_input, values, vectors);

  if (!normal) {
    Eigen::ComplexEigenSolver<CMatrix<Real>> solver(m);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::NotDiagonalizable, "eigenvalue iteration did not converge");
    }
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  const Real radius = values.size() ? values.cwiseAbs().maxCoeff() : Real(0);
  out.snap_tol = opt.snap_rel * radius;
  snap(values, out.snap_tol, opt.snap_mode);

  const Real cluster_tol = opt.cluster_rel * std::max(radius, scale);
  for (const auto& group : cluster(values, cluster_tol)) {
    if (group.size() == 1) continue;
    const Eigen::Index k = static_cast<Eigen::Index>(group.size());
    Complex mean(0);
    for (Eigen::Index i : group) mean += values(i);
    mean /= Real(k);
    if (std::abs(mean.imag()) <= out.snap_tol) mean = Complex(mean.real(), Real(0));

    CMatrix<Real> basis(n, k);
    if (normal) {
      for (Eigen::Index c = 0; c < k; ++c) basis.col(c) = vectors.col(group[static_cast<std::size_t>(c)]);
    } else {
      // Geometric multiplicity must match the cluster size.
      const CMatrix<Real> shifted = m - mean * CMatrix<Real>::Identity(n, n);
      Eigen::BDCSVD<CMatrix<Real>> svd(shifted, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (sv(n - k) > Real(1e-6) * scale) {
        throw Error(ErrorKind::NotDiagonalizable,
                    "eigenvalue cluster of size " + std::to_string(k) + " has a deficient eigenspace");
      }
      basis = svd.matrixV().rightCols(k);
    }
    const CMatrix<Real> canon = canonical_basis(basis);
    for (Eigen::Index c = 0; c < k; ++c) {
      values(group[static_cast<std::size_t>(c)]) = mean;
      vectors.col(group[static_cast<std::size_t>(c)]) = canon.col(c);
    }
  }

  normalize_columns(vectors);
  const auto order = spectral_order(values, vectors, scale);
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = values(order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
  }
  out.normal = normal;

  if (normal) {
    out.vectors_inv = out.vectors.adjoint();
    out.cond = Real(1);
  } else {
    Eigen::BDCSVD<CMatrix<Real>> svd(out.vectors);
    const auto& sv = svd.singularValues();
    out.cond = sv(n - 1) > Real(0) ? sv(0) / sv(n - 1) : std::numeric_limits<Real>::infinity();
    if (!(out.cond <= opt.cond_max)) {
      throw Error(ErrorKind::NotDiagonalizable, "eigenvector matrix is numerically singular");
    }
    out.vectors_inv = out.vectors.partialPivLu().inverse();
  }

  const CMatrix<Real> eye = CMatrix<Real>::Identity(n, n);
  const Real inv_residual = (out.vectors * out.vectors_inv - eye).norm();
  const CMatrix<Real> rebuilt = out.vectors * out.values.asDiagonal() * out.vectors_inv;
  const Real residual = (m - rebuilt).norm();
  if (!(residual <= opt.residual_rel * std::max(Real(1), m.norm())) ||
      !(inv_residual <= opt.residual_rel * std::max(Real(1), out.cond))) {
    throw Error(ErrorKind::NotDiagonalizable, "reconstruction residual too large");
  }
  return out;
}

}  // namespace gfrht::detail
