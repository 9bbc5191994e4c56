#pragma once

#include <complex>

#include "gfrht/detail/diagonalize.hpp"
#include "gfrht/graph.hpp"
#include "gfrht/types.hpp"

namespace gfrht {

/// Eigendecomposition A = U diag(lambda) U^-1 of a diagonalizable adjacency.
///
/// Eigenvalues are ordered by (principal argument, magnitude), ties by the
/// rounded eigenvector. Eigenvalues with |Im| <= im_tol are stored with an
/// exactly zero imaginary part, so spectral classes can be read off directly.
template <typename Real>
struct EigenSystem {
  CVector<Real> eigenvalues;
  CMatrix<Real> vectors;
  CMatrix<Real> vectors_inv;
  Real cond = Real(1);
  Real im_tol = Real(0);
  bool normal = false;

  Eigen::Index n() const noexcept { return eigenvalues.size(); }
};

template <typename Real>
EigenSystem<Real> eigendecompose(const Graph<Real>& g, Real im_tol_rel = Real(1e-9)) {
  detail::DiagonalizeOptions<Real> opt;
  opt.snap_rel = im_tol_rel;
  opt.snap_mode = detail::SnapMode::AllReal;
  auto d = detail::diagonalize<Real>(g.adjacency().template cast<std::complex<Real>>(), opt);
  EigenSystem<Real> eig;
  eig.eigenvalues = std::move(d.values);
  eig.vectors = std::move(d.vectors);
  eig.vectors_inv = std::move(d.vectors_inv);
  eig.cond = d.cond;
  eig.im_tol = d.snap_tol;
  eig.normal = d.normal;
  return eig;
}

}  // namespace gfrht
