#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "gfrht/types.hpp"

namespace gfrht {

/// Directed weighted graph on n >= 2 vertices. The adjacency entry (i, j) is
/// the weight of the edge i -> j. Immutable once built.
template <typename Real>
class Graph {
 public:
  using Scalar = Real;

  Graph(Matrix<Real> adjacency, std::string label)
      : adjacency_(std::move(adjacency)), label_(std::move(label)) {}

  Eigen::Index n() const noexcept { return adjacency_.rows(); }
  const Matrix<Real>& adjacency() const noexcept { return adjacency_; }
  const std::string& label() const noexcept { return label_; }

 private:
  Matrix<Real> adjacency_;
  std::string label_;
};

/// Validates a dense adjacency matrix and wraps it in a Graph.
template <typename Derived>
Graph<typename Derived::Scalar> build_graph(const Eigen::MatrixBase<Derived>& adjacency,
                                            std::string label) {
  using Real = typename Derived::Scalar;
  if (adjacency.rows() != adjacency.cols()) {
    throw Error(ErrorKind::NonSquare, "adjacency is " + std::to_string(adjacency.rows()) + "x" +
                                          std::to_string(adjacency.cols()));
  }
  if (adjacency.rows() < 2) {
    throw Error(ErrorKind::TooSmall, "a graph needs at least 2 vertices");
  }
  if (!adjacency.allFinite()) {
    throw Error(ErrorKind::NonFiniteEntry, "adjacency contains NaN or Inf");
  }
  return Graph<Real>(Matrix<Real>(adjacency), std::move(label));
}

/// Largest eigenvalue magnitude of a real square matrix.
template <typename Real>
Real spectral_radius(const Matrix<Real>& a) {
  Eigen::EigenSolver<Matrix<Real>> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NotDiagonalizable, "eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Scales A by 1/rho(A) so that the spectral radius becomes 1.
template <typename Real>
Graph<Real> normalize_spectral_radius(const Graph<Real>& g) {
  const Real rho = spectral_radius(g.adjacency());
  const Real scale = g.adjacency().cwiseAbs().maxCoeff();
  if (!(rho > Real(64) * Eigen::NumTraits<Real>::epsilon() * scale)) {
    throw Error(ErrorKind::ZeroSpectralRadius, "spectral radius of '" + g.label() + "' is zero");
  }
  return Graph<Real>(g.adjacency() / rho, g.label());
}

}  // namespace gfrht
