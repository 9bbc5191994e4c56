#pragma once

#include <memory>

#include "gfrht/eigensystem.hpp"
#include "gfrht/graph.hpp"
#include "gfrht/hilbert.hpp"
#include "gfrht/transforms.hpp"

namespace gfrht {

/// Everything derived once per graph: eigensystem, GFT pair and fractional
/// operator. Shareable across threads once built.
template <typename Real>
struct SpectralContext {
  std::shared_ptr<const Graph<Real>> graph;
  std::shared_ptr<const EigenSystem<Real>> eig;
  GftOperator<Real> gft;
  std::shared_ptr<const FrftOperator<Real>> frft;

  HilbertConfig<Real> hilbert(Real alpha, Real beta) const { return HilbertConfig<Real>(frft, eig, alpha, beta); }
};

template <typename Real>
SpectralContext<Real> make_context(Graph<Real> g) {
  auto graph = std::make_shared<const Graph<Real>>(std::move(g));
  auto eig = std::make_shared<const EigenSystem<Real>>(eigendecompose(*graph));
  auto gft = gft_operator(eig);
  auto frft = std::make_shared<const FrftOperator<Real>>(frft_operator(gft));
  return SpectralContext<Real>{std::move(graph), std::move(eig), std::move(gft), std::move(frft)};
}

}  // namespace gfrht
