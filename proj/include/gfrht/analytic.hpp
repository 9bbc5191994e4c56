#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gfrht/graph.hpp"
#include "gfrht/hilbert.hpp"
#include "gfrht/types.hpp"

namespace gfrht {

/// Fractional analytic signal and its modulation features.
template <typename Real>
struct AnalyticFeatures {
  CVector<Real> gfras;
  Vector<Real> amplitude;
  Vector<Real> phase;            // wrapped to (-pi, pi]
  Vector<Real> phase_unwrapped;  // sequential unwrap in node order
  Vector<Real> freq_mod;         // phi_u - A phi_u
  Real alpha = Real(0);
  Real beta = Real(0);
  /// Nodes whose analytic-signal magnitude is too small for a phase; their
  /// phase is reported as 0.
  std::vector<Eigen::Index> phase_undefined;
};

/// x + j * GFRHT(x) for a real signal x.
template <typename Real>
CVector<Real> gfras(const HilbertConfig<Real>& cfg, const Vector<Real>& x) {
  const CVector<Real> h = gfrht(cfg, x);
  return x.template cast<std::complex<Real>>() + std::complex<Real>(0, 1) * h;
}

template <typename Real>
Real wrap_phase(Real phi) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  if (phi > -pi && phi <= pi) return phi;
  Real w = std::fmod(phi + pi, Real(2) * pi);
  if (w <= Real(0)) w += Real(2) * pi;
  return w - pi;
}

/// One-dimensional phase unwrapping with jump threshold pi: each step is
/// replaced by its representative in [-pi, pi).
template <typename Real>
Vector<Real> unwrap_phase(const Vector<Real>& phase) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  Vector<Real> out(phase.size());
  if (phase.size() == 0) return out;
  out(0) = phase(0);
  long long turns = 0;
  for (Eigen::Index k = 1; k < phase.size(); ++k) {
    const Real step = phase(k) - phase(k - 1);
    if (std::abs(step) > pi) {
      Real reduced = std::fmod(step + pi, Real(2) * pi);
      if (reduced < Real(0)) reduced += Real(2) * pi;
      reduced -= pi;
      if (reduced == -pi && step > Real(0)) reduced = pi;
      turns += std::llround((reduced - step) / (Real(2) * pi));
    }
    out(k) = phase(k) + Real(2) * pi * Real(turns);
  }
  return out;
}

template <typename Real>
AnalyticFeatures<Real> modulation_features(const HilbertConfig<Real>& cfg, const Graph<Real>& g,
                                           const Vector<Real>& x) {
  if (x.size() != g.n()) throw Error(ErrorKind::LengthMismatch, "signal length does not match the graph");
  AnalyticFeatures<Real> f;
  f.alpha = cfg.alpha();
  f.beta = cfg.beta();
  f.gfras = gfras(cfg, x);
  const Eigen::Index n = f.gfras.size();
  f.amplitude = f.gfras.cwiseAbs();
  const Real peak = n ? f.amplitude.maxCoeff() : Real(0);
  f.phase.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (peak == Real(0) || f.amplitude(k) < Real(1e-12) * peak) {
      f.phase(k) = 0;
      f.phase_undefined.push_back(k);
    } else {
      f.phase(k) = wrap_phase(std::atan2(f.gfras(k).imag(), f.gfras(k).real()));
    }
  }
  f.phase_unwrapped = unwrap_phase(f.phase);
  f.freq_mod = f.phase_unwrapped - g.adjacency() * f.phase_unwrapped;
  return f;
}

}  // namespace gfrht
