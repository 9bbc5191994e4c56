#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "gfrht/eigensystem.hpp"
#include "gfrht/transforms.hpp"
#include "gfrht/types.hpp"

namespace gfrht {

/// Sign class of Im(lambda_k).
enum class SpectralClass { PosIm, Zero, NegIm };

template <typename Real>
SpectralClass classify(const std::complex<Real>& lambda, Real im_tol) {
  if (lambda.imag() > im_tol) return SpectralClass::PosIm;
  if (lambda.imag() < -im_tol) return SpectralClass::NegIm;
  return SpectralClass::Zero;
}

namespace detail {

// Angle as a fraction of a full turn, reduced to [0, 1) and quantized to
// 2^-40 turns so that beta and beta + 2*pi land on the same value.
template <typename Real>
Real turn_fraction(Real beta) {
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  Real turns = beta / two_pi;
  turns -= std::floor(turns);
  constexpr Real quantum = Real(1099511627776.0);  // 2^40
  turns = std::round(turns * quantum) / quantum;
  if (turns >= Real(1)) turns -= Real(1);
  return turns;
}

// cos and sin of 2*pi*turns, exact at quarter turns.
template <typename Real>
std::pair<Real, Real> turn_cos_sin(Real turns) {
  const Real quarters = turns * Real(4);
  if (quarters == std::floor(quarters)) {
    switch (static_cast<int>(quarters)) {
      case 0: return {Real(1), Real(0)};
      case 1: return {Real(0), Real(1)};
      case 2: return {Real(-1), Real(0)};
      default: return {Real(0), Real(-1)};
    }
  }
  const Real angle = Real(2) * std::numbers::pi_v<Real> * turns;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

/// Diagonal of the fractional transfer function:
/// e^{-j beta} (Im > 0), cos beta (Im = 0), e^{j beta} (Im < 0).
template <typename Real>
struct TransferDiag {
  CVector<Real> entries;
  Real beta = Real(0);
  std::vector<SpectralClass> classes;
};

template <typename Real>
TransferDiag<Real> transfer_diag(const EigenSystem<Real>& eigs, Real beta) {
  const Real turns = detail::turn_fraction(beta);
  const auto [c, s] = detail::turn_cos_sin(turns);
  TransferDiag<Real> out;
  out.beta = Real(2) * std::numbers::pi_v<Real> * turns;
  out.entries.resize(eigs.n());
  out.classes.reserve(static_cast<std::size_t>(eigs.n()));
  for (Eigen::Index k = 0; k < eigs.n(); ++k) {
    const SpectralClass cls = classify(eigs.eigenvalues(k), eigs.im_tol);
    out.classes.push_back(cls);
    switch (cls) {
      case SpectralClass::PosIm: out.entries(k) = {c, -s}; break;
      case SpectralClass::Zero: out.entries(k) = {c, Real(0)}; break;
      case SpectralClass::NegIm: out.entries(k) = {c, s}; break;
    }
  }
  return out;
}

/// Parameters (alpha, beta) bound to the operators of one graph. beta is
/// stored reduced modulo 2*pi.
template <typename Real>
class HilbertConfig {
 public:
  HilbertConfig(std::shared_ptr<const FrftOperator<Real>> frft, std::shared_ptr<const EigenSystem<Real>> eig,
                Real alpha, Real beta)
      : frft_(std::move(frft)), eig_(std::move(eig)), alpha_(alpha),
        transfer_(transfer_diag(*eig_, beta)) {
    if (!(std::abs(alpha) <= Real(kMaxFractionalOrder))) {
      throw Error(ErrorKind::AlphaOutOfRange, "|alpha| must not exceed 8");
    }
  }

  Real alpha() const noexcept { return alpha_; }
  Real beta() const noexcept { return transfer_.beta; }
  const FrftOperator<Real>& frft() const noexcept { return *frft_; }
  const EigenSystem<Real>& eig() const noexcept { return *eig_; }
  const TransferDiag<Real>& transfer() const noexcept { return transfer_; }

  HilbertConfig with(Real alpha, Real beta) const { return HilbertConfig(frft_, eig_, alpha, beta); }

 private:
  std::shared_ptr<const FrftOperator<Real>> frft_;
  std::shared_ptr<const EigenSystem<Real>> eig_;
  Real alpha_;
  TransferDiag<Real> transfer_;
};

/// Conventional graph Hilbert transform U (mask o U^-1 x) with the mask
/// -j / 0 / j by the sign of Im(lambda_k).
template <typename Real, typename Derived>
CVector<Real> ght(const GftOperator<Real>& gft, const EigenSystem<Real>& eigs, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != eigs.n()) throw Error(ErrorKind::LengthMismatch, "signal length does not match the graph");
  CVector<Real> spectrum = gft.forward() * x.template cast<std::complex<Real>>();
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
    switch (classify(eigs.eigenvalues(k), eigs.im_tol)) {
      case SpectralClass::PosIm: spectrum(k) *= std::complex<Real>(0, -1); break;
      case SpectralClass::Zero: spectrum(k) = 0; break;
      case SpectralClass::NegIm: spectrum(k) *= std::complex<Real>(0, 1); break;
    }
  }
  return gft.inverse() * spectrum;
}

/// Graph fractional Hilbert transform: forward transform of order alpha, mask,
/// transform of order -alpha. The result is complex in general.
template <typename Real, typename Derived>
CVector<Real> gfrht(const HilbertConfig<Real>& cfg, const Eigen::MatrixBase<Derived>& x) {
  const CVector<Real> forward = cfg.frft().apply(cfg.alpha(), x.template cast<std::complex<Real>>());
  const CVector<Real> masked = forward.cwiseProduct(cfg.transfer().entries);
  return cfg.frft().apply(-cfg.alpha(), masked);
}

/// Fractional-domain convolution kernel F^-alpha h_beta.
template <typename Real>
CVector<Real> fractional_kernel(const HilbertConfig<Real>& cfg) {
  return cfg.frft().apply(-cfg.alpha(), cfg.transfer().entries);
}

/// Fractional shift operator A_alpha = F^-alpha Lambda F^alpha.
template <typename Real>
CMatrix<Real> fractional_shift(const FrftOperator<Real>& op, const EigenSystem<Real>& eigs, Real alpha) {
  const auto fwd = op.power(alpha);
  const auto inv = op.power(-alpha);
  return *inv * eigs.eigenvalues.asDiagonal() * *fwd;
}

/// Coefficients h of the polynomial sum_l h_l lambda^l that interpolates the
/// transfer function on the distinct eigenvalues.
template <typename Real>
CVector<Real> poly_filter_coeffs(const EigenSystem<Real>& eigs, Real beta) {
  const TransferDiag<Real> transfer = transfer_diag(eigs, beta);
  const Real scale = std::max(eigs.eigenvalues.cwiseAbs().maxCoeff(), Real(1));
  std::vector<std::complex<Real>> nodes;
  std::vector<std::complex<Real>> targets;
  for (Eigen::Index k = 0; k < eigs.n(); ++k) {
    bool seen = false;
    for (const auto& mu : nodes) {
      if (std::abs(mu - eigs.eigenvalues(k)) <= Real(1e-12) * scale) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      nodes.push_back(eigs.eigenvalues(k));
      targets.push_back(transfer.entries(k));
    }
  }
  const auto L = static_cast<Eigen::Index>(nodes.size());
  CMatrix<Real> vander(L, L);
  CVector<Real> rhs(L);
  for (Eigen::Index i = 0; i < L; ++i) {
    std::complex<Real> p(1);
    for (Eigen::Index l = 0; l < L; ++l) {
      vander(i, l) = p;
      p *= nodes[static_cast<std::size_t>(i)];
    }
    rhs(i) = targets[static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<CMatrix<Real>> svd(vander);
  const auto& sv = svd.singularValues();
  const Real cond = sv(L - 1) > Real(0) ? sv(0) / sv(L - 1) : std::numeric_limits<Real>::infinity();
  if (!(cond <= Real(1e12))) {
    throw Error(ErrorKind::IllConditionedVandermonde, "Vandermonde condition estimate exceeds 1e12");
  }
  const CVector<Real> h = vander.colPivHouseholderQr().solve(rhs);
  if (!((vander * h - rhs).norm() <= Real(1e-8) * std::max(rhs.norm(), Real(1)))) {
    throw Error(ErrorKind::IllConditionedVandermonde, "Vandermonde residual exceeds tolerance");
  }
  return h;
}

/// Polynomial filter sum_l h_l A_alpha^l x, evaluated with Horner's scheme.
template <typename Real, typename Derived>
CVector<Real> poly_filter_apply(const HilbertConfig<Real>& cfg, const CVector<Real>& h,
                                const Eigen::MatrixBase<Derived>& x) {
  const CVector<Real> xc = x.template cast<std::complex<Real>>();
  if (xc.size() != cfg.eig().n()) throw Error(ErrorKind::LengthMismatch, "signal length does not match the graph");
  if (h.size() == 0) return CVector<Real>::Zero(xc.size());
  if (h.size() == 1) return h(0) * xc;
  const CMatrix<Real> shift = fractional_shift(cfg.frft(), cfg.eig(), cfg.alpha());
  CVector<Real> y = h(h.size() - 1) * xc;
  for (Eigen::Index l = h.size() - 2; l >= 0; --l) y = shift * y + h(l) * xc;
  return y;
}

}  // namespace gfrht
