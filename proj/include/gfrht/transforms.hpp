#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <utility>

#include "gfrht/detail/diagonalize.hpp"
#include "gfrht/eigensystem.hpp"
#include "gfrht/types.hpp"

namespace gfrht {

/// Graph Fourier transform pair: forward F = U^-1, inverse U.
template <typename Real>
class GftOperator {
 public:
  explicit GftOperator(std::shared_ptr<const EigenSystem<Real>> eig) : eig_(std::move(eig)) {}

  const CMatrix<Real>& forward() const noexcept { return eig_->vectors_inv; }
  const CMatrix<Real>& inverse() const noexcept { return eig_->vectors; }
  const EigenSystem<Real>& eig() const noexcept { return *eig_; }
  std::shared_ptr<const EigenSystem<Real>> eig_ptr() const noexcept { return eig_; }
  Eigen::Index n() const noexcept { return eig_->n(); }

 private:
  std::shared_ptr<const EigenSystem<Real>> eig_;
};

template <typename Real>
GftOperator<Real> gft_operator(std::shared_ptr<const EigenSystem<Real>> eig) {
  return GftOperator<Real>(std::move(eig));
}

template <typename Real>
GftOperator<Real> gft_operator(const EigenSystem<Real>& eig) {
  return GftOperator<Real>(std::make_shared<const EigenSystem<Real>>(eig));
}

/// Largest |alpha| accepted by the fractional transforms.
inline constexpr double kMaxFractionalOrder = 8.0;

/// Fractional powers F^alpha = V D^alpha V^-1 of a GFT matrix, with the
/// principal branch of d^alpha. Orders 0 and +-1 use I, F and U directly.
/// Materialized powers are cached by alpha rounded to 12 decimals; the cache is
/// shared between copies and safe for concurrent readers.
template <typename Real>
class FrftOperator {
 public:
  FrftOperator(CMatrix<Real> v, CVector<Real> d, CMatrix<Real> v_inv, Real cond,
               std::shared_ptr<const EigenSystem<Real>> gft_eig = nullptr)
      : v_(std::move(v)), d_(std::move(d)), v_inv_(std::move(v_inv)), cond_(cond),
        gft_eig_(std::move(gft_eig)), cache_(std::make_shared<Cache>()) {}

  const CMatrix<Real>& v() const noexcept { return v_; }
  const CVector<Real>& d() const noexcept { return d_; }
  const CMatrix<Real>& v_inv() const noexcept { return v_inv_; }
  /// 2-norm condition number of V.
  Real cond() const noexcept { return cond_; }
  Eigen::Index n() const noexcept { return d_.size(); }

  /// d^alpha with principal logarithm; 0^alpha = 0 for alpha > 0.
  CVector<Real> eigen_power(Real alpha) const {
    check_order(alpha);
    CVector<Real> out(d_.size());
    for (Eigen::Index k = 0; k < d_.size(); ++k) {
      const std::complex<Real> dk = d_(k);
      if (dk == std::complex<Real>(0)) {
        if (alpha <= Real(0)) {
          throw Error(ErrorKind::ZeroEigenvalueNegativePower, "0^alpha with alpha <= 0");
        }
        out(k) = std::complex<Real>(0);
      } else {
        out(k) = std::exp(alpha * std::log(dk));
      }
    }
    return out;
  }

  /// F^alpha x without materializing F^alpha. alpha == 0 returns x exactly.
  CVector<Real> apply(Real alpha, const CVector<Real>& x) const {
    check_order(alpha);
    if (x.size() != n()) {
      throw Error(ErrorKind::LengthMismatch, "signal length does not match the operator");
    }
    if (alpha == Real(0)) return x;
    if (gft_eig_ && alpha == Real(1)) return gft_eig_->vectors_inv * x;
    if (gft_eig_ && alpha == Real(-1)) return gft_eig_->vectors * x;
    const CVector<Real> coeffs = v_inv_ * x;
    return v_ * eigen_power(alpha).cwiseProduct(coeffs);
  }

  /// Materialized F^alpha, cached. alpha == 0 yields the exact identity.
  std::shared_ptr<const CMatrix<Real>> power(Real alpha) const {
    check_order(alpha);
    const long long key = std::llround(static_cast<double>(alpha) * 1e12);
    {
      std::shared_lock lock(cache_->mutex);
      auto it = cache_->entries.find(key);
      if (it != cache_->entries.end()) return it->second;
    }
    std::shared_ptr<const CMatrix<Real>> m;
    if (alpha == Real(0)) {
      m = std::make_shared<const CMatrix<Real>>(CMatrix<Real>::Identity(n(), n()));
    } else if (gft_eig_ && alpha == Real(1)) {
      m = std::make_shared<const CMatrix<Real>>(gft_eig_->vectors_inv);
    } else if (gft_eig_ && alpha == Real(-1)) {
      m = std::make_shared<const CMatrix<Real>>(gft_eig_->vectors);
    } else {
      m = std::make_shared<const CMatrix<Real>>(v_ * eigen_power(alpha).asDiagonal() * v_inv_);
    }
    std::unique_lock lock(cache_->mutex);
    return cache_->entries.emplace(key, std::move(m)).first->second;
  }

  std::size_t cached_powers() const {
    std::shared_lock lock(cache_->mutex);
    return cache_->entries.size();
  }

 private:
  struct Cache {
    mutable std::shared_mutex mutex;
    std::map<long long, std::shared_ptr<const CMatrix<Real>>> entries;
  };

  static void check_order(Real alpha) {
    if (!(std::abs(alpha) <= Real(kMaxFractionalOrder))) {
      throw Error(ErrorKind::AlphaOutOfRange, "|alpha| must not exceed 8");
    }
  }

  CMatrix<Real> v_;
  CVector<Real> d_;
  CMatrix<Real> v_inv_;
  Real cond_;
  std::shared_ptr<const EigenSystem<Real>> gft_eig_;
  std::shared_ptr<Cache> cache_;
};

/// Eigendecomposes F itself. Near-degenerate eigenvalues of F (relative gap
/// below 1e-8) share one value and a canonical orthonormal basis.
template <typename Real>
FrftOperator<Real> frft_operator(const GftOperator<Real>& gft) {
  detail::DiagonalizeOptions<Real> opt;
  opt.snap_mode = detail::SnapMode::NegativeReal;
  auto d = detail::diagonalize<Real>(gft.forward(), opt);
  return FrftOperator<Real>(std::move(d.vectors), std::move(d.values), std::move(d.vectors_inv), d.cond,
                           gft.eig_ptr());
}

/// Graph fractional Fourier transform F^alpha x.
template <typename Real, typename Derived>
CVector<Real> gfrft(const FrftOperator<Real>& op, Real alpha, const Eigen::MatrixBase<Derived>& x) {
  return op.apply(alpha, x.template cast<std::complex<Real>>());
}

/// Inverse transform, i.e. the transform of order -alpha.
template <typename Real, typename Derived>
CVector<Real> igfrft(const FrftOperator<Real>& op, Real alpha, const Eigen::MatrixBase<Derived>& xhat) {
  return op.apply(-alpha, xhat.template cast<std::complex<Real>>());
}

}  // namespace gfrht
