#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace gfrht {

template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

enum class ErrorKind {
  NonSquare,
  NonFiniteEntry,
  TooSmall,
  ZeroSpectralRadius,
  NotDiagonalizable,
  BadSpec,
  ZeroEigenvalueNegativePower,
  AlphaOutOfRange,
  LengthMismatch,
  IllConditionedVandermonde,
  DegenerateBackground,
  KTooLarge,
  CheckFailed,
  ShapeMismatch,
  BadImage,
  Config,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-readable kind. Numerical kinds map to CLI exit
/// code 3, everything else to 2 (see is_numerical).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

bool is_numerical(ErrorKind kind) noexcept;

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::ZeroSpectralRadius: return "ZeroSpectralRadius";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::ZeroEigenvalueNegativePower: return "ZeroEigenvalueNegativePower";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::IllConditionedVandermonde: return "IllConditionedVandermonde";
    case ErrorKind::DegenerateBackground: return "DegenerateBackground";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::CheckFailed: return "CheckFailed";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BadImage: return "BadImage";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

inline bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroSpectralRadius:
    case ErrorKind::NotDiagonalizable:
    case ErrorKind::ZeroEigenvalueNegativePower:
    case ErrorKind::IllConditionedVandermonde:
    case ErrorKind::DegenerateBackground:
    case ErrorKind::CheckFailed:
      return true;
    default:
      return false;
  }
}

}  // namespace gfrht
