#pragma once

#include <optional>
#include <vector>

#include "gfrht/types.hpp"

namespace gfrht {

/// Metrics reported by the experiments; each is present only where it applies.
struct MetricReport {
  std::optional<double> snr_db;
  std::optional<double> precision_at_k;
  std::optional<double> rmse;
  std::optional<double> entropy;
  std::optional<double> ssim;
  std::optional<double> edge_density;
};

using IndexSet = std::vector<Eigen::Index>;

/// 20 log10(mean |y| on truth / population std of |y| off truth).
double snr_db(const Vector<double>& y, const IndexSet& truth);

/// Fraction of the k largest |y| (ties to the lower index) that are in truth.
double precision_at_k(const Vector<double>& y, const IndexSet& truth, Eigen::Index k);

double rmse(const Vector<double>& y, const Vector<double>& g);

/// Shannon entropy of the 256-bin histogram of values in [0, 1], divided by 8.
double normalized_entropy(const Matrix<double>& image);

/// Mean SSIM over all valid 8x8 windows, Gaussian weights (sigma 1.5),
/// C1 = 0.01^2, C2 = 0.03^2 for unit dynamic range.
double ssim(const Matrix<double>& a, const Matrix<double>& b);

/// Otsu threshold of the 256-bin histogram, as the upper edge of the last
/// background bin.
double otsu_threshold(const Matrix<double>& image);

/// Fraction of pixels strictly above the Otsu threshold.
double edge_density(const Matrix<double>& image);

/// Entropy, SSIM against the reference and edge density of an edge map.
MetricReport image_metrics(const Matrix<double>& edge_map, const Matrix<double>& reference);

/// (x - min) / (max - min); a zero-range input maps to all zeros.
Matrix<double> min_max_normalize(const Matrix<double>& m);

}  // namespace gfrht
