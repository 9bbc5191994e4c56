#include "gfrht/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace gfrht {

namespace {

std::vector<bool> membership(const IndexSet& truth, Eigen::Index n) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (Eigen::Index i : truth) {
    if (i < 0 || i >= n) throw Error(ErrorKind::LengthMismatch, "truth index out of range");
    in[static_cast<std::size_t>(i)] = true;
  }
  return in;
}

std::array<double, 256> histogram(const Matrix<double>& image) {
  std::array<double, 256> h{};
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    const double v = std::clamp(image.data()[i], 0.0, 1.0);
    const int bin = std::min(255, static_cast<int>(v * 256.0));
    h[static_cast<std::size_t>(bin)] += 1.0;
  }
  return h;
}

}  // namespace

double snr_db(const Vector<double>& y, const IndexSet& truth) {
  const auto in = membership(truth, y.size());
  const auto anomalies = static_cast<Eigen::Index>(std::count(in.begin(), in.end(), true));
  const Eigen::Index background = y.size() - anomalies;
  if (anomalies == 0 || background == 0) {
    throw Error(ErrorKind::DegenerateBackground, "truth must be a nonempty proper subset of the nodes");
  }
  double mu = 0, bg_mean = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    (in[static_cast<std::size_t>(i)] ? mu : bg_mean) += std::abs(y(i));
  }
  mu /= static_cast<double>(anomalies);
  bg_mean /= static_cast<double>(background);
  double var = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (in[static_cast<std::size_t>(i)]) continue;
    const double d = std::abs(y(i)) - bg_mean;
    var += d * d;
  }
  const double sigma = std::sqrt(var / static_cast<double>(background));
  if (!(sigma > 0.0)) throw Error(ErrorKind::DegenerateBackground, "background responses have zero spread");
  return 20.0 * std::log10(mu / sigma);
}

double precision_at_k(const Vector<double>& y, const IndexSet& truth, Eigen::Index k) {
  if (k < 1 || k > y.size()) throw Error(ErrorKind::KTooLarge, "k must lie in [1, n]");
  const auto in = membership(truth, y.size());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(y.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(y(a)) > std::abs(y(b)); });
  Eigen::Index hits = 0;
  for (Eigen::Index r = 0; r < k; ++r) hits += in[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

double rmse(const Vector<double>& y, const Vector<double>& g) {
  if (y.size() != g.size()) throw Error(ErrorKind::LengthMismatch, "rmse operands differ in length");
  if (y.size() == 0) return 0.0;
  return std::sqrt((y - g).squaredNorm() / static_cast<double>(y.size()));
}

double normalized_entropy(const Matrix<double>& image) {
  const auto h = histogram(image);
  const double total = static_cast<double>(image.size());
  double e = 0;
  for (double c : h) {
    if (c > 0) {
      const double p = c / total;
      e -= p * std::log2(p);
    }
  }
  return e / 8.0;
}

double ssim(const Matrix<double>& a, const Matrix<double>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::ShapeMismatch, "SSIM operands differ in shape");
  constexpr int w = 8;
  if (a.rows() < w || a.cols() < w) throw Error(ErrorKind::ShapeMismatch, "SSIM needs images of at least 8x8");
  constexpr double sigma = 1.5;
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  std::array<double, w * w> weight{};
  double sum = 0;
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < w; ++j) {
      const double di = i - (w - 1) / 2.0;
      const double dj = j - (w - 1) / 2.0;
      weight[static_cast<std::size_t>(i * w + j)] = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
      sum += weight[static_cast<std::size_t>(i * w + j)];
    }
  }
  for (double& v : weight) v /= sum;

  double total = 0;
  Eigen::Index windows = 0;
  for (Eigen::Index r = 0; r + w <= a.rows(); ++r) {
    for (Eigen::Index c = 0; c + w <= a.cols(); ++c) {
      double ma = 0, mb = 0;
      for (int i = 0; i < w; ++i) {
        for (int j = 0; j < w; ++j) {
          const double k = weight[static_cast<std::size_t>(i * w + j)];
          ma += k * a(r + i, c + j);
          mb += k * b(r + i, c + j);
        }
      }
      double va = 0, vb = 0, cov = 0;
      for (int i = 0; i < w; ++i) {
        for (int j = 0; j < w; ++j) {
          const double k = weight[static_cast<std::size_t>(i * w + j)];
          const double da = a(r + i, c + j) - ma;
          const double db = b(r + i, c + j) - mb;
          va += k * da * da;
          vb += k * db * db;
          cov += k * da * db;
        }
      }
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

double otsu_threshold(const Matrix<double>& image) {
  const auto h = histogram(image);
  const double total = static_cast<double>(image.size());
  double sum_all = 0;
  for (int i = 0; i < 256; ++i) sum_all += i * h[static_cast<std::size_t>(i)];
  double w0 = 0, sum0 = 0, best = -1;
  int best_t = 0;
  for (int t = 0; t < 255; ++t) {
    w0 += h[static_cast<std::size_t>(t)];
    sum0 += t * h[static_cast<std::size_t>(t)];
    const double w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return (best_t + 1) / 256.0;
}

double edge_density(const Matrix<double>& image) {
  if (image.size() == 0) return 0.0;
  const double t = otsu_threshold(image);
  return static_cast<double>((image.array() > t).count()) / static_cast<double>(image.size());
}

MetricReport image_metrics(const Matrix<double>& edge_map, const Matrix<double>& reference) {
  if (edge_map.rows() != reference.rows() || edge_map.cols() != reference.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "edge map and reference differ in shape");
  }
  MetricReport r;
  r.entropy = normalized_entropy(edge_map);
  r.ssim = ssim(edge_map, reference);
  r.edge_density = edge_density(edge_map);
  return r;
}

Matrix<double> min_max_normalize(const Matrix<double>& m) {
  if (m.size() == 0) return m;
  const double lo = m.minCoeff();
  const double hi = m.maxCoeff();
  if (!(hi > lo)) return Matrix<double>::Zero(m.rows(), m.cols());
  return (m.array() - lo) / (hi - lo);
}

}  // namespace gfrht
