#pragma once

#include <functional>
#include <vector>

namespace gfrht {

struct GridPoint {
  double alpha = 0;
  double beta = 0;
  double objective = 0;
  bool failed = false;  // objective was NaN or threw; recorded as -inf
};

struct GridResult {
  double alpha_star = 0;
  double beta_star = 0;
  double objective_star = 0;
  /// Row-major over (alpha, beta) in the order of the input grids.
  std::vector<GridPoint> surface;
  std::size_t failures = 0;
};

using Objective = std::function<double(double alpha, double beta)>;

/// alpha in {0.0, 0.1, ..., 2.0}.
std::vector<double> default_alpha_grid();

/// beta = p * pi / 2 with p in {0.0, 0.1, ..., 2.0}.
std::vector<double> default_beta_grid();

/// Exhaustive search for the maximum. Evaluations may run on `threads`
/// workers; the reduction is independent of completion order, ties go to the
/// smaller alpha and then the smaller beta.
GridResult grid_search(const Objective& objective, const std::vector<double>& alpha_grid,
                       const std::vector<double>& beta_grid, unsigned threads = 1);

}  // namespace gfrht
