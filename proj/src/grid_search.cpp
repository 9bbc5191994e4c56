#include "gfrht/grid_search.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "gfrht/types.hpp"

namespace gfrht {

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(i / 10.0);
  return g;
}

std::vector<double> default_beta_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back((i / 10.0) * std::numbers::pi / 2.0);
  return g;
}

GridResult grid_search(const Objective& objective, const std::vector<double>& alpha_grid,
                       const std::vector<double>& beta_grid, unsigned threads) {
  if (alpha_grid.empty() || beta_grid.empty()) throw Error(ErrorKind::Config, "grid search needs nonempty grids");
  GridResult result;
  const std::size_t nb = beta_grid.size();
  const std::size_t total = alpha_grid.size() * nb;
  result.surface.resize(total);

  auto evaluate = [&](std::size_t idx) {
    GridPoint& p = result.surface[idx];
    p.alpha = alpha_grid[idx / nb];
    p.beta = beta_grid[idx % nb];
    double v;
    try {
      v = objective(p.alpha, p.beta);
    } catch (const Error&) {
      v = std::numeric_limits<double>::quiet_NaN();
    }
    p.failed = std::isnan(v);
    p.objective = p.failed ? -std::numeric_limits<double>::infinity() : v;
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) evaluate(i);
      });
    }
  }

  const GridPoint* best = nullptr;
  for (const GridPoint& p : result.surface) {
    if (p.failed) ++result.failures;
    const bool better = best == nullptr || p.objective > best->objective ||
                        (p.objective == best->objective &&
                         (p.alpha < best->alpha || (p.alpha == best->alpha && p.beta < best->beta)));
    if (better) best = &p;
  }
  result.alpha_star = best->alpha;
  result.beta_star = best->beta;
  result.objective_star = best->objective;
  return result;
}

}  // namespace gfrht
