#include "gfrht/generators.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <utility>
#include <vector>

#include "gfrht/random.hpp"

namespace gfrht {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Graph<double> make_social5() {
  Matrix<double> a(5, 5);
  a << 0, 1, 1, 0, 1,
       0, 0, 0, 1, 0,
       0, 0, 0, 1, 0,
       0, 0, 0, 0, 1,
       1, 0, 0, 0, 0;
  return build_graph(a, "social5");
}

Graph<double> make_cycle(const DirectedCycle& spec) {
  if (spec.n < 2) throw Error(ErrorKind::BadSpec, "cycle needs n >= 2");
  return build_graph(cyclic_shift(spec.n), describe(GraphSpec{spec}));
}

Graph<double> make_grid(const Grid2D& spec) {
  if (spec.side < 2) throw Error(ErrorKind::BadSpec, "grid side must be >= 2");
  const int s = spec.side;
  const int n = s * s;
  // C (x) C has a single 1 per row: (i*s + j) -> ((i+1)%s * s + (j+1)%s).
  Matrix<double> a = Matrix<double>::Zero(n, n);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) a(i * s + j, ((i + 1) % s) * s + (j + 1) % s) = 1.0;
  }
  return build_graph(a, describe(GraphSpec{spec}));
}

Graph<double> make_community(const Community& spec, std::uint64_t seed) {
  if (spec.communities < 1 || spec.size < 1 || spec.communities * spec.size < 2) {
    throw Error(ErrorKind::BadSpec, "community sizes must be positive with at least 2 vertices");
  }
  if (!(spec.inter_density > 0.0 && spec.inter_density < 1.0)) {
    throw Error(ErrorKind::BadSpec, "inter_density must lie in (0, 1)");
  }
  const int n = spec.communities * spec.size;
  Rng rng(seed);
  Matrix<double> a = Matrix<double>::Zero(n, n);
  auto block = [&](int v) { return v / spec.size; };
  std::vector<std::pair<int, int>> cross;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (block(i) == block(j)) {
        a(i, j) = rng.uniform();
      } else {
        cross.emplace_back(i, j);
      }
    }
  }
  const auto count = static_cast<std::size_t>(std::llround(spec.inter_density * static_cast<double>(cross.size())));
  for (std::size_t idx : rng.sample(cross.size(), count)) {
    a(cross[idx].first, cross[idx].second) = rng.uniform(0.0, 0.5);
  }
  return normalize_spectral_radius(build_graph(a, describe(GraphSpec{spec})));
}

Graph<double> make_scale_free(const ScaleFree& spec, std::uint64_t seed) {
  if (spec.m < 1 || spec.n < spec.m + 2) throw Error(ErrorKind::BadSpec, "scale-free needs m >= 1 and n >= m + 2");
  Rng rng(seed);
  const int n = spec.n;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> endpoints;  // vertex repeated once per incident edge
  // Seed clique on m + 1 vertices.
  for (int i = 0; i <= spec.m; ++i) {
    for (int j = i + 1; j <= spec.m; ++j) {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  for (int v = spec.m + 1; v < n; ++v) {
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < spec.m) {
      const int t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  Matrix<double> a = Matrix<double>::Zero(n, n);
  for (const auto& [u, v] : edges) {
    if (spec.orientation == Orientation::Bidirectional) {
      a(u, v) = rng.uniform();
      a(v, u) = rng.uniform();
    } else if (rng.uniform() < 0.5) {
      a(u, v) = 1.0;
    } else {
      a(v, u) = 1.0;
    }
  }
  return normalize_spectral_radius(build_graph(a, describe(GraphSpec{spec})));
}

}  // namespace

Matrix<double> cyclic_shift(int side) {
  Matrix<double> c = Matrix<double>::Zero(side, side);
  for (int i = 0; i < side; ++i) c(i, (i + 1) % side) = 1.0;
  return c;
}

Graph<double> generate_graph(const GraphSpec& spec, std::uint64_t seed) {
  return std::visit(overloaded{
                        [](const Social5&) { return make_social5(); },
                        [](const DirectedCycle& s) { return make_cycle(s); },
                        [](const Grid2D& s) { return make_grid(s); },
                        [&](const Community& s) { return make_community(s, seed); },
                        [&](const ScaleFree& s) { return make_scale_free(s, seed); },
                    },
                    spec);
}

std::string describe(const GraphSpec& spec) {
  char buf[128];
  std::visit(overloaded{
                 [&](const Social5&) { std::snprintf(buf, sizeof buf, "social5"); },
                 [&](const DirectedCycle& s) { std::snprintf(buf, sizeof buf, "cycle(%d)", s.n); },
                 [&](const Grid2D& s) { std::snprintf(buf, sizeof buf, "grid2d(%d)", s.side); },
                 [&](const Community& s) {
                   std::snprintf(buf, sizeof buf, "community(%d,%d,%.6g)", s.communities, s.size, s.inter_density);
                 },
                 [&](const ScaleFree& s) {
                   std::snprintf(buf, sizeof buf, "scale_free(%d,%d,%s)", s.n, s.m,
                                 s.orientation == Orientation::Bidirectional ? "bidirectional" : "random");
                 },
             },
             spec);
  return buf;
}

}  // namespace gfrht
