#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "gfrht/graph.hpp"

namespace gfrht {

/// The 5-node directed social network (Alice, Bob, Charlie, David, Eve).
struct Social5 {};

/// Directed cycle 0 -> 1 -> ... -> n-1 -> 0.
struct DirectedCycle {
  int n = 4;
};

/// Image grid graph C (x) C with C the side x side cyclic shift.
struct Grid2D {
  int side = 8;
};

/// Dense communities with U(0,1) intra weights and round(density * P) inter
/// edges of weight U(0, 0.5), P = number of ordered cross-community pairs.
struct Community {
  int communities = 10;
  int size = 6;
  double inter_density = 0.01;
};

enum class Orientation {
  /// Each undirected edge becomes two arcs with independent U(0,1) weights.
  Bidirectional,
  /// Each undirected edge gets one arc, direction uniform, weight 1.
  Random,
};

/// Preferential attachment: each new vertex attaches m edges.
struct ScaleFree {
  int n = 50;
  int m = 2;
  Orientation orientation = Orientation::Bidirectional;
};

using GraphSpec = std::variant<Social5, DirectedCycle, Grid2D, Community, ScaleFree>;

/// Deterministic in (spec, seed). Community and ScaleFree graphs come back
/// normalized to spectral radius 1; the others are raw.
Graph<double> generate_graph(const GraphSpec& spec, std::uint64_t seed);

std::string describe(const GraphSpec& spec);

/// side x side cyclic shift matrix, C(i, i+1 mod side) = 1.
Matrix<double> cyclic_shift(int side);

}  // namespace gfrht
