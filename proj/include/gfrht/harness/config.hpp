#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfrht/generators.hpp"

namespace gfrht::harness {

enum class Kind { Sweep, Edges, AnomalyDensity, AnomalyTypes };

const char* to_string(Kind kind) noexcept;
Kind parse_kind(const std::string& name);

/// None is the empty anomaly (zero signal, no ground truth) used to exercise
/// the degenerate SNR path.
enum class AnomalyKind { Low, High, Impulse, None };

const char* to_string(AnomalyKind kind) noexcept;

/// Effective experiment configuration after defaults and CLI overrides.
///
/// JSON schema (all keys optional unless noted):
///   kind           "sweep" | "edges" | "anomaly-density" | "anomaly-types" (required)
///   seed           unsigned integer; required for the anomaly kinds
///   seeds          number of consecutive seeds in a batch (anomaly kinds), default 1
///   alpha          number or list of numbers
///   beta | beta_pi number or list; beta in radians, beta_pi in multiples of pi
///   graph          {"type": "social5" | "cycle" | "grid2d" | "community" | "scale_free" | "file", ...}
///   signal         list of numbers (sweep)
///   image          path to a P2 PGM image, relative to the config file (edges, required)
///   k              precision cutoff (anomaly-density), default 6
///   densities      list of inter-community densities (anomaly-density)
///   truth_labels   1-based anomaly node labels (anomaly-density), default 18..23
///   communities, size  community layout (anomaly-density), default 10 x 6
///   graphs         list of graph objects (anomaly-types)
///   anomalies      subset of ["low", "high", "impulse", "none"] (anomaly-types)
///   noise_sigma    additive Gaussian noise (anomaly-types), default 0.1
///   alpha_grid, beta_pi_grid  search grids (anomaly-types), default 0:0.1:2 each
///   threads        grid-search workers, default 1
///   output_dir     default "out"
struct ExperimentConfig {
  Kind kind = Kind::Sweep;
  std::optional<std::uint64_t> seed;
  int seeds = 1;
  std::vector<double> alpha;
  std::vector<double> beta;  // radians
  std::optional<GraphSpec> graph;
  std::optional<std::filesystem::path> adjacency_path;
  std::vector<double> signal;
  std::filesystem::path image_path;
  int k = 6;
  std::vector<double> densities;
  std::vector<int> truth_labels;
  int communities = 10;
  int community_size = 6;
  std::vector<GraphSpec> graphs;
  std::vector<AnomalyKind> anomalies;
  double noise_sigma = 0.1;
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;  // radians
  unsigned threads = 1;
  std::filesystem::path output_dir = "out";

  /// Canonical JSON of the effective configuration (what the provenance block
  /// embeds and hashes).
  nlohmann::ordered_json canonical;
};

/// Applies defaults for cfg["kind"]; relative paths resolve against base_dir.
/// Throws Error(ErrorKind::Config) on schema violations.
ExperimentConfig parse_config(const nlohmann::json& cfg, const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override = std::nullopt,
                              std::optional<std::filesystem::path> out_override = std::nullopt);

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt,
                             std::optional<std::filesystem::path> out_override = std::nullopt);

GraphSpec parse_graph_spec(const nlohmann::json& j);
nlohmann::ordered_json graph_spec_json(const GraphSpec& spec);

/// FNV-1a 64-bit hash, hex encoded.
std::string fnv1a_hex(const std::string& text);

}  // namespace gfrht::harness
