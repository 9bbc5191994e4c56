#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfrht/context.hpp"
#include "gfrht/grid_search.hpp"
#include "gfrht/harness/config.hpp"
#include "gfrht/metrics.hpp"

namespace gfrht::harness {

/// Files produced by a run (name -> content) plus the JSON summary. Nothing
/// in here depends on wall-clock time or the host, so equal configs give
/// byte-identical output.
struct ExperimentReport {
  Kind kind = Kind::Sweep;
  nlohmann::ordered_json summary;
  std::map<std::string, std::string> files;
};

void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// Provenance block: seed, config hash and the canonical config.
nlohmann::ordered_json provenance(const ExperimentConfig& cfg);

// --- sweep -----------------------------------------------------------------

struct SweepPanel {
  double alpha = 0;
  double beta = 0;
  CVector<double> output;
};

struct SweepResult {
  Vector<double> signal;
  CVector<double> ght;
  std::vector<SweepPanel> panels;
  double identity_error = 0;  // max over beta = 0 panels of |H(x) - x|
  double ght_error = 0;       // |H_{1,pi/2}(x) - GHT(x)| when that panel exists
  bool checks_passed = true;
};

SweepResult sweep(const ExperimentConfig& cfg);
ExperimentReport run_sweep(const ExperimentConfig& cfg);

// --- edges -----------------------------------------------------------------

struct EdgesResult {
  int side = 0;
  double alpha = 0;
  double beta = 0;
  Matrix<double> image;  // min-max normalized input
  Matrix<double> ght_map;
  Matrix<double> gfrht_map;
  MetricReport ght;
  MetricReport gfrht;
  double ssim_ght_vs_gfrht = 0;
};

/// Operators of Grid2D{side}; expensive for large sides, so callers running
/// several images of one size can build it once.
SpectralContext<double> grid_context(int side);

EdgesResult edges(const ExperimentConfig& cfg, const SpectralContext<double>* grid = nullptr);
ExperimentReport run_edges(const ExperimentConfig& cfg, const SpectralContext<double>* grid = nullptr);

// --- anomaly localization under varying density -------------------------------

struct DensityRun {
  double density = 0;
  std::uint64_t seed = 0;
  Vector<double> ght_response;
  Vector<double> gfrht_response;
  MetricReport ght;
  MetricReport gfrht;
};

struct DensityResult {
  IndexSet truth;  // 0-based
  Vector<double> signal;
  std::vector<DensityRun> runs;
};

DensityResult anomaly_density(const ExperimentConfig& cfg);
ExperimentReport run_anomaly_density(const ExperimentConfig& cfg);

// --- anomaly types with grid search -------------------------------------------

/// Signal and ground truth for one anomaly instance.
struct AnomalySignal {
  Vector<double> x;
  IndexSet truth;
};

AnomalySignal make_anomaly_signal(const EigenSystem<double>& eig, AnomalyKind kind, double noise_sigma,
                                  std::uint64_t seed);

struct TypesRun {
  std::string graph;
  AnomalyKind anomaly = AnomalyKind::Low;
  std::uint64_t seed = 0;
  std::optional<double> ght_snr;
  GridResult grid;
  std::optional<double> improvement_pct;
  std::string error;  // e.g. DegenerateBackground
};

struct TypesResult {
  std::vector<TypesRun> runs;
  bool dominance_holds = true;  // grid optimum >= GHT wherever both exist
};

TypesResult anomaly_types(const ExperimentConfig& cfg);
ExperimentReport run_anomaly_types(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind.
ExperimentReport run(const ExperimentConfig& cfg);

}  // namespace gfrht::harness
