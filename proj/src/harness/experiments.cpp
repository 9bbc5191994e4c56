#include "gfrht/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gfrht/analytic.hpp"
#include "gfrht/generators.hpp"
#include "gfrht/io.hpp"
#include "gfrht/random.hpp"

namespace gfrht::harness {

using nlohmann::ordered_json;
using io::format_double;

namespace {

std::string fmt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

ordered_json json_or_null(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

ordered_json metrics_json(const MetricReport& m) {
  ordered_json j;
  if (m.snr_db) j["snr_db"] = json_or_null(m.snr_db);
  if (m.precision_at_k) j["precision_at_k"] = *m.precision_at_k;
  if (m.rmse) j["rmse"] = *m.rmse;
  if (m.entropy) j["entropy"] = *m.entropy;
  if (m.ssim) j["ssim"] = *m.ssim;
  if (m.edge_density) j["edge_density"] = *m.edge_density;
  return j;
}

bool same_angle(double a, double b) { return detail::turn_fraction(a) == detail::turn_fraction(b); }

// SplitMix64 finalizer; decorrelates the signal stream from the graph stream.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Graph<double> sweep_graph(const ExperimentConfig& cfg) {
  if (cfg.adjacency_path) {
    return build_graph(io::read_adjacency_csv(*cfg.adjacency_path), cfg.adjacency_path->filename().string());
  }
  return generate_graph(cfg.graph.value_or(Social5{}), cfg.seed.value_or(0));
}

}  // namespace

ordered_json provenance(const ExperimentConfig& cfg) {
  ordered_json p;
  p["seed"] = cfg.seed ? ordered_json(*cfg.seed) : ordered_json(nullptr);
  p["config_hash"] = fnv1a_hex(cfg.canonical.dump());
  p["config"] = cfg.canonical;
  return p;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  for (const auto& [name, content] : report.files) io::write_text(dir / name, content);
  io::write_text(dir / "summary.json", report.summary.dump(2) + "\n");
}

// --- sweep -----------------------------------------------------------------

SweepResult sweep(const ExperimentConfig& cfg) {
  const auto ctx = make_context(sweep_graph(cfg));
  SweepResult r;
  r.signal = Eigen::Map<const Vector<double>>(cfg.signal.data(), static_cast<Eigen::Index>(cfg.signal.size()));
  if (r.signal.size() != ctx.graph->n()) {
    throw Error(ErrorKind::Config, "signal length does not match the graph");
  }
  r.ght = ght(ctx.gft, *ctx.eig, r.signal);
  for (double a : cfg.alpha) {
    for (double b : cfg.beta) {
      SweepPanel p{a, b, gfrht(ctx.hilbert(a, b), r.signal)};
      if (same_angle(b, 0.0)) {
        r.identity_error = std::max(r.identity_error, (p.output - r.signal.cast<std::complex<double>>()).cwiseAbs().maxCoeff());
      }
      if (a == 1.0 && same_angle(b, std::numbers::pi / 2)) {
        r.ght_error = std::max(r.ght_error, (p.output - r.ght).cwiseAbs().maxCoeff());
      }
      r.panels.push_back(std::move(p));
    }
  }
  r.checks_passed = r.identity_error < 1e-9 && r.ght_error < 1e-9;
  return r;
}

ExperimentReport run_sweep(const ExperimentConfig& cfg) {
  const SweepResult r = sweep(cfg);
  const Graph<double> g = sweep_graph(cfg);
  std::ostringstream csv;
  csv << "alpha,beta,node,x,re,im,abs\n";
  std::ostringstream features;
  features << "alpha,beta,node,amplitude,phase,phase_unwrapped,freq_mod\n";
  const auto ctx = make_context(g);
  for (const auto& p : r.panels) {
    for (Eigen::Index k = 0; k < p.output.size(); ++k) {
      csv << format_double(p.alpha) << ',' << format_double(p.beta) << ',' << k + 1 << ','
          << format_double(r.signal(k)) << ',' << format_double(p.output(k).real()) << ','
          << format_double(p.output(k).imag()) << ',' << format_double(std::abs(p.output(k))) << '\n';
    }
    const auto f = modulation_features(ctx.hilbert(p.alpha, p.beta), *ctx.graph, r.signal);
    for (Eigen::Index k = 0; k < f.amplitude.size(); ++k) {
      features << format_double(p.alpha) << ',' << format_double(p.beta) << ',' << k + 1 << ','
               << format_double(f.amplitude(k)) << ',' << format_double(f.phase(k)) << ','
               << format_double(f.phase_unwrapped(k)) << ',' << format_double(f.freq_mod(k)) << '\n';
    }
  }
  std::ostringstream ght_csv;
  ght_csv << "node,re,im,abs\n";
  for (Eigen::Index k = 0; k < r.ght.size(); ++k) {
    ght_csv << k + 1 << ',' << format_double(r.ght(k).real()) << ',' << format_double(r.ght(k).imag()) << ','
            << format_double(std::abs(r.ght(k))) << '\n';
  }

  ExperimentReport rep;
  rep.kind = Kind::Sweep;
  rep.files["sweep.csv"] = csv.str();
  rep.files["features.csv"] = features.str();
  rep.files["ght.csv"] = ght_csv.str();
  rep.summary["kind"] = "sweep";
  rep.summary["provenance"] = provenance(cfg);
  rep.summary["graph"] = g.label();
  rep.summary["panels"] = r.panels.size();
  rep.summary["identity_error"] = r.identity_error;
  rep.summary["ght_error"] = r.ght_error;
  rep.summary["checks_passed"] = r.checks_passed;
  if (!r.checks_passed) throw Error(ErrorKind::CheckFailed, "sweep self-checks failed");
  return rep;
}

// --- edges -----------------------------------------------------------------

SpectralContext<double> grid_context(int side) { return make_context(generate_graph(Grid2D{side}, 0)); }

EdgesResult edges(const ExperimentConfig& cfg, const SpectralContext<double>* grid) {
  const io::PgmImage pgm = io::read_pgm(cfg.image_path);
  const Eigen::Index s = pgm.pixels.rows();
  if (pgm.pixels.cols() != s) throw Error(ErrorKind::BadImage, "image must be square");
  if (s < 2 || s > 64) throw Error(ErrorKind::BadImage, "image side must lie in [2, 64]");

  std::optional<SpectralContext<double>> own;
  if (!grid || grid->graph->n() != s * s) {
    own = grid_context(static_cast<int>(s));
    grid = &*own;
  }

  EdgesResult r;
  r.side = static_cast<int>(s);
  r.alpha = cfg.alpha.at(0);
  r.beta = cfg.beta.at(0);
  r.image = min_max_normalize(pgm.pixels);
  Vector<double> x(s * s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) x(i * s + j) = r.image(i, j);
  }
  auto to_map = [s](const CVector<double>& y) {
    Matrix<double> m(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
      for (Eigen::Index j = 0; j < s; ++j) m(i, j) = std::abs(y(i * s + j));
    }
    return min_max_normalize(m);
  };
  r.ght_map = to_map(ght(grid->gft, *grid->eig, x));
  const auto hcfg = grid->hilbert(r.alpha, r.beta);
  r.beta = hcfg.beta();
  r.gfrht_map = to_map(gfrht(hcfg, x));
  r.ght = image_metrics(r.ght_map, r.image);
  r.gfrht = image_metrics(r.gfrht_map, r.image);
  r.ssim_ght_vs_gfrht = ssim(r.ght_map, r.gfrht_map);
  return r;
}

ExperimentReport run_edges(const ExperimentConfig& cfg, const SpectralContext<double>* grid) {
  const EdgesResult r = edges(cfg, grid);
  ExperimentReport rep;
  rep.kind = Kind::Edges;
  rep.files["ght.pgm"] = io::format_pgm(r.ght_map);
  rep.files["gfrht.pgm"] = io::format_pgm(r.gfrht_map);
  std::ostringstream csv;
  csv << "method,alpha,beta,entropy,ssim,edge_density\n";
  csv << "ght,1,"
      << format_double(std::numbers::pi / 2) << ',' << fmt(r.ght.entropy) << ',' << fmt(r.ght.ssim) << ','
      << fmt(r.ght.edge_density) << '\n';
  csv << "gfrht," << format_double(r.alpha) << ',' << format_double(r.beta) << ',' << fmt(r.gfrht.entropy) << ','
      << fmt(r.gfrht.ssim) << ',' << fmt(r.gfrht.edge_density) << '\n';
  rep.files["metrics.csv"] = csv.str();
  rep.summary["kind"] = "edges";
  rep.summary["provenance"] = provenance(cfg);
  rep.summary["side"] = r.side;
  rep.summary["alpha"] = r.alpha;
  rep.summary["beta"] = r.beta;
  rep.summary["ght"] = metrics_json(r.ght);
  rep.summary["gfrht"] = metrics_json(r.gfrht);
  rep.summary["ssim_ght_vs_gfrht"] = r.ssim_ght_vs_gfrht;
  return rep;
}

// --- anomaly density ---------------------------------------------------------

namespace {

MetricReport response_metrics(const Vector<double>& y, const IndexSet& truth, const Vector<double>& indicator, int k) {
  MetricReport m;
  try {
    m.snr_db = snr_db(y, truth);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateBackground) throw;
  }
  m.precision_at_k = precision_at_k(y, truth, k);
  m.rmse = rmse(y, indicator);
  return m;
}

}  // namespace

DensityResult anomaly_density(const ExperimentConfig& cfg) {
  const int n = cfg.communities * cfg.community_size;
  if (cfg.k > n) throw Error(ErrorKind::KTooLarge, "k exceeds the number of nodes");
  DensityResult r;
  r.signal = Vector<double>::Zero(n);
  for (int label : cfg.truth_labels) {
    r.truth.push_back(label - 1);
    r.signal(label - 1) = 1.0;
  }
  const double alpha = cfg.alpha.at(0);
  const double beta = cfg.beta.at(0);
  for (double d : cfg.densities) {
    for (int i = 0; i < cfg.seeds; ++i) {
      const std::uint64_t seed = *cfg.seed + static_cast<std::uint64_t>(i);
      const auto ctx = make_context(generate_graph(Community{cfg.communities, cfg.community_size, d}, seed));
      DensityRun run;
      run.density = d;
      run.seed = seed;
      run.ght_response = ght(ctx.gft, *ctx.eig, r.signal).cwiseAbs();
      run.gfrht_response = gfrht(ctx.hilbert(alpha, beta), r.signal).cwiseAbs();
      run.ght = response_metrics(run.ght_response, r.truth, r.signal, cfg.k);
      run.gfrht = response_metrics(run.gfrht_response, r.truth, r.signal, cfg.k);
      r.runs.push_back(std::move(run));
    }
  }
  return r;
}

ExperimentReport run_anomaly_density(const ExperimentConfig& cfg) {
  const DensityResult r = anomaly_density(cfg);
  std::ostringstream responses;
  responses << "density,seed,node,truth,ght,gfrht\n";
  std::ostringstream metrics;
  metrics << "density,seed,method,snr_db,precision_at_k,rmse\n";
  ordered_json runs = ordered_json::array();
  for (const auto& run : r.runs) {
    for (Eigen::Index k = 0; k < run.ght_response.size(); ++k) {
      responses << format_double(run.density) << ',' << run.seed << ',' << k + 1 << ','
                << format_double(r.signal(k)) << ',' << format_double(run.ght_response(k)) << ','
                << format_double(run.gfrht_response(k)) << '\n';
    }
    for (const auto& [name, m] : {std::pair{"ght", &run.ght}, std::pair{"gfrht", &run.gfrht}}) {
      metrics << format_double(run.density) << ',' << run.seed << ',' << name << ',' << fmt(m->snr_db) << ','
              << fmt(m->precision_at_k) << ',' << fmt(m->rmse) << '\n';
    }
    ordered_json j;
    j["density"] = run.density;
    j["seed"] = run.seed;
    j["ght"] = metrics_json(run.ght);
    j["gfrht"] = metrics_json(run.gfrht);
    runs.push_back(std::move(j));
  }
  ExperimentReport rep;
  rep.kind = Kind::AnomalyDensity;
  rep.files["responses.csv"] = responses.str();
  rep.files["metrics.csv"] = metrics.str();
  rep.summary["kind"] = "anomaly-density";
  rep.summary["provenance"] = provenance(cfg);
  rep.summary["alpha"] = cfg.alpha.at(0);
  rep.summary["beta"] = cfg.beta.at(0);
  rep.summary["k"] = cfg.k;
  rep.summary["truth_labels"] = cfg.truth_labels;
  rep.summary["runs"] = std::move(runs);
  return rep;
}

// --- anomaly types -------------------------------------------------------------

AnomalySignal make_anomaly_signal(const EigenSystem<double>& eig, AnomalyKind kind, double noise_sigma,
                                  std::uint64_t seed) {
  const Eigen::Index n = eig.n();
  // Eigenvector indices ranked by |lambda| ascending, ties by position.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(eig.eigenvalues(a)) < std::abs(eig.eigenvalues(b));
  });
  auto vec = [&](Eigen::Index k) -> Vector<double> { return eig.vectors.col(k).real(); };

  Rng rng(mix(seed));
  AnomalySignal s;
  std::size_t count = 0;
  double bump = 0;
  switch (kind) {
    case AnomalyKind::Low:
      s.x = 3.0 * vec(order.front());
      count = 3;
      bump = 1.5;
      break;
    case AnomalyKind::High:
      s.x = vec(order[order.size() - 1]) + 0.3 * vec(order[order.size() - 2]);
      count = 5;
      bump = 1.5;
      break;
    case AnomalyKind::Impulse:
      s.x = Vector<double>::Zero(n);
      count = 4;
      break;
    case AnomalyKind::None:
      s.x = Vector<double>::Zero(n);
      break;
  }
  if (count > static_cast<std::size_t>(n)) throw Error(ErrorKind::BadSpec, "graph too small for the anomaly");
  for (std::size_t idx : rng.sample(static_cast<std::size_t>(n), count)) {
    const auto k = static_cast<Eigen::Index>(idx);
    s.truth.push_back(k);
    if (kind == AnomalyKind::Impulse) {
      s.x(k) = 2.0;
    } else {
      s.x(k) += bump;
    }
  }
  std::sort(s.truth.begin(), s.truth.end());
  for (Eigen::Index k = 0; k < n; ++k) s.x(k) += noise_sigma * rng.normal();
  return s;
}

TypesResult anomaly_types(const ExperimentConfig& cfg) {
  TypesResult r;
  for (const auto& spec : cfg.graphs) {
    for (int i = 0; i < cfg.seeds; ++i) {
      const std::uint64_t seed = *cfg.seed + static_cast<std::uint64_t>(i);
      const auto ctx = make_context(generate_graph(spec, seed));
      for (AnomalyKind kind : cfg.anomalies) {
        TypesRun run;
        run.graph = describe(spec);
        run.anomaly = kind;
        run.seed = seed;
        const AnomalySignal sig =
            make_anomaly_signal(*ctx.eig, kind, cfg.noise_sigma, seed * 4 + static_cast<std::uint64_t>(kind));
        try {
          run.ght_snr = snr_db(ght(ctx.gft, *ctx.eig, sig.x).cwiseAbs(), sig.truth);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::DegenerateBackground) throw;
          run.error = to_string(e.kind());
        }
        run.grid = grid_search(
            [&](double a, double b) { return snr_db(gfrht(ctx.hilbert(a, b), sig.x).cwiseAbs(), sig.truth); },
            cfg.alpha_grid, cfg.beta_grid, cfg.threads);
        if (run.ght_snr && std::isfinite(run.grid.objective_star)) {
          if (run.grid.objective_star < *run.ght_snr) r.dominance_holds = false;
          if (*run.ght_snr != 0.0) {
            run.improvement_pct = 100.0 * (run.grid.objective_star - *run.ght_snr) / std::abs(*run.ght_snr);
          }
        }
        r.runs.push_back(std::move(run));
      }
    }
  }
  return r;
}

ExperimentReport run_anomaly_types(const ExperimentConfig& cfg) {
  const TypesResult r = anomaly_types(cfg);
  std::ostringstream results;
  results << "graph,anomaly,seed,ght_snr,alpha_star,beta_star,snr_star,improvement_pct,failures,error\n";
  std::ostringstream surface;
  surface << "graph,anomaly,seed,alpha,beta,objective,failed\n";
  ordered_json runs = ordered_json::array();
  for (const auto& run : r.runs) {
    const bool found = std::isfinite(run.grid.objective_star);
    results << '"' << run.graph << "\"," << to_string(run.anomaly) << ',' << run.seed << ',' << fmt(run.ght_snr)
            << ',' << (found ? format_double(run.grid.alpha_star) : "") << ','
            << (found ? format_double(run.grid.beta_star) : "") << ','
            << (found ? format_double(run.grid.objective_star) : "") << ',' << fmt(run.improvement_pct) << ','
            << run.grid.failures << ',' << run.error << '\n';
    for (const auto& p : run.grid.surface) {
      surface << '"' << run.graph << "\"," << to_string(run.anomaly) << ',' << run.seed << ','
              << format_double(p.alpha) << ',' << format_double(p.beta) << ','
              << (p.failed ? std::string("-inf") : format_double(p.objective)) << ',' << (p.failed ? 1 : 0)
              << '\n';
    }
    ordered_json j;
    j["graph"] = run.graph;
    j["anomaly"] = to_string(run.anomaly);
    j["seed"] = run.seed;
    j["ght_snr"] = json_or_null(run.ght_snr);
    j["alpha_star"] = found ? ordered_json(run.grid.alpha_star) : ordered_json(nullptr);
    j["beta_star"] = found ? ordered_json(run.grid.beta_star) : ordered_json(nullptr);
    j["snr_star"] = found ? ordered_json(run.grid.objective_star) : ordered_json(nullptr);
    j["improvement_pct"] = json_or_null(run.improvement_pct);
    j["grid_failures"] = run.grid.failures;
    if (!run.error.empty()) j["error"] = run.error;
    runs.push_back(std::move(j));
  }
  ExperimentReport rep;
  rep.kind = Kind::AnomalyTypes;
  rep.files["results.csv"] = results.str();
  rep.files["surface.csv"] = surface.str();
  rep.summary["kind"] = "anomaly-types";
  rep.summary["provenance"] = provenance(cfg);
  rep.summary["dominance_holds"] = r.dominance_holds;
  rep.summary["runs"] = std::move(runs);
  if (!r.dominance_holds) throw Error(ErrorKind::CheckFailed, "grid optimum fell below the GHT baseline");
  return rep;
}

ExperimentReport run(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::Sweep: return run_sweep(cfg);
    case Kind::Edges: return run_edges(cfg);
    case Kind::AnomalyDensity: return run_anomaly_density(cfg);
    case Kind::AnomalyTypes: return run_anomaly_types(cfg);
  }
  throw Error(ErrorKind::Config, "unknown experiment kind");
}

}  // namespace gfrht::harness
