#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "gfrht/harness/experiments.hpp"
#include "gfrht/io.hpp"
#include "oracles.hpp"

using namespace gfrht;
using namespace gfrht::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gfrht_tests_" + std::to_string(::getpid())) / name;
  fs::create_directories(dir);
  return dir;
}

ErrorKind config_error_kind(const json& j) {
  try {
    parse_config(j, ".");
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;  // not thrown
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

Matrix<double> step_image(int s) {
  Matrix<double> m = Matrix<double>::Zero(s, s);
  m.rightCols(s / 2).setConstant(255);
  return m;
}

fs::path write_image(const fs::path& dir, const std::string& name, const Matrix<double>& pixels) {
  const fs::path p = dir / name;
  io::write_pgm(p, pixels / 255.0);
  return p;
}

}  // namespace

TEST_CASE("config defaults per kind") {
  const auto sweep_cfg = parse_config(json{{"kind", "sweep"}}, ".");
  CHECK(sweep_cfg.kind == Kind::Sweep);
  CHECK(std::holds_alternative<Social5>(*sweep_cfg.graph));
  CHECK(sweep_cfg.signal == std::vector<double>{0.8, 0.3, 0.5, 0.2, 0.6});
  CHECK(sweep_cfg.alpha == std::vector<double>{0.0, 0.5, 1.0});
  REQUIRE(sweep_cfg.beta.size() == 3);
  CHECK(sweep_cfg.beta[2] == pi / 2);

  const auto edges_cfg = parse_config(json{{"kind", "edges"}, {"image", "img.pgm"}}, "/data");
  CHECK(edges_cfg.alpha == std::vector<double>{0.7});
  CHECK(edges_cfg.beta[0] == doctest::Approx(pi / 10));
  CHECK(edges_cfg.image_path == fs::path("/data/img.pgm"));

  const auto density = parse_config(json{{"kind", "anomaly-density"}, {"seed", 1}}, ".");
  CHECK(density.alpha == std::vector<double>{1.1});
  CHECK(density.beta[0] == doctest::Approx(pi / 20));
  CHECK(density.densities == std::vector<double>{0.01, 0.10});
  CHECK(density.truth_labels == std::vector<int>{18, 19, 20, 21, 22, 23});
  CHECK(density.k == 6);

  const auto types = parse_config(json{{"kind", "anomaly-types"}, {"seed", 1}}, ".");
  CHECK(types.graphs.size() == 2);
  CHECK(types.anomalies.size() == 3);
  CHECK(types.alpha_grid.size() == 21);
  CHECK(types.beta_grid.size() == 21);
  CHECK(types.noise_sigma == 0.1);
}

TEST_CASE("config errors") {
  CHECK(config_error_kind(json{{"kind", "nope"}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"seed", 1}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "anomaly-density"}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "anomaly-types"}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "edges"}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "sweep"}, {"beta", 1}, {"beta_pi", 0.5}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "sweep"}, {"colour", 1}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "sweep"}, {"alpha", {0.5, 9.0}}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "anomaly-density"}, {"seed", -3}}) == ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "anomaly-density"}, {"seed", 1}, {"truth_labels", {0}}}) ==
        ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "anomaly-types"}, {"seed", 1}, {"anomalies", {"spike"}}}) ==
        ErrorKind::Config);
  CHECK(config_error_kind(json{{"kind", "sweep"}, {"graph", {{"type", "torus"}}}}) == ErrorKind::Config);

  const fs::path dir = scratch("badjson");
  io::write_text(dir / "bad.json", "{ not json");
  try {
    load_config(dir / "bad.json");
    FAIL("expected Config");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("config overrides and canonical hash") {
  const json j{{"kind", "anomaly-density"}, {"seed", 5}, {"output_dir", "a"}};
  const auto a = parse_config(j, ".");
  const auto b = parse_config(j, ".");
  const auto c = parse_config(j, ".", 6, fs::path("b"));
  CHECK(provenance(a) == provenance(b));
  CHECK(*c.seed == 6);
  CHECK(c.output_dir == fs::path("b"));
  CHECK(provenance(a)["config_hash"] != provenance(c)["config_hash"]);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");

  // beta_pi and beta in radians describe the same config.
  const auto r1 = parse_config(json{{"kind", "sweep"}, {"beta_pi", {0.25}}}, ".");
  const auto r2 = parse_config(json{{"kind", "sweep"}, {"beta", {pi / 4}}}, ".");
  CHECK(r1.beta == r2.beta);
}

TEST_CASE("graph spec json round trip") {
  for (const GraphSpec& spec : {GraphSpec{Social5{}}, GraphSpec{DirectedCycle{6}}, GraphSpec{Grid2D{5}},
                                GraphSpec{Community{3, 4, 0.25}}, GraphSpec{ScaleFree{20, 3, Orientation::Random}}}) {
    const json j = json::parse(graph_spec_json(spec).dump());
    CHECK(describe(parse_graph_spec(j)) == describe(spec));
  }
}

TEST_CASE("sweep: default protocol") {
  const auto cfg = parse_config(json{{"kind", "sweep"}}, ".");
  const SweepResult r = sweep(cfg);
  CHECK(r.panels.size() == 9);
  CHECK(r.checks_passed);
  CHECK(r.identity_error < 1e-9);
  CHECK(r.ght_error < 1e-9);
  for (const auto& p : r.panels) {
    if (p.beta == 0.0) CHECK(oracle::max_abs(CVector<double>(p.output - r.signal.cast<oracle::cd>())) < 1e-9);
    if (p.alpha == 0.5 && p.beta == 0.0) {
      for (Eigen::Index k = 0; k < 5; ++k) CHECK(std::abs(p.output(k).real() - r.signal(k)) < 1e-9);
    }
  }
  const auto g = generate_graph(Social5{}, 0);
  CHECK(oracle::max_abs(CVector<double>(r.ght - oracle::ght(g.adjacency(), r.signal))) < 1e-10);

  const auto rep = run_sweep(cfg);
  const auto rows = csv_rows(rep.files.at("sweep.csv"));
  REQUIRE(rows.size() == 46);
  CHECK(rows[0] == std::vector<std::string>{"alpha", "beta", "node", "x", "re", "im", "abs"});
  CHECK(rows[1][2] == "1");
  CHECK(rows[5][2] == "5");
  CHECK(rep.files.count("features.csv") == 1);
  CHECK(rep.summary["checks_passed"] == true);
}

TEST_CASE("sweep: all-ones signal and adjacency from file") {
  const fs::path dir = scratch("sweep_file");
  io::write_text(dir / "c5.csv", "0,1,0,0,0\n0,0,1,0,0\n0,0,0,1,0\n0,0,0,0,1\n1,0,0,0,0\n");
  const auto cfg = parse_config(
      json{{"kind", "sweep"}, {"graph", {{"type", "file"}, {"path", "c5.csv"}}}, {"signal", {1, 1, 1, 1, 1}}}, dir);
  const SweepResult r = sweep(cfg);
  for (const auto& p : r.panels) {
    if (p.beta == 0.0) {
      for (Eigen::Index k = 0; k < 5; ++k) CHECK(std::abs(p.output(k) - oracle::cd(1, 0)) < 1e-9);
    }
  }
}

TEST_CASE("edges: step, constant and checkerboard images") {
  const fs::path dir = scratch("edges");
  const auto ctx = grid_context(8);

  write_image(dir, "step.pgm", step_image(8));
  const auto step = edges(parse_config(json{{"kind", "edges"}, {"image", "step.pgm"}}, dir), &ctx);
  CHECK(*step.gfrht.edge_density >= *step.ght.edge_density);
  CHECK(step.side == 8);

  write_image(dir, "flat.pgm", Matrix<double>::Constant(8, 8, 128));
  const auto flat = edges(parse_config(json{{"kind", "edges"}, {"image", "flat.pgm"}}, dir), &ctx);
  CHECK(flat.ght_map.isZero(0.0));
  CHECK(flat.gfrht_map.isZero(0.0));
  CHECK(*flat.ght.entropy == 0.0);
  CHECK(*flat.gfrht.entropy == 0.0);

  Matrix<double> checker(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) checker(i, j) = ((i + j) % 2) * 255.0;
  write_image(dir, "checker.pgm", checker);
  const auto rep = run_edges(parse_config(json{{"kind", "edges"}, {"image", "checker.pgm"}}, dir), &ctx);
  for (const char* m : {"ght", "gfrht"}) {
    for (const char* f : {"entropy", "ssim", "edge_density"}) CHECK(std::isfinite(rep.summary[m][f].get<double>()));
  }
  CHECK(rep.files.count("ght.pgm") == 1);
  CHECK(io::parse_pgm(rep.files.at("gfrht.pgm")).pixels.rows() == 8);

  io::write_text(dir / "wide.pgm", "P2\n3 2\n255\n0 1 2\n3 4 5\n");
  try {
    edges(parse_config(json{{"kind", "edges"}, {"image", "wide.pgm"}}, dir));
    FAIL("expected BadImage");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadImage);
  }
  io::write_text(dir / "junk.pgm", "P5\n2 2\n255\n");
  CHECK_THROWS_AS(edges(parse_config(json{{"kind", "edges"}, {"image", "junk.pgm"}}, dir)), Error);
}

TEST_CASE("pgm and csv io") {
  const auto img = io::parse_pgm("P2\n# comment\n2 2\n15\n0 15\n# x\n7 3\n");
  CHECK(img.maxval == 15);
  CHECK(img.pixels(0, 1) == 15);
  CHECK(img.pixels(1, 0) == 7);
  Matrix<double> unit(2, 2);
  unit << 0, 1, 0.5, 0.25;
  CHECK(io::format_pgm(unit) == "P2\n2 2\n255\n0 255\n128 64\n");
  const Matrix<double> a = io::parse_adjacency_csv("0, 1.5e-1\n2,0\n");
  CHECK(a(0, 1) == 0.15);
  CHECK(a(1, 0) == 2.0);
  CHECK_THROWS_AS(io::parse_adjacency_csv("0,1\n2\n"), Error);
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(1e-20) == "1e-20");
}

TEST_CASE("anomaly-density: small batch") {
  const auto cfg = parse_config(json{{"kind", "anomaly-density"}, {"seed", 3}, {"seeds", 2}}, ".");
  const auto r = anomaly_density(cfg);
  CHECK(r.truth == IndexSet{17, 18, 19, 20, 21, 22});
  REQUIRE(r.runs.size() == 4);
  for (const auto& run : r.runs) {
    CHECK(run.ght_response.size() == 60);
    CHECK(run.gfrht.precision_at_k.has_value());
    CHECK(*run.gfrht.rmse >= 0.0);
    CHECK(run.gfrht.snr_db.has_value());
  }
  const auto rep = run_anomaly_density(cfg);
  CHECK(csv_rows(rep.files.at("responses.csv")).size() == 1 + 4 * 60);
  CHECK(csv_rows(rep.files.at("metrics.csv")).size() == 1 + 4 * 2);
}

TEST_CASE("anomaly signals follow the generator recipes") {
  const auto ctx = make_context(generate_graph(Community{5, 10, 0.05}, 1));
  const auto imp = make_anomaly_signal(*ctx.eig, AnomalyKind::Impulse, 0.0, 9);
  CHECK(imp.truth.size() == 4);
  CHECK((imp.x.array() == 2.0).count() == 4);
  CHECK((imp.x.array() == 0.0).count() == 46);
  for (auto k : imp.truth) CHECK(imp.x(k) == 2.0);

  const auto low = make_anomaly_signal(*ctx.eig, AnomalyKind::Low, 0.0, 9);
  CHECK(low.truth.size() == 3);
  Eigen::Index kmin = 0;
  ctx.eig->eigenvalues.cwiseAbs().minCoeff(&kmin);
  Vector<double> base = 3.0 * ctx.eig->vectors.col(kmin).real();
  for (auto k : low.truth) base(k) += 1.5;
  CHECK((low.x - base).cwiseAbs().maxCoeff() < 1e-15);

  const auto high = make_anomaly_signal(*ctx.eig, AnomalyKind::High, 0.0, 9);
  CHECK(high.truth.size() == 5);

  const auto noisy = make_anomaly_signal(*ctx.eig, AnomalyKind::Impulse, 0.1, 9);
  CHECK(noisy.truth == imp.truth);
  const double sd = std::sqrt((noisy.x - imp.x).squaredNorm() / 50.0);
  CHECK(sd > 0.05);
  CHECK(sd < 0.2);
}

TEST_CASE("anomaly-types: dominance and the degenerate case") {
  const json j{{"kind", "anomaly-types"},
               {"seed", 11},
               {"graphs", {{{"type", "community"}, {"communities", 5}, {"size", 10}, {"inter_density", 0.05}}}},
               {"anomalies", {"impulse", "none"}},
               {"noise_sigma", 0.0},
               {"alpha_grid", {0.0, 0.5, 1.0, 1.5}},
               {"beta_pi_grid", {0.0, 0.5, 1.0}},
               {"threads", 2}};
  const auto r = anomaly_types(parse_config(j, "."));
  REQUIRE(r.runs.size() == 2);
  CHECK(r.dominance_holds);
  const auto& impulse = r.runs[0];
  REQUIRE(impulse.ght_snr.has_value());
  CHECK(impulse.grid.objective_star >= *impulse.ght_snr);
  CHECK(impulse.grid.surface.size() == 12);
  const auto& none = r.runs[1];
  CHECK(!none.ght_snr);
  CHECK(none.error == "DegenerateBackground");
  CHECK(none.grid.failures == 12);

  const auto rep = run_anomaly_types(parse_config(j, "."));
  CHECK(rep.summary["runs"][1]["error"] == "DegenerateBackground");
  CHECK(csv_rows(rep.files.at("surface.csv")).size() == 1 + 24);
}

TEST_CASE("reports are byte-identical across runs") {
  const fs::path dir = scratch("determinism");
  write_image(dir, "step.pgm", step_image(8));
  const std::vector<json> configs{
      json{{"kind", "sweep"}},
      json{{"kind", "edges"}, {"image", "step.pgm"}},
      json{{"kind", "anomaly-density"}, {"seed", 2}, {"densities", {0.05}}},
      json{{"kind", "anomaly-types"},
           {"seed", 4},
           {"alpha_grid", {0.0, 1.0, 1.2}},
           {"beta_pi_grid", {0.5, 1.0}},
           {"threads", 3}},
  };
  for (const auto& j : configs) {
    const auto a = run(parse_config(j, dir));
    const auto b = run(parse_config(j, dir));
    CHECK(a.files == b.files);
    CHECK(a.summary.dump() == b.summary.dump());
    write_report(a, dir / "out_a");
    write_report(b, dir / "out_b");
    for (const auto& [name, content] : a.files) {
      CHECK(io::read_text(dir / "out_a" / name) == io::read_text(dir / "out_b" / name));
    }
    CHECK(io::read_text(dir / "out_a" / "summary.json") == io::read_text(dir / "out_b" / "summary.json"));
  }
}

#ifdef GFRHT_CLI
TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  const std::string cli = GFRHT_CLI;
  auto call = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " > " + (dir / "log.txt").string() + " 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  io::write_text(dir / "sweep.json", R"({"kind": "sweep"})");
  io::write_text(dir / "typo.json", R"({"kind": "sweep", "alpah": [1]})");
  io::write_text(dir / "nil.csv", "0,1,0\n0,0,1\n0,0,0\n");
  io::write_text(dir / "nil.json", R"({"kind": "sweep", "graph": {"type": "file", "path": "nil.csv"}, "signal": [1, 2, 3]})");
  io::write_text(dir / "density.json", R"({"kind": "anomaly-density", "seed": 1, "densities": [0.05]})");

  CHECK(call("sweep --config " + (dir / "sweep.json").string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "sweep.csv"));
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(call("sweep --config " + (dir / "typo.json").string()) == 2);
  CHECK(call("sweep --config " + (dir / "missing.json").string()) == 2);
  CHECK(call("edges --config " + (dir / "sweep.json").string()) == 2);
  CHECK(call("sweep") == 2);
  CHECK(call("sweep --config " + (dir / "nil.json").string() + " --out " + (dir / "nil").string()) == 3);

  const std::string d = "anomaly-density --config " + (dir / "density.json").string();
  CHECK(call(d + " --seed 9 --out " + (dir / "d1").string()) == 0);
  CHECK(call(d + " --seed 9 --out " + (dir / "d2").string()) == 0);
  for (const char* f : {"responses.csv", "metrics.csv", "summary.json"}) {
    CHECK(io::read_text(dir / "d1" / f) == io::read_text(dir / "d2" / f));
  }
  const json summary = json::parse(io::read_text(dir / "d1" / "summary.json"));
  CHECK(summary["provenance"]["seed"] == 9);
}
#endif
