#include "gfrht/harness/config.hpp"

#include <cstdio>
#include <numbers>

#include "gfrht/grid_search.hpp"
#include "gfrht/io.hpp"
#include "gfrht/types.hpp"

namespace gfrht::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Config, what); }

std::vector<double> number_list(const json& j, const char* key) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) fail(std::string(key) + " must be a number or a list of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) fail(std::string(key) + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  if (out.empty()) fail(std::string(key) + " must not be empty");
  return out;
}

// beta in radians, or beta_pi in multiples of pi.
std::vector<double> angle_list(const json& cfg, const char* rad_key, const char* pi_key,
                               std::vector<double> fallback_pi) {
  if (cfg.contains(rad_key) && cfg.contains(pi_key)) {
    fail(std::string("give either ") + rad_key + " or " + pi_key + ", not both");
  }
  if (cfg.contains(rad_key)) return number_list(cfg.at(rad_key), rad_key);
  std::vector<double> turns = cfg.contains(pi_key) ? number_list(cfg.at(pi_key), pi_key) : std::move(fallback_pi);
  for (double& t : turns) t *= std::numbers::pi;
  return turns;
}

int positive_int(const json& cfg, const char* key, int fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& v = cfg.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) fail(std::string(key) + " must be a positive integer");
  return v.get<int>();
}

double number(const json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number()) fail(std::string(key) + " must be a number");
  return cfg.at(key).get<double>();
}

void require_single(const std::vector<double>& v, const char* key) {
  if (v.size() != 1) fail(std::string(key) + " must be a single value for this experiment");
}

void check_known_keys(const json& cfg, std::initializer_list<const char*> allowed) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail("unknown key '" + it.key() + "'");
  }
}

}  // namespace

const char* to_string(Kind kind) noexcept {
  switch (kind) {
    case Kind::Sweep: return "sweep";
    case Kind::Edges: return "edges";
    case Kind::AnomalyDensity: return "anomaly-density";
    case Kind::AnomalyTypes: return "anomaly-types";
  }
  return "?";
}

Kind parse_kind(const std::string& name) {
  if (name == "sweep") return Kind::Sweep;
  if (name == "edges") return Kind::Edges;
  if (name == "anomaly-density") return Kind::AnomalyDensity;
  if (name == "anomaly-types") return Kind::AnomalyTypes;
  fail("unknown experiment kind '" + name + "'");
}

const char* to_string(AnomalyKind kind) noexcept {
  switch (kind) {
    case AnomalyKind::Low: return "low";
    case AnomalyKind::High: return "high";
    case AnomalyKind::Impulse: return "impulse";
    case AnomalyKind::None: return "none";
  }
  return "?";
}

GraphSpec parse_graph_spec(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) fail("graph needs a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "social5") return Social5{};
    if (type == "cycle") return DirectedCycle{j.value("n", 4)};
    if (type == "grid2d") return Grid2D{j.value("side", 8)};
    if (type == "community") {
      return Community{j.value("communities", 10), j.value("size", 6), j.value("inter_density", 0.01)};
    }
    if (type == "scale_free") {
      ScaleFree s{j.value("n", 50), j.value("m", 2), Orientation::Bidirectional};
      const std::string o = j.value("orientation", std::string("bidirectional"));
      if (o == "random") {
        s.orientation = Orientation::Random;
      } else if (o != "bidirectional") {
        fail("orientation must be 'bidirectional' or 'random'");
      }
      return s;
    }
  } catch (const json::exception& e) {
    fail(std::string("bad graph field: ") + e.what());
  }
  fail("unknown graph type '" + type + "'");
}

ordered_json graph_spec_json(const GraphSpec& spec) {
  ordered_json j;
  if (std::holds_alternative<Social5>(spec)) {
    j["type"] = "social5";
  } else if (const auto* c = std::get_if<DirectedCycle>(&spec)) {
    j["type"] = "cycle";
    j["n"] = c->n;
  } else if (const auto* g = std::get_if<Grid2D>(&spec)) {
    j["type"] = "grid2d";
    j["side"] = g->side;
  } else if (const auto* m = std::get_if<Community>(&spec)) {
    j["type"] = "community";
    j["communities"] = m->communities;
    j["size"] = m->size;
    j["inter_density"] = m->inter_density;
  } else if (const auto* s = std::get_if<ScaleFree>(&spec)) {
    j["type"] = "scale_free";
    j["n"] = s->n;
    j["m"] = s->m;
    j["orientation"] = s->orientation == Orientation::Bidirectional ? "bidirectional" : "random";
  }
  return j;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const json& cfg, const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override,
                              std::optional<std::filesystem::path> out_override) {
  if (!cfg.is_object()) fail("config must be a JSON object");
  if (!cfg.contains("kind") || !cfg.at("kind").is_string()) fail("config needs a string 'kind'");
  ExperimentConfig c;
  c.kind = parse_kind(cfg.at("kind").get<std::string>());

  if (cfg.contains("seed")) {
    const json& s = cfg.at("seed");
    const bool ok = s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0);
    if (!ok) fail("seed must be a non-negative integer");
    c.seed = cfg.at("seed").get<std::uint64_t>();
  }
  if (seed_override) c.seed = seed_override;
  c.threads = static_cast<unsigned>(positive_int(cfg, "threads", 1));
  if (cfg.contains("output_dir")) c.output_dir = cfg.at("output_dir").get<std::string>();
  if (out_override) c.output_dir = *out_override;

  ordered_json canon;
  canon["kind"] = to_string(c.kind);
  if (c.seed) canon["seed"] = *c.seed;

  switch (c.kind) {
    case Kind::Sweep: {
      check_known_keys(cfg, {"kind", "seed", "graph", "signal", "alpha", "beta", "beta_pi", "output_dir", "threads"});
      if (cfg.contains("graph")) {
        const auto& g = cfg.at("graph");
        if (g.is_object() && g.value("type", std::string()) == "file") {
          if (!g.contains("path")) fail("file graph needs 'path'");
          c.adjacency_path = base_dir / g.at("path").get<std::string>();
        } else {
          c.graph = parse_graph_spec(g);
        }
      } else {
        c.graph = Social5{};
      }
      c.signal = cfg.contains("signal") ? number_list(cfg.at("signal"), "signal")
                                        : std::vector<double>{0.8, 0.3, 0.5, 0.2, 0.6};
      c.alpha = cfg.contains("alpha") ? number_list(cfg.at("alpha"), "alpha") : std::vector<double>{0.0, 0.5, 1.0};
      c.beta = angle_list(cfg, "beta", "beta_pi", {0.0, 0.25, 0.5});
      if (c.adjacency_path) {
        canon["graph"] = {{"type", "file"}, {"path", c.adjacency_path->string()}};
      } else {
        canon["graph"] = graph_spec_json(*c.graph);
      }
      canon["signal"] = c.signal;
      break;
    }
    case Kind::Edges: {
      check_known_keys(cfg, {"kind", "seed", "image", "alpha", "beta", "beta_pi", "output_dir", "threads"});
      if (!cfg.contains("image") || !cfg.at("image").is_string()) fail("edges needs an 'image' path");
      c.image_path = base_dir / cfg.at("image").get<std::string>();
      c.alpha = cfg.contains("alpha") ? number_list(cfg.at("alpha"), "alpha") : std::vector<double>{0.7};
      c.beta = angle_list(cfg, "beta", "beta_pi", {0.1});
      require_single(c.alpha, "alpha");
      require_single(c.beta, "beta");
      canon["image"] = c.image_path.string();
      break;
    }
    case Kind::AnomalyDensity: {
      check_known_keys(cfg, {"kind", "seed", "seeds", "alpha", "beta", "beta_pi", "k", "densities", "truth_labels",
                             "communities", "size", "output_dir", "threads"});
      if (!c.seed) fail("anomaly-density needs a seed");
      c.seeds = positive_int(cfg, "seeds", 1);
      c.alpha = cfg.contains("alpha") ? number_list(cfg.at("alpha"), "alpha") : std::vector<double>{1.1};
      c.beta = angle_list(cfg, "beta", "beta_pi", {0.05});
      require_single(c.alpha, "alpha");
      require_single(c.beta, "beta");
      c.k = positive_int(cfg, "k", 6);
      c.densities = cfg.contains("densities") ? number_list(cfg.at("densities"), "densities")
                                              : std::vector<double>{0.01, 0.10};
      c.communities = positive_int(cfg, "communities", 10);
      c.community_size = positive_int(cfg, "size", 6);
      if (cfg.contains("truth_labels")) {
        for (double v : number_list(cfg.at("truth_labels"), "truth_labels")) {
          const int label = static_cast<int>(v);
          if (label != v || label < 1 || label > c.communities * c.community_size) {
            fail("truth_labels must be 1-based node labels");
          }
          c.truth_labels.push_back(label);
        }
      } else {
        for (int label = 18; label <= 23; ++label) c.truth_labels.push_back(label);
      }
      canon["seeds"] = c.seeds;
      canon["k"] = c.k;
      canon["densities"] = c.densities;
      canon["communities"] = c.communities;
      canon["size"] = c.community_size;
      canon["truth_labels"] = c.truth_labels;
      break;
    }
    case Kind::AnomalyTypes: {
      check_known_keys(cfg, {"kind", "seed", "seeds", "graphs", "anomalies", "noise_sigma", "alpha_grid",
                             "beta_pi_grid", "output_dir", "threads"});
      if (!c.seed) fail("anomaly-types needs a seed");
      c.seeds = positive_int(cfg, "seeds", 1);
      if (cfg.contains("graphs")) {
        if (!cfg.at("graphs").is_array() || cfg.at("graphs").empty()) fail("graphs must be a nonempty list");
        for (const auto& g : cfg.at("graphs")) c.graphs.push_back(parse_graph_spec(g));
      } else {
        c.graphs = {Community{5, 10, 0.05}, ScaleFree{50, 2, Orientation::Bidirectional}};
      }
      if (cfg.contains("anomalies")) {
        for (const auto& a : cfg.at("anomalies")) {
          const std::string name = a.is_string() ? a.get<std::string>() : std::string();
          if (name == "low") c.anomalies.push_back(AnomalyKind::Low);
          else if (name == "high") c.anomalies.push_back(AnomalyKind::High);
          else if (name == "impulse") c.anomalies.push_back(AnomalyKind::Impulse);
          else if (name == "none") c.anomalies.push_back(AnomalyKind::None);
          else fail("anomalies must be among low, high, impulse, none");
        }
      } else {
        c.anomalies = {AnomalyKind::Low, AnomalyKind::High, AnomalyKind::Impulse};
      }
      c.noise_sigma = number(cfg, "noise_sigma", 0.1);
      if (!(c.noise_sigma >= 0)) fail("noise_sigma must be non-negative");
      c.alpha_grid = cfg.contains("alpha_grid") ? number_list(cfg.at("alpha_grid"), "alpha_grid") : default_alpha_grid();
      if (cfg.contains("beta_pi_grid")) {
        for (double p : number_list(cfg.at("beta_pi_grid"), "beta_pi_grid")) c.beta_grid.push_back(p * std::numbers::pi);
      } else {
        c.beta_grid = default_beta_grid();
      }
      canon["seeds"] = c.seeds;
      ordered_json graphs = ordered_json::array();
      for (const auto& g : c.graphs) graphs.push_back(graph_spec_json(g));
      canon["graphs"] = graphs;
      ordered_json anomalies = ordered_json::array();
      for (auto a : c.anomalies) anomalies.push_back(to_string(a));
      canon["anomalies"] = anomalies;
      canon["noise_sigma"] = c.noise_sigma;
      canon["alpha_grid"] = c.alpha_grid;
      canon["beta_grid"] = c.beta_grid;
      break;
    }
  }
  if (!c.alpha.empty()) canon["alpha"] = c.alpha;
  if (!c.beta.empty()) canon["beta"] = c.beta;
  for (double a : c.alpha) {
    if (!(std::abs(a) <= 8.0)) fail("alpha values must satisfy |alpha| <= 8");
  }
  c.canonical = std::move(canon);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override,
                             std::optional<std::filesystem::path> out_override) {
  json j;
  try {
    j = json::parse(io::read_text(path));
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  } catch (const Error& e) {
    fail(e.what());
  }
  return parse_config(j, path.parent_path(), seed_override, out_override);
}

}  // namespace gfrht::harness
