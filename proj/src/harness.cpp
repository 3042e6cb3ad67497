#include "percoroute/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace percoroute {

const char* endpoint_rule_name(EndpointRule rule) {
  switch (rule) {
    case EndpointRule::antipodal: return "antipodal";
    case EndpointRule::roots: return "roots";
    case EndpointRule::fixed_pair: return "fixed";
    case EndpointRule::distance_pair: return "distance";
  }
  return "?";
}

EndpointRule endpoint_rule_from_name(const std::string& name) {
  if (name == "antipodal") return EndpointRule::antipodal;
  if (name == "roots") return EndpointRule::roots;
  if (name == "fixed") return EndpointRule::fixed_pair;
  if (name == "distance") return EndpointRule::distance_pair;
  throw ConfigError("unknown endpoint rule: " + name);
}

EndpointRule default_endpoint_rule(Family family) {
  switch (family) {
    case Family::hypercube: return EndpointRule::antipodal;
    case Family::doubletree: return EndpointRule::roots;
    case Family::mesh: return EndpointRule::distance_pair;
    case Family::complete: return EndpointRule::fixed_pair;
  }
  return EndpointRule::fixed_pair;
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

void parallel_for_indexed(std::uint64_t count, int threads,
                          const std::function<void(std::uint64_t)>& fn) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw > 0 ? static_cast<int>(hw) : 1;
  }
  threads = static_cast<int>(std::min<std::uint64_t>(threads, count));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

std::uint64_t get_uint(const nlohmann::json& j, const char* key) {
  if (!j.at(key).is_number_unsigned()) {
    throw ConfigError(std::string("field '") + key + "' must be a nonnegative integer");
  }
  return j.at(key).get<std::uint64_t>();
}

std::vector<double> get_double_list(const nlohmann::json& j) {
  std::vector<double> values;
  if (j.is_number()) {
    values.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& item : j) {
      if (!item.is_number()) throw ConfigError("expected a number list");
      values.push_back(item.get<double>());
    }
  } else {
    throw ConfigError("expected a number or a number list");
  }
  if (values.empty()) throw ConfigError("empty number list");
  return values;
}

}  // namespace

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  static const std::unordered_set<std::string> known_keys = {
      "family", "sizes",  "p",       "alpha",        "router",  "endpoints",
      "mesh",   "fixed",  "trials",  "seed",         "budget",  "stage_radius",
      "threads", "timing", "ceiling", "csv",          "summary"};
  for (const auto& [key, value] : j.items()) {
    if (!known_keys.count(key)) throw ConfigError("unknown sweep config field: " + key);
  }

  SweepConfig cfg;
  if (!j.contains("family") || !j.contains("sizes") || !j.contains("router")) {
    throw ConfigError("sweep config needs family, sizes and router");
  }
  cfg.family = family_from_name(j.at("family").get<std::string>());
  if (!j.at("sizes").is_array() || j.at("sizes").empty()) {
    throw ConfigError("sizes must be a nonempty array");
  }
  for (const auto& s : j.at("sizes")) {
    if (!s.is_number_unsigned()) throw ConfigError("sizes must be nonnegative integers");
    cfg.sizes.push_back(s.get<std::uint64_t>());
  }
  cfg.router = j.at("router").get<std::string>();

  if (j.contains("p") == j.contains("alpha")) {
    throw ConfigError("sweep config needs exactly one of 'p' or 'alpha'");
  }
  if (j.contains("p")) cfg.p_values = get_double_list(j.at("p"));
  if (j.contains("alpha")) cfg.alpha_values = get_double_list(j.at("alpha"));

  if (j.contains("endpoints")) {
    cfg.endpoints = endpoint_rule_from_name(j.at("endpoints").get<std::string>());
  }
  if (j.contains("mesh")) {
    const auto& m = j.at("mesh");
    if (m.contains("d")) cfg.mesh_dim = static_cast<int>(get_uint(m, "d"));
    if (m.contains("M")) cfg.mesh_side = get_uint(m, "M");
  }
  if (j.contains("fixed")) {
    cfg.fixed_u = get_uint(j.at("fixed"), "u");
    cfg.fixed_v = get_uint(j.at("fixed"), "v");
  }
  if (j.contains("trials")) cfg.trials = get_uint(j, "trials");
  if (j.contains("seed")) cfg.base_seed = get_uint(j, "seed");
  if (j.contains("budget")) {
    const std::uint64_t budget = get_uint(j, "budget");
    if (budget > 0) cfg.budget = budget;  // 0 keeps the edge-count default
  }
  if (j.contains("stage_radius")) cfg.stage_radius = static_cast<int>(get_uint(j, "stage_radius"));
  if (j.contains("threads")) cfg.threads = static_cast<int>(get_uint(j, "threads"));
  if (j.contains("timing")) {
    if (!j.at("timing").is_boolean()) throw ConfigError("timing must be a boolean");
    cfg.record_timing = j.at("timing").get<bool>();
  }
  if (j.contains("ceiling")) cfg.ground_truth_ceiling = get_uint(j, "ceiling");
  if (j.contains("csv")) cfg.csv_path = j.at("csv").get<std::string>();
  if (j.contains("summary")) cfg.summary_path = j.at("summary").get<std::string>();
  return cfg;
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad sweep config JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad sweep config: ") + e.what());
  }
}

namespace {

struct Cell {
  Topology topology;
  std::uint64_t size;
  double p;
  std::optional<double> alpha;
  VertexId u, v;
};

Topology cell_topology(const SweepConfig& cfg, std::uint64_t size) {
  switch (cfg.family) {
    case Family::hypercube: return Topology::hypercube(static_cast<int>(size));
    case Family::doubletree: return Topology::doubletree(static_cast<int>(size));
    case Family::complete: return Topology::complete(size);
    case Family::mesh: {
      const std::uint64_t side = cfg.mesh_side ? cfg.mesh_side : 2 * size;
      if (side < size + 1) {
        throw ConfigError("mesh side must exceed the pair distance (M >= n+1)");
      }
      return Topology::mesh(cfg.mesh_dim, side);
    }
  }
  throw ConfigError("bad family");
}

std::pair<VertexId, VertexId> resolve_endpoints(EndpointRule rule, const Topology& t,
                                                const SweepConfig& cfg, std::uint64_t size) {
  switch (rule) {
    case EndpointRule::antipodal:
      if (t.family() != Family::hypercube) {
        throw ConfigError("antipodal endpoints need a hypercube topology");
      }
      return {VertexId{0}, VertexId{t.vertex_count() - 1}};
    case EndpointRule::roots:
      if (t.family() != Family::doubletree) {
        throw ConfigError("root endpoints need a doubletree topology");
      }
      return {t.doubletree_root(TreeSide::first), t.doubletree_root(TreeSide::second)};
    case EndpointRule::distance_pair: {
      if (t.family() != Family::mesh) {
        throw ConfigError("distance endpoints need a mesh topology");
      }
      // Pair at the prescribed distance along axis 0, centered in the cube.
      std::vector<std::uint64_t> coords(t.dimension(), t.side() / 2);
      coords[0] = (t.side() - size) / 2;
      const VertexId u = t.mesh_vertex(coords);
      coords[0] += size;
      return {u, t.mesh_vertex(coords)};
    }
    case EndpointRule::fixed_pair: {
      const VertexId u{cfg.fixed_u}, v{cfg.fixed_v};
      t.check_vertex(u);
      t.check_vertex(v);
      return {u, v};
    }
  }
  throw ConfigError("bad endpoint rule");
}

void validate_router_family(const std::string& router, Family family) {
  if (!router_known(router)) throw ConfigError("unknown router: " + router);
  const bool ok = router == "bfs" || (router == "mesh-waypoint" && family == Family::mesh) ||
                  (router == "hc-waypoint" && family == Family::hypercube) ||
                  ((router == "tt-local" || router == "tt-oracle") &&
                   family == Family::doubletree) ||
                  ((router == "gnp-local" || router == "gnp-oracle") &&
                   family == Family::complete);
  if (!ok) {
    throw ConfigError("router " + router + " does not run on family " +
                      family_name(family));
  }
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.sizes.empty()) throw ConfigError("sweep needs at least one size");
  if (cfg.trials < 1) throw ConfigError("sweep needs at least one trial per cell");
  if (cfg.p_values.empty() == cfg.alpha_values.empty()) {
    throw ConfigError("sweep needs exactly one of p values or alpha values");
  }
  if (!cfg.alpha_values.empty() && cfg.family != Family::hypercube) {
    throw ConfigError("alpha parameterization p = n^-alpha applies to the hypercube only");
  }
  for (const double p : cfg.p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p values must lie in [0, 1]");
  }
  for (const double a : cfg.alpha_values) {
    if (!(a >= 0.0)) throw ConfigError("alpha values must be nonnegative");
  }
  validate_router_family(cfg.router, cfg.family);
  const EndpointRule rule = cfg.endpoints.value_or(default_endpoint_rule(cfg.family));

  // Materialize cells up front so capacity and endpoint errors fire before
  // any trial runs.
  const bool alpha_mode = !cfg.alpha_values.empty();
  const std::size_t p_count = alpha_mode ? cfg.alpha_values.size() : cfg.p_values.size();
  std::vector<Cell> cells;
  cells.reserve(cfg.sizes.size() * p_count);
  for (const std::uint64_t size : cfg.sizes) {
    const Topology t = cell_topology(cfg, size);
    if (t.edge_count() > cfg.ground_truth_ceiling) {
      throw CapacityError("cell " + t.to_string() + " exceeds the ground-truth ceiling of " +
                          std::to_string(cfg.ground_truth_ceiling) + " edges");
    }
    const auto [u, v] = resolve_endpoints(rule, t, cfg, size);
    for (std::size_t pi = 0; pi < p_count; ++pi) {
      Cell cell{t, size, 0.0, std::nullopt, u, v};
      if (alpha_mode) {
        cell.alpha = cfg.alpha_values[pi];
        cell.p = std::pow(static_cast<double>(size), -*cell.alpha);
      } else {
        cell.p = cfg.p_values[pi];
      }
      cells.push_back(std::move(cell));
    }
  }

  SweepResult result;
  result.records.resize(cells.size() * cfg.trials);
  RouteOptions options;
  options.budget = cfg.budget;
  options.stage_radius = cfg.stage_radius;

  parallel_for_indexed(result.records.size(), cfg.threads, [&](std::uint64_t idx) {
    const std::uint64_t cell_index = idx / cfg.trials;
    const std::uint64_t trial = idx % cfg.trials;
    const Cell& cell = cells[cell_index];
    const std::uint64_t seed = mix64(mix64(cfg.base_seed, cell_index), trial);
    const PercolationConfig pc(cell.topology, cell.p, seed);

    TrialRecord rec;
    rec.family = cfg.family;
    rec.size = cell.size;
    rec.p = cell.p;
    rec.alpha = cell.alpha;
    rec.router = cfg.router;
    rec.trial = trial;
    rec.seed = seed;
    rec.connected = ground_truth_connected(pc, cell.u, cell.v, cfg.ground_truth_ceiling);
    const auto start = std::chrono::steady_clock::now();
    const RoutingResult rr = route(pc, cfg.router, cell.u, cell.v, options);
    const auto stop = std::chrono::steady_clock::now();
    rec.status = rr.status;
    rec.probes = rr.probes;
    rec.calls = rr.calls;
    rec.path_len = rr.status == RouteStatus::found
                       ? static_cast<std::int64_t>(rr.path.size()) - 1
                       : -1;
    rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    result.records[idx] = std::move(rec);
  });

  // Disjoint seed streams per (cell, trial).
  std::unordered_set<std::uint64_t> seeds;
  seeds.reserve(result.records.size());
  for (const TrialRecord& r : result.records) seeds.insert(r.seed);
  if (seeds.size() != result.records.size()) {
    throw std::runtime_error("trial seed streams collided; pick another base seed");
  }

  result.cells.reserve(cells.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const std::vector<TrialRecord> slice(result.records.begin() + ci * cfg.trials,
                                         result.records.begin() + (ci + 1) * cfg.trials);
    CellStats cs;
    cs.family = cfg.family;
    cs.size = cells[ci].size;
    cs.p = cells[ci].p;
    cs.alpha = cells[ci].alpha;
    cs.router = cfg.router;
    cs.endpoints = rule;
    cs.stats = summarize(slice);
    cs.pr_connected =
        static_cast<double>(cs.stats.n_conditioned) / static_cast<double>(cfg.trials);
    if (cs.stats.n_conditioned < 50) {
      std::cerr << "warning: cell " << cells[ci].topology.to_string() << " p="
                << format_double(cs.p) << " has only " << cs.stats.n_conditioned
                << " conditioned trials\n";
    }
    result.cells.push_back(std::move(cs));
  }

  if (!cfg.csv_path.empty()) {
    std::ofstream out(cfg.csv_path);
    if (!out) throw ConfigError("cannot open CSV output path: " + cfg.csv_path);
    write_trials_csv(out, result.records, cfg.record_timing);
    if (!out.good()) throw ConfigError("failed writing CSV output: " + cfg.csv_path);
  }
  if (!cfg.summary_path.empty()) {
    std::ofstream out(cfg.summary_path);
    if (!out) throw ConfigError("cannot open summary output path: " + cfg.summary_path);
    out << summary_json(result).dump(2) << '\n';
    if (!out.good()) throw ConfigError("failed writing summary output: " + cfg.summary_path);
  }
  return result;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool timing) {
  out << "family,size,p,alpha,router,trial,seed,connected,status,probes,calls,path_len,ms\n";
  for (const TrialRecord& r : records) {
    out << family_name(r.family) << ',' << r.size << ',' << format_double(r.p) << ','
        << (r.alpha ? format_double(*r.alpha) : std::string()) << ',' << r.router << ','
        << r.trial << ',' << r.seed << ',' << (r.connected ? 1 : 0) << ','
        << route_status_name(r.status) << ',' << r.probes << ',' << r.calls << ','
        << r.path_len << ',' << (timing ? format_double(r.wall_ms) : std::string("0"))
        << '\n';
  }
}

std::string trials_csv(const std::vector<TrialRecord>& records, bool timing) {
  std::ostringstream out;
  write_trials_csv(out, records, timing);
  return out.str();
}

nlohmann::json summary_json(const SweepResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (const CellStats& c : result.cells) {
    nlohmann::json j{
        {"family", family_name(c.family)},
        {"size", c.size},
        {"p", c.p},
        {"router", c.router},
        {"endpoints", endpoint_rule_name(c.endpoints)},
        {"n_trials", c.stats.n_trials},
        {"n_conditioned", c.stats.n_conditioned},
        {"pr_connected", c.pr_connected},
        {"success_rate_within_budget", c.stats.success_rate_within_budget},
        {"probes_mean", c.stats.probes_mean},
        {"probes_median", c.stats.probes_median},
        {"probes_p90", c.stats.probes_p90},
        {"probes_max", c.stats.probes_max},
        {"mean_path_length", c.stats.mean_path_length},
    };
    if (c.alpha) j["alpha"] = *c.alpha;
    cells.push_back(std::move(j));
  }
  return nlohmann::json{{"cells", std::move(cells)}};
}

std::vector<PhasePortraitRow> phase_portrait_hypercube(
    const std::vector<std::uint64_t>& sizes, const std::vector<double>& alphas,
    const std::string& router, int budget_power, std::uint64_t trials,
    std::uint64_t base_seed, int stage_radius, int threads) {
  std::vector<PhasePortraitRow> rows;
  for (std::size_t ni = 0; ni < sizes.size(); ++ni) {
    const std::uint64_t n = sizes[ni];
    SweepConfig cfg;
    cfg.family = Family::hypercube;
    cfg.sizes = {n};
    cfg.alpha_values = alphas;
    cfg.router = router;
    cfg.trials = trials;
    cfg.base_seed = mix64(base_seed, ni);
    cfg.stage_radius = stage_radius;
    cfg.threads = threads;
    if (budget_power >= 0) {
      std::uint64_t budget = 1;
      for (int i = 0; i < budget_power; ++i) budget *= n;
      cfg.budget = budget;
    }
    const SweepResult res = run_sweep(cfg);
    for (const CellStats& c : res.cells) {
      rows.push_back({n, c.alpha.value_or(0.0), c.p, c.stats.n_conditioned,
                      c.stats.success_rate_within_budget, c.stats.probes_median});
    }
  }
  return rows;
}

}  // namespace percoroute
