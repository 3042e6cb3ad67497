// percoroute: probe-complexity experiments for routing on randomly failing
// networks. Subcommands: route, sweep, validate-bound, count-paths, accept.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "percoroute/acceptance.hpp"
#include "percoroute/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitAcceptance = 4;

using percoroute::VertexId;

std::pair<VertexId, VertexId> default_pair(const percoroute::Topology& t) {
  using percoroute::Family;
  using percoroute::TreeSide;
  switch (t.family()) {
    case Family::doubletree:
      return {t.doubletree_root(TreeSide::first), t.doubletree_root(TreeSide::second)};
    default:
      return {VertexId{0}, VertexId{t.vertex_count() - 1}};
  }
}

int cmd_route(const std::string& topology_spec, double p, std::uint64_t seed,
              const std::string& router, std::int64_t u_code, std::int64_t v_code,
              std::uint64_t budget, int stage_radius, bool greedy,
              const std::string& ledger_csv) {
  const percoroute::Topology t = percoroute::Topology::parse(topology_spec);
  auto [u, v] = default_pair(t);
  if (u_code >= 0) u = VertexId{static_cast<std::uint64_t>(u_code)};
  if (v_code >= 0) v = VertexId{static_cast<std::uint64_t>(v_code)};

  const percoroute::PercolationConfig cfg(t, p, seed);
  percoroute::RouteOptions options;
  if (budget > 0) options.budget = budget;
  options.stage_radius = stage_radius;
  options.greedy_first = greedy;
  const percoroute::RoutingResult result = percoroute::route(cfg, router, u, v, options);

  nlohmann::json out{
      {"topology", t.to_string()},
      {"p", p},
      {"seed", seed},
      {"router", router},
      {"u", u.code},
      {"v", v.code},
      {"status", percoroute::route_status_name(result.status)},
      {"probes", result.probes},
      {"calls", result.calls},
      {"budget", result.budget},
  };
  if (result.status == percoroute::RouteStatus::found) {
    nlohmann::json path = nlohmann::json::array();
    nlohmann::json labels = nlohmann::json::array();
    for (const VertexId w : result.path) {
      path.push_back(w.code);
      labels.push_back(t.vertex_label(w));
    }
    out["path"] = std::move(path);
    out["path_labels"] = std::move(labels);
    out["path_len"] = result.path.size() - 1;
  }
  if (t.edge_count() <= percoroute::kGroundTruthEdgeCeiling) {
    out["connected"] = percoroute::ground_truth_connected(cfg, u, v);
  } else {
    out["connected"] = nullptr;
  }
  std::cout << out.dump(2) << '\n';

  if (!ledger_csv.empty()) {
    std::ofstream lout(ledger_csv);
    if (!lout) throw percoroute::ConfigError("cannot open ledger CSV path: " + ledger_csv);
    result.ledger.export_csv(lout);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& csv_override,
              const std::string& summary_override, int threads_override, bool timing) {
  std::ifstream in(config_path);
  if (!in) throw percoroute::ConfigError("cannot open sweep config: " + config_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  percoroute::SweepConfig cfg = percoroute::SweepConfig::from_json_text(buffer.str());
  if (!csv_override.empty()) cfg.csv_path = csv_override;
  if (!summary_override.empty()) cfg.summary_path = summary_override;
  if (threads_override > 0) cfg.threads = threads_override;
  if (timing) cfg.record_timing = true;

  const percoroute::SweepResult result = percoroute::run_sweep(cfg);
  if (cfg.summary_path.empty()) {
    std::cout << percoroute::summary_json(result).dump(2) << '\n';
  }
  std::cerr << "sweep: " << result.records.size() << " trials over " << result.cells.size()
            << " cells" << (cfg.csv_path.empty() ? "" : ", CSV at " + cfg.csv_path) << '\n';
  return kExitOk;
}

int cmd_validate_bound(int depth, double p, std::uint64_t trials, const std::string& grid_spec,
                       std::uint64_t seed) {
  const auto grid = percoroute::parse_t_grid(grid_spec);
  const auto reports = percoroute::validate_query_lower_bound(depth, p, grid, trials, seed);
  nlohmann::json out = nlohmann::json::array();
  bool violated = false;
  for (const auto& r : reports) {
    violated = violated || r.violated;
    out.push_back({{"t", r.t},
                   {"empirical_cdf", r.empirical_cdf},
                   {"bound_value", r.bound_value},
                   {"n_trials", r.n_trials},
                   {"n_conditioned", r.n_conditioned},
                   {"standard_error", r.standard_error},
                   {"violated", r.violated}});
  }
  std::cout << out.dump(2) << '\n';
  return violated ? kExitAcceptance : kExitOk;
}

int cmd_count_paths(int n, int l, int k, bool all) {
  nlohmann::json out = nlohmann::json::array();
  bool ok = true;
  const auto run_one = [&](int nn, int ll, int kk) {
    const percoroute::BallPathCount c = percoroute::count_ball_paths(nn, ll, kk);
    ok = ok && c.within_bound;
    out.push_back({{"n", nn},
                   {"l", ll},
                   {"k", kk},
                   {"count", c.exact_count},
                   {"bound", c.bound},
                   {"ok", c.within_bound}});
  };
  if (all) {
    for (int nn = 1; nn <= 6; ++nn) {
      for (int ll = 1; ll <= std::min(3, nn); ++ll) {
        for (int kk = 0; kk <= 2; ++kk) run_one(nn, ll, kk);
      }
    }
  } else {
    run_one(n, l, k);
  }
  std::cout << out.dump(2) << '\n';
  return ok ? kExitOk : kExitAcceptance;
}

int cmd_accept(const std::string& only_csv, int threads) {
  percoroute::acceptance::Options options;
  options.threads = threads;
  if (!only_csv.empty()) {
    std::stringstream ss(only_csv);
    std::string id;
    while (std::getline(ss, id, ',')) options.only.push_back(id);
  }
  const int failures = percoroute::acceptance::run_and_report(options, std::cout);
  return failures == 0 ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probe-complexity experiments for routing on randomly failing networks"};
  app.require_subcommand(1);

  // route
  std::string topology_spec = "hypercube:n=8";
  double p = 0.5;
  std::uint64_t seed = 1;
  std::string router = "bfs";
  std::int64_t u_code = -1, v_code = -1;
  std::uint64_t budget = 0;
  int stage_radius = 3;
  bool greedy = false;
  std::string ledger_csv;
  CLI::App* route = app.add_subcommand("route", "run one routing trial, print JSON");
  route->add_option("-t,--topology", topology_spec,
                    "topology descriptor, e.g. mesh:d=2,M=64")->required();
  route->add_option("-p,--open-probability", p, "edge open probability")->required();
  route->add_option("-s,--seed", seed, "subgraph seed");
  route->add_option("-r,--router", router, "bfs|mesh-waypoint|hc-waypoint|tt-local|tt-oracle|gnp-local|gnp-oracle");
  route->add_option("-u", u_code, "source vertex code (default per family)");
  route->add_option("-v", v_code, "target vertex code (default per family)");
  route->add_option("--budget", budget, "distinct-probe ceiling (0 = edge count)");
  route->add_option("--radius", stage_radius, "hc-waypoint per-stage percolation depth");
  route->add_flag("--greedy", greedy, "hc-waypoint greedy stage-0 heuristic");
  route->add_option("--ledger-csv", ledger_csv, "write the probe log as CSV");

  // sweep
  std::string sweep_config, csv_override, summary_override;
  int threads = 0;
  bool timing = false;
  CLI::App* sweep = app.add_subcommand("sweep", "run a Monte-Carlo sweep from a JSON config");
  sweep->add_option("config", sweep_config, "sweep config JSON file")->required();
  sweep->add_option("--csv", csv_override, "override the trial CSV output path");
  sweep->add_option("--summary", summary_override, "override the summary JSON output path");
  sweep->add_option("--threads", threads, "worker threads (0 = hardware)");
  sweep->add_flag("--timing", timing, "record wall time in the ms column (breaks byte-identical reruns)");

  // validate-bound
  int depth = 10;
  double vb_p = 0.85;
  std::uint64_t trials = 10000;
  std::string grid_spec = "geom:1:5.07:20";
  std::uint64_t vb_seed = 1;
  CLI::App* vb = app.add_subcommand("validate-bound", "query lower-bound check on the double tree");
  vb->add_option("-n,--depth", depth, "double tree depth")->required();
  vb->add_option("-p,--open-probability", vb_p, "edge open probability (p^2 > 1/2)")->required();
  vb->add_option("--trials", trials, "Monte-Carlo trials");
  vb->add_option("--t-grid", grid_spec, "thresholds: comma list or geom:lo:hi:count");
  vb->add_option("-s,--seed", vb_seed, "base seed");

  // count-paths
  int cp_n = 4, cp_l = 2, cp_k = 1;
  CLI::App* cp = app.add_subcommand("count-paths", "exact in-ball walk counts vs the combinatorial bound");
  CLI::Option* opt_n = cp->add_option("-n", cp_n, "hypercube dimension (<= 6)");
  cp->add_option("-l", cp_l, "ball radius / target distance (<= 3)")->needs(opt_n);
  cp->add_option("-k", cp_k, "extra step pairs (<= 2)")->needs(opt_n);

  // accept
  std::string only;
  int accept_threads = 0;
  CLI::App* accept = app.add_subcommand("accept", "run the acceptance suite");
  accept->add_option("--only", only, "comma-separated criterion ids, e.g. A2,A5");
  accept->add_option("--threads", accept_threads, "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (route->parsed()) {
      return cmd_route(topology_spec, p, seed, router, u_code, v_code, budget, stage_radius,
                       greedy, ledger_csv);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_config, csv_override, summary_override, threads, timing);
    }
    if (vb->parsed()) return cmd_validate_bound(depth, vb_p, trials, grid_spec, vb_seed);
    if (cp->parsed()) return cmd_count_paths(cp_n, cp_l, cp_k, !opt_n->count());
    if (accept->parsed()) return cmd_accept(only, accept_threads);
  } catch (const percoroute::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const percoroute::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const percoroute::EncodingError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const percoroute::FamilyError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
