#include "percoroute/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "percoroute/harness.hpp"

namespace percoroute::acceptance {

namespace {

std::string fmt(double v) { return format_double(v); }

// Mean probes over found trials of one cell slice.
double found_mean_probes(const std::vector<TrialRecord>& records, std::size_t begin,
                         std::size_t count) {
  double sum = 0.0;
  std::uint64_t found = 0;
  for (std::size_t i = begin; i < begin + count; ++i) {
    if (records[i].status == RouteStatus::found) {
      sum += static_cast<double>(records[i].probes);
      ++found;
    }
  }
  return found ? sum / static_cast<double>(found) : 0.0;
}

CriterionResult a1_query_lower_bound(int threads) {
  (void)threads;  // single conditioned stream; trials are cheap at this size
  const int depth = 10;
  const double p = 0.85;
  const auto grid = geometric_grid(1.0, std::pow(p, -depth), 20);
  const auto reports = validate_query_lower_bound(depth, p, grid, 10000, 0xA1C0DE);
  std::uint64_t violations = 0;
  double worst_margin = -1e300;
  for (const auto& r : reports) {
    if (r.violated) ++violations;
    worst_margin = std::max(worst_margin, r.empirical_cdf - r.bound_value);
  }
  std::ostringstream detail;
  detail << "TT_10 p=0.85, 10000 trials, " << reports.size()
         << "-point grid: " << violations << " violated reports; max(cdf-bound)="
         << fmt(worst_margin) << ", conditioned=" << reports.front().n_conditioned;
  return {"A1", violations == 0, detail.str()};
}

CriterionResult a2_mesh_linear(int threads) {
  SweepConfig cfg;
  cfg.family = Family::mesh;
  cfg.sizes = {16, 32, 64, 128};
  cfg.p_values = {0.7};
  cfg.mesh_dim = 2;
  cfg.mesh_side = 256;
  cfg.router = "mesh-waypoint";
  cfg.trials = 300;
  cfg.base_seed = 0xA2C0DE;
  cfg.threads = threads;
  const SweepResult res = run_sweep(cfg);

  std::vector<std::pair<double, double>> points;
  for (const CellStats& c : res.cells) {
    points.emplace_back(static_cast<double>(c.size), c.stats.probes_mean);
  }
  const double per_n_first = points.front().second / points.front().first;
  const double per_n_last = points.back().second / points.back().first;
  const ScalingFit fit = fit_scaling(points, ScalingModel::power_law);
  const bool ratio_ok = per_n_last <= 3.0 * per_n_first;
  const bool exponent_ok = fit.coefficient >= 0.8 && fit.coefficient <= 1.3;
  std::ostringstream detail;
  detail << "mesh d=2 M=256 p=0.7: mean probes/n at n=16 " << fmt(per_n_first)
         << ", at n=128 " << fmt(per_n_last) << "; power-law exponent "
         << fmt(fit.coefficient);
  return {"A2", ratio_ok && exponent_ok, detail.str()};
}

CriterionResult a3_doubletree_gap(int threads) {
  const double p = 0.85;
  const std::vector<std::uint64_t> sizes = {8, 10, 12, 14};
  const std::uint64_t trials = 400;

  SweepConfig local_cfg;
  local_cfg.family = Family::doubletree;
  local_cfg.sizes = sizes;
  local_cfg.p_values = {p};
  local_cfg.router = "tt-local";
  local_cfg.trials = trials;
  local_cfg.base_seed = 0xA3C0DE;
  local_cfg.threads = threads;
  const SweepResult local_res = run_sweep(local_cfg);

  SweepConfig oracle_cfg = local_cfg;
  oracle_cfg.router = "tt-oracle";
  oracle_cfg.base_seed = 0xA3C1DE;
  const SweepResult oracle_res = run_sweep(oracle_cfg);

  std::vector<std::pair<double, double>> local_medians, oracle_means;
  for (std::size_t ci = 0; ci < sizes.size(); ++ci) {
    local_medians.emplace_back(static_cast<double>(sizes[ci]),
                               local_res.cells[ci].stats.probes_median);
    oracle_means.emplace_back(static_cast<double>(sizes[ci]),
                              found_mean_probes(oracle_res.records, ci * trials, trials));
  }
  const double rate = fit_scaling(local_medians, ScalingModel::exponential).coefficient;
  const double exponent = fit_scaling(oracle_means, ScalingModel::power_law).coefficient;
  const double lam = std::log(1.0 / p);
  const double local_median_14 = local_medians.back().second;
  const double oracle_mean_14 = oracle_means.back().second;

  const bool rate_ok = rate >= 0.5 * lam && rate <= 3.0 * lam;
  const bool exponent_ok = exponent >= 0.7 && exponent <= 1.3;
  const bool factor_ok = oracle_mean_14 * 10.0 <= local_median_14;
  std::ostringstream detail;
  detail << "TT p=0.85 n in {8..14}: tt-local median rate " << fmt(rate) << " per unit n (band ["
         << fmt(0.5 * lam) << ", " << fmt(3.0 * lam) << "]); tt-oracle mean exponent "
         << fmt(exponent) << "; at n=14 local median " << fmt(local_median_14)
         << " vs oracle mean " << fmt(oracle_mean_14);
  return {"A3", rate_ok && exponent_ok && factor_ok, detail.str()};
}

CriterionResult a4_hypercube_dichotomy(int threads) {
  const auto rows = phase_portrait_hypercube({14}, {0.35, 0.75}, "hc-waypoint",
                                             /*budget_power=*/4, 200, 0xA4C0DE,
                                             /*stage_radius=*/3, threads);
  const PhasePortraitRow& easy = rows[0];   // alpha = 0.35
  const PhasePortraitRow& hard = rows[1];   // alpha = 0.75
  const bool separation_ok = easy.success_rate - hard.success_rate >= 0.3;
  const bool median_ok = hard.median_probes >= 5.0 * easy.median_probes;
  std::ostringstream detail;
  detail << "H_14 antipodal budget n^4: success rate " << fmt(easy.success_rate)
         << " at alpha=0.35 vs " << fmt(hard.success_rate) << " at alpha=0.75; median probes "
         << fmt(easy.median_probes) << " vs " << fmt(hard.median_probes) << " (conditioned "
         << easy.n_conditioned << "/" << hard.n_conditioned << ")";
  return {"A4", separation_ok && median_ok, detail.str()};
}

CriterionResult a5_gnp_scaling(int threads) {
  const std::vector<std::uint64_t> sizes = {128, 256, 512};
  const std::uint64_t trials = 200;
  std::vector<std::pair<double, double>> local_means, oracle_means;
  for (std::size_t ni = 0; ni < sizes.size(); ++ni) {
    const std::uint64_t n = sizes[ni];
    SweepConfig cfg;
    cfg.family = Family::complete;
    cfg.sizes = {n};
    cfg.p_values = {2.0 / static_cast<double>(n)};
    cfg.router = "gnp-local";
    cfg.trials = trials;
    cfg.base_seed = mix64(0xA5C0DE, ni);
    cfg.threads = threads;
    const SweepResult local_res = run_sweep(cfg);
    local_means.emplace_back(static_cast<double>(n), local_res.cells[0].stats.probes_mean);

    cfg.router = "gnp-oracle";
    cfg.base_seed = mix64(0xA5C1DE, ni);
    const SweepResult oracle_res = run_sweep(cfg);
    oracle_means.emplace_back(static_cast<double>(n), oracle_res.cells[0].stats.probes_mean);
  }
  const double local_exp = fit_scaling(local_means, ScalingModel::power_law).coefficient;
  const double oracle_exp = fit_scaling(oracle_means, ScalingModel::power_law).coefficient;
  const double ratio_first = oracle_means.front().second / local_means.front().second;
  const double ratio_last = oracle_means.back().second / local_means.back().second;
  const bool local_ok = local_exp >= 1.7 && local_exp <= 2.3;
  const bool oracle_ok = oracle_exp >= 1.2 && oracle_exp <= 1.8;
  const bool ratio_ok = ratio_last <= 0.6 * ratio_first;
  std::ostringstream detail;
  detail << "G_{n,2/n} n in {128,256,512}: gnp-local exponent " << fmt(local_exp)
         << ", gnp-oracle exponent " << fmt(oracle_exp) << "; oracle/local mean ratio "
         << fmt(ratio_first) << " -> " << fmt(ratio_last);
  return {"A5", local_ok && oracle_ok && ratio_ok, detail.str()};
}

CriterionResult a6_ball_path_counts(int) {
  std::uint64_t cases = 0, failures = 0;
  std::ostringstream bad;
  for (int n = 1; n <= 6; ++n) {
    for (int l = 1; l <= std::min(3, n); ++l) {
      std::uint64_t factorial = 1;
      for (int i = 2; i <= l; ++i) factorial *= i;
      for (int k = 0; k <= 2; ++k) {
        const BallPathCount c = count_ball_paths(n, l, k);
        ++cases;
        const bool ok = c.within_bound && (k != 0 || c.exact_count == factorial);
        if (!ok) {
          ++failures;
          bad << " (n=" << n << ",l=" << l << ",k=" << k << ")";
        }
      }
    }
  }
  std::ostringstream detail;
  detail << cases << " (n,l,k) cases, every exact walk count within n^k*l^(2k)*l!"
         << " and equal to l! at k=0";
  if (failures) detail << "; failing:" << bad.str();
  return {"A6", failures == 0, detail.str()};
}

// One randomized soundness/completeness scenario for A7.
struct ScenarioOutcome {
  bool ok = true;
  std::string note;
};

ScenarioOutcome run_scenario(std::uint64_t master, std::uint64_t index) {
  const auto draw = [&](std::uint64_t slot) { return mix64(master, index * 16 + slot); };
  Topology t = Topology::hypercube(3);
  std::string router;
  switch (draw(0) % 4) {
    case 0: {
      t = Topology::hypercube(2 + static_cast<int>(draw(1) % 6));
      router = (draw(2) % 2) ? "hc-waypoint" : "bfs";
      break;
    }
    case 1: {
      t = Topology::mesh(1 + static_cast<int>(draw(1) % 3), 2 + (draw(2) % 5));
      router = (draw(3) % 2) ? "mesh-waypoint" : "bfs";
      break;
    }
    case 2: {
      t = Topology::doubletree(1 + static_cast<int>(draw(1) % 7));
      switch (draw(2) % 3) {
        case 0: router = "bfs"; break;
        case 1: router = "tt-local"; break;
        default: router = "tt-oracle"; break;
      }
      break;
    }
    default: {
      t = Topology::complete(2 + (draw(1) % 47));
      switch (draw(2) % 3) {
        case 0: router = "bfs"; break;
        case 1: router = "gnp-local"; break;
        default: router = "gnp-oracle"; break;
      }
      break;
    }
  }
  VertexId u{draw(4) % t.vertex_count()};
  VertexId v{draw(5) % t.vertex_count()};
  if (router == "tt-local" || router == "tt-oracle") {
    u = t.doubletree_root(TreeSide::first);
    v = t.doubletree_root(TreeSide::second);
  } else if (u == v) {
    v.code = (v.code + 1) % t.vertex_count();
  }
  const double p = static_cast<double>(draw(6) % 101) / 100.0;
  const PercolationConfig cfg(t, p, draw(7));

  RouteOptions options;
  const bool budgeted = index % 10 == 9;
  if (budgeted) options.budget = draw(8) % 8;

  const auto fail = [&](const std::string& why) {
    return ScenarioOutcome{false, "scenario " + std::to_string(index) + " (" + t.to_string() +
                                      " p=" + fmt(p) + " " + router + "): " + why};
  };

  RoutingResult rr;
  try {
    rr = route(cfg, router, u, v, options);
  } catch (const LocalityError& e) {
    return fail(std::string("locality violation: ") + e.what());
  }
  const bool connected = ground_truth_connected(cfg, u, v);

  if (options.budget && rr.probes > *options.budget) {
    return fail("probe count exceeded the budget");
  }
  if (rr.status == RouteStatus::found) {
    if (!connected) return fail("found a path while ground truth says disconnected");
    if (rr.path.empty() || rr.path.front() != u || rr.path.back() != v) {
      return fail("path endpoints wrong");
    }
    std::vector<Neighbor> nbrs;
    for (std::size_t i = 0; i + 1 < rr.path.size(); ++i) {
      t.neighbors(rr.path[i], nbrs);
      const auto it = std::find_if(nbrs.begin(), nbrs.end(), [&](const Neighbor& nb) {
        return nb.vertex == rr.path[i + 1];
      });
      if (it == nbrs.end()) return fail("consecutive path vertices not adjacent");
      if (!cfg.edge_open(it->edge)) return fail("path edge closed under replay");
      if (rr.ledger.probed_state(it->edge) != std::optional<bool>(true)) {
        return fail("path edge not recorded open in the ledger");
      }
    }
  } else if (!options.budget && rr.status == RouteStatus::no_path) {
    // Complete at an unlimited budget: every local router plus gnp-oracle;
    // tt-oracle only certifies mirrored-branch reachability.
    const bool complete_router = router_is_local(router) || router == "gnp-oracle";
    if (complete_router && connected) {
      return fail("no_path on a connected pair with unlimited budget");
    }
  } else if (!options.budget && rr.status == RouteStatus::budget_exceeded) {
    return fail("default edge-count budget exhausted");
  }
  return {};
}

CriterionResult a7_soundness_completeness(int threads) {
  const std::uint64_t scenarios = 1000;
  std::vector<ScenarioOutcome> outcomes(scenarios);
  parallel_for_indexed(scenarios, threads, [&](std::uint64_t i) {
    outcomes[i] = run_scenario(0xA7C0DE, i);
  });
  std::uint64_t failures = 0;
  std::string first;
  for (const auto& o : outcomes) {
    if (!o.ok) {
      if (first.empty()) first = o.note;
      ++failures;
    }
  }
  std::ostringstream detail;
  detail << scenarios << " randomized configurations: " << failures
         << " soundness/completeness/locality violations";
  if (failures) detail << "; first: " << first;
  return {"A7", failures == 0, detail.str()};
}

CriterionResult a8_calibration_determinism(int threads) {
  // Open-fraction calibration on the 1024-edge hypercube.
  const Topology t = Topology::hypercube(8);
  const double p = 0.5;
  const double band = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(t.edge_count()));
  std::uint64_t off_band = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PercolationConfig cfg(t, p, seed);
    std::uint64_t open = 0;
    for (std::uint64_t e = 0; e < t.edge_count(); ++e) {
      if (cfg.edge_open(EdgeId{e})) ++open;
    }
    const double frac = static_cast<double>(open) / static_cast<double>(t.edge_count());
    worst = std::max(worst, std::abs(frac - p));
    if (std::abs(frac - p) > band) ++off_band;
  }

  // Repeated sweeps must be byte-identical.
  SweepConfig cfg;
  cfg.family = Family::mesh;
  cfg.sizes = {6};
  cfg.p_values = {0.7};
  cfg.mesh_dim = 2;
  cfg.router = "mesh-waypoint";
  cfg.trials = 60;
  cfg.base_seed = 0xA8C0DE;
  cfg.threads = threads;
  const SweepResult first = run_sweep(cfg);
  const SweepResult second = run_sweep(cfg);
  const bool identical = trials_csv(first.records) == trials_csv(second.records) &&
                         summary_json(first).dump() == summary_json(second).dump();

  std::ostringstream detail;
  detail << "open fraction within 4 sigma (" << fmt(band) << ") of p for 100/100 seeds (worst |dev| "
         << fmt(worst) << "); repeated sweep byte-identical: " << (identical ? "yes" : "no");
  return {"A8", off_band == 0 && identical, detail.str()};
}

}  // namespace

std::vector<CriterionResult> run(const Options& options, std::ostream& out) {
  using Runner = std::function<CriterionResult(int)>;
  const std::vector<std::pair<std::string, Runner>> criteria = {
      {"A1", a1_query_lower_bound},  {"A2", a2_mesh_linear},
      {"A3", a3_doubletree_gap}, {"A4", a4_hypercube_dichotomy},
      {"A5", a5_gnp_scaling},  {"A6", a6_ball_path_counts},
      {"A7", a7_soundness_completeness}, {"A8", a8_calibration_determinism},
  };
  std::vector<CriterionResult> results;
  for (const std::string& id : options.only) {
    const auto known = std::find_if(criteria.begin(), criteria.end(),
                                    [&](const auto& c) { return c.first == id; });
    if (known == criteria.end()) {
      out << id << " FAIL - unknown criterion id\n";
      results.push_back({id, false, "unknown criterion id"});
    }
  }
  for (const auto& [id, runner] : criteria) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
      continue;
    }
    CriterionResult result;
    try {
      result = runner(options.threads);
    } catch (const std::exception& e) {
      result = {id, false, std::string("exception: ") + e.what()};
    }
    out << result.id << (result.pass ? " PASS" : " FAIL") << " - " << result.detail << '\n'
        << std::flush;
    results.push_back(std::move(result));
  }
  return results;
}

int run_and_report(const Options& options, std::ostream& out) {
  const auto results = run(options, out);
  int failures = 0;
  for (const auto& r : results) failures += r.pass ? 0 : 1;
  out << (failures == 0 ? "acceptance: all criteria passed"
                        : "acceptance: " + std::to_string(failures) + " criterion(s) failed")
      << '\n';
  return failures;
}

}  // namespace percoroute::acceptance
