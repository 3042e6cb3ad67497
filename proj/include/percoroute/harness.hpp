#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "percoroute/analysis.hpp"
#include "percoroute/trial.hpp"

namespace percoroute {

enum class EndpointRule { antipodal, roots, fixed_pair, distance_pair };

const char* endpoint_rule_name(EndpointRule rule);
EndpointRule endpoint_rule_from_name(const std::string& name);
EndpointRule default_endpoint_rule(Family family);

// One conditioned Monte-Carlo sweep over (family, size, p or alpha) cells.
struct SweepConfig {
  Family family = Family::hypercube;
  std::vector<std::uint64_t> sizes;
  std::vector<double> p_values;       // exactly one of p_values/alpha_values
  std::vector<double> alpha_values;   // hypercube only: p = n^-alpha
  int mesh_dim = 2;
  std::uint64_t mesh_side = 0;        // 0: defaults to 2n, pair centered
  std::string router = "bfs";
  std::optional<EndpointRule> endpoints;  // default per family
  std::uint64_t fixed_u = 0, fixed_v = 1;
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 1;
  std::optional<std::uint64_t> budget;
  int stage_radius = 3;
  int threads = 0;                    // 0: hardware concurrency
  bool record_timing = false;         // keep the ms column deterministic by default
  std::uint64_t ground_truth_ceiling = kGroundTruthEdgeCeiling;
  std::string csv_path;               // empty: skip the file
  std::string summary_path;           // empty: skip the file

  static SweepConfig from_json(const nlohmann::json& j);
  static SweepConfig from_json_text(const std::string& text);
};

struct CellStats {
  Family family;
  std::uint64_t size = 0;
  double p = 0.0;
  std::optional<double> alpha;
  std::string router;
  EndpointRule endpoints = EndpointRule::fixed_pair;
  double pr_connected = 0.0;
  SummaryStats stats;
};

struct SweepResult {
  std::vector<TrialRecord> records;  // sorted by (cell, trial)
  std::vector<CellStats> cells;
};

// Runs every cell x trial, ground truth first, then the router; records both
// conditioned and unconditioned outcomes. Deterministic given the config;
// trials fan out over a worker pool without shared mutable state.
SweepResult run_sweep(const SweepConfig& cfg);

// Trial CSV, columns: family,size,p,alpha,router,trial,seed,connected,status,
// probes,calls,path_len,ms
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records,
                      bool timing);
std::string trials_csv(const std::vector<TrialRecord>& records, bool timing = false);

nlohmann::json summary_json(const SweepResult& result);

// Contrast table for the routing-complexity dichotomy on the hypercube.
struct PhasePortraitRow {
  std::uint64_t n = 0;
  double alpha = 0.0;
  double p = 0.0;
  std::uint64_t n_conditioned = 0;
  double success_rate = 0.0;   // within budget, conditioned
  double median_probes = 0.0;  // conditioned
};

// budget_power < 0 means unlimited, otherwise the per-cell budget is
// n^budget_power.
std::vector<PhasePortraitRow> phase_portrait_hypercube(
    const std::vector<std::uint64_t>& sizes, const std::vector<double>& alphas,
    const std::string& router, int budget_power, std::uint64_t trials,
    std::uint64_t base_seed, int stage_radius = 3, int threads = 0);

// Shared worker pool helper: calls fn(i) for i in [0, count) across threads.
// Exceptions propagate; results must be written to disjoint slots.
void parallel_for_indexed(std::uint64_t count, int threads,
                          const std::function<void(std::uint64_t)>& fn);

// Deterministic double formatting (shortest round-trip), shared by the CSV
// and JSON writers.
std::string format_double(double value);

}  // namespace percoroute
