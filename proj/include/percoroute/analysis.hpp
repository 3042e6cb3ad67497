#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percoroute/trial.hpp"

namespace percoroute {

// One point of the lower-bound check: empirical Pr[X < t | u ~ v] against
// (t*eta + Pr[(u~v) in S]) / Pr[u~v].
struct BoundCheckReport {
  double t = 0.0;
  double empirical_cdf = 0.0;
  double bound_value = 0.0;
  std::uint64_t n_trials = 0;
  std::uint64_t n_conditioned = 0;
  double standard_error = 0.0;
  bool violated = false;  // empirical exceeds bound beyond 3 standard errors
};

// Monte-Carlo check of the query lower bound on the double tree, where the
// cut-enclosed set is the second tree, the source root sits outside it, and
// eta = p^depth is exact. Requires p^2 > 1/2 so conditioning has mass.
std::vector<BoundCheckReport> validate_query_lower_bound(int depth, double p,
                                                         const std::vector<double>& t_grid,
                                                         std::uint64_t n_trials,
                                                         std::uint64_t base_seed = 1);

// Parses a threshold grid: either an explicit comma list ("1,2,5.5") or a
// geometric range spec ("geom:<lo>:<hi>:<count>").
std::vector<double> parse_t_grid(const std::string& spec);
std::vector<double> geometric_grid(double lo, double hi, int count);

struct BallPathCount {
  std::uint64_t exact_count = 0;  // walks per fixed boundary vertex
  std::uint64_t bound = 0;        // n^k * l^(2k) * l!
  bool within_bound = false;
};

// Exhaustively counts hypercube walks of length l+2k from the center of a
// radius-l ball to a fixed vertex at distance l, never leaving the ball
// (non-simple walks included). Guarded to n <= 6, l <= 3, k <= 2.
BallPathCount count_ball_paths(int n, int l, int k);

// Per-cell aggregates. Probe statistics are over conditioned (connected)
// trials; mean path length is over found trials.
struct SummaryStats {
  std::uint64_t n_trials = 0;
  std::uint64_t n_conditioned = 0;
  double success_rate_within_budget = 0.0;  // found / conditioned
  double probes_mean = 0.0;
  double probes_median = 0.0;
  double probes_p90 = 0.0;
  std::uint64_t probes_max = 0;
  double mean_path_length = 0.0;
};

SummaryStats summarize(const std::vector<TrialRecord>& records);

enum class ScalingModel { linear, power_law, exponential };

ScalingModel scaling_model_from_name(const std::string& name);

struct ScalingFit {
  double coefficient = 0.0;  // slope / exponent / rate, per the model
  double intercept = 0.0;    // in the transformed space
  double residual = 0.0;     // RMS residual in the transformed space
};

// Least-squares fit on the axes appropriate to the model: raw for linear,
// log-log for power_law, semilog for exponential. Throws FitError on
// degenerate input (fewer than 2 distinct sizes, or nonpositive values
// under a log transform).
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& size_value,
                       ScalingModel model);

}  // namespace percoroute
