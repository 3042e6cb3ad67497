#include "percoroute/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "percoroute/percolation.hpp"

namespace percoroute {

std::vector<BoundCheckReport> validate_query_lower_bound(int depth, double p,
                                                         const std::vector<double>& t_grid,
                                                         std::uint64_t n_trials,
                                                         std::uint64_t base_seed) {
  if (!(p * p > 0.5) || p > 1.0) {
    throw ConfigError("lower-bound check needs p^2 > 1/2 so root connectivity has mass");
  }
  if (n_trials == 0) throw ConfigError("lower-bound check needs at least one trial");
  const Topology t = Topology::doubletree(depth);

  std::vector<std::uint64_t> conditioned_probes;
  conditioned_probes.reserve(n_trials);
  std::uint64_t n_conditioned = 0;
  for (std::uint64_t k = 0; k < n_trials; ++k) {
    const PercolationConfig cfg(t, p, mix64(base_seed, k));
    const bool connected = ground_truth_connected(cfg, t.doubletree_root(TreeSide::first),
                                                  t.doubletree_root(TreeSide::second));
    if (!connected) continue;
    ++n_conditioned;
    conditioned_probes.push_back(doubletree_local_route(cfg).probes);
  }
  if (n_conditioned == 0) {
    throw InsufficientDataError("no conditioned trials: the roots were never connected");
  }

  std::sort(conditioned_probes.begin(), conditioned_probes.end());
  const double pr_connected = static_cast<double>(n_conditioned) / static_cast<double>(n_trials);
  const double eta = std::pow(p, depth);

  std::vector<BoundCheckReport> reports;
  reports.reserve(t_grid.size());
  for (const double threshold : t_grid) {
    BoundCheckReport r;
    r.t = threshold;
    r.n_trials = n_trials;
    r.n_conditioned = n_conditioned;
    // Strict count #{X < t} via the sorted probe counts.
    const auto below = std::lower_bound(conditioned_probes.begin(), conditioned_probes.end(),
                                        threshold);
    r.empirical_cdf = static_cast<double>(below - conditioned_probes.begin()) /
                      static_cast<double>(n_conditioned);
    // Source root is outside the cut-enclosed set, so the numerator is t*eta.
    r.bound_value = threshold * eta / pr_connected;
    r.standard_error =
        std::sqrt(r.empirical_cdf * (1.0 - r.empirical_cdf) / static_cast<double>(n_conditioned));
    r.violated = r.empirical_cdf > r.bound_value + 3.0 * r.standard_error;
    reports.push_back(r);
  }
  return reports;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw ConfigError("geometric grid needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> grid;
  grid.reserve(count);
  if (count == 1) {
    grid.push_back(lo);
    return grid;
  }
  const double ratio = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid.push_back(lo * std::exp(ratio * i));
  return grid;
}

std::vector<double> parse_t_grid(const std::string& spec) {
  if (spec.rfind("geom:", 0) == 0) {
    std::stringstream ss(spec.substr(5));
    std::string part;
    std::vector<double> parts;
    while (std::getline(ss, part, ':')) {
      try {
        parts.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw ConfigError("bad geometric grid spec: " + spec);
      }
    }
    if (parts.size() != 3) throw ConfigError("geometric grid spec wants geom:lo:hi:count");
    return geometric_grid(parts[0], parts[1], static_cast<int>(parts[2]));
  }
  std::vector<double> grid;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad threshold list: " + spec);
    }
  }
  if (grid.empty()) throw ConfigError("empty threshold grid: " + spec);
  return grid;
}

BallPathCount count_ball_paths(int n, int l, int k) {
  if (n < 1 || n > 6 || l < 0 || l > 3 || k < 0 || k > 2 || l > n) {
    throw CapacityError("ball path enumeration supports 1 <= n <= 6, l <= min(3, n), k <= 2");
  }
  const std::uint64_t target = (std::uint64_t(1) << l) - 1;  // a fixed vertex at distance l
  const int steps = l + 2 * k;
  const std::uint64_t vertices = std::uint64_t(1) << n;

  // Walk counts by endpoint, one step at a time, pruned to the ball.
  std::vector<std::uint64_t> cur(vertices, 0), nxt(vertices, 0);
  cur[0] = 1;
  for (int s = 0; s < steps; ++s) {
    std::fill(nxt.begin(), nxt.end(), 0);
    for (std::uint64_t vtx = 0; vtx < vertices; ++vtx) {
      if (cur[vtx] == 0) continue;
      for (int d = 0; d < n; ++d) {
        const std::uint64_t w = vtx ^ (std::uint64_t(1) << d);
        if (__builtin_popcountll(w) <= l) nxt[w] += cur[vtx];
      }
    }
    cur.swap(nxt);
  }

  BallPathCount result;
  result.exact_count = cur[target];
  std::uint64_t factorial = 1;
  for (int i = 2; i <= l; ++i) factorial *= i;
  std::uint64_t bound = factorial;
  for (int i = 0; i < k; ++i) bound *= std::uint64_t(n) * l * l;
  result.bound = bound;
  result.within_bound = result.exact_count <= result.bound;
  if (!result.within_bound) {
    throw std::logic_error("ball path count exceeded its combinatorial bound");
  }
  return result;
}

namespace {

double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size() - 1, rank > 0 ? rank - 1 : 0)];
}

}  // namespace

SummaryStats summarize(const std::vector<TrialRecord>& records) {
  SummaryStats s;
  s.n_trials = records.size();
  std::vector<double> probes;
  double probes_sum = 0.0;
  std::uint64_t found = 0;
  double path_sum = 0.0;
  for (const TrialRecord& r : records) {
    if (!r.connected) continue;
    ++s.n_conditioned;
    probes.push_back(static_cast<double>(r.probes));
    probes_sum += static_cast<double>(r.probes);
    s.probes_max = std::max(s.probes_max, r.probes);
    if (r.status == RouteStatus::found) {
      ++found;
      path_sum += static_cast<double>(r.path_len);
    }
  }
  if (s.n_conditioned == 0) return s;
  std::sort(probes.begin(), probes.end());
  s.success_rate_within_budget =
      static_cast<double>(found) / static_cast<double>(s.n_conditioned);
  s.probes_mean = probes_sum / static_cast<double>(s.n_conditioned);
  s.probes_median = nearest_rank(probes, 0.5);
  s.probes_p90 = nearest_rank(probes, 0.9);
  s.mean_path_length = found ? path_sum / static_cast<double>(found) : 0.0;
  return s;
}

ScalingModel scaling_model_from_name(const std::string& name) {
  if (name == "linear") return ScalingModel::linear;
  if (name == "power-law" || name == "power_law") return ScalingModel::power_law;
  if (name == "exponential") return ScalingModel::exponential;
  throw ConfigError("unknown scaling model: " + name);
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& size_value,
                       ScalingModel model) {
  if (size_value.size() < 2) throw FitError("scaling fit needs at least two sizes");
  std::vector<double> xs, ys;
  xs.reserve(size_value.size());
  ys.reserve(size_value.size());
  for (const auto& [size, value] : size_value) {
    double x = size, y = value;
    if (model == ScalingModel::power_law) {
      if (!(size > 0.0) || !(value > 0.0)) throw FitError("power-law fit needs positive data");
      x = std::log(size);
      y = std::log(value);
    } else if (model == ScalingModel::exponential) {
      if (!(value > 0.0)) throw FitError("exponential fit needs positive values");
      y = std::log(value);
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double var_x = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    var_x += (xs[i] - mean_x) * (xs[i] - mean_x);
    cov += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (var_x <= 0.0) throw FitError("scaling fit needs at least two distinct sizes");

  ScalingFit fit;
  fit.coefficient = cov / var_x;
  fit.intercept = mean_y - fit.coefficient * mean_x;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double resid = ys[i] - (fit.intercept + fit.coefficient * xs[i]);
    ss += resid * resid;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace percoroute
