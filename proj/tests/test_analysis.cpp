#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "percoroute/analysis.hpp"
#include "percoroute/percolation.hpp"

using namespace percoroute;

namespace {

// Independent oracle for the ball-walk counts: plain recursive enumeration.
std::uint64_t enumerate_walks(int n, int l, std::uint64_t cur, std::uint64_t target,
                              int steps_left) {
  if (steps_left == 0) return cur == target ? 1 : 0;
  std::uint64_t total = 0;
  for (int d = 0; d < n; ++d) {
    const std::uint64_t next = cur ^ (std::uint64_t(1) << d);
    if (__builtin_popcountll(next) <= l) {
      total += enumerate_walks(n, l, next, target, steps_left - 1);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("lower-bound reports: zero threshold is vacuous and never violated") {
  const auto reports = validate_query_lower_bound(4, 0.9, {0.0, 1.0}, 200, 5);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].empirical_cdf == 0.0);
  CHECK(reports[0].bound_value == 0.0);
  CHECK(!reports[0].violated);
}

TEST_CASE("lower bound uses eta = p^depth over the connectivity estimate") {
  const int depth = 3;
  const double p = 0.8;  // eta = 0.512
  const auto reports = validate_query_lower_bound(depth, p, {2.0}, 500, 11);
  REQUIRE(reports.size() == 1);
  const double pr_connected = static_cast<double>(reports[0].n_conditioned) /
                              static_cast<double>(reports[0].n_trials);
  CHECK(reports[0].bound_value ==
        doctest::Approx(2.0 * 0.512 / pr_connected).epsilon(1e-12));
}

TEST_CASE("lower bound holds across a geometric grid at modest depth") {
  const int depth = 6;
  const double p = 0.9;
  const auto grid = geometric_grid(1.0, std::pow(p, -depth), 10);
  for (const auto& r : validate_query_lower_bound(depth, p, grid, 2000, 21)) {
    CHECK(!r.violated);
    CHECK(r.empirical_cdf >= 0.0);
    CHECK(r.empirical_cdf <= 1.0);
    CHECK(r.bound_value >= 0.0);
  }
}

TEST_CASE("lower-bound check rejects subcritical p and starved conditioning") {
  CHECK_THROWS_AS(validate_query_lower_bound(5, 0.7, {1.0}, 10, 1), ConfigError);
  CHECK_THROWS_AS(validate_query_lower_bound(5, 0.9, {1.0}, 0, 1), ConfigError);
  // A single-trial run eventually hits a disconnected sample, which must
  // surface as insufficient data rather than a silent division by zero.
  bool raised = false;
  for (std::uint64_t seed = 0; seed < 300 && !raised; ++seed) {
    try {
      validate_query_lower_bound(8, 0.75, {1.0}, 1, seed);
    } catch (const InsufficientDataError&) {
      raised = true;
    }
  }
  CHECK(raised);
}

TEST_CASE("threshold grids parse from lists and geometric specs") {
  const auto list = parse_t_grid("1,2,5.5");
  REQUIRE(list.size() == 3);
  CHECK(list[2] == doctest::Approx(5.5));
  const auto geom = parse_t_grid("geom:1:8:4");
  REQUIRE(geom.size() == 4);
  CHECK(geom[0] == doctest::Approx(1.0));
  CHECK(geom[1] == doctest::Approx(2.0));
  CHECK(geom[2] == doctest::Approx(4.0));
  CHECK(geom[3] == doctest::Approx(8.0));
  CHECK_THROWS_AS(parse_t_grid("geom:1:8"), ConfigError);
  CHECK_THROWS_AS(parse_t_grid("geom:0:8:3"), ConfigError);
  CHECK_THROWS_AS(parse_t_grid("a,b"), ConfigError);
  CHECK_THROWS_AS(parse_t_grid(""), ConfigError);
}

TEST_CASE("ball-path counts: k = 0 collapses to l! exactly") {
  for (int n = 1; n <= 6; ++n) {
    for (int l = 1; l <= std::min(3, n); ++l) {
      std::uint64_t factorial = 1;
      for (int i = 2; i <= l; ++i) factorial *= i;
      const BallPathCount c = count_ball_paths(n, l, 0);
      CHECK(c.exact_count == factorial);
      CHECK(c.bound == factorial);
    }
  }
  CHECK(count_ball_paths(3, 1, 0).exact_count == 1);  // the single edge
}

TEST_CASE("ball-path counts: frozen exact values") {
  CHECK(count_ball_paths(4, 2, 1).exact_count == 20);  // bound 32
  CHECK(count_ball_paths(4, 2, 1).bound == 32);
  CHECK(count_ball_paths(5, 2, 1).exact_count == 26);
  CHECK(count_ball_paths(6, 3, 2).exact_count == 4272);
  CHECK(count_ball_paths(6, 3, 2).bound == 17496);
}

TEST_CASE("ball-path counts agree with brute-force enumeration everywhere") {
  for (int n = 1; n <= 6; ++n) {
    for (int l = 1; l <= std::min(3, n); ++l) {
      for (int k = 0; k <= 2; ++k) {
        const BallPathCount c = count_ball_paths(n, l, k);
        const std::uint64_t target = (std::uint64_t(1) << l) - 1;
        CHECK(c.exact_count == enumerate_walks(n, l, 0, target, l + 2 * k));
        CHECK(c.within_bound);
      }
    }
  }
}

TEST_CASE("ball-path counting refuses sizes beyond the enumeration guard") {
  CHECK_THROWS_AS(count_ball_paths(7, 2, 1), CapacityError);
  CHECK_THROWS_AS(count_ball_paths(4, 4, 1), CapacityError);
  CHECK_THROWS_AS(count_ball_paths(4, 2, 3), CapacityError);
  CHECK_THROWS_AS(count_ball_paths(2, 3, 0), CapacityError);  // l > n
}

namespace {

TrialRecord make_record(bool connected, RouteStatus status, std::uint64_t probes,
                        std::int64_t path_len) {
  TrialRecord r;
  r.connected = connected;
  r.status = status;
  r.probes = probes;
  r.path_len = path_len;
  return r;
}

}  // namespace

TEST_CASE("summarize conditions on connectivity and is permutation-invariant") {
  std::vector<TrialRecord> records = {
      make_record(true, RouteStatus::found, 10, 3),
      make_record(true, RouteStatus::no_path, 20, -1),
      make_record(false, RouteStatus::no_path, 4, -1),
      make_record(true, RouteStatus::found, 30, 5),
  };
  const SummaryStats s = summarize(records);
  CHECK(s.n_trials == 4);
  CHECK(s.n_conditioned == 3);
  CHECK(s.success_rate_within_budget == doctest::Approx(2.0 / 3.0));
  CHECK(s.probes_mean == doctest::Approx(20.0));
  CHECK(s.probes_median == doctest::Approx(20.0));
  CHECK(s.probes_p90 == doctest::Approx(30.0));
  CHECK(s.probes_max == 30);
  CHECK(s.mean_path_length == doctest::Approx(4.0));
  CHECK(s.probes_median <= s.probes_p90);

  std::mt19937 rng(3);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(records.begin(), records.end(), rng);
    const SummaryStats t = summarize(records);
    CHECK(t.probes_mean == doctest::Approx(s.probes_mean));
    CHECK(t.probes_median == doctest::Approx(s.probes_median));
    CHECK(t.probes_p90 == doctest::Approx(s.probes_p90));
    CHECK(t.n_conditioned == s.n_conditioned);
  }

  const SummaryStats empty = summarize({make_record(false, RouteStatus::no_path, 1, -1)});
  CHECK(empty.n_conditioned == 0);
  CHECK(empty.probes_mean == 0.0);
}

TEST_CASE("scaling fits recover exact laws") {
  // probes = 4 * n over three sizes: power-law exponent 1.
  const ScalingFit power = fit_scaling({{8, 32}, {16, 64}, {32, 128}}, ScalingModel::power_law);
  CHECK(power.coefficient == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(power.residual == doctest::Approx(0.0).epsilon(1e-9));

  // probes = 3 * p^-n: exponential rate log(1/p).
  const double p = 0.85;
  std::vector<std::pair<double, double>> exp_points;
  for (const double n : {8.0, 10.0, 12.0, 14.0}) {
    exp_points.emplace_back(n, 3.0 * std::pow(p, -n));
  }
  const ScalingFit expo = fit_scaling(exp_points, ScalingModel::exponential);
  CHECK(expo.coefficient == doctest::Approx(std::log(1.0 / p)).epsilon(1e-9));

  const ScalingFit linear = fit_scaling({{1, 5}, {2, 8}, {3, 11}}, ScalingModel::linear);
  CHECK(linear.coefficient == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(linear.intercept == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("scaling fits reject degenerate input") {
  CHECK_THROWS_AS(fit_scaling({{8, 32}}, ScalingModel::linear), FitError);
  CHECK_THROWS_AS(fit_scaling({{8, 32}, {8, 64}}, ScalingModel::linear), FitError);
  CHECK_THROWS_AS(fit_scaling({{8, 0}, {16, 4}}, ScalingModel::power_law), FitError);
  CHECK_THROWS_AS(fit_scaling({{8, -1}, {16, 4}}, ScalingModel::exponential), FitError);
  CHECK_THROWS_AS(scaling_model_from_name("cubic"), ConfigError);
  CHECK(scaling_model_from_name("power-law") == ScalingModel::power_law);
}
