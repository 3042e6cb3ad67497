#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "percoroute/routers.hpp"
#include "percoroute/topology.hpp"

namespace percoroute {

// One conditioned Monte-Carlo sample: cell parameters, seed, ground-truth
// connectivity, and the routing outcome. (cell, seed) regenerate an
// identical record.
struct TrialRecord {
  Family family = Family::hypercube;
  std::uint64_t size = 0;  // n (hypercube/doubletree/complete) or pair distance (mesh)
  double p = 0.0;
  std::optional<double> alpha;  // set when p was derived as n^-alpha
  std::string router;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  bool connected = false;
  RouteStatus status = RouteStatus::no_path;
  std::uint64_t probes = 0;
  std::uint64_t calls = 0;
  std::int64_t path_len = -1;  // edges in the returned path; -1 when not found
  double wall_ms = 0.0;
};

}  // namespace percoroute
