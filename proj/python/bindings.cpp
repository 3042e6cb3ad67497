#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "percoroute/acceptance.hpp"
#include "percoroute/harness.hpp"

namespace py = pybind11;
using namespace percoroute;

namespace {

py::dict routing_result_dict(const Topology& t, const RoutingResult& r) {
  py::dict out;
  out["status"] = route_status_name(r.status);
  out["probes"] = r.probes;
  out["calls"] = r.calls;
  out["budget"] = r.budget;
  if (r.status == RouteStatus::found) {
    py::list path, labels;
    for (const VertexId w : r.path) {
      path.append(w.code);
      labels.append(t.vertex_label(w));
    }
    out["path"] = std::move(path);
    out["path_labels"] = std::move(labels);
    out["path_len"] = r.path.size() - 1;
  } else {
    out["path"] = py::none();
  }
  return out;
}

RouteOptions make_options(std::optional<std::uint64_t> budget, int stage_radius,
                          bool greedy_first) {
  RouteOptions options;
  options.budget = budget;
  options.stage_radius = stage_radius;
  options.greedy_first = greedy_first;
  return options;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "routing over lazily sampled random subgraphs, with probe accounting";

  py::register_exception<EncodingError>(m, "EncodingError", PyExc_ValueError);
  py::register_exception<FamilyError>(m, "FamilyError", PyExc_ValueError);
  py::register_exception<LocalityError>(m, "LocalityError", PyExc_RuntimeError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);
  py::register_exception<FitError>(m, "FitError", PyExc_ValueError);

  py::class_<Topology>(m, "Topology")
      .def_static("hypercube", &Topology::hypercube, py::arg("n"))
      .def_static("mesh", &Topology::mesh, py::arg("d"), py::arg("M"))
      .def_static("doubletree", &Topology::doubletree, py::arg("n"))
      .def_static("complete", &Topology::complete, py::arg("n"))
      .def_static("parse", &Topology::parse, py::arg("text"))
      .def("__str__", &Topology::to_string)
      .def("__repr__",
           [](const Topology& t) { return "Topology('" + t.to_string() + "')"; })
      .def_property_readonly("family", [](const Topology& t) { return family_name(t.family()); })
      .def_property_readonly("vertex_count", &Topology::vertex_count)
      .def_property_readonly("edge_count", &Topology::edge_count)
      .def("degree", [](const Topology& t, std::uint64_t v) { return t.degree(VertexId{v}); })
      .def("neighbors",
           [](const Topology& t, std::uint64_t v) {
             py::list out;
             for (const Neighbor& nb : t.neighbors(VertexId{v})) {
               out.append(py::make_tuple(nb.vertex.code, nb.edge.code));
             }
             return out;
           },
           py::arg("v"))
      .def("endpoints",
           [](const Topology& t, std::uint64_t e) {
             const auto [a, b] = t.endpoints(EdgeId{e});
             return py::make_tuple(a.code, b.code);
           },
           py::arg("e"))
      .def("distance",
           [](const Topology& t, std::uint64_t u, std::uint64_t v) {
             return t.distance(VertexId{u}, VertexId{v});
           },
           py::arg("u"), py::arg("v"))
      .def("shortest_path_waypoints",
           [](const Topology& t, std::uint64_t u, std::uint64_t v) {
             py::list out;
             for (const VertexId w : t.shortest_path_waypoints(VertexId{u}, VertexId{v})) {
               out.append(w.code);
             }
             return out;
           },
           py::arg("u"), py::arg("v"))
      .def("mirror_edge",
           [](const Topology& t, std::uint64_t e) { return t.mirror_edge(EdgeId{e}).code; },
           py::arg("e"))
      .def("vertex_label",
           [](const Topology& t, std::uint64_t v) { return t.vertex_label(VertexId{v}); },
           py::arg("v"))
      .def("doubletree_root",
           [](const Topology& t, int side) {
             return t.doubletree_root(side ? TreeSide::second : TreeSide::first).code;
           },
           py::arg("side"));

  m.def("mix64", &mix64, py::arg("seed"), py::arg("key"));

  m.def(
      "edge_open",
      [](const Topology& t, double p, std::uint64_t seed, std::uint64_t e) {
        return PercolationConfig(t, p, seed).edge_open(EdgeId{e});
      },
      py::arg("topology"), py::arg("p"), py::arg("seed"), py::arg("edge"));

  m.def(
      "route",
      [](const Topology& t, double p, std::uint64_t seed, const std::string& router,
         std::uint64_t u, std::uint64_t v, std::optional<std::uint64_t> budget,
         int stage_radius, bool greedy_first) {
        const PercolationConfig cfg(t, p, seed);
        const RoutingResult r = percoroute::route(cfg, router, VertexId{u}, VertexId{v},
                                                  make_options(budget, stage_radius, greedy_first));
        return routing_result_dict(t, r);
      },
      py::arg("topology"), py::arg("p"), py::arg("seed"), py::arg("router"), py::arg("u"),
      py::arg("v"), py::arg("budget") = py::none(), py::arg("stage_radius") = 3,
      py::arg("greedy_first") = false);

  m.def(
      "ground_truth_connected",
      [](const Topology& t, double p, std::uint64_t seed, std::uint64_t u, std::uint64_t v) {
        return ground_truth_connected(PercolationConfig(t, p, seed), VertexId{u}, VertexId{v});
      },
      py::arg("topology"), py::arg("p"), py::arg("seed"), py::arg("u"), py::arg("v"));

  m.def(
      "component_size",
      [](const Topology& t, double p, std::uint64_t seed, std::uint64_t u) {
        return component_size(PercolationConfig(t, p, seed), VertexId{u});
      },
      py::arg("topology"), py::arg("p"), py::arg("seed"), py::arg("u"));

  m.def(
      "count_ball_paths",
      [](int n, int l, int k) {
        const BallPathCount c = count_ball_paths(n, l, k);
        py::dict out;
        out["count"] = c.exact_count;
        out["bound"] = c.bound;
        out["ok"] = c.within_bound;
        return out;
      },
      py::arg("n"), py::arg("l"), py::arg("k"));

  m.def(
      "validate_lower_bound",
      [](int depth, double p, const std::vector<double>& t_grid, std::uint64_t trials,
         std::uint64_t seed) {
        py::list out;
        for (const auto& r : validate_query_lower_bound(depth, p, t_grid, trials, seed)) {
          py::dict d;
          d["t"] = r.t;
          d["empirical_cdf"] = r.empirical_cdf;
          d["bound_value"] = r.bound_value;
          d["n_trials"] = r.n_trials;
          d["n_conditioned"] = r.n_conditioned;
          d["standard_error"] = r.standard_error;
          d["violated"] = r.violated;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("depth"), py::arg("p"), py::arg("t_grid"), py::arg("trials"),
      py::arg("seed") = 1);

  m.def("geometric_grid", &geometric_grid, py::arg("lo"), py::arg("hi"), py::arg("count"));

  m.def(
      "fit_scaling",
      [](const std::vector<std::pair<double, double>>& points, const std::string& model) {
        const ScalingFit fit = fit_scaling(points, scaling_model_from_name(model));
        py::dict out;
        out["coefficient"] = fit.coefficient;
        out["intercept"] = fit.intercept;
        out["residual"] = fit.residual;
        return out;
      },
      py::arg("points"), py::arg("model"));

  m.def(
      "run_sweep",
      [](const std::string& config_json) {
        const SweepConfig cfg = SweepConfig::from_json_text(config_json);
        const SweepResult result = run_sweep(cfg);
        py::dict out;
        out["csv"] = trials_csv(result.records, cfg.record_timing);
        py::module_ json = py::module_::import("json");
        out["summary"] = json.attr("loads")(summary_json(result).dump());
        return out;
      },
      py::arg("config_json"));

  m.def(
      "run_acceptance",
      [](const std::vector<std::string>& only, int threads) {
        acceptance::Options options;
        options.only = only;
        options.threads = threads;
        std::ostringstream log;
        const auto results = acceptance::run(options, log);
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("only") = std::vector<std::string>{}, py::arg("threads") = 0);
}
