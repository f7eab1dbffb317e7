#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "ttpcd/coea.hpp"
#include "ttpcd/experiment.hpp"
#include "ttpcd/knapsack.hpp"
#include "ttpcd/stats.hpp"

namespace py = pybind11;
using namespace ttpcd;

namespace {

std::string instance_text(const TtpInstance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

py::dict tsp_result(const TtpInstance& inst, std::size_t population, std::size_t crossovers_per_city,
                    std::uint64_t seed) {
  TspGaConfig cfg;
  cfg.population_size = population;
  cfg.crossovers_per_city = crossovers_per_city;
  Rng rng(seed);
  const TspResult r = solve_tsp(inst, cfg, rng);
  py::dict d;
  d["f_star"] = r.f_star;
  d["best"] = r.best;
  d["tour_pool"] = r.tour_pool;
  return d;
}

std::string run_summary(const TtpInstance& inst, const std::string& mode, const std::string& policy,
                        std::uint64_t seed, double budget_multiplier, double alpha, std::size_t mu,
                        const std::string& zmin_mode) {
  RunConfig cfg;
  cfg.mode = mode_from_string(mode);
  cfg.policy = policy_from_string(policy);
  cfg.seed = seed;
  cfg.budget_multiplier = budget_multiplier;
  cfg.alpha = alpha;
  cfg.mu = mu;
  cfg.zmin_mode = zmin_mode_from_string(zmin_mode);
  std::optional<RunLog> log;
  {
    py::gil_scoped_release release;
    log.emplace(run(inst, cfg));
  }
  std::ostringstream csv;
  write_runlog_csv(csv, *log);
  nlohmann::json j = summary_json(inst.name(), inst, cfg, *log);
  j["runlog_csv"] = csv.str();
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_ttpcd, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvalidInstance>(m, "InvalidInstance", PyExc_ValueError);
  py::register_exception<InitializationError>(m, "InitializationError", PyExc_RuntimeError);

  py::class_<TtpInstance>(m, "Instance")
      .def_property_readonly("name", &TtpInstance::name)
      .def_property_readonly("num_cities", &TtpInstance::num_cities)
      .def_property_readonly("num_items", &TtpInstance::num_items)
      .def_property_readonly("capacity", &TtpInstance::capacity)
      .def_property_readonly("min_speed", &TtpInstance::min_speed)
      .def_property_readonly("max_speed", &TtpInstance::max_speed)
      .def_property_readonly("renting_ratio", &TtpInstance::renting_ratio)
      .def("distance", &TtpInstance::distance)
      .def("to_text", &instance_text);

  m.def("parse_instance", &parse_instance_string, py::arg("text"));
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def(
      "generate_instance",
      [](int n, int items, std::uint64_t seed, double capacity_factor, bool correlated) {
        return generate_instance({n, items, seed, capacity_factor, correlated});
      },
      py::arg("n"), py::arg("m"), py::arg("seed") = 1, py::arg("capacity_factor") = 0.5,
      py::arg("correlated") = false);

  m.def("tour_length", &tour_length, py::arg("instance"), py::arg("tour"));
  m.def("is_feasible", &is_feasible, py::arg("instance"), py::arg("packing"));
  m.def("objective", &ttp_objective, py::arg("instance"), py::arg("tour"), py::arg("packing"));
  m.def(
      "solve_kp",
      [](const TtpInstance& inst) {
        const KpResult r = solve_kp_or_greedy(inst);
        return py::make_tuple(r.g_star, r.selection, r.exact);
      },
      py::arg("instance"));
  m.def(
      "eax",
      [](const TtpInstance& inst, const Tour& a, const Tour& b, std::uint64_t seed) {
        Rng rng(seed);
        return eax_1ab(inst, a, b, rng);
      },
      py::arg("instance"), py::arg("parent_a"), py::arg("parent_b"), py::arg("seed") = 1);
  m.def("solve_tsp", &tsp_result, py::arg("instance"), py::arg("population") = 100,
        py::arg("crossovers_per_city") = 2000, py::arg("seed") = 1);
  m.def("_run", &run_summary, py::arg("instance"), py::arg("mode") = "coea", py::arg("policy") = "gamma2",
        py::arg("seed") = 1, py::arg("budget_multiplier") = 1'000'000.0, py::arg("alpha") = 0.1, py::arg("mu") = 50,
        py::arg("zmin_mode") = "dynamic");

  m.def(
      "kruskal_wallis",
      [](const std::vector<std::vector<double>>& groups) {
        const auto r = stats::kruskal_wallis(groups);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("groups"));
  m.def(
      "mann_whitney_u",
      [](const std::vector<double>& a, const std::vector<double>& b, const std::string& alternative) {
        stats::Alternative alt = stats::Alternative::kTwoSided;
        if (alternative == "less") {
          alt = stats::Alternative::kLess;
        } else if (alternative == "greater") {
          alt = stats::Alternative::kGreater;
        } else if (alternative != "two-sided") {
          throw py::value_error("alternative must be two-sided, less or greater");
        }
        const auto r = stats::mann_whitney_u(a, b, alt);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("a"), py::arg("b"), py::arg("alternative") = "two-sided");
}
