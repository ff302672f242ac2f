#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sbqa/cli.hpp"

namespace py = pybind11;
using namespace sbqa;

namespace {

ModelKind model_from(const std::string& name) {
  if (name == "ising") return ModelKind::ising;
  if (name == "spinboson") return ModelKind::spinboson;
  throw py::value_error("model must be \"ising\" or \"spinboson\"");
}

Observable observable_from(const std::string& name) {
  if (name == "correlator") return Observable::correlator;
  if (name == "relevant_gap") return Observable::relevant_gap;
  throw py::value_error("observable must be \"correlator\" or \"relevant_gap\"");
}

py::dict fairness_table(const std::vector<FairnessRow>& rows) {
  std::vector<double> lambda, s_sb, c, o_sb, o_i, gap_sb, gap_i, overlap;
  std::vector<std::size_t> index;
  std::vector<bool> ambiguous;
  for (const FairnessRow& r : rows) {
    lambda.push_back(r.lambda);
    s_sb.push_back(r.s_sb);
    c.push_back(r.c);
    o_sb.push_back(r.O_sb);
    o_i.push_back(r.O_ising);
    gap_sb.push_back(r.gap_sb);
    gap_i.push_back(r.gap_ising);
    index.push_back(r.target_index);
    overlap.push_back(r.target_overlap);
    ambiguous.push_back(r.ambiguous);
  }
  py::dict d;
  d["lambda"] = lambda;
  d["s_sb"] = s_sb;
  d["c"] = c;
  d["O_sb"] = o_sb;
  d["O_ising"] = o_i;
  d["gap_sb"] = gap_sb;
  d["gap_ising"] = gap_i;
  d["target_index"] = index;
  d["target_overlap"] = overlap;
  d["ambiguous"] = ambiguous;
  return d;
}

IntegratorConfig integrator(std::size_t steps_per_unit_time) {
  IntegratorConfig cfg;
  cfg.steps_per_unit_time = steps_per_unit_time;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Annealing passages of Ising and spin-boson rings";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<PassageSpec>(m, "PassageSpec")
      .def_static("from_json", &PassageSpec::from_json)
      .def("to_json", &PassageSpec::to_json)
      .def("validate", &PassageSpec::validate)
      .def_property_readonly("kind", [](const PassageSpec& s) { return to_string(s.kind); })
      .def_readonly("n_spins", &PassageSpec::n_spins)
      .def_readonly("omega", &PassageSpec::omega)
      .def_readonly("n_max", &PassageSpec::n_max)
      .def_readonly("flags", &PassageSpec::flags)
      .def_property_readonly("lambda_grid",
                             [](const PassageSpec& s) { return s.schedule.grid(); })
      .def_property_readonly("s_values", [](const PassageSpec& s) { return s.schedule.values(); })
      .def_property_readonly("c_values", [](const PassageSpec& s) { return s.scale.values(); })
      .def("__call__", [](const PassageSpec& s, double lambda) {
        const ScheduleValue v = schedule_eval(s, lambda);
        return std::make_pair(v.s, v.c);
      });

  m.def(
      "linear_spec",
      [](const std::string& model, std::size_t n_spins, double omega, std::size_t n_max) {
        const PassageKind kind = model_from(model) == ModelKind::ising
                                     ? PassageKind::ising_linear
                                     : PassageKind::spinboson_linear;
        return linear_spec(kind, n_spins, omega, n_max);
      },
      py::arg("model"), py::arg("n_spins") = 3, py::arg("omega") = 1.0, py::arg("n_max") = 0);

  m.def(
      "build_fair_pair",
      [](std::size_t n_spins, double omega, std::size_t n_max, std::size_t grid_points,
         std::size_t threads) {
        FairOptions opts;
        opts.grid_points = grid_points;
        opts.threads = threads;
        FairPair pair;
        {
          py::gil_scoped_release release;
          pair = build_fair_pair(n_spins, omega, n_max, opts);
        }
        return py::make_tuple(pair.spinboson, pair.ising, fairness_table(pair.rows));
      },
      py::arg("n_spins"), py::arg("omega"), py::arg("n_max"), py::arg("grid_points") = 201,
      py::arg("threads") = 0);

  m.def(
      "tabulate",
      [](const std::string& model, const std::string& observable, const std::vector<double>& grid,
         std::size_t n_spins, double omega, std::size_t n_max) {
        TabulateParams p;
        p.n_spins = n_spins;
        p.omega = omega;
        p.n_max = n_max;
        py::gil_scoped_release release;
        return tabulate(model_from(model), observable_from(observable), grid, p).values();
      },
      py::arg("model"), py::arg("observable"), py::arg("grid"), py::arg("n_spins") = 3,
      py::arg("omega") = 1.0, py::arg("n_max") = 4);

  m.def(
      "ising_energies",
      [](std::size_t n_spins, double s) -> Eigen::VectorXd {
        return ising_spectrum(n_spins, s).energies;
      },
      py::arg("n_spins"), py::arg("s"));

  m.def(
      "run_passage",
      [](const PassageSpec& spec, double T, std::size_t steps_per_unit_time) {
        EvolutionResult r;
        {
          py::gil_scoped_release release;
          r = run_passage(spec, T, integrator(steps_per_unit_time));
        }
        py::dict d;
        d["T"] = r.T;
        d["p_error"] = r.p_error;
        d["p_manifold_error"] = r.p_manifold_error;
        d["steps"] = r.steps;
        d["max_step_drift"] = r.max_step_drift;
        d["flags"] = r.flags;
        return d;
      },
      py::arg("spec"), py::arg("T"), py::arg("steps_per_unit_time") = 200);

  m.def(
      "sweep",
      [](const PassageSpec& spec, const std::vector<double>& T_list,
         std::size_t steps_per_unit_time, std::size_t threads) {
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          const PassageSystem system(spec);
          rows = sweep(system, T_list, integrator(steps_per_unit_time), threads);
        }
        py::list out;
        for (const SweepRow& r : rows) {
          py::dict d;
          d["omega"] = r.omega;
          d["T"] = r.T;
          d["p_error"] = r.p_error;
          d["n_max"] = r.n_max;
          d["steps_per_unit"] = r.steps_per_unit;
          d["flags"] = r.flags;
          out.append(d);
        }
        return out;
      },
      py::arg("spec"), py::arg("T_list"), py::arg("steps_per_unit_time") = 200,
      py::arg("threads") = 0);

  m.def("default_n_max", &default_n_max, py::arg("omega"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "sbqa");
        std::vector<char*> argv;
        for (std::string& a : args) argv.push_back(a.data());
        py::gil_scoped_release release;
        return run_cli(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the command-line tool in-process and returns its exit code.");
}
