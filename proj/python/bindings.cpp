// Python bindings. Angular frequencies are rad/s and times are seconds, as in the C++ API;
// the dict-based entry points (design, simulate, tables) use the Hz keys of the JSON schema.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nvsync/errors.hpp"
#include "nvsync/experiments.hpp"
#include "nvsync/fidelity.hpp"
#include "nvsync/rwa_gates.hpp"
#include "nvsync/sync_design.hpp"

namespace py = pybind11;
using namespace nvsync;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

ParityRule parity_of(const std::string& s) {
  if (s == "physical") return ParityRule::physical;
  if (s == "legacy") return ParityRule::legacy;
  if (s == "none") return ParityRule::none;
  throw DomainError("unknown parity rule " + s);
}

RwaModel model_of(const std::string& s) {
  if (s == "weak") return RwaModel::weak;
  if (s == "offres") return RwaModel::offres;
  throw DomainError("unknown RWA model " + s);
}

}  // namespace

PYBIND11_MODULE(_nvsync, mod) {
  mod.doc() = "Synchronized electron-nuclear gates for NV registers";

  py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(mod, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(mod, "ConvergenceError", PyExc_RuntimeError);

  mod.def("from_hz", &from_hz);
  mod.def("to_hz", &to_hz);

  // sync design
  mod.def("b1_sync", &b1_sync, py::arg("a_par"), py::arg("n"), py::arg("m"), py::arg("n_pulses"));
  mod.def("tau_sync", &tau_sync, py::arg("a_par"), py::arg("b1"), py::arg("m"));
  mod.def("bz_sync", &bz_sync, py::arg("b1"), py::arg("n"), py::arg("n_pulses"), py::arg("l"),
          py::arg("gamma_n") = PhysicalConstants{}.gamma_n);
  mod.def(
      "admissible", [](int n, int m, int n_pulses, const std::string& parity) {
        return admissible(n, m, n_pulses, parity_of(parity));
      },
      py::arg("n"), py::arg("m"), py::arg("n_pulses"), py::arg("parity") = "physical");
  mod.def(
      "sync_params",
      [](double a_par, int n, int m, int n_pulses, int l) {
        return to_py(sync_report(make_sync_params(a_par, n, m, n_pulses, l, PhysicalConstants{}.gamma_n), a_par));
      },
      py::arg("a_par"), py::arg("n"), py::arg("m"), py::arg("n_pulses"), py::arg("l") = 1);
  mod.def(
      "fastest_gate",
      [](double a_par, std::optional<double> max_b1, std::optional<double> max_bz, const std::string& parity) {
        SyncConstraints c;
        c.max_b1 = max_b1;
        c.max_bz = max_bz;
        c.parity = parity_of(parity);
        return to_py(sync_report(fastest_gate(a_par, c, PhysicalConstants{}.gamma_n), a_par));
      },
      py::arg("a_par"), py::arg("max_b1") = py::none(), py::arg("max_bz") = py::none(),
      py::arg("parity") = "physical", "max_b1 in rad/s, max_bz in tesla");
  mod.def(
      "detuned_gate",
      [](double a_par, double a_perp, double omega_l, int n, int m) {
        return to_py(detuned_to_json(detuned_gate_params(a_par, a_perp, omega_l, n, m)));
      },
      py::arg("a_par"), py::arg("a_perp"), py::arg("omega_l"), py::arg("n") = 0, py::arg("m") = 1);
  mod.def(
      "bz_ratios",
      [](int r, double x_target, double tol) { return to_py(ratio_summary_to_json(enumerate_bz_ratios(r, x_target, tol))); },
      py::arg("r"), py::arg("x_target") = 1.0, py::arg("tol") = 0.0);

  // RWA propagators, returned as complex matrices
  mod.def("u0_free", [](double t, double a_par) { return u0_free(t, a_par).matrix; });
  mod.def("u1_drive", [](double t, double b1, double phi) { return u1_drive(t, b1, phi).matrix; });
  mod.def("u0_offres", [](double t, double a_par, double b1, double phi) { return u0_offres(t, a_par, b1, phi).matrix; });
  mod.def(
      "assemble_ddrf",
      [](int n_pulses, double tau, double b1, double a_par, double varphi, double phi_tau, const std::string& model) {
        DdrfSequence s;
        s.n_pulses = n_pulses;
        s.tau = tau;
        s.b1 = b1;
        s.varphi = varphi;
        s.phi_tau = phi_tau;
        return assemble_ddrf(s, a_par, model_of(model)).matrix;
      },
      py::arg("n_pulses"), py::arg("tau"), py::arg("b1"), py::arg("a_par"), py::arg("varphi") = 0.0,
      py::arg("phi_tau") = 0.0, py::arg("model") = "offres");
  mod.def("ideal_cnot", []() { return MatX(ideal_cnot()); });

  // fidelity
  mod.def("average_gate_fidelity", &average_gate_fidelity, py::arg("u_ideal"), py::arg("v_actual"));
  mod.def("fig2_fidelity", &fig2_fidelity, py::arg("a_par"), py::arg("b1"), py::arg("n_pulses") = 2);

  // dict-level commands
  mod.def("design", [](const py::object& req) { return to_py(cmd_design(design_request_from_json(from_py(req)))); });
  mod.def("simulate", [](const py::object& cfg) { return to_py(cmd_simulate(from_py(cfg))); });
  mod.def(
      "table1", [](unsigned workers) { return to_py(table_json(run_table(table1_spec(), {}, workers))); },
      py::arg("workers") = 0);
  mod.def(
      "table2", [](unsigned workers) { return to_py(table_json(run_table(table2_spec(), {}, workers))); },
      py::arg("workers") = 0);
}
