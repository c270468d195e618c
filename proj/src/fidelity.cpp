#include "nvsync/fidelity.hpp"

#include <algorithm>
#include <string>

#include "nvsync/errors.hpp"

namespace nvsync {

double average_gate_fidelity(const MatX& u_ideal, const MatX& v_actual) {
  if (u_ideal.rows() != u_ideal.cols() || v_actual.rows() != v_actual.cols() ||
      u_ideal.rows() != v_actual.rows())
    throw DomainError("average_gate_fidelity: dimension mismatch (" + std::to_string(u_ideal.rows()) + "x" +
                      std::to_string(u_ideal.cols()) + " vs " + std::to_string(v_actual.rows()) + "x" +
                      std::to_string(v_actual.cols()) + ")");
  const double d = static_cast<double>(u_ideal.rows());
  const double tr = std::abs((u_ideal.adjoint() * v_actual).trace());
  return (d + tr * tr) / (d * (d + 1));
}

FidelityReport corrected_cnot_fidelity(const Propagator& v_raw, const CnotCorrection& corr,
                                       nlohmann::json params_echo) {
  const Propagator v = cnot_from_crot(v_raw, corr);
  FidelityReport r;
  // clamp only rounding overshoot above 1
  r.f_avg = std::min(1.0, average_gate_fidelity(ideal_cnot(), v.matrix));
  r.leakage = v_raw.leakage;
  r.corrected = true;
  r.params_echo = std::move(params_echo);
  return r;
}

nlohmann::json fidelity_to_json(const FidelityReport& r) {
  return {{"schema_version", 1},
          {"f_avg", r.f_avg},
          {"leakage", r.leakage},
          {"corrected", r.corrected},
          {"params_echo", r.params_echo}};
}

}  // namespace nvsync
