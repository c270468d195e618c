#pragma once

#include "json.hpp"

#include "nvsync/propagator.hpp"
#include "nvsync/rwa_gates.hpp"

namespace nvsync {

struct FidelityReport {
  double f_avg = 0.0;
  double leakage = 0.0;
  bool corrected = false;
  nlohmann::json params_echo = nlohmann::json::object();
};

// (d + |Tr(U^dag V)|^2) / (d (d + 1)), d taken from the matrices
double average_gate_fidelity(const MatX& u_ideal, const MatX& v_actual);

FidelityReport corrected_cnot_fidelity(const Propagator& v_raw, const CnotCorrection& corr,
                                       nlohmann::json params_echo = nlohmann::json::object());

nlohmann::json fidelity_to_json(const FidelityReport& r);

}  // namespace nvsync
