#pragma once

#include <vector>

#include "json.hpp"

#include "nvsync/propagator.hpp"
#include "nvsync/rwa_gates.hpp"
#include "nvsync/spin_system.hpp"

namespace nvsync {

enum class EventKind { rf_segment, electron_pi };

struct PulseEvent {
  EventKind kind = EventKind::rf_segment;
  double start = 0.0;     // s
  double duration = 0.0;  // s, 0 for electron_pi
  double phase = 0.0;     // rad; for electron_pi the rotation-axis phase in the xy plane
  double b1 = 0.0;        // rad/s
  double omega = 0.0;     // rad/s
};

struct IntegratorSpec {
  int steps_per_drive_period = 32;  // base resolution, >= 32, per fastest period
  double tol = 1e-9;                // Frobenius change between halvings
  int max_refinements = 16;

  void validate() const;
};

struct ConvergenceReport {
  int refinements = 0;
  long long steps_per_period = 0;  // at the accepted level
  double residual = 0.0;
  std::vector<double> residuals;
};

struct EvolveResult {
  Propagator propagator;  // 6x6, lab frame
  ConvergenceReport report;
};

// N pi pulses at tau, 3tau, ...; N = 0 gives one rf segment of 2 tau at phase varphi
std::vector<PulseEvent> schedule_from_ddrf(const DdrfSequence& seq);
std::vector<PulseEvent> single_pulse_schedule(double duration, double b1, double omega, double phi);
double schedule_span(const std::vector<PulseEvent>& s);
void validate_schedule(const std::vector<PulseEvent>& s);

// pi rotation about (cos a, sin a, 0) on {m_s=0, m_s=-1}, identity on m_s=+1
Mat6 electron_pi_unitary(double axis_phase = 0.0);

// one fixed-resolution pass (no refinement); steps_per_period >= 1
Propagator evolve_fixed(const std::vector<PulseEvent>& s, const SpinRegisterConfig& cfg,
                        long long steps_per_period);

EvolveResult evolve(const std::vector<PulseEvent>& s, const SpinRegisterConfig& cfg,
                    const IntegratorSpec& spec = {});

// U1(t) U_lab with U1(t) = exp(i t (D Sz^2 + gamma_e Bz Sz + omega n.I)), n = (sin b, 0, cos b)
Propagator to_interaction_frame(const Propagator& u_lab, const SpinRegisterConfig& cfg, double omega,
                                double t, double beta = 0.0);

// {m_s in (0, -1)} x {m_I} block; leakage = 1 - Tr(B^dag B)/4
Propagator project_computational(const Propagator& u6);

nlohmann::json schedule_to_json(const std::vector<PulseEvent>& s);
std::vector<PulseEvent> schedule_from_json(const nlohmann::json& j);
nlohmann::json convergence_to_json(const ConvergenceReport& r);

}  // namespace nvsync
