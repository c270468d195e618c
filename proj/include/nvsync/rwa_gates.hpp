#pragma once

#include <span>
#include <vector>

#include "nvsync/propagator.hpp"

namespace nvsync {

// (tau - pi - 2tau - pi - tau)^(N/2) with rf segments between the pi pulses
struct DdrfSequence {
  int n_pulses = 2;
  double tau = 0.0;     // s
  double b1 = 0.0;      // rad/s
  double omega = 0.0;   // rad/s, rf carrier
  double varphi = 0.0;  // rad
  double phi_tau = 0.0; // rad, per-interval phase increment
  int l_larmor = 0;     // Eq. (8) multiple, 0 = constraint disabled

  int intervals() const { return n_pulses + 1; }
  double gate_time() const { return 2.0 * n_pulses * tau; }
  std::vector<double> durations() const;
  void validate() const;
  // tau == l * 2pi / omega_l within rel_tol (true when the constraint is disabled)
  bool larmor_consistent(double omega_l, double rel_tol = 1e-9) const;
};

enum class RwaModel { weak, offres };

// phi_k = varphi + (k-1) phi_tau + pi [k odd], wrapped to [0, 2pi)
std::vector<double> phase_schedule(int k_count, double phi_tau, double varphi);

Propagator u0_free(double t, double a_par);
Propagator u1_drive(double t, double b1, double phi);
Propagator u0_offres(double t, double a_par, double b1, double phi);

// 4x4 blockdiag(V0, V1) over |e n>, e in {ms=0, ms=-1}
Propagator assemble_ddrf(const DdrfSequence& seq, double a_par, RwaModel model);
Propagator assemble_ddrf(const DdrfSequence& seq, double a_par, RwaModel model,
                         std::span<const double> phases);

// Vz * Vcrot, Eqs. (15)-(17)
Propagator crot_closed_form(const DdrfSequence& seq, double a_par);

// single rf segment without DD: blockdiag(u0_offres, u1_drive)
Propagator single_pulse_rwa(double t, double a_par, double b1, double phi);

Mat4 blockdiag(const Mat2& v0, const Mat2& v1);
Mat4 ideal_cnot();

// Local corrections applied on the left of a raw gate V:
//   (diag(1, e^{i electron_phase}) (x) 1) (1 (x) R_axis(-crot_angle)) (1 (x) Rz(vz_angle))^dag V
struct CnotCorrection {
  double vz_angle = 0.0;
  double crot_angle = 0.0;
  double axis_phase = 0.0;
  double electron_phase = 0.0;

  Mat4 matrix() const;

  // CROT by angle theta (Eq. 19 for theta = pi/2), optional Vz to undo
  static CnotCorrection for_crot(double theta, double vz_angle = 0.0, double axis_phase = 0.0);
  // V = blockdiag((-1)^m, -i (-1)^n sigma_x) type gates (single pulse, detuned protocol)
  static CnotCorrection for_controlled_flip(int n, int m);
};

Propagator cnot_from_crot(const Propagator& v, const CnotCorrection& corr);
// Eq. (20'): the fixed NB1tau = pi/2 corrections
Propagator cnot_from_crot(const Propagator& v, double vz_angle = 0.0);

}  // namespace nvsync
