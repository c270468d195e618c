#include "nvsync/rwa_gates.hpp"

#include <cmath>
#include <string>

#include "nvsync/errors.hpp"

namespace nvsync {

std::vector<double> DdrfSequence::durations() const {
  std::vector<double> d(static_cast<size_t>(intervals()), 2.0 * tau);
  d.front() = tau;
  d.back() = tau;
  return d;
}

void DdrfSequence::validate() const {
  if (n_pulses < 2 || n_pulses % 2 != 0)
    throw DomainError("DDrf needs an even pulse count N >= 2, got " + std::to_string(n_pulses));
  if (!(tau > 0)) throw DomainError("tau must be positive");
  if (b1 < 0) throw DomainError("b1 must be non-negative");
  if (l_larmor < 0) throw DomainError("l_larmor must be >= 0");
}

bool DdrfSequence::larmor_consistent(double omega_l, double rel_tol) const {
  if (l_larmor == 0) return true;
  const double want = l_larmor * kTwoPi / std::abs(omega_l);
  return std::abs(tau - want) <= rel_tol * want;
}

std::vector<double> phase_schedule(int k_count, double phi_tau, double varphi) {
  if (k_count < 1) throw DomainError("phase_schedule needs K >= 1");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(k_count));
  for (int k = 1; k <= k_count; ++k)
    out.push_back(wrap_phase(varphi + (k - 1) * phi_tau + (k % 2 == 1 ? kPi : 0.0)));
  return out;
}

static Propagator nuc(const Mat2& m) { return {m, Frame::nuclear_subspace, 0.0}; }

Propagator u0_free(double t, double a_par) { return nuc(rot_z(a_par * t)); }

Propagator u1_drive(double t, double b1, double phi) { return nuc(rot_phi(b1 * t, phi)); }

Propagator u0_offres(double t, double a_par, double b1, double phi) {
  Mat2 h;
  h << 0.5 * a_par, 0.5 * b1 * std::exp(cplx{0.0, -phi}),
      0.5 * b1 * std::exp(cplx{0.0, phi}), -0.5 * a_par;
  return nuc(expm_herm2(h, t));
}

Mat4 blockdiag(const Mat2& v0, const Mat2& v1) {
  Mat4 v = Mat4::Zero();
  v.topLeftCorner<2, 2>() = v0;
  v.bottomRightCorner<2, 2>() = v1;
  return v;
}

Mat4 ideal_cnot() {
  Mat2 x;
  x << 0, 1, 1, 0;
  return blockdiag(Mat2::Identity(), x);
}

Propagator assemble_ddrf(const DdrfSequence& seq, double a_par, RwaModel model) {
  const auto ph = phase_schedule(seq.intervals(), seq.phi_tau, seq.varphi);
  return assemble_ddrf(seq, a_par, model, ph);
}

Propagator assemble_ddrf(const DdrfSequence& seq, double a_par, RwaModel model,
                         std::span<const double> phases) {
  seq.validate();
  if (static_cast<int>(phases.size()) != seq.intervals())
    throw DomainError("phase list has " + std::to_string(phases.size()) + " entries, need K = N+1 = " +
                      std::to_string(seq.intervals()));
  const auto dur = seq.durations();
  Mat2 v0 = Mat2::Identity(), v1 = Mat2::Identity();
  for (size_t i = 0; i < dur.size(); ++i) {
    const bool odd = (i % 2 == 0);  // k = i + 1
    const Mat2 drive = rot_phi(seq.b1 * dur[i], phases[i]);
    const Mat2 idle = model == RwaModel::weak ? rot_z(a_par * dur[i])
                                              : Mat2(u0_offres(dur[i], a_par, seq.b1, phases[i]).matrix);
    v0 = (odd ? idle : drive) * v0;
    v1 = (odd ? drive : idle) * v1;
  }
  return {blockdiag(v0, v1), Frame::interaction, 0.0};
}

Propagator crot_closed_form(const DdrfSequence& seq, double a_par) {
  seq.validate();
  const double n = seq.n_pulses;
  const Mat2 vz = rot_z(n * a_par * seq.tau);
  const double theta = n * seq.b1 * seq.tau;
  const Mat4 vcrot = blockdiag(rot_phi(theta, seq.varphi), rot_phi(-theta, seq.varphi));
  return {blockdiag(vz, vz) * vcrot, Frame::interaction, 0.0};
}

Propagator single_pulse_rwa(double t, double a_par, double b1, double phi) {
  return {blockdiag(u0_offres(t, a_par, b1, phi).matrix, rot_phi(b1 * t, phi)), Frame::interaction,
          0.0};
}

Mat4 CnotCorrection::matrix() const {
  const Mat2 n = rot_phi(-crot_angle, axis_phase) * rot_z(vz_angle).adjoint();
  const cplx e = std::exp(cplx{0.0, electron_phase});
  return blockdiag(n, e * n);
}

CnotCorrection CnotCorrection::for_crot(double theta, double vz_angle, double axis_phase) {
  CnotCorrection c;
  c.vz_angle = vz_angle;
  c.crot_angle = theta;
  c.axis_phase = axis_phase;
  // branch 1 becomes cos(theta) + i sin(theta) sigma_axis; cancel the i sign(sin) phase
  const double s = std::sin(theta);
  c.electron_phase = s >= 0 ? -kPi / 2 : kPi / 2;
  return c;
}

CnotCorrection CnotCorrection::for_controlled_flip(int n, int m) {
  const cplx s0 = (m % 2 == 0) ? 1.0 : -1.0;
  const cplx c1 = -kI * ((n % 2 == 0) ? 1.0 : -1.0);
  CnotCorrection c;
  c.electron_phase = std::arg(s0 / c1);
  return c;
}

Propagator cnot_from_crot(const Propagator& v, const CnotCorrection& corr) {
  if (v.dim() != 4) throw DomainError("cnot_from_crot needs a 4x4 propagator");
  return {corr.matrix() * v.matrix, v.frame, v.leakage};
}

Propagator cnot_from_crot(const Propagator& v, double vz_angle) {
  return cnot_from_crot(v, CnotCorrection::for_crot(kPi / 2, vz_angle));
}

}  // namespace nvsync
