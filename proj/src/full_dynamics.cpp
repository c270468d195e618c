#include "nvsync/full_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nvsync/errors.hpp"

namespace nvsync {

void IntegratorSpec::validate() const {
  if (steps_per_drive_period < 32) throw DomainError("steps_per_drive_period must be >= 32");
  if (!(tol > 0)) throw DomainError("integrator tol must be positive");
  if (max_refinements < 1) throw DomainError("max_refinements must be >= 1");
}

std::vector<PulseEvent> schedule_from_ddrf(const DdrfSequence& seq) {
  if (seq.n_pulses == 0) {
    if (!(seq.tau > 0)) throw DomainError("tau must be positive");
    return single_pulse_schedule(2.0 * seq.tau, seq.b1, seq.omega, seq.varphi);
  }
  seq.validate();
  const auto ph = phase_schedule(seq.intervals(), seq.phi_tau, seq.varphi);
  const auto dur = seq.durations();
  std::vector<PulseEvent> out;
  double t = 0.0;
  for (size_t k = 0; k < dur.size(); ++k) {
    if (k > 0) out.push_back({EventKind::electron_pi, t, 0.0, 0.0, 0.0, 0.0});
    out.push_back({EventKind::rf_segment, t, dur[k], ph[k], seq.b1, seq.omega});
    t = (2.0 * k + 1) * seq.tau;  // exact boundaries tau, 3tau, ...
  }
  return out;
}

std::vector<PulseEvent> single_pulse_schedule(double duration, double b1, double omega, double phi) {
  if (!(duration > 0)) throw DomainError("pulse duration must be positive");
  return {{EventKind::rf_segment, 0.0, duration, phi, b1, omega}};
}

double schedule_span(const std::vector<PulseEvent>& s) {
  double end = 0.0;
  for (const auto& e : s) end = std::max(end, e.start + e.duration);
  return end;
}

void validate_schedule(const std::vector<PulseEvent>& s) {
  if (s.empty()) throw DomainError("empty schedule");
  const double span = schedule_span(s);
  const double eps = 1e-12 * span;
  double cursor = 0.0;
  for (const auto& e : s) {
    if (e.kind == EventKind::electron_pi) {
      if (e.duration != 0.0) throw DomainError("electron_pi events have zero duration");
      if (std::abs(e.start - cursor) > eps) throw DomainError("pi pulse not at a segment boundary");
      continue;
    }
    if (!(e.duration > 0)) throw DomainError("rf segments need positive duration");
    if (std::abs(e.start - cursor) > eps) {
      std::ostringstream os;
      os << "rf segments must tile [0, t_g] in order: segment at " << e.start << " s, expected " << cursor;
      throw DomainError(os.str());
    }
    cursor = e.start + e.duration;
  }
}

Mat6 electron_pi_unitary(double axis_phase) {
  Mat3 p = Mat3::Zero();
  p(0, 0) = 1.0;
  p(1, 2) = -kI * std::exp(cplx{0.0, -axis_phase});
  p(2, 1) = -kI * std::exp(cplx{0.0, axis_phase});
  return build_operators().lift_e(p);
}

namespace {

using Blocks = std::array<Mat2, 3>;  // m_s = +1, 0, -1

// e^{-i t (D ms^2 + gamma_e Bz ms)} for ms = +1, 0, -1
std::array<cplx, 3> electron_phases(const SpinRegisterConfig& cfg, double t, double sign) {
  std::array<cplx, 3> out;
  const int ms[3] = {1, 0, -1};
  for (int k = 0; k < 3; ++k) {
    const double e = cfg.constants.d * ms[k] * ms[k] + cfg.constants.gamma_e * cfg.b_z * ms[k];
    out[k] = std::exp(cplx{0.0, -sign * e * t});
  }
  return out;
}

double fastest_rate(const SpinRegisterConfig& cfg, double b1, double omega) {
  double w = std::max(std::abs(omega), 2.0 * b1);
  for (int ms = -1; ms <= 1; ++ms)
    w = std::max(w, std::hypot(cfg.omega_l() + ms * cfg.hyperfine.a_par, ms * cfg.hyperfine.a_perp));
  return w;
}

Mat2 pow2(Mat2 u, long long q) {
  Mat2 r = Mat2::Identity();
  while (q > 0) {
    if (q & 1) r = u * r;
    u = u * u;
    q >>= 1;
  }
  return r;
}

Blocks segment_blocks(const Blocks& stat, const PulseEvent& e, long long spp, const SpinRegisterConfig& cfg) {
  Mat2 ix = Mat2::Zero();
  ix(0, 1) = ix(1, 0) = 0.5;
  Blocks out;
  if (e.b1 == 0.0 || e.omega == 0.0) {
    const Mat2 drive = 2.0 * e.b1 * std::cos(e.phase) * ix;
    for (int k = 0; k < 3; ++k) out[k] = expm_herm2(stat[k] + drive, e.duration);
    return out;
  }
  const double period = kTwoPi / std::abs(e.omega);
  const long long ratio = std::max(1LL, static_cast<long long>(std::ceil(fastest_rate(cfg, e.b1, e.omega) / std::abs(e.omega))));
  const long long steps = spp * ratio;
  const double h = period / static_cast<double>(steps);

  auto step_range = [&](double ts, long long n, double hh) {
    Blocks u{Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};
    for (long long j = 0; j < n; ++j) {
      const double t = ts + (static_cast<double>(j) + 0.5) * hh;
      const Mat2 drive = 2.0 * e.b1 * std::cos(e.omega * t + e.phase) * ix;
      for (int k = 0; k < 3; ++k) u[k] = expm_herm2(stat[k] + drive, hh) * u[k];
    }
    return u;
  };

  long long q = static_cast<long long>(std::floor(e.duration / period * (1.0 + 1e-14)));
  double rem = e.duration - static_cast<double>(q) * period;
  if (rem < 0) rem = 0.0;
  Blocks u{Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};
  if (q > 0) {
    const Blocks per = step_range(e.start, steps, h);
    for (int k = 0; k < 3; ++k) u[k] = pow2(per[k], q);
  }
  if (rem > 1e-15 * e.duration) {
    // at least spp/8 steps so that short tails still refine with spp
    const long long nr = std::max(static_cast<long long>(std::ceil(rem / h)), std::max(1LL, spp / 8));
    const Blocks tail = step_range(e.start + static_cast<double>(q) * period, nr, rem / static_cast<double>(nr));
    for (int k = 0; k < 3; ++k) u[k] = tail[k] * u[k];
  }
  return u;
}

// evolution with the electron term D Sz^2 + gamma_e Bz Sz removed (it commutes with everything)
Mat6 evolve_rest(const std::vector<PulseEvent>& s, const SpinRegisterConfig& cfg, long long spp) {
  const Blocks stat{nuclear_block(cfg, 1), nuclear_block(cfg, 0), nuclear_block(cfg, -1)};
  Mat6 u = Mat6::Identity();
  for (const auto& e : s) {
    if (e.kind == EventKind::electron_pi) {
      u = electron_pi_unitary(e.phase) * u;
      continue;
    }
    const Blocks b = segment_blocks(stat, e, spp, cfg);
    Mat6 seg = Mat6::Zero();
    for (int k = 0; k < 3; ++k) seg.block<2, 2>(2 * k, 2 * k) = b[k];
    u = seg * u;
  }
  return u;
}

Mat6 apply_electron(const Mat6& u, const SpinRegisterConfig& cfg, double t, double sign) {
  const auto ph = electron_phases(cfg, t, sign);
  Mat6 out = u;
  for (int r = 0; r < 6; ++r) out.row(r) *= ph[r / 2];
  return out;
}

}  // namespace

Propagator evolve_fixed(const std::vector<PulseEvent>& s, const SpinRegisterConfig& cfg,
                        long long steps_per_period) {
  validate_schedule(s);
  if (steps_per_period < 1) throw DomainError("steps_per_period must be >= 1");
  const Mat6 rest = evolve_rest(s, cfg, steps_per_period);
  return {apply_electron(rest, cfg, schedule_span(s), 1.0), Frame::lab, 0.0};
}

EvolveResult evolve(const std::vector<PulseEvent>& s, const SpinRegisterConfig& cfg,
                    const IntegratorSpec& spec) {
  spec.validate();
  validate_schedule(s);
  EvolveResult res;
  long long spp = spec.steps_per_drive_period;
  Mat6 prev = evolve_rest(s, cfg, spp);
  for (int k = 1; k <= spec.max_refinements; ++k) {
    spp *= 2;
    const Mat6 cur = evolve_rest(s, cfg, spp);
    const double r = (cur - prev).norm();
    res.report.residuals.push_back(r);
    prev = cur;
    if (r < spec.tol) {
      res.report.refinements = k;
      res.report.steps_per_period = spp;
      res.report.residual = r;
      res.propagator = {apply_electron(cur, cfg, schedule_span(s), 1.0), Frame::lab, 0.0};
      return res;
    }
  }
  std::ostringstream os;
  os << "evolve: no convergence to tol " << spec.tol << " after " << spec.max_refinements
     << " halvings, residual " << res.report.residuals.back();
  throw ConvergenceError(os.str(), res.report.residuals.back());
}

Propagator to_interaction_frame(const Propagator& u_lab, const SpinRegisterConfig& cfg, double omega,
                                double t, double beta) {
  if (u_lab.dim() != 6) throw DomainError("to_interaction_frame needs a 6x6 lab propagator");
  const auto& op = build_operators();
  const Mat2 axis = std::sin(beta) * op.ix + std::cos(beta) * op.iz;
  const Mat2 fn = expm_herm2(axis, -omega * t);  // exp(+i omega t n.I)
  Mat6 u = apply_electron(u_lab.matrix, cfg, t, -1.0);
  u = op.lift_n(fn) * u;
  return {u, Frame::interaction, u_lab.leakage};
}

Propagator project_computational(const Propagator& u6) {
  if (u6.dim() != 6) throw DomainError("project_computational needs a 6x6 propagator");
  const MatX b = u6.matrix.block(2, 2, 4, 4);
  const double kept = (b.adjoint() * b).trace().real() / 4.0;
  return {b, u6.frame, std::clamp(1.0 - kept, 0.0, 1.0)};
}

nlohmann::json schedule_to_json(const std::vector<PulseEvent>& s) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : s) {
    nlohmann::json j{{"kind", e.kind == EventKind::rf_segment ? "rf_segment" : "electron_pi"},
                     {"start_s", e.start},
                     {"duration_s", e.duration},
                     {"phase_rad", e.phase}};
    if (e.kind == EventKind::rf_segment) {
      j["b1_over_2pi_hz"] = to_hz(e.b1);
      j["omega_over_2pi_hz"] = to_hz(e.omega);
    }
    a.push_back(j);
  }
  return {{"schema_version", 1}, {"events", a}};
}

std::vector<PulseEvent> schedule_from_json(const nlohmann::json& j) {
  std::vector<PulseEvent> out;
  for (const auto& e : j.at("events")) {
    PulseEvent p;
    const auto kind = e.at("kind").get<std::string>();
    if (kind == "rf_segment") {
      p.kind = EventKind::rf_segment;
      p.duration = e.at("duration_s").get<double>();
      p.b1 = from_hz(e.at("b1_over_2pi_hz").get<double>());
      p.omega = from_hz(e.at("omega_over_2pi_hz").get<double>());
    } else if (kind == "electron_pi") {
      p.kind = EventKind::electron_pi;
    } else {
      throw DomainError("unknown event kind: " + kind);
    }
    p.start = e.at("start_s").get<double>();
    p.phase = e.value("phase_rad", 0.0);
    out.push_back(p);
  }
  validate_schedule(out);
  return out;
}

nlohmann::json convergence_to_json(const ConvergenceReport& r) {
  return {{"refinements", r.refinements},
          {"steps_per_period", r.steps_per_period},
          {"residual", r.residual},
          {"residuals", r.residuals}};
}

}  // namespace nvsync
