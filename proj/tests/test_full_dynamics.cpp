#include "doctest.h"

#include "nvsync/errors.hpp"
#include "nvsync/fidelity.hpp"
#include "nvsync/full_dynamics.hpp"
#include "nvsync/rwa_gates.hpp"
#include "nvsync/sync_design.hpp"
#include "oracles.hpp"

using namespace nvsync;

namespace {

SpinRegisterConfig cfg_khz(double a_par, double a_perp, double wl) {
  return SpinRegisterConfig::from_larmor(from_hz(wl * 1e3), {from_hz(a_par * 1e3), from_hz(a_perp * 1e3)});
}

MatX lab_hamiltonian(const SpinRegisterConfig& cfg, double t, double b1, double w, double phi) {
  return static_hamiltonian(cfg) + drive_hamiltonian(t, b1, w, phi);
}

}  // namespace

TEST_CASE("schedule_from_ddrf") {
  DdrfSequence s;
  s.n_pulses = 2;
  s.tau = 2e-6;
  s.b1 = from_hz(10e3);
  s.omega = from_hz(300e3);
  const auto ev = schedule_from_ddrf(s);
  std::vector<double> pis, durs;
  for (const auto& e : ev) (e.kind == EventKind::electron_pi ? pis : durs).push_back(e.kind == EventKind::electron_pi ? e.start : e.duration);
  REQUIRE(pis.size() == 2);
  CHECK(pis[0] == doctest::Approx(2e-6));
  CHECK(pis[1] == doctest::Approx(6e-6));
  REQUIRE(durs.size() == 3);
  CHECK(durs[0] == doctest::Approx(2e-6));
  CHECK(durs[1] == doctest::Approx(4e-6));
  CHECK(durs[2] == doctest::Approx(2e-6));
  CHECK(schedule_span(ev) == doctest::Approx(s.gate_time()).epsilon(1e-15));
  CHECK_NOTHROW(validate_schedule(ev));

  s.n_pulses = 8;
  const auto ev8 = schedule_from_ddrf(s);
  double sum = 0;
  for (const auto& e : ev8) sum += e.duration;
  CHECK(sum == doctest::Approx(16 * s.tau).epsilon(1e-14));
  // phases follow phase_schedule
  const auto ph = phase_schedule(9, s.phi_tau, s.varphi);
  int k = 0;
  for (const auto& e : ev8)
    if (e.kind == EventKind::rf_segment) CHECK(e.phase == ph[k++]);

  s.n_pulses = 0;
  const auto ev0 = schedule_from_ddrf(s);
  REQUIRE(ev0.size() == 1);
  CHECK(ev0[0].duration == doctest::Approx(2 * s.tau));
  s.n_pulses = 3;
  CHECK_THROWS_AS(schedule_from_ddrf(s), DomainError);
}

TEST_CASE("validate_schedule and json") {
  std::vector<PulseEvent> gap{{EventKind::rf_segment, 0.0, 1e-6, 0, 1, 1}, {EventKind::rf_segment, 2e-6, 1e-6, 0, 1, 1}};
  CHECK_THROWS_AS(validate_schedule(gap), DomainError);
  CHECK_THROWS_AS(validate_schedule({}), DomainError);
  std::vector<PulseEvent> badpi{{EventKind::rf_segment, 0.0, 1e-6, 0, 1, 1}, {EventKind::electron_pi, 0.5e-6, 0, 0, 0, 0}};
  CHECK_THROWS_AS(validate_schedule(badpi), DomainError);

  DdrfSequence s;
  s.n_pulses = 4;
  s.tau = 1e-6;
  s.b1 = from_hz(10e3);
  s.omega = from_hz(300e3);
  s.phi_tau = 0.3;
  const auto ev = schedule_from_ddrf(s);
  const auto back = schedule_from_json(schedule_to_json(ev));
  REQUIRE(back.size() == ev.size());
  for (size_t i = 0; i < ev.size(); ++i) {
    CHECK(back[i].kind == ev[i].kind);
    CHECK(back[i].start == ev[i].start);
    CHECK(back[i].phase == ev[i].phase);
    CHECK(back[i].b1 == doctest::Approx(ev[i].b1).epsilon(1e-15));
  }
}

TEST_CASE("electron_pi_unitary") {
  const auto& op = build_operators();
  for (double a : {0.0, 0.7, kPi / 2}) {
    const Mat6 p = electron_pi_unitary(a);
    CHECK(unitarity_error(p) < 1e-15);
    const Mat6 p2 = p * p;
    CHECK(std::abs(p2(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(p2(1, 1) - 1.0) < 1e-15);
    for (int i = 2; i < 6; ++i) CHECK(std::abs(p2(i, i) + 1.0) < 1e-15);
    for (const Mat2& n : {op.ix, op.iy, op.iz}) {
      const Mat6 nn = op.lift_n(n);
      CHECK((p * nn - nn * p).norm() < 1e-15);
    }
    // Sz on {0, -1}: diag(0, -1); conjugated: diag(-1, 0). Centered version flips sign.
    Mat6 sz = op.lift_e(op.sz) + 0.5 * Mat6::Identity();
    Mat6 proj = Mat6::Zero();
    for (int i = 2; i < 6; ++i) proj(i, i) = 1;
    const Mat6 s = proj * sz * proj;
    CHECK((p * s * p.adjoint() + s).norm() < 1e-14);
  }
}

TEST_CASE("zero drive: exp(-i H0 t) [DERIVED oracle]") {
  for (const auto& cfg : {cfg_khz(200, 0, 430), cfg_khz(100, 60, 1980)}) {
    const double t = 2.3e-6;
    const auto u = evolve_fixed(single_pulse_schedule(t, 0.0, 0.0, 0.0), cfg, 32).matrix;
    const MatX want = oracle::expm(static_hamiltonian(cfg), t);
    CHECK((u - want).norm() < 1e-8);
    CHECK(unitarity_error(u) < 1e-12);
    if (cfg.hyperfine.a_perp == 0.0) {
      Mat6 off = u;
      off.diagonal().setZero();
      CHECK(off.norm() < 1e-14);
    }
  }
}

TEST_CASE("short driven run against a plain 6x6 midpoint oracle [DERIVED]") {
  const auto cfg = cfg_khz(200, 30, 430);
  const double b1 = from_hz(60e3), w = from_hz(400e3), phi = 0.4, t = 3.3e-6;
  auto sched = single_pulse_schedule(t, b1, w, phi);
  IntegratorSpec spec;
  spec.tol = 1e-11;
  const auto r = evolve(sched, cfg, spec);
  const MatX ref = oracle::midpoint([&](double s) { return lab_hamiltonian(cfg, s, b1, w, phi); }, 0.0, t, 40000);
  CHECK(phase_aligned_distance(r.propagator.matrix, ref) < 1e-7);
  CHECK((r.propagator.matrix - ref).norm() < 1e-7);
  CHECK(r.propagator.frame == Frame::lab);
  CHECK(r.report.residual < 1e-11);
  CHECK(r.report.refinements == static_cast<int>(r.report.residuals.size()));
}

TEST_CASE("unitarity at every resolution") {
  const auto cfg = cfg_khz(400, 100, 27);
  DdrfSequence s;
  s.n_pulses = 4;
  s.tau = 3e-6;
  s.b1 = from_hz(150e3);
  s.omega = from_hz(27e3 + 400e3);
  const auto ev = schedule_from_ddrf(s);
  for (long long spp : {1LL, 3LL, 32LL, 256LL}) CHECK(evolve_fixed(ev, cfg, spp).unitarity_error() < 1e-10);
}

TEST_CASE("second-order convergence under step halving") {
  const auto cfg = cfg_khz(200, 0, 430);
  const auto ev = single_pulse_schedule(7.3e-6, from_hz(120e3), from_hz(230e3), 0.2);
  std::vector<MatX> u;
  for (long long spp : {32LL, 64LL, 128LL, 256LL}) u.push_back(evolve_fixed(ev, cfg, spp).matrix);
  const double d1 = (u[1] - u[0]).norm(), d2 = (u[2] - u[1]).norm(), d3 = (u[3] - u[2]).norm();
  CHECK(d1 / d2 >= 3.9);
  CHECK(d2 / d3 >= 3.9);
  // refined results from two base resolutions agree
  IntegratorSpec fine;
  fine.steps_per_drive_period = 256;
  CHECK((evolve(ev, cfg).propagator.matrix - evolve(ev, cfg, fine).propagator.matrix).norm() < 1e-7);
}

TEST_CASE("far off resonance: drive averages out") {
  const auto cfg = cfg_khz(200, 0, 430);
  const double t = 10e-6;
  const auto free = evolve_fixed(single_pulse_schedule(t, 0.0, 0.0, 0.0), cfg, 32).matrix;
  const auto driven = evolve(single_pulse_schedule(t, from_hz(20e3), from_hz(200e6), 0.0), cfg).propagator.matrix;
  CHECK(oracle::fidelity(free, driven) > 1 - 1e-3);
}

TEST_CASE("convergence failure reports the residual") {
  const auto cfg = cfg_khz(200, 0, 430);
  IntegratorSpec spec;
  spec.tol = 1e-30;
  spec.max_refinements = 1;
  try {
    evolve(single_pulse_schedule(5e-6, from_hz(100e3), from_hz(230e3), 0.0), cfg, spec);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual > 0);
  }
  spec.steps_per_drive_period = 8;
  CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("interaction frame and projection") {
  const auto cfg = cfg_khz(200, 0, 430);
  const Propagator u{evolve_fixed(single_pulse_schedule(1e-6, from_hz(50e3), cfg.omega_l(), 0.0), cfg, 32).matrix,
                     Frame::lab, 0.0};
  CHECK((to_interaction_frame(u, cfg, cfg.omega_l(), 0.0).matrix - u.matrix).norm() < 1e-15);

  // free evolution: m_s = 0 block loses its precession, m_s = -1 keeps only -A Iz
  const double t = 3.7e-6;
  const Propagator f{evolve_fixed(single_pulse_schedule(t, 0.0, 0.0, 0.0), cfg, 32).matrix, Frame::lab, 0.0};
  const MatX fi = to_interaction_frame(f, cfg, cfg.omega_l(), t).matrix;
  CHECK((fi.block(2, 2, 2, 2) - MatX::Identity(2, 2)).norm() < 1e-9);
  CHECK((fi.block(4, 4, 2, 2) - MatX(rot_z(-cfg.hyperfine.a_par * t))).norm() < 1e-9);

  const auto p = project_computational(f);
  CHECK(p.dim() == 4);
  CHECK(p.leakage == doctest::Approx(0.0).scale(1.0));
  Mat6 swap = Mat6::Zero();
  swap.block<2, 2>(0, 2) = Mat2::Identity();
  swap.block<2, 2>(2, 0) = Mat2::Identity();
  swap.block<2, 2>(4, 4) = Mat2::Identity();
  CHECK(project_computational({swap, Frame::lab, 0.0}).leakage == doctest::Approx(0.5));
  CHECK(project_computational({Mat6::Zero(), Frame::lab, 0.0}).leakage == 1.0);
  CHECK_THROWS_AS(project_computational({MatX::Identity(4, 4), Frame::lab, 0.0}), DomainError);
}

TEST_CASE("full DDrf run agrees with the offres RWA model at high field") {
  // drive resonant with the m_s = -1 branch, the m_s = 0 branch sees detuning +A
  for (double wl : {430.0, 1980.0}) {
    const auto cfg = cfg_khz(25, 0, wl);
    const double a = cfg.hyperfine.a_par;
    DdrfSequence s;
    s.n_pulses = 2;
    s.b1 = b1_sync(a, 0, 2, 2);
    s.tau = tau_sync(a, s.b1, 2);
    s.omega = cfg.omega_l() - a;
    s.varphi = 0.3;
    const auto r = evolve(schedule_from_ddrf(s), cfg);
    const auto proj = project_computational(to_interaction_frame(r.propagator, cfg, s.omega, s.gate_time()));
    CHECK(proj.leakage < 1e-9);
    const auto rwa = assemble_ddrf(s, a, RwaModel::offres);
    CHECK(average_gate_fidelity(rwa.matrix, proj.matrix) > 0.999);
  }
}
