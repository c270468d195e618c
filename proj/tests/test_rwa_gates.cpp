#include <random>

#include "doctest.h"

#include "nvsync/errors.hpp"
#include "nvsync/fidelity.hpp"
#include "nvsync/rwa_gates.hpp"
#include "nvsync/sync_design.hpp"
#include "oracles.hpp"

using namespace nvsync;

namespace {

const double kA200 = from_hz(200e3);

Mat2 electron_rz(double theta) { return rot_z(theta); }  // same matrix, acting on the electron qubit

DdrfSequence random_eq8_sequence(std::mt19937& rng, double& a_par) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DdrfSequence s;
  s.n_pulses = 2 * (1 + static_cast<int>(u(rng) * 8));
  const double wl = from_hz(100e3 + 3e6 * u(rng));
  s.l_larmor = 1 + static_cast<int>(u(rng) * 10);
  s.tau = s.l_larmor * kTwoPi / wl;  // Eq. (8)
  s.b1 = from_hz(0.5e3 + 50e3 * u(rng));
  s.varphi = kTwoPi * u(rng);
  a_par = from_hz(5e3 + 500e3 * u(rng));
  s.phi_tau = a_par * s.tau;
  REQUIRE(s.larmor_consistent(wl));
  return s;
}

}  // namespace

TEST_CASE("phase_schedule") {
  auto p = phase_schedule(3, 0.0, 0.0);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == doctest::Approx(kPi));
  CHECK(p[1] == doctest::Approx(0.0));
  CHECK(p[2] == doctest::Approx(kPi));
  CHECK(phase_schedule(1, 1.234, 0.5)[0] == doctest::Approx(0.5 + kPi));
  CHECK(phase_schedule(5, 0.3, 0.1)[3] == doctest::Approx(1.0));
  for (double x : phase_schedule(40, 1.7, 5.0)) {
    CHECK(x >= 0.0);
    CHECK(x < kTwoPi);
  }
  CHECK_THROWS_AS(phase_schedule(0, 0.0, 0.0), DomainError);
}

TEST_CASE("u0_free") {
  const double a = kA200;
  CHECK((u0_free(0.0, a).matrix - MatX::Identity(2, 2)).norm() < 1e-15);
  CHECK((u0_free(kTwoPi / a, a).matrix + MatX::Identity(2, 2)).norm() < 1e-14);
  const MatX q = u0_free(kPi / a, a).matrix;
  CHECK(std::abs(q(0, 0) - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(q(1, 1) - cplx(0, 1)) < 1e-14);
  CHECK(u0_free(1e-6, a).frame == Frame::nuclear_subspace);
}

TEST_CASE("u1_drive: Eq. (22) entries and exponential oracle") {
  const double b1 = from_hz(50e3);
  CHECK((u1_drive(0.0, b1, 0.3).matrix - MatX::Identity(2, 2)).norm() < 1e-15);
  const MatX f = u1_drive(kPi / b1, b1, 0.0).matrix;
  CHECK(std::abs(f(0, 1) - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(f(1, 0) - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(f(0, 0)) < 1e-14);
  // Eq. (22): [[cos, -i sin e^{-i phi}], [-i sin e^{i phi}, cos]] with half angle B1 t / 2
  const double t = 3.1e-6, phi = 0.9;
  const MatX g = u1_drive(t, b1, phi).matrix;
  CHECK(std::abs(g(0, 1) - cplx(0, -1) * std::sin(b1 * t / 2) * std::exp(cplx(0, -phi))) < 1e-14);
  // quarter turn about y against a Pade exponential
  const double tq = kPi / 2 / b1;
  const MatX h = b1 * (std::cos(kPi / 2) * oracle::ix() + std::sin(kPi / 2) * oracle::iy());
  CHECK((u1_drive(tq, b1, kPi / 2).matrix - oracle::expm(h, tq)).norm() < 1e-13);
}

TEST_CASE("u0_offres: limits and exponential oracle [DERIVED]") {
  const double b1 = from_hz(361e3), t = 1e-6, phi = 0.7;
  CHECK((u0_offres(t, kA200, 0.0, phi).matrix - u0_free(t, kA200).matrix).norm() < 1e-14);
  CHECK((u0_offres(t, 0.0, b1, phi).matrix - u1_drive(t, b1, phi).matrix).norm() < 1e-14);
  const MatX h = kA200 * oracle::iz() + b1 * (std::cos(phi) * oracle::ix() + std::sin(phi) * oracle::iy());
  const MatX want = oracle::expm(h, t);
  CHECK((u0_offres(t, kA200, b1, phi).matrix - want).norm() < 1e-12);
  CHECK(u0_offres(t, kA200, b1, phi).unitarity_error() < 1e-14);
  // random draws
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double a = from_hz(1e6 * (u(rng) - 0.5)), b = from_hz(1e6 * u(rng)), tt = 5e-6 * u(rng), p = 7 * u(rng);
    const MatX hh = a * oracle::iz() + b * (std::cos(p) * oracle::ix() + std::sin(p) * oracle::iy());
    CHECK((u0_offres(tt, a, b, p).matrix - oracle::expm(hh, tt)).norm() < 1e-11);
  }
}

TEST_CASE("assemble_ddrf: input validation") {
  DdrfSequence s;
  s.tau = 1e-6;
  s.b1 = from_hz(10e3);
  s.n_pulses = 3;
  CHECK_THROWS_AS(assemble_ddrf(s, kA200, RwaModel::weak), DomainError);
  s.n_pulses = 4;
  std::vector<double> wrong(4, 0.0);
  CHECK_THROWS_AS(assemble_ddrf(s, kA200, RwaModel::weak, wrong), DomainError);
  std::vector<double> right(5, 0.0);
  CHECK_NOTHROW(assemble_ddrf(s, kA200, RwaModel::weak, right));
}

TEST_CASE("assemble_ddrf(weak) equals crot_closed_form under Eq. (8), phi_tau = A tau [DERIVED]") {
  std::mt19937 rng(2024);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    double a = 0;
    const auto s = random_eq8_sequence(rng, a);
    const auto w = assemble_ddrf(s, a, RwaModel::weak);
    const auto c = crot_closed_form(s, a);
    CHECK(w.unitarity_error() < 1e-10);
    worst = std::max(worst, phase_aligned_distance(w.matrix, c.matrix));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("phi_tau determination: only A tau collapses the sequence") {
  // the candidate sweep from the design notes; 2 A tau and omega 2 tau do not work
  std::mt19937 rng(99);
  int hits_a = 0, hits_2a = 0, hits_w = 0;
  for (int k = 0; k < 50; ++k) {
    double a = 0;
    auto s = random_eq8_sequence(rng, a);
    const auto c = crot_closed_form(s, a);
    s.phi_tau = a * s.tau;
    hits_a += phase_aligned_distance(assemble_ddrf(s, a, RwaModel::weak).matrix, c.matrix) < 1e-9;
    s.phi_tau = 2 * a * s.tau;
    hits_2a += phase_aligned_distance(assemble_ddrf(s, a, RwaModel::weak).matrix, c.matrix) < 1e-9;
    s.phi_tau = wrap_phase(kTwoPi * 1e5 * 2 * s.tau);
    hits_w += phase_aligned_distance(assemble_ddrf(s, a, RwaModel::weak).matrix, c.matrix) < 1e-9;
  }
  CHECK(hits_a == 50);
  CHECK(hits_2a < 50);
  CHECK(hits_w < 50);
}

TEST_CASE("assemble_ddrf: no drive") {
  DdrfSequence s;
  s.n_pulses = 4;
  s.tau = 1.7e-6;
  s.b1 = 0.0;
  const auto v = assemble_ddrf(s, kA200, RwaModel::offres);
  const MatX v0 = v.matrix.topLeftCorner(2, 2), v1 = v.matrix.bottomRightCorner(2, 2);
  // V0 free precession over the odd intervals (total N tau), V1 over the even ones
  CHECK(phase_aligned_distance(v0, u0_free(4 * s.tau, kA200).matrix) < 1e-12);
  CHECK(phase_aligned_distance(v1, u0_free(4 * s.tau, kA200).matrix) < 1e-12);
  CHECK(v.matrix.topRightCorner(2, 2).norm() == 0.0);
  // weak model: |1> branch has no free precession at all
  const auto w = assemble_ddrf(s, kA200, RwaModel::weak);
  CHECK(phase_aligned_distance(MatX(w.matrix.bottomRightCorner(2, 2)), u0_free(4 * s.tau, kA200).matrix) < 1e-12);
}

TEST_CASE("offres: synchronized |0> intervals are +-identity for even m") {
  for (int m : {2, 4, 6})
    for (int n : {0, 1, 3}) {
      const int np = 2;
      if (4 * m * m * np * np <= (2 * n + 1) * (2 * n + 1)) continue;
      const double b1 = b1_sync(kA200, n, m, np);
      const double tau = tau_sync(kA200, b1, m);
      for (double phi : {0.0, 1.1, kPi})
        for (double d : {tau, 2 * tau}) {
          const MatX u = u0_offres(d, kA200, b1, phi).matrix;
          const double dist = std::min((u - MatX::Identity(2, 2)).norm(), (u + MatX::Identity(2, 2)).norm());
          CHECK(dist < 1e-10);
        }
    }
}

TEST_CASE("offres -> weak continuously as b1/a -> 0 at fixed rotation angle") {
  std::vector<double> d;
  for (double ratio : {1e-1, 1e-2, 1e-3, 1e-4}) {
    DdrfSequence s;
    s.n_pulses = 4;
    s.b1 = ratio * kA200;
    s.tau = kPi / (2 * s.n_pulses * s.b1);
    s.phi_tau = kA200 * s.tau;
    d.push_back(phase_aligned_distance(assemble_ddrf(s, kA200, RwaModel::offres).matrix,
                                       assemble_ddrf(s, kA200, RwaModel::weak).matrix));
  }
  for (size_t i = 1; i < d.size(); ++i) CHECK(d[i] < d[i - 1]);
  CHECK(d.back() < 1e-3);
}

TEST_CASE("crot_closed_form: Eq. (19) decomposition and trivial Vz") {
  DdrfSequence s;
  s.n_pulses = 2;
  s.b1 = from_hz(20e3);
  s.tau = kPi / (2 * s.n_pulses * s.b1);
  s.varphi = 0.0;
  const double a = kTwoPi / (s.n_pulses * s.tau);  // N A tau = 2 pi -> Vz = -1
  const MatX v = crot_closed_form(s, a).matrix;
  const MatX rhs = std::exp(cplx(0, kPi / 4)) * kron(electron_rz(kPi / 2), MatX::Identity(2, 2)) *
                   kron(MatX::Identity(2, 2), rot_x(kPi / 2)) * ideal_cnot();
  CHECK(phase_aligned_distance(v, rhs) < 1e-12);
  // Vz itself
  s.tau = 1e-6;
  const double a2 = kTwoPi / (s.n_pulses * s.tau);
  const Mat2 vz = rot_z(s.n_pulses * a2 * s.tau);
  CHECK(phase_aligned_distance(vz, Mat2::Identity()) < 1e-12);
}

TEST_CASE("cnot_from_crot") {
  DdrfSequence s;
  s.n_pulses = 2;
  s.b1 = from_hz(20e3);
  s.tau = kPi / (2 * s.n_pulses * s.b1);
  const Propagator v = crot_closed_form(s, kA200);
  const double vz = s.n_pulses * kA200 * s.tau;
  const Propagator c = cnot_from_crot(v, vz);
  CHECK(average_gate_fidelity(ideal_cnot(), c.matrix) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(phase_aligned_distance(c.matrix, ideal_cnot()) < 1e-12);

  // literal Eq. (20'): e^{-i pi/4} (Rz^e(-pi/2) x 1)(1 x Rx(-pi/2)) Vz^dag V
  const MatX lit = std::exp(cplx(0, -kPi / 4)) * kron(electron_rz(-kPi / 2), MatX::Identity(2, 2)) *
                   kron(MatX::Identity(2, 2), rot_x(-kPi / 2)) *
                   kron(MatX::Identity(2, 2), rot_z(vz)).adjoint() * v.matrix;
  CHECK(phase_aligned_distance(lit, c.matrix) < 1e-12);

  // identity input -> (4 + 4)/20
  const Propagator id{MatX::Identity(4, 4), Frame::interaction, 0.0};
  CHECK(average_gate_fidelity(ideal_cnot(), id.matrix) == doctest::Approx(0.4));

  // corruption of the Eq. (19) form is undone, anything else is not
  const MatX eq19 = kron(electron_rz(kPi / 2), MatX::Identity(2, 2)) * kron(MatX::Identity(2, 2), rot_x(kPi / 2)) * ideal_cnot();
  CHECK(average_gate_fidelity(ideal_cnot(), cnot_from_crot({eq19, Frame::interaction, 0.0}).matrix) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const MatX other = kron(MatX::Identity(2, 2), rot_z(0.4)) * eq19;
  CHECK(average_gate_fidelity(ideal_cnot(), cnot_from_crot({other, Frame::interaction, 0.0}).matrix) < 0.99);

  CHECK_THROWS_AS(cnot_from_crot({MatX::Identity(2, 2), Frame::interaction, 0.0}), DomainError);
}

TEST_CASE("controlled-flip correction maps blockdiag((-1)^m, -i(-1)^n X) to CNOT") {
  Mat2 x;
  x << 0, 1, 1, 0;
  for (int n = 0; n < 4; ++n)
    for (int m = 1; m < 5; ++m) {
      const double s0 = m % 2 ? -1.0 : 1.0;
      const cplx c1 = cplx(0, -1) * (n % 2 ? -1.0 : 1.0);
      const Propagator v{blockdiag(s0 * Mat2::Identity(), c1 * x), Frame::interaction, 0.0};
      const auto c = cnot_from_crot(v, CnotCorrection::for_controlled_flip(n, m));
      CHECK(phase_aligned_distance(c.matrix, ideal_cnot()) < 1e-14);
    }
}

TEST_CASE("propagator json round trip") {
  const Propagator p = u0_offres(1e-6, kA200, from_hz(100e3), 0.3);
  const auto j = propagator_to_json(p);
  CHECK(j.at("dim") == 2);
  CHECK(j.at("frame") == "nuclear-subspace");
  CHECK(j.at("entries").size() == 4);
  const Propagator q = propagator_from_json(j);
  CHECK((q.matrix - p.matrix).norm() == 0.0);
  CHECK(q.frame == p.frame);
}
