#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "nvsync/linalg.hpp"

namespace nvsync {

// all frequencies in rad/s, fields in Tesla
struct PhysicalConstants {
  double d = kTwoPi * 2.88e9;
  double gamma_e = kTwoPi * 14.00e9 * 2.00;
  double gamma_n = kTwoPi * 10.705e6;

  void validate() const;
};

struct HyperfineTensor {
  double a_par = 0.0;
  double a_perp = 0.0;
};

struct SpinRegisterConfig {
  PhysicalConstants constants{};
  double b_z = 0.0;
  HyperfineTensor hyperfine{};

  double omega_l() const { return constants.gamma_n * b_z; }
  double delta() const;

  static SpinRegisterConfig from_larmor(double omega_l, HyperfineTensor hf,
                                        PhysicalConstants c = {});
  void validate() const;
};

// basis: electron {+1, 0, -1} (x) nucleus {+1/2, -1/2}; index = 2*e + n
struct SpinOperators {
  Mat3 sx, sy, sz;
  Mat2 ix, iy, iz;

  Mat6 lift_e(const Mat3& a) const;
  Mat6 lift_n(const Mat2& b) const;
};

const SpinOperators& build_operators();

// full 6x6 Eq. (5)
Mat6 static_hamiltonian(const SpinRegisterConfig& cfg);

// D Sz^2 + gamma_e Bz Sz (commutes with everything else in the model)
Mat6 electron_hamiltonian(const SpinRegisterConfig& cfg);

// omega_l Iz + A_par Sz Iz + A_perp Sz Ix
Mat6 nuclear_hamiltonian(const SpinRegisterConfig& cfg);

// 2 b1 cos(omega t + phi) Ix on the nucleus
Mat6 drive_hamiltonian(double t, double b1, double omega, double phi);

// 2x2 nuclear block of H0 - electron part for a given ms in {+1, 0, -1}
Mat2 nuclear_block(const SpinRegisterConfig& cfg, int ms);

struct RegimeFlag {
  std::string name;
  std::string description;
  double ratio;
  double threshold;
  bool pass;
};

std::vector<RegimeFlag> regime_report(const SpinRegisterConfig& cfg, double b1,
                                      double threshold = 0.1);

// config document: constants overrides, b_z_tesla | omega_l_over_2pi_hz,
// a_par_over_2pi_hz, a_perp_over_2pi_hz
SpinRegisterConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SpinRegisterConfig& cfg);
nlohmann::json regime_to_json(const std::vector<RegimeFlag>& flags);

}  // namespace nvsync
