#include "nvsync/spin_system.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "nvsync/errors.hpp"

namespace nvsync {

void PhysicalConstants::validate() const {
  if (!(d > 0) || !(gamma_e > 0) || !(gamma_n > 0))
    throw DomainError("physical constants must be strictly positive");
}

double SpinRegisterConfig::delta() const {
  const double ez = constants.gamma_e * b_z;
  return ez < constants.d ? 2.0 * ez : 2.0 * constants.d;
}

SpinRegisterConfig SpinRegisterConfig::from_larmor(double omega_l, HyperfineTensor hf,
                                                   PhysicalConstants c) {
  c.validate();
  SpinRegisterConfig cfg;
  cfg.constants = c;
  cfg.b_z = omega_l / c.gamma_n;
  cfg.hyperfine = hf;
  return cfg;
}

void SpinRegisterConfig::validate() const {
  constants.validate();
  if (!std::isfinite(b_z)) throw DomainError("b_z must be finite");
  if (hyperfine.a_perp < 0) throw DomainError("a_perp is stored non-negative");
}

Mat6 SpinOperators::lift_e(const Mat3& a) const {
  Mat6 out;
  out = kron(a, Mat2::Identity());
  return out;
}

Mat6 SpinOperators::lift_n(const Mat2& b) const {
  Mat6 out;
  out = kron(Mat3::Identity(), b);
  return out;
}

static SpinOperators make_operators() {
  SpinOperators op;
  const double r = 1.0 / std::sqrt(2.0);
  op.sx = Mat3::Zero();
  op.sy = Mat3::Zero();
  op.sz = Mat3::Zero();
  op.sx(0, 1) = op.sx(1, 0) = op.sx(1, 2) = op.sx(2, 1) = r;
  op.sy(0, 1) = op.sy(1, 2) = -kI * r;
  op.sy(1, 0) = op.sy(2, 1) = kI * r;
  op.sz(0, 0) = 1.0;
  op.sz(2, 2) = -1.0;

  op.ix = Mat2::Zero();
  op.iy = Mat2::Zero();
  op.iz = Mat2::Zero();
  op.ix(0, 1) = op.ix(1, 0) = 0.5;
  op.iy(0, 1) = -0.5 * kI;
  op.iy(1, 0) = 0.5 * kI;
  op.iz(0, 0) = 0.5;
  op.iz(1, 1) = -0.5;
  return op;
}

const SpinOperators& build_operators() {
  static const SpinOperators op = make_operators();
  return op;
}

Mat6 electron_hamiltonian(const SpinRegisterConfig& cfg) {
  const auto& op = build_operators();
  const Mat3 he = cfg.constants.d * op.sz * op.sz + cfg.constants.gamma_e * cfg.b_z * op.sz;
  return op.lift_e(he);
}

Mat6 nuclear_hamiltonian(const SpinRegisterConfig& cfg) {
  const auto& op = build_operators();
  Mat6 h = cfg.omega_l() * op.lift_n(op.iz);
  const Mat6 sz = op.lift_e(op.sz);
  h += cfg.hyperfine.a_par * sz * op.lift_n(op.iz);
  h += cfg.hyperfine.a_perp * sz * op.lift_n(op.ix);
  return h;
}

Mat6 static_hamiltonian(const SpinRegisterConfig& cfg) {
  return electron_hamiltonian(cfg) + nuclear_hamiltonian(cfg);
}

Mat6 drive_hamiltonian(double t, double b1, double omega, double phi) {
  const auto& op = build_operators();
  return (2.0 * b1 * std::cos(omega * t + phi)) * op.lift_n(op.ix);
}

Mat2 nuclear_block(const SpinRegisterConfig& cfg, int ms) {
  if (ms < -1 || ms > 1) throw DomainError("ms must be +1, 0 or -1");
  const auto& op = build_operators();
  return cfg.omega_l() * op.iz + (ms * cfg.hyperfine.a_par) * op.iz +
         (ms * cfg.hyperfine.a_perp) * op.ix;
}

std::vector<RegimeFlag> regime_report(const SpinRegisterConfig& cfg, double b1,
                                      double threshold) {
  const double inf = std::numeric_limits<double>::infinity();
  const double gap = std::abs(cfg.omega_l() - cfg.hyperfine.a_par);
  auto ratio = [&](double num, double den) {
    if (num == 0.0) return 0.0;
    return den > 0 ? std::abs(num) / den : inf;
  };
  std::vector<RegimeFlag> out;
  out.push_back({"drive_vs_ms_plus1", "B1 << delta (m_s=+1 level stays off resonance)",
                 ratio(b1, cfg.delta()), threshold, false});
  out.push_back({"rwa_drive", "B1 << |omega_l - A_par| (rotating-wave approximation)",
                 ratio(b1, gap), threshold, false});
  out.push_back({"perpendicular_hyperfine", "A_perp << |omega_l - A_par|",
                 ratio(cfg.hyperfine.a_perp, gap), threshold, false});
  for (auto& f : out) f.pass = f.ratio < f.threshold;
  return out;
}

SpinRegisterConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"constants", "b_z_tesla", "omega_l_over_2pi_hz",
                                           "a_par_over_2pi_hz", "a_perp_over_2pi_hz"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw DomainError("unknown config key: " + it.key());

  PhysicalConstants c;
  if (j.contains("constants")) {
    const auto& jc = j.at("constants");
    if (jc.contains("d_over_2pi_hz")) c.d = from_hz(jc.at("d_over_2pi_hz").get<double>());
    if (jc.contains("gamma_e_over_2pi_hz_per_tesla"))
      c.gamma_e = from_hz(jc.at("gamma_e_over_2pi_hz_per_tesla").get<double>());
    if (jc.contains("gamma_n_over_2pi_hz_per_tesla"))
      c.gamma_n = from_hz(jc.at("gamma_n_over_2pi_hz_per_tesla").get<double>());
  }
  c.validate();

  const bool has_b = j.contains("b_z_tesla"), has_w = j.contains("omega_l_over_2pi_hz");
  if (has_b == has_w) throw DomainError("config needs exactly one of b_z_tesla, omega_l_over_2pi_hz");

  HyperfineTensor hf;
  hf.a_par = from_hz(j.value("a_par_over_2pi_hz", 0.0));
  hf.a_perp = from_hz(j.value("a_perp_over_2pi_hz", 0.0));

  SpinRegisterConfig cfg;
  if (has_b) {
    cfg.constants = c;
    cfg.b_z = j.at("b_z_tesla").get<double>();
    cfg.hyperfine = hf;
  } else {
    cfg = SpinRegisterConfig::from_larmor(from_hz(j.at("omega_l_over_2pi_hz").get<double>()), hf, c);
  }
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const SpinRegisterConfig& cfg) {
  return {
      {"constants",
       {{"d_over_2pi_hz", to_hz(cfg.constants.d)},
        {"gamma_e_over_2pi_hz_per_tesla", to_hz(cfg.constants.gamma_e)},
        {"gamma_n_over_2pi_hz_per_tesla", to_hz(cfg.constants.gamma_n)}}},
      {"b_z_tesla", cfg.b_z},
      {"a_par_over_2pi_hz", to_hz(cfg.hyperfine.a_par)},
      {"a_perp_over_2pi_hz", to_hz(cfg.hyperfine.a_perp)},
  };
}

nlohmann::json regime_to_json(const std::vector<RegimeFlag>& flags) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : flags)
    out.push_back({{"name", f.name}, {"description", f.description}, {"ratio", f.ratio},
                   {"threshold", f.threshold}, {"pass", f.pass}});
  return out;
}

}  // namespace nvsync
