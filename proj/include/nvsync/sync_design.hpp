#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nvsync/spin_system.hpp"

namespace nvsync {

// Convention used throughout: per interval tau the off-resonant branch turns through
// sqrt(A^2 + B1^2) tau = m pi and the resonant branch through N B1 tau = (2n+1) pi / 2.
// N = 1 denotes a single rf pulse of length 2 tau (no DD).
struct SyncParams {
  int n = 0;
  int m = 1;
  int n_pulses = 2;
  int l = 1;
  double b1_sync = 0.0;  // rad/s
  double tau = 0.0;      // s
  double bz_sync = 0.0;  // T
  double t_g = 0.0;      // s
};

struct DetunedGate {
  double omega_1 = 0.0;               // tilted precession frequency of the m_s=-1 branch
  double beta = 0.0;                  // signed tilt, sin(beta) = -A_perp / omega_1
  double detuning = 0.0;              // omega_1 - omega
  double omega_drive_strength = 0.0;  // Omega (the rf amplitude B1)
  double omega_0 = 0.0;               // |0> branch precession in the tilted frame
  double omega = 0.0;                 // rf carrier
  int n = 0;
  int m = 1;
  double t_g = 0.0;
};

enum class ParityRule {
  physical,  // m even whenever N >= 2 (|0> branch returns to +-1 after each tau)
  legacy,    // "if m is odd, N/2 has to be an even integer"
  none
};

struct SearchBounds {
  int n_max = 10;  // n in [0, n_max]
  int m_max = 10;  // m in [1, m_max]
  int l_max = 10;  // l in [1, l_max]
  std::vector<int> n_pulses = default_pulse_counts();
  bool include_single_pulse = false;  // also consider N = 1

  static std::vector<int> default_pulse_counts();
};

struct SyncConstraints {
  std::optional<double> max_bz;  // T
  std::optional<double> max_b1;  // rad/s
  ParityRule parity = ParityRule::physical;
  SearchBounds bounds{};
};

double b1_sync(double a_par, int n, int m, int n_pulses);
double tau_sync(double a_par, double b1, int m);
double bz_sync(double b1, int n, int n_pulses, int l, double gamma_n);

bool admissible(int n, int m, int n_pulses, ParityRule rule = ParityRule::physical);

SyncParams make_sync_params(double a_par, int n, int m, int n_pulses, int l, double gamma_n);

struct GateTimeAudit {
  double t_g = 0.0;          // 2 N tau from tau_sync
  double eq28_literal = 0.0; // pi/A sqrt(N^2 m^2 - (2n+1)^2/4)
  double eq28_4pi = 0.0;     // 4 pi/A sqrt(m^2 N^2 - (2n+1)^2/4)
  double ratio_literal() const { return t_g / eq28_literal; }
  double ratio_4pi() const { return t_g / eq28_4pi; }
};

GateTimeAudit gate_time(double a_par, int n_pulses, int m, int n);

SyncParams fastest_gate(double a_par, const SyncConstraints& c, double gamma_n);

struct RatioTuple {
  int n_pulses, n, m, l;
  auto operator<=>(const RatioTuple&) const = default;
};

struct RatioSolution {
  double x;
  RatioTuple spin1, spin2;
};

struct RatioSummary {
  std::int64_t tuple_count = 0;  // admissible (N, n, m, l) per spin
  std::int64_t pair_count = 0;   // ordered tuple pairs, double counting included
  std::optional<std::int64_t> distinct_count;  // exact (rational) dedupe
  double x_min = 0.0, x_max = 0.0;
  RatioTuple argmin_1{}, argmin_2{}, argmax_1{}, argmax_2{};
  std::vector<RatioSolution> solutions;  // |x - x_target| <= tol, canonical order
};

// Eq. (29) with N, n, m, l in [1, r]; distinct counting needs r <= 10 (exact 64-bit keys)
RatioSummary enumerate_bz_ratios(int r, double x_target, double tol, bool count_distinct = true);
// sorted distinct x values (exact dedupe), for small r
std::vector<double> distinct_bz_ratios(int r);
double bz_ratio(const RatioTuple& t1, const RatioTuple& t2);

DetunedGate detuned_gate_params(double a_par, double a_perp, double omega_l, int n, int m);

nlohmann::json sync_report(const SyncParams& p, double a_par);
nlohmann::json detuned_to_json(const DetunedGate& g);
nlohmann::json ratio_summary_to_json(const RatioSummary& s);

}  // namespace nvsync
