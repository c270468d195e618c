#include "nvsync/sync_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "nvsync/errors.hpp"

namespace nvsync {

std::vector<int> SearchBounds::default_pulse_counts() {
  std::vector<int> v;
  for (int n = 2; n <= 32; n += 2) v.push_back(n);
  return v;
}

static long long radicand(int n, int m, int n_pulses) {
  const long long k = 2LL * n + 1;
  return 4LL * m * m * n_pulses * n_pulses - k * k;
}

static void check_domain(int n, int m, int n_pulses) {
  if (n < 0 || m < 1 || n_pulses < 1) {
    std::ostringstream os;
    os << "sync indices out of range (n >= 0, m >= 1, N >= 1): n=" << n << " m=" << m << " N=" << n_pulses;
    throw DomainError(os.str());
  }
  if (radicand(n, m, n_pulses) <= 0) {
    std::ostringstream os;
    os << "Eq. (26) domain violated: need 4 m^2 N^2 > (2n+1)^2, got 4*" << m << "^2*" << n_pulses
       << "^2 = " << 4LL * m * m * n_pulses * n_pulses << " <= " << (2 * n + 1) << "^2";
    throw DomainError(os.str());
  }
}

double b1_sync(double a_par, int n, int m, int n_pulses) {
  check_domain(n, m, n_pulses);
  return std::abs(a_par) * (2.0 * n + 1) / std::sqrt(static_cast<double>(radicand(n, m, n_pulses)));
}

double tau_sync(double a_par, double b1, int m) {
  if (m < 1) throw DomainError("tau_sync needs m >= 1");
  const double w = std::hypot(a_par, b1);
  if (!(w > 0)) throw DomainError("tau_sync needs a_par or b1 nonzero");
  return m * kPi / w;
}

double bz_sync(double b1, int n, int n_pulses, int l, double gamma_n) {
  if (!(b1 > 0) || n < 0 || n_pulses < 1 || l < 1 || !(gamma_n > 0))
    throw DomainError("bz_sync needs b1 > 0, n >= 0, N >= 1, l >= 1, gamma_n > 0");
  const double tau = (2.0 * n + 1) * kPi / (2.0 * n_pulses * b1);
  return kTwoPi * l / (gamma_n * tau);
}

bool admissible(int n, int m, int n_pulses, ParityRule rule) {
  if (n < 0 || m < 1 || n_pulses < 1) return false;
  if (n_pulses > 1 && n_pulses % 2 != 0) return false;
  if (radicand(n, m, n_pulses) <= 0) return false;
  switch (rule) {
    case ParityRule::physical: return n_pulses == 1 || m % 2 == 0;
    case ParityRule::legacy: return m % 2 == 0 || (n_pulses % 4 == 0);
    case ParityRule::none: return true;
  }
  return false;
}

SyncParams make_sync_params(double a_par, int n, int m, int n_pulses, int l, double gamma_n) {
  SyncParams p;
  p.n = n;
  p.m = m;
  p.n_pulses = n_pulses;
  p.l = l;
  p.b1_sync = b1_sync(a_par, n, m, n_pulses);
  p.tau = tau_sync(a_par, p.b1_sync, m);
  p.bz_sync = bz_sync(p.b1_sync, n, n_pulses, l, gamma_n);
  p.t_g = 2.0 * n_pulses * p.tau;
  return p;
}

GateTimeAudit gate_time(double a_par, int n_pulses, int m, int n) {
  check_domain(n, m, n_pulses);
  const double b1 = b1_sync(a_par, n, m, n_pulses);
  GateTimeAudit a;
  a.t_g = 2.0 * n_pulses * tau_sync(a_par, b1, m);
  const double root = std::sqrt(static_cast<double>(radicand(n, m, n_pulses)) / 4.0);
  a.eq28_literal = kPi / std::abs(a_par) * root;
  a.eq28_4pi = 4.0 * kPi / std::abs(a_par) * root;
  return a;
}

SyncParams fastest_gate(double a_par, const SyncConstraints& c, double gamma_n) {
  if (c.max_b1 && !(*c.max_b1 > 0)) throw InfeasibleError("constraint max_b1 <= 0 admits no drive");
  if (c.max_bz && !(*c.max_bz > 0)) throw InfeasibleError("constraint max_bz <= 0 admits no field");
  std::vector<int> counts = c.bounds.n_pulses;
  if (c.bounds.include_single_pulse) counts.push_back(1);

  std::optional<SyncParams> best;
  auto key = [](const SyncParams& p) { return std::make_tuple(p.n_pulses, p.m, p.n, p.l); };
  for (int np : counts)
    for (int m = 1; m <= c.bounds.m_max; ++m)
      for (int n = 0; n <= c.bounds.n_max; ++n) {
        if (!admissible(n, m, np, c.parity)) continue;
        for (int l = 1; l <= c.bounds.l_max; ++l) {
          const SyncParams p = make_sync_params(a_par, n, m, np, l, gamma_n);
          if (c.max_b1 && p.b1_sync > *c.max_b1) continue;
          if (c.max_bz && p.bz_sync > *c.max_bz) continue;
          if (!best) {
            best = p;
            continue;
          }
          const double rel = (p.t_g - best->t_g) / best->t_g;
          if (rel < -1e-12 || (std::abs(rel) <= 1e-12 && key(p) < key(*best))) best = p;
        }
      }
  if (!best) throw InfeasibleError("no admissible (n, m, N, l) tuple satisfies the constraints");
  return *best;
}

// ---------------------------------------------------------------------------
// Eq. (29)

namespace {

struct RatioEntry {
  double a;            // sqrt(P) / (2 N l)
  std::uint64_t p, d;  // a^2 = p / d, reduced
  RatioTuple t;
};

std::vector<RatioEntry> ratio_entries(int r) {
  if (r < 1) throw DomainError("enumerate_bz_ratios needs R >= 1");
  std::vector<RatioEntry> out;
  for (int np = 1; np <= r; ++np)
    for (int n = 1; n <= r; ++n)
      for (int m = 1; m <= r; ++m) {
        const long long p = radicand(n, m, np);
        if (p <= 0) continue;
        for (int l = 1; l <= r; ++l) {
          const std::uint64_t d = 4ULL * np * np * l * l;
          const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(p), d);
          out.push_back({std::sqrt(static_cast<double>(p)) / (2.0 * np * l), p / g, d / g, {np, n, m, l}});
        }
      }
  return out;
}

// distinct a^2 values, sorted by a
std::vector<std::pair<std::uint64_t, std::uint64_t>> distinct_squares(const std::vector<RatioEntry>& e) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> v;
  v.reserve(e.size());
  for (const auto& x : e) v.emplace_back(x.p, x.d);
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return static_cast<unsigned __int128>(a.first) * b.second < static_cast<unsigned __int128>(b.first) * a.second;
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// reduced (num, den) of x^2 = (p1 d2) / (d1 p2), packed in 64 bits; both fit in 32 bits for R <= 10
std::uint64_t ratio_key(const std::pair<std::uint64_t, std::uint64_t>& s1,
                        const std::pair<std::uint64_t, std::uint64_t>& s2) {
  std::uint64_t num = s1.first * s2.second, den = s1.second * s2.first;
  const std::uint64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  return (num << 32) | den;
}

}  // namespace

double bz_ratio(const RatioTuple& t1, const RatioTuple& t2) {
  auto f = [](const RatioTuple& t) {
    const double k = 2.0 * t.n + 1;
    return t.m * static_cast<double>(t.m) - k * k / (4.0 * t.n_pulses * t.n_pulses);
  };
  const double f1 = f(t1), f2 = f(t2);
  if (f1 <= 0 || f2 <= 0) throw DomainError("Eq. (29) tuple outside the Eq. (26) domain");
  return static_cast<double>(t2.l) / t1.l * std::sqrt(f1 / f2);
}

RatioSummary enumerate_bz_ratios(int r, double x_target, double tol, bool count_distinct) {
  auto e = ratio_entries(r);
  std::sort(e.begin(), e.end(), [](const RatioEntry& a, const RatioEntry& b) {
    return std::tie(a.a, a.t) < std::tie(b.a, b.t);
  });
  RatioSummary s;
  s.tuple_count = static_cast<std::int64_t>(e.size());
  s.pair_count = s.tuple_count * s.tuple_count;
  const auto& lo = e.front();
  const auto& hi = e.back();
  s.x_min = lo.a / hi.a;
  s.argmin_1 = lo.t;
  s.argmin_2 = hi.t;
  s.x_max = hi.a / lo.a;
  s.argmax_1 = hi.t;
  s.argmax_2 = lo.t;

  if (count_distinct && r <= 10) {
    const auto sq = distinct_squares(e);
    std::vector<std::uint64_t> keys;
    keys.reserve(sq.size() * (sq.size() - 1) / 2);
    for (size_t i = 0; i < sq.size(); ++i)
      for (size_t j = 0; j < i; ++j) keys.push_back(ratio_key(sq[i], sq[j]));  // x > 1 half
    std::sort(keys.begin(), keys.end());
    const auto nk = std::unique(keys.begin(), keys.end()) - keys.begin();
    s.distinct_count = 2 * static_cast<std::int64_t>(nk) + 1;
  }

  // x = a1/a2 within tol (plus 1e-12 relative float slack)
  const double slack = 1e-12 * std::max(1.0, std::abs(x_target));
  const double xlo = x_target - tol - slack, xhi = x_target + tol + slack;
  for (const auto& e1 : e) {
    const double a2_lo = e1.a / xhi;
    const double a2_hi = xlo > 0 ? e1.a / xlo : std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(e.begin(), e.end(), a2_lo * (1 - 1e-15),
                               [](const RatioEntry& x, double v) { return x.a < v; });
    for (; it != e.end() && it->a <= a2_hi * (1 + 1e-15); ++it) {
      const double x = e1.a / it->a;
      if (x >= xlo && x <= xhi) s.solutions.push_back({x, e1.t, it->t});
    }
  }
  std::sort(s.solutions.begin(), s.solutions.end(), [](const RatioSolution& a, const RatioSolution& b) {
    return std::tie(a.x, a.spin1, a.spin2) < std::tie(b.x, b.spin1, b.spin2);
  });
  return s;
}

std::vector<double> distinct_bz_ratios(int r) {
  if (r > 10) throw DomainError("distinct_bz_ratios is limited to R <= 10");
  const auto sq = distinct_squares(ratio_entries(r));
  std::vector<std::uint64_t> keys;
  for (const auto& a : sq)
    for (const auto& b : sq) keys.push_back(ratio_key(a, b));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<double> x;
  x.reserve(keys.size());
  for (auto k : keys) x.push_back(std::sqrt(static_cast<double>(k >> 32) / static_cast<double>(k & 0xffffffffULL)));
  std::sort(x.begin(), x.end());
  return x;
}

// ---------------------------------------------------------------------------
// sec. IV B

DetunedGate detuned_gate_params(double a_par, double a_perp, double omega_l, int n, int m) {
  if (n < 0 || m < 1) throw DomainError("detuned protocol needs n >= 0, m >= 1");
  const double w1 = std::hypot(a_perp, omega_l - a_par);
  if (!(w1 > 0)) throw DomainError("detuned protocol needs omega_1 > 0");
  const double sb = -a_perp / w1, cb = (omega_l - a_par) / w1;

  auto omega0 = [&](double om) { return std::hypot(omega_l * cb - (w1 - om * sb), om * cb); };
  auto f = [&](double om) { return (2.0 * n + 1) * omega0(om) / om - 2.0 * m; };

  const int grid = 20000;
  const double top = 10.0 * w1;
  double lo = 0, hi = 0;
  bool found = false;
  double xp = top / grid, fp = f(xp);
  for (int i = 2; i <= grid; ++i) {
    const double x = top * i / grid, fx = f(x);
    if ((fp > 0) != (fx > 0) || fx == 0) {
      lo = xp;
      hi = x;
      found = true;
      break;
    }
    xp = x;
    fp = fx;
  }
  if (!found) {
    std::ostringstream os;
    os << "detuned protocol: no root of (2n+1) Omega_0 / Omega = 2m in (0, 10 omega_1] for n=" << n << " m=" << m;
    throw InfeasibleError(os.str());
  }
  double flo = f(lo);
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double om = 0.5 * (lo + hi);

  DetunedGate g;
  g.omega_1 = w1;
  g.beta = std::atan2(sb, cb);
  g.omega_drive_strength = om;
  g.omega = w1 - om * sb;
  g.detuning = w1 - g.omega;
  g.omega_0 = omega0(om);
  g.n = n;
  g.m = m;
  g.t_g = (2.0 * n + 1) * kPi / om;
  return g;
}

// ---------------------------------------------------------------------------

nlohmann::json sync_report(const SyncParams& p, double a_par) {
  const auto audit = gate_time(a_par, p.n_pulses, p.m, p.n);
  return {
      {"schema_version", 1},
      {"inputs", {{"a_par_over_2pi_hz", to_hz(a_par)}}},
      {"tuple", {{"n", p.n}, {"m", p.m}, {"N", p.n_pulses}, {"l", p.l}}},
      {"b1_over_2pi_hz", to_hz(p.b1_sync)},
      {"tau_s", p.tau},
      {"bz_gauss", p.bz_sync * 1e4},
      {"bz_gauss_min", p.bz_sync / p.l * 1e4},
      {"t_g_s", p.t_g},
      {"eq28_literal_s", audit.eq28_literal},
      {"eq28_4pi_s", audit.eq28_4pi},
      {"discrepancy_ratio", audit.ratio_literal()},
  };
}

nlohmann::json detuned_to_json(const DetunedGate& g) {
  return {
      {"schema_version", 1},
      {"omega_1_over_2pi_hz", to_hz(g.omega_1)},
      {"beta_rad", g.beta},
      {"detuning_over_2pi_hz", to_hz(g.detuning)},
      {"omega_over_2pi_hz", to_hz(g.omega_drive_strength)},
      {"omega_0_over_2pi_hz", to_hz(g.omega_0)},
      {"drive_frequency_over_2pi_hz", to_hz(g.omega)},
      {"n", g.n},
      {"m", g.m},
      {"t_g_s", g.t_g},
  };
}

static nlohmann::json tuple_json(const RatioTuple& t) {
  return {{"N", t.n_pulses}, {"n", t.n}, {"m", t.m}, {"l", t.l}};
}

nlohmann::json ratio_summary_to_json(const RatioSummary& s) {
  nlohmann::json sol = nlohmann::json::array();
  for (const auto& x : s.solutions)
    sol.push_back({{"x", x.x}, {"spin1", tuple_json(x.spin1)}, {"spin2", tuple_json(x.spin2)}});
  nlohmann::json j{
      {"schema_version", 1},
      {"tuple_count", s.tuple_count},
      {"pair_count", s.pair_count},
      {"x_min", s.x_min},
      {"x_max", s.x_max},
      {"argmin", {tuple_json(s.argmin_1), tuple_json(s.argmin_2)}},
      {"argmax", {tuple_json(s.argmax_1), tuple_json(s.argmax_2)}},
      {"solutions", sol},
  };
  j["distinct_count"] = s.distinct_count ? nlohmann::json(*s.distinct_count) : nlohmann::json(nullptr);
  return j;
}

}  // namespace nvsync
