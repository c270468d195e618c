#include "nvsync/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <tuple>

#include "nvsync/errors.hpp"

namespace nvsync {

void parallel_for(size_t n, const std::function<void(size_t)>& body, unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<size_t>(workers, n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------------------
// tables

std::vector<TableSpec> table1_spec() {
  return {
      {25, 430, 10, 0.99992, 0.99886, 0.99965, 342, 2990},
      {25, 1980, 10, 0.99999, 0.99995, 0.99999, 341, 2990},
      {25, 27, 10, 0.28968, 0.42398, 0.25727, 342, 2990},
      {200, 430, 20, 0.95159, 0.85510, 0.74629, 43, 41},
      {200, 1980, 20, 0.99931, 0.99923, 0.99955, 43, 43},
      {200, 27, 20, 0.95649, 0.89905, 0.92003, 43, 45},
      {400, 430, 20, 0.28537, 0.32537, 0.28958, 21, 21},
      {400, 1980, 20, 0.99679, 0.99666, 0.99608, 21, 21},
      {400, 27, 20, 0.96967, 0.95435, 0.95929, 21, 22},
  };
}

std::vector<TableSpec> table2_spec() {
  return {
      {5, 27, 4, 0.99618, 0.78181, 0.92346, 1709, 1834},
      {60, 430, 30, 0.99826, 0.96908, 0.98910, 142, 142},
      {100, 1980, 50, 0.99982, 0.99748, 0.99938, 85, 85},
      {100, 1980, 100, 0.99982, 0.97711, 0.99718, 85, 88},
      {400, 27, 200, 0.96967, 0.74501, 0.85868, 21, 25},
  };
}

static GateRun run_single(const SpinRegisterConfig& cfg, double b1, double omega, double t, double beta,
                          int n, int m, const IntegratorSpec& spec, nlohmann::json echo) {
  const auto sched = single_pulse_schedule(t, b1, omega, 0.0);
  const EvolveResult ev = evolve(sched, cfg, spec);
  const Propagator v = project_computational(to_interaction_frame(ev.propagator, cfg, omega, t, beta));
  GateRun g;
  g.report = corrected_cnot_fidelity(v, CnotCorrection::for_controlled_flip(n, m), std::move(echo));
  g.t_g = t;
  g.convergence = ev.report;
  g.unitarity = ev.propagator.unitarity_error();
  return g;
}

GateRun run_sync1(double a_par, double omega_l, double a_perp, const IntegratorSpec& spec) {
  const auto cfg = SpinRegisterConfig::from_larmor(omega_l, {a_par, a_perp});
  const double b1 = b1_sync(a_par, 0, 1, 1);
  const double t = kPi / b1;
  const double omega = omega_l - a_par;
  nlohmann::json echo{{"protocol", "sync1"},
                      {"register", config_to_json(cfg)},
                      {"b1_over_2pi_hz", to_hz(b1)},
                      {"omega_over_2pi_hz", to_hz(omega)},
                      {"t_g_s", t}};
  return run_single(cfg, b1, omega, t, 0.0, 0, 1, spec, std::move(echo));
}

GateRun run_sync2(double a_par, double omega_l, double a_perp, const IntegratorSpec& spec, int n, int m) {
  const auto cfg = SpinRegisterConfig::from_larmor(omega_l, {a_par, a_perp});
  const DetunedGate g = detuned_gate_params(a_par, a_perp, omega_l, n, m);
  nlohmann::json echo{{"protocol", "sync2"}, {"register", config_to_json(cfg)}, {"detuned", detuned_to_json(g)}};
  return run_single(cfg, g.omega_drive_strength, g.omega, g.t_g, g.beta, n, m, spec, std::move(echo));
}

TableRow run_table_row(const TableSpec& s, const IntegratorSpec& spec) {
  const double a = from_hz(s.a_par_khz * 1e3), wl = from_hz(s.omega_l_khz * 1e3), ap = from_hz(s.a_perp_khz * 1e3);
  const GateRun r1 = run_sync1(a, wl, 0.0, spec);
  const GateRun r1p = run_sync1(a, wl, ap, spec);
  const GateRun r2 = run_sync2(a, wl, ap, spec);
  TableRow row;
  row.a_par_khz = s.a_par_khz;
  row.omega_l_khz = s.omega_l_khz;
  row.a_perp_khz = s.a_perp_khz;
  row.f_sync1_aperp0 = r1.report.f_avg;
  row.f_sync1_aperp = r1p.report.f_avg;
  row.f_sync2_aperp = r2.report.f_avg;
  row.tg1_us = r1.t_g * 1e6;
  row.tg2_us = r2.t_g * 1e6;
  row.leakage_max = std::max({r1.report.leakage, r1p.report.leakage, r2.report.leakage});
  row.residual_max = std::max({r1.convergence.residual, r1p.convergence.residual, r2.convergence.residual});
  row.ref = s;
  return row;
}

std::vector<TableRow> run_table(const std::vector<TableSpec>& rows, const IntegratorSpec& spec, unsigned workers) {
  return parallel_map<TableRow>(rows.size(), [&](size_t i) { return run_table_row(rows[i], spec); }, workers);
}

// ---------------------------------------------------------------------------
// Fig. 2

double fig2_fidelity(double a_par, double b1, int n_pulses) {
  DdrfSequence seq;
  seq.n_pulses = n_pulses;
  seq.b1 = b1;
  seq.tau = kPi / (2.0 * n_pulses * b1);
  seq.phi_tau = a_par * seq.tau;
  const Propagator v = assemble_ddrf(seq, a_par, RwaModel::offres);
  const auto corr = CnotCorrection::for_crot(kPi / 2, n_pulses * a_par * seq.tau);
  return corrected_cnot_fidelity(v, corr).f_avg;
}

double sync_design_fidelity(double a_par, int n, int m, int n_pulses) {
  const double b1 = b1_sync(a_par, n, m, n_pulses);
  const double tau = tau_sync(a_par, b1, m);
  if (n_pulses == 1) {
    const Propagator v = single_pulse_rwa(2.0 * tau, a_par, b1, 0.0);
    return corrected_cnot_fidelity(v, CnotCorrection::for_controlled_flip(n, m)).f_avg;
  }
  DdrfSequence seq;
  seq.n_pulses = n_pulses;
  seq.tau = tau;
  seq.b1 = b1;
  seq.phi_tau = 0.0;
  const Propagator v = assemble_ddrf(seq, a_par, RwaModel::offres);
  return corrected_cnot_fidelity(v, CnotCorrection::for_crot((2.0 * n + 1) * kPi / 2)).f_avg;
}

std::vector<Fig2Point> run_fig2(const Fig2Options& o, unsigned workers) {
  if (o.points < 2) throw DomainError("fig2 needs >= 2 points");
  if (!(o.b1_min_khz > 0) || !(o.b1_max_khz > o.b1_min_khz)) throw DomainError("fig2 needs 0 < b1_min < b1_max");
  const size_t per = static_cast<size_t>(o.points);
  const double l0 = std::log10(o.b1_min_khz), l1 = std::log10(o.b1_max_khz);
  return parallel_map<Fig2Point>(
      o.a_par_khz.size() * per,
      [&](size_t i) {
        const double a_khz = o.a_par_khz[i / per];
        const double b_khz = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i % per) / (per - 1));
        return Fig2Point{a_khz, b_khz, fig2_fidelity(from_hz(a_khz * 1e3), from_hz(b_khz * 1e3), o.n_pulses)};
      },
      workers);
}

std::vector<Fig2SyncPoint> run_fig2_sync(const Fig2Options& o) {
  std::vector<Fig2SyncPoint> out;
  for (double a_khz : o.a_par_khz)
    for (int np = 2; np <= o.sync_n_pulses_max; np += 2)
      for (int m = 1; m <= o.sync_m_max; ++m)
        for (int n = 0; n <= o.sync_n_max; ++n) {
          if (!admissible(n, m, np)) continue;
          const double a = from_hz(a_khz * 1e3);
          const double b_khz = to_hz(b1_sync(a, n, m, np)) / 1e3;
          if (b_khz < o.b1_min_khz || b_khz > o.b1_max_khz) continue;
          out.push_back({a_khz, n, m, np, b_khz, sync_design_fidelity(a, n, m, np)});
        }
  std::sort(out.begin(), out.end(), [](const Fig2SyncPoint& x, const Fig2SyncPoint& y) {
    return std::tie(x.a_par_khz, x.b1_khz, x.n_pulses, x.m, x.n) < std::tie(y.a_par_khz, y.b1_khz, y.n_pulses, y.m, y.n);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Fig. 3

std::vector<Fig3Point> run_fig3(const Fig3Options& o, double gamma_n) {
  std::vector<int> counts = o.bounds.n_pulses;
  if (o.bounds.include_single_pulse) counts.push_back(1);
  std::vector<Fig3Point> out;
  for (double a_khz : o.a_par_khz) {
    const double a = from_hz(a_khz * 1e3);
    for (int np : counts)
      for (int m = 1; m <= o.bounds.m_max; ++m)
        for (int n = 0; n <= o.bounds.n_max; ++n) {
          if (!admissible(n, m, np, o.parity)) continue;
          const SyncParams p = make_sync_params(a, n, m, np, 1, gamma_n);
          out.push_back({a_khz, n, m, np, p.t_g * 1e6, to_hz(p.b1_sync) / 1e3, p.bz_sync * 1e4});
        }
  }
  std::sort(out.begin(), out.end(), [](const Fig3Point& x, const Fig3Point& y) {
    return std::tie(x.a_par_khz, x.t_g_us, x.n_pulses, x.m, x.n) < std::tie(y.a_par_khz, y.t_g_us, y.n_pulses, y.m, y.n);
  });
  return out;
}

// ---------------------------------------------------------------------------
// design / simulate

static ParityRule parity_from_string(const std::string& s) {
  if (s == "physical") return ParityRule::physical;
  if (s == "legacy") return ParityRule::legacy;
  if (s == "none") return ParityRule::none;
  throw DomainError("unknown parity rule: " + s);
}

DesignRequest design_request_from_json(const nlohmann::json& j) {
  DesignRequest r;
  if (j.contains("constants")) {
    nlohmann::json c{{"constants", j.at("constants")}, {"b_z_tesla", 0.0}};
    r.constants = config_from_json(c).constants;
  }
  r.a_par = from_hz(j.at("a_par_over_2pi_hz").get<double>());
  r.a_perp = from_hz(j.value("a_perp_over_2pi_hz", 0.0));
  r.omega_l = from_hz(j.value("omega_l_over_2pi_hz", 0.0));
  if (j.contains("max_b1_over_2pi_hz")) r.constraints.max_b1 = from_hz(j.at("max_b1_over_2pi_hz").get<double>());
  if (j.contains("max_bz_gauss")) r.constraints.max_bz = j.at("max_bz_gauss").get<double>() * 1e-4;
  if (j.contains("parity")) r.constraints.parity = parity_from_string(j.at("parity").get<std::string>());
  auto& b = r.constraints.bounds;
  b.n_max = j.value("n_max", b.n_max);
  b.m_max = j.value("m_max", b.m_max);
  b.l_max = j.value("l_max", b.l_max);
  if (j.contains("n_pulses")) b.n_pulses = j.at("n_pulses").get<std::vector<int>>();
  b.include_single_pulse = j.value("include_single_pulse", b.include_single_pulse);
  r.detuned_n = j.value("detuned_n", 0);
  r.detuned_m = j.value("detuned_m", 1);
  return r;
}

nlohmann::json cmd_design(const DesignRequest& r) {
  const SyncParams p = fastest_gate(r.a_par, r.constraints, r.constants.gamma_n);
  nlohmann::json out{{"schema_version", 1}, {"sync", sync_report(p, r.a_par)}};

  // the sec. IV text quotes (n, m, N) = (7, 1, 2) for the fastest gate; record whether it is even real
  nlohmann::json notes = nlohmann::json::array();
  try {
    b1_sync(r.a_par, 7, 1, 2);
    notes.push_back("quoted tuple (n=7, m=1, N=2) is inside the Eq. (26) domain");
  } catch (const DomainError& e) {
    notes.push_back(std::string("quoted tuple (n=7, m=1, N=2) rejected: ") + e.what());
  }
  out["notes"] = notes;

  if (r.omega_l != 0.0) {
    const auto cfg = SpinRegisterConfig::from_larmor(r.omega_l, {r.a_par, r.a_perp}, r.constants);
    out["regime"] = regime_to_json(regime_report(cfg, p.b1_sync));
    if (r.a_perp > 0) {
      const DetunedGate g = detuned_gate_params(r.a_par, r.a_perp, r.omega_l, r.detuned_n, r.detuned_m);
      out["detuned"] = detuned_to_json(g);
      out["detuned_regime"] = regime_to_json(regime_report(cfg, g.omega_drive_strength));
    }
  }
  return out;
}

IntegratorSpec integrator_from_json(const nlohmann::json& j) {
  IntegratorSpec s;
  s.steps_per_drive_period = j.value("steps_per_drive_period", s.steps_per_drive_period);
  s.tol = j.value("tol", s.tol);
  s.max_refinements = j.value("max_refinements", s.max_refinements);
  s.validate();
  return s;
}

static DdrfSequence ddrf_from_json(const nlohmann::json& j) {
  DdrfSequence s;
  s.n_pulses = j.at("n_pulses").get<int>();
  s.tau = j.at("tau_s").get<double>();
  s.b1 = from_hz(j.at("b1_over_2pi_hz").get<double>());
  s.omega = from_hz(j.at("omega_over_2pi_hz").get<double>());
  s.varphi = j.value("varphi_rad", 0.0);
  s.phi_tau = j.value("phi_tau_rad", 0.0);
  s.l_larmor = j.value("l_larmor", 0);
  return s;
}

nlohmann::json cmd_simulate(const nlohmann::json& j) {
  const SpinRegisterConfig cfg = config_from_json(j.at("register"));
  std::vector<PulseEvent> sched;
  if (j.contains("schedule")) {
    sched = schedule_from_json(j.at("schedule"));
  } else if (j.contains("ddrf")) {
    const DdrfSequence seq = ddrf_from_json(j.at("ddrf"));
    if (!seq.larmor_consistent(cfg.omega_l(), 1e-6))
      throw DomainError("ddrf tau violates the Larmor constraint tau = l 2pi / omega_l");
    sched = schedule_from_ddrf(seq);
  } else {
    throw DomainError("simulate needs a 'schedule' or 'ddrf' block");
  }
  const IntegratorSpec spec = j.contains("integrator") ? integrator_from_json(j.at("integrator")) : IntegratorSpec{};
  const double t = schedule_span(sched);

  const nlohmann::json fr = j.value("frame", nlohmann::json::object());
  double omega = 0.0;
  if (fr.contains("omega_over_2pi_hz")) {
    omega = from_hz(fr.at("omega_over_2pi_hz").get<double>());
  } else {
    for (const auto& e : sched)
      if (e.kind == EventKind::rf_segment) {
        omega = e.omega;
        break;
      }
  }
  const double beta = fr.value("beta_rad", 0.0);

  CnotCorrection corr;
  const nlohmann::json cj = j.value("correction", nlohmann::json{{"kind", "crot"}});
  const auto kind = cj.value("kind", std::string("crot"));
  if (kind == "crot") {
    corr = CnotCorrection::for_crot(cj.value("theta_rad", kPi / 2), cj.value("vz_rad", 0.0), cj.value("axis_phase_rad", 0.0));
  } else if (kind == "controlled_flip") {
    corr = CnotCorrection::for_controlled_flip(cj.value("n", 0), cj.value("m", 1));
  } else if (kind == "none") {
    corr = CnotCorrection{};
  } else {
    throw DomainError("unknown correction kind: " + kind);
  }

  const EvolveResult ev = evolve(sched, cfg, spec);
  const Propagator v = project_computational(to_interaction_frame(ev.propagator, cfg, omega, t, beta));
  FidelityReport rep = corrected_cnot_fidelity(v, corr, j);
  rep.corrected = kind != "none";
  nlohmann::json out = fidelity_to_json(rep);
  out["convergence"] = convergence_to_json(ev.report);
  out["t_g_s"] = t;
  out["unitarity_error"] = ev.propagator.unitarity_error();
  out["propagator_interaction_frame"] = propagator_to_json(v);
  return out;
}

// ---------------------------------------------------------------------------
// output

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fig2_csv(const std::vector<Fig2Point>& p) {
  std::ostringstream os;
  os << "a_par_khz,b1_khz,f_avg\n";
  for (const auto& x : p) os << format_double(x.a_par_khz) << ',' << format_double(x.b1_khz) << ',' << format_double(x.f_avg) << '\n';
  return os.str();
}

std::string fig2_sync_csv(const std::vector<Fig2SyncPoint>& p) {
  std::ostringstream os;
  os << "a_par_khz,n,m,N,b1_khz,f_avg\n";
  for (const auto& x : p)
    os << format_double(x.a_par_khz) << ',' << x.n << ',' << x.m << ',' << x.n_pulses << ',' << format_double(x.b1_khz)
       << ',' << format_double(x.f_avg) << '\n';
  return os.str();
}

std::string fig3_csv(const std::vector<Fig3Point>& p) {
  std::ostringstream os;
  os << "a_par_khz,n,m,N,t_g_us,b1_khz,bz_gauss_min\n";
  for (const auto& x : p)
    os << format_double(x.a_par_khz) << ',' << x.n << ',' << x.m << ',' << x.n_pulses << ',' << format_double(x.t_g_us)
       << ',' << format_double(x.b1_khz) << ',' << format_double(x.bz_gauss_min) << '\n';
  return os.str();
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "a_par_khz,omega_l_khz,a_perp_khz,f_sync1_aperp0,f_sync1_aperp,f_sync2_aperp,tg1_us,tg2_us,"
        "ref_f_sync1_aperp0,ref_f_sync1_aperp,ref_f_sync2_aperp,ref_tg1_us,ref_tg2_us,"
        "dev_f_sync1_aperp0,dev_f_sync1_aperp,dev_f_sync2_aperp,leakage_max,residual_max\n";
  for (const auto& r : rows) {
    const double v[] = {r.a_par_khz, r.omega_l_khz, r.a_perp_khz, r.f_sync1_aperp0, r.f_sync1_aperp, r.f_sync2_aperp,
                        r.tg1_us, r.tg2_us, r.ref.ref_f1, r.ref.ref_f1_aperp, r.ref.ref_f2,
                        r.ref.ref_tg1_us, r.ref.ref_tg2_us,
                        std::abs(r.f_sync1_aperp0 - r.ref.ref_f1), std::abs(r.f_sync1_aperp - r.ref.ref_f1_aperp),
                        std::abs(r.f_sync2_aperp - r.ref.ref_f2), r.leakage_max, r.residual_max};
    for (size_t i = 0; i < std::size(v); ++i) os << (i ? "," : "") << format_double(v[i]);
    os << '\n';
  }
  return os.str();
}

nlohmann::json fig2_json(const std::vector<Fig2Point>& p, const std::vector<Fig2SyncPoint>& s) {
  nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
  for (const auto& x : p) a.push_back({{"a_par_khz", x.a_par_khz}, {"b1_khz", x.b1_khz}, {"f_avg", x.f_avg}});
  for (const auto& x : s)
    b.push_back({{"a_par_khz", x.a_par_khz}, {"n", x.n}, {"m", x.m}, {"N", x.n_pulses}, {"b1_khz", x.b1_khz}, {"f_avg", x.f_avg}});
  return {{"schema_version", 1}, {"curve", a}, {"sync_points", b}};
}

nlohmann::json fig3_json(const std::vector<Fig3Point>& p) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : p)
    a.push_back({{"a_par_khz", x.a_par_khz}, {"n", x.n}, {"m", x.m}, {"N", x.n_pulses}, {"t_g_us", x.t_g_us},
                 {"b1_khz", x.b1_khz}, {"bz_gauss_min", x.bz_gauss_min}});
  return {{"schema_version", 1}, {"points", a}};
}

nlohmann::json table_json(const std::vector<TableRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows)
    a.push_back({{"a_par_khz", r.a_par_khz},
                 {"omega_l_khz", r.omega_l_khz},
                 {"a_perp_khz", r.a_perp_khz},
                 {"f_sync1_aperp0", r.f_sync1_aperp0},
                 {"f_sync1_aperp", r.f_sync1_aperp},
                 {"f_sync2_aperp", r.f_sync2_aperp},
                 {"tg1_us", r.tg1_us},
                 {"tg2_us", r.tg2_us},
                 {"leakage_max", r.leakage_max},
                 {"residual_max", r.residual_max},
                 {"reference",
                  {{"f_sync1_aperp0", r.ref.ref_f1},
                   {"f_sync1_aperp", r.ref.ref_f1_aperp},
                   {"f_sync2_aperp", r.ref.ref_f2},
                   {"tg1_us", r.ref.ref_tg1_us},
                   {"tg2_us", r.ref.ref_tg2_us}}}});
  return {{"schema_version", 1}, {"rows", a}};
}

// ---------------------------------------------------------------------------
// minimal static SVG

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool log_x, bool log_y) {
  const double W = 720, H = 480, L = 80, R = 160, T = 40, B = 60;
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if ((log_x && s.x[i] <= 0) || (log_y && s.y[i] <= 0)) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (x0 > x1) x0 = 0, x1 = 1;
  if (y0 > y1) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4, fy = y0 + (y1 - y0) * k / 4;
    const double vx = log_x ? std::pow(10.0, fx) : fx, vy = log_y ? std::pow(10.0, fy) : fy;
    os << "<text x=\"" << px(vx) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << format_double(std::round(vx * 1e4) / 1e4) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(vy) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << format_double(std::round(vy * 1e5) / 1e5) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
  for (size_t s = 0; s < series.size(); ++s) {
    const char* c = colors[s % std::size(colors)];
    const auto& ser = series[s];
    if (ser.line) {
      os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
      for (size_t i = 0; i < ser.x.size(); ++i) os << format_double(px(ser.x[i])) << ',' << format_double(py(ser.y[i])) << ' ';
      os << "\"/>\n";
    } else {
      for (size_t i = 0; i < ser.x.size(); ++i)
        os << "<circle cx=\"" << format_double(px(ser.x[i])) << "\" cy=\"" << format_double(py(ser.y[i]))
           << "\" r=\"2.5\" fill=\"" << c << "\"/>\n";
    }
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (s + 1) << "\" font-size=\"12\" fill=\"" << c << "\">"
       << ser.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nvsync
