#pragma once

#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "nvsync/fidelity.hpp"
#include "nvsync/full_dynamics.hpp"
#include "nvsync/sync_design.hpp"

namespace nvsync {

// ---- worker pool: results land at their input index, so output order is canonical

void parallel_for(size_t n, const std::function<void(size_t)>& body, unsigned workers = 0);

template <class T>
std::vector<T> parallel_map(size_t n, const std::function<T(size_t)>& f, unsigned workers = 0) {
  std::vector<T> out(n);
  parallel_for(n, [&](size_t i) { out[i] = f(i); }, workers);
  return out;
}

// ---- tables

struct TableSpec {
  double a_par_khz, omega_l_khz, a_perp_khz;
  // printed values
  double ref_f1, ref_f1_aperp, ref_f2, ref_tg1_us, ref_tg2_us;
};

struct TableRow {
  double a_par_khz = 0, omega_l_khz = 0, a_perp_khz = 0;
  double f_sync1_aperp0 = 0, f_sync1_aperp = 0, f_sync2_aperp = 0;
  double tg1_us = 0, tg2_us = 0;
  double leakage_max = 0;
  double residual_max = 0;  // integrator convergence
  TableSpec ref{};
};

std::vector<TableSpec> table1_spec();
std::vector<TableSpec> table2_spec();

struct GateRun {
  FidelityReport report;
  double t_g = 0;
  ConvergenceReport convergence;
  double unitarity = 0;  // of the lab propagator
};

// sec. IV single pulse: n = 0, m = 1, B1 = A/sqrt(3), omega = omega_l - A_par, phi = 0
GateRun run_sync1(double a_par, double omega_l, double a_perp, const IntegratorSpec& spec = {});
// sec. IV B detuned single pulse, tilted frame
GateRun run_sync2(double a_par, double omega_l, double a_perp, const IntegratorSpec& spec = {}, int n = 0,
                  int m = 1);

TableRow run_table_row(const TableSpec& s, const IntegratorSpec& spec = {});
std::vector<TableRow> run_table(const std::vector<TableSpec>& rows, const IntegratorSpec& spec = {},
                                unsigned workers = 0);

// ---- Fig. 2

struct Fig2Options {
  std::vector<double> a_par_khz{25.0, 200.0, 400.0};
  double b1_min_khz = 0.1;
  double b1_max_khz = 2000.0;
  int points = 241;  // log-spaced
  int n_pulses = 2;
  int sync_n_max = 10, sync_m_max = 10, sync_n_pulses_max = 32;
};

struct Fig2Point {
  double a_par_khz, b1_khz, f_avg;
};

struct Fig2SyncPoint {
  double a_par_khz;
  int n, m, n_pulses;
  double b1_khz, f_avg;
};

// weak-limit DDrf design (NB1tau = pi/2, phi_tau = A tau) evaluated with the off-resonant RWA model
double fig2_fidelity(double a_par, double b1, int n_pulses);
// synchronized design (Eqs. 23/25/26), phi_tau = 0, offres model
double sync_design_fidelity(double a_par, int n, int m, int n_pulses);

std::vector<Fig2Point> run_fig2(const Fig2Options& o, unsigned workers = 0);
std::vector<Fig2SyncPoint> run_fig2_sync(const Fig2Options& o);

// ---- Fig. 3

struct Fig3Options {
  std::vector<double> a_par_khz{25.0, 200.0, 400.0};
  SearchBounds bounds{};
  ParityRule parity = ParityRule::physical;
};

struct Fig3Point {
  double a_par_khz;
  int n, m, n_pulses;
  double t_g_us, b1_khz, bz_gauss_min;
};

std::vector<Fig3Point> run_fig3(const Fig3Options& o, double gamma_n = PhysicalConstants{}.gamma_n);

// ---- design / simulate

struct DesignRequest {
  double a_par = 0, a_perp = 0, omega_l = 0;  // rad/s
  SyncConstraints constraints{};
  PhysicalConstants constants{};
  int detuned_n = 0, detuned_m = 1;
};

// throws InfeasibleError when nothing is admissible
nlohmann::json cmd_design(const DesignRequest& r);
DesignRequest design_request_from_json(const nlohmann::json& j);

// {"register": cfg, "schedule": {...} | "ddrf": {...}, "frame": {...}, "correction": {...}, "integrator": {...}}
nlohmann::json cmd_simulate(const nlohmann::json& j);

IntegratorSpec integrator_from_json(const nlohmann::json& j);

// ---- output

std::string format_double(double v);
std::string fig2_csv(const std::vector<Fig2Point>& p);
std::string fig2_sync_csv(const std::vector<Fig2SyncPoint>& p);
std::string fig3_csv(const std::vector<Fig3Point>& p);
std::string table_csv(const std::vector<TableRow>& rows);
nlohmann::json fig2_json(const std::vector<Fig2Point>& p, const std::vector<Fig2SyncPoint>& s);
nlohmann::json fig3_json(const std::vector<Fig3Point>& p);
nlohmann::json table_json(const std::vector<TableRow>& rows);

struct SvgSeries {
  std::string name;
  std::vector<double> x, y;
  bool line = true;
};

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool log_x, bool log_y);

}  // namespace nvsync
