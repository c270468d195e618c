// nvsync: reproduce the synchronized-gate figures and tables, design gates, run simulations.
//
// NVSYNC_SEED is reserved and currently ignored; every command is deterministic.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nvsync/errors.hpp"
#include "nvsync/experiments.hpp"

using namespace nvsync;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string config;
  std::string out = ".";
  std::string format = "csv";
  unsigned workers = 0;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError("config " + path + ": " + e.what());
  }
}

fs::path write_file(const Globals& g, const std::string& name, const std::string& body) {
  fs::create_directories(g.out);
  const fs::path p = fs::path(g.out) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DomainError("cannot write " + p.string());
  f << body;
  std::cout << p.string() << '\n';
  return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- fig2

struct Fig2Cli {
  Fig2Options o;
  bool svg = true;
};

void run_fig2_cmd(const Globals& g, Fig2Cli& c) {
  const json cfg = load_config(g.config);
  c.o.a_par_khz = cfg.value("a_par_khz", c.o.a_par_khz);
  c.o.b1_min_khz = cfg.value("b1_min_khz", c.o.b1_min_khz);
  c.o.b1_max_khz = cfg.value("b1_max_khz", c.o.b1_max_khz);
  c.o.points = cfg.value("points", c.o.points);
  c.o.n_pulses = cfg.value("n_pulses", c.o.n_pulses);
  const auto pts = run_fig2(c.o, g.workers);
  const auto sync = run_fig2_sync(c.o);
  if (g.format == "json") {
    write_file(g, "fig2.json", dump(fig2_json(pts, sync)));
  } else {
    write_file(g, "fig2.csv", fig2_csv(pts));
    write_file(g, "fig2_sync.csv", fig2_sync_csv(sync));
  }
  if (!c.svg) return;
  std::vector<SvgSeries> series;
  for (double a : c.o.a_par_khz) {
    SvgSeries s{"A = " + format_double(a) + " kHz", {}, {}, true};
    for (const auto& p : pts)
      if (p.a_par_khz == a) {
        s.x.push_back(p.b1_khz);
        s.y.push_back(p.f_avg);
      }
    series.push_back(std::move(s));
  }
  SvgSeries marks{"synchronized", {}, {}, false};
  for (const auto& p : sync) {
    marks.x.push_back(p.b1_khz);
    marks.y.push_back(p.f_avg);
  }
  series.push_back(std::move(marks));
  write_file(g, "fig2.svg", svg_plot("CNOT fidelity vs drive strength", "B1/2pi (kHz)", "F_avg", series, true, false));
}

// ---- fig3

struct Fig3Cli {
  std::vector<double> a_par_khz{25.0, 200.0, 400.0};
  std::string parity = "physical";
  int n_max = 10, m_max = 10;
  bool single_pulse = false;
  bool svg = true;
};

ParityRule parity_of(const std::string& s) {
  if (s == "physical") return ParityRule::physical;
  if (s == "legacy") return ParityRule::legacy;
  if (s == "none") return ParityRule::none;
  throw DomainError("unknown parity rule " + s);
}

void run_fig3_cmd(const Globals& g, Fig3Cli& c) {
  const json cfg = load_config(g.config);
  Fig3Options o;
  o.a_par_khz = cfg.value("a_par_khz", c.a_par_khz);
  o.parity = parity_of(cfg.value("parity", c.parity));
  o.bounds.n_max = cfg.value("n_max", c.n_max);
  o.bounds.m_max = cfg.value("m_max", c.m_max);
  if (cfg.contains("n_pulses")) o.bounds.n_pulses = cfg.at("n_pulses").get<std::vector<int>>();
  o.bounds.include_single_pulse = cfg.value("include_single_pulse", c.single_pulse);
  double gamma_n = PhysicalConstants{}.gamma_n;
  if (cfg.contains("gamma_n_over_2pi_hz_per_tesla")) gamma_n = from_hz(cfg.at("gamma_n_over_2pi_hz_per_tesla").get<double>());
  const auto pts = run_fig3(o, gamma_n);
  if (g.format == "json")
    write_file(g, "fig3.json", dump(fig3_json(pts)));
  else
    write_file(g, "fig3.csv", fig3_csv(pts));
  if (!c.svg) return;
  std::vector<SvgSeries> main, inset;
  for (double a : o.a_par_khz) {
    SvgSeries s{"A = " + format_double(a) + " kHz", {}, {}, false}, b = s;
    for (const auto& p : pts)
      if (p.a_par_khz == a) {
        s.x.push_back(p.t_g_us);
        s.y.push_back(p.b1_khz);
        b.x.push_back(p.t_g_us);
        b.y.push_back(p.bz_gauss_min);
      }
    main.push_back(std::move(s));
    inset.push_back(std::move(b));
  }
  write_file(g, "fig3.svg", svg_plot("Synchronized drive strength", "t_g (us)", "B1/2pi (kHz)", main, true, true));
  write_file(g, "fig3_bz.svg", svg_plot("Minimal synchronized field", "t_g (us)", "Bz (G)", inset, true, true));
}

// ---- tables

void run_table_cmd(const Globals& g, const std::string& name, const std::vector<TableSpec>& spec) {
  const json cfg = load_config(g.config);
  const IntegratorSpec is = cfg.contains("integrator") ? integrator_from_json(cfg.at("integrator")) : IntegratorSpec{};
  const auto rows = run_table(spec, is, g.workers);
  if (g.format == "json")
    write_file(g, name + ".json", dump(table_json(rows)));
  else
    write_file(g, name + ".csv", table_csv(rows));
}

// ---- design

struct DesignCli {
  double a_par_khz = 0, a_perp_khz = 0, omega_l_khz = 0;
  double max_b1_khz = 0, max_bz_gauss = 0;
  std::string parity = "physical";
  int ratios = 0;
  double x_target = 1.0, x_tol = 0.0;
};

void run_design_cmd(const Globals& g, DesignCli& c) {
  json req = load_config(g.config);
  if (c.a_par_khz > 0) req["a_par_over_2pi_hz"] = c.a_par_khz * 1e3;
  if (c.a_perp_khz > 0) req["a_perp_over_2pi_hz"] = c.a_perp_khz * 1e3;
  if (c.omega_l_khz > 0) req["omega_l_over_2pi_hz"] = c.omega_l_khz * 1e3;
  if (c.max_b1_khz > 0) req["max_b1_over_2pi_hz"] = c.max_b1_khz * 1e3;
  if (c.max_bz_gauss > 0) req["max_bz_gauss"] = c.max_bz_gauss;
  if (c.parity != "physical") req["parity"] = c.parity;
  if (!req.contains("a_par_over_2pi_hz")) throw DomainError("design needs --a-par or a_par_over_2pi_hz in --config");
  json out = cmd_design(design_request_from_json(req));
  if (c.ratios > 0) out["bz_ratios"] = ratio_summary_to_json(enumerate_bz_ratios(c.ratios, c.x_target, c.x_tol));
  write_file(g, "design.json", dump(out));
}

// ---- simulate

void run_simulate_cmd(const Globals& g) {
  if (g.config.empty()) throw DomainError("simulate needs --config with register and schedule/ddrf blocks");
  write_file(g, "simulate.json", dump(cmd_simulate(load_config(g.config))));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronized electron-nuclear gates for NV registers"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--format", g.format, "tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads (0 = hardware concurrency)");
  app.footer("Environment: NVSYNC_SEED is reserved and unused; all commands are deterministic.");

  Fig2Cli f2;
  auto* fig2 = app.add_subcommand("fig2", "CNOT fidelity vs drive strength (RWA, DDrf)");
  fig2->add_option("--a-par", f2.o.a_par_khz, "parallel hyperfine couplings, kHz")->capture_default_str();
  fig2->add_option("--b1-min", f2.o.b1_min_khz, "kHz")->capture_default_str();
  fig2->add_option("--b1-max", f2.o.b1_max_khz, "kHz")->capture_default_str();
  fig2->add_option("--points", f2.o.points, "log-spaced points per curve")->capture_default_str();
  fig2->add_option("--pulses", f2.o.n_pulses, "DD pulse count N")->capture_default_str();
  fig2->add_flag("!--no-svg", f2.svg, "skip the SVG plot");

  Fig3Cli f3;
  auto* fig3 = app.add_subcommand("fig3", "synchronized drive strength and field vs gate time");
  fig3->add_option("--a-par", f3.a_par_khz, "kHz")->capture_default_str();
  fig3->add_option("--parity", f3.parity, "parity rule")->check(CLI::IsMember({"physical", "legacy", "none"}));
  fig3->add_option("--n-max", f3.n_max)->capture_default_str();
  fig3->add_option("--m-max", f3.m_max)->capture_default_str();
  fig3->add_flag("--single-pulse", f3.single_pulse, "include N = 1");
  fig3->add_flag("!--no-svg", f3.svg, "skip the SVG plots");

  auto* t1 = app.add_subcommand("table1", "full simulation of the Table I rows");
  auto* t2 = app.add_subcommand("table2", "full simulation of the Table II rows");

  DesignCli dc;
  auto* design = app.add_subcommand("design", "fastest synchronized gate for a register (JSON)");
  design->add_option("--a-par", dc.a_par_khz, "kHz");
  design->add_option("--a-perp", dc.a_perp_khz, "kHz");
  design->add_option("--omega-l", dc.omega_l_khz, "nuclear Larmor frequency, kHz");
  design->add_option("--max-b1", dc.max_b1_khz, "kHz");
  design->add_option("--max-bz", dc.max_bz_gauss, "G");
  design->add_option("--parity", dc.parity)->check(CLI::IsMember({"physical", "legacy", "none"}));
  design->add_option("--ratios", dc.ratios, "also enumerate two-register field ratios with integers 1..R (R <= 10)");
  design->add_option("--x-target", dc.x_target, "ratio A1/A2 to match");
  design->add_option("--x-tol", dc.x_tol, "ratio tolerance");

  auto* simulate = app.add_subcommand("simulate", "full dynamics of a schedule from --config (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (fig2->parsed()) run_fig2_cmd(g, f2);
    if (fig3->parsed()) run_fig3_cmd(g, f3);
    if (t1->parsed()) run_table_cmd(g, "table1", table1_spec());
    if (t2->parsed()) run_table_cmd(g, "table2", table2_spec());
    if (design->parsed()) run_design_cmd(g, dc);
    if (simulate->parsed()) run_simulate_cmd(g);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    std::cout << json{{"error", "infeasible"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
