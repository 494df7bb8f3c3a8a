// Command-line front end.  Every subcommand builds its complete report in
// memory before anything is written, so failed runs leave no partial files.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "btchar/scenario.hpp"

namespace {

using namespace btchar;

struct global_opts {
  std::string scenario_path;
  std::string out_path;
  std::string cache_dir;
  std::string format;
  int radius = -1;
  int precision = -1;
  i64 budget = -1;
};

void apply_overrides(scenario& sc, const global_opts& g) {
  if (g.radius >= 0) {
    sc.radius = g.radius;
    sc.radii.clear();
    for (int r = 2; r <= sc.radius; ++r) sc.radii.push_back(r);
    if (sc.radii.empty()) sc.radii.push_back(sc.radius);
  }
  if (g.precision >= 0) sc.precision = g.precision;
  if (g.budget >= 0) sc.budget = g.budget;
  if (!g.format.empty()) sc.format = g.format;
}

void emit(const std::string& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io, "cannot open output file: " + out_path);
  out << report;
  if (!out) throw error(errc::io, "write failed: " + out_path);
}

std::string effective_cache_dir(const global_opts& g) {
  if (!g.cache_dir.empty()) return g.cache_dir;
  if (const char* env = std::getenv("BTCHAR_CACHE_DIR")) return env;
  return "";
}

scenario need_scenario(const global_opts& g, const std::string& cmd) {
  if (g.scenario_path.empty())
    throw schema_error(cmd + ": --scenario is required");
  scenario sc = load_scenario(g.scenario_path);
  apply_overrides(sc, g);
  return sc;
}

// parse q = p^f with p prime, f in 1..3
std::pair<i64, int> split_prime_power(i64 q) {
  if (q < 2) throw schema_error("fgl-table: q must be a prime power");
  i64 p = 2;
  while (q % p != 0) ++p;
  i64 t = q;
  int f = 0;
  while (t % p == 0) {
    t /= p;
    ++f;
  }
  if (t != 1) throw schema_error("fgl-table: q must be a prime power");
  return {p, f};
}

int run(int argc, char** argv) {
  CLI::App app{"character formulas on the Bruhat-Tits building of GL(2)"};
  app.require_subcommand(1);
  app.fallthrough();  // let global flags appear after the subcommand name
  global_opts g;
  app.add_option("--scenario", g.scenario_path, "scenario JSON file")
      ->expected(1);
  app.add_option("--out", g.out_path, "write the report to this file");
  app.add_option("--radius", g.radius, "override run.radius");
  app.add_option("--precision", g.precision, "override field.precision");
  app.add_option("--budget", g.budget, "override run.budget");
  app.add_option("--cache-dir", g.cache_dir,
                 "cache directory (default: $BTCHAR_CACHE_DIR)");
  app.add_option("--format", g.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  i64 ball_p = 2;
  int ball_dim = 2;
  auto* ball = app.add_subcommand("building-ball", "enumerate a building ball");
  ball->add_option("--p", ball_p, "residue characteristic");
  ball->add_option("--dim", ball_dim, "N for GL(N)");

  auto* ell = app.add_subcommand("elliptic-analyze",
                                 "field invariants and minimality of gammas");
  int fgl_n = 2;
  i64 fgl_q = 2;
  auto* fgl = app.add_subcommand("fgl-table",
                                 "exact character table of GL(n, q)");
  fgl->add_option("--n", fgl_n, "matrix size");
  fgl->add_option("--q", fgl_q, "field size (prime power)");

  auto* csb = app.add_subcommand("coeffsys-build",
                                 "coefficient system and homology report");
  auto* che = app.add_subcommand("char-eval",
                                 "evaluate character values by all routes");
  auto* epc = app.add_subcommand("ep-check", "Euler-Poincare term report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string report;
  if (ball->parsed()) {
    if (!g.scenario_path.empty()) {
      scenario sc = need_scenario(g, "building-ball");
      report = report_building_ball(sc.p, sc.N, sc.radius, sc.budget,
                                    sc.format);
    } else {
      if (!is_prime(ball_p)) throw schema_error("building-ball: --p not prime");
      int radius = g.radius >= 0 ? g.radius : 2;
      i64 budget = g.budget >= 0 ? g.budget : 2000000;
      std::string fmt = g.format.empty() ? "json" : g.format;
      report = report_building_ball(ball_p, ball_dim, radius, budget, fmt);
    }
  } else if (ell->parsed()) {
    report = report_elliptic_analyze(need_scenario(g, "elliptic-analyze"));
  } else if (fgl->parsed()) {
    auto [p, f] = split_prime_power(fgl_q);
    if (fgl_n < 2 || fgl_n > 3) throw schema_error("fgl-table: n in {2, 3}");
    report = report_fgl_table(fgl_n, p, f, effective_cache_dir(g));
  } else if (csb->parsed()) {
    report = report_coeffsys(need_scenario(g, "coeffsys-build"));
  } else if (che->parsed()) {
    report = report_char_eval(need_scenario(g, "char-eval"));
  } else if (epc->parsed()) {
    report = report_ep_check(need_scenario(g, "ep-check"));
  }
  emit(report, g.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const btchar::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case btchar::errc::schema: return 2;
      case btchar::errc::budget: return 3;
      case btchar::errc::precision: return 4;
      case btchar::errc::oracle_disagreement: return 5;
      default: return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
