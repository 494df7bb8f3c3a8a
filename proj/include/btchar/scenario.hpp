#pragma once

// Scenario parsing and deterministic report emission, shared by the CLI and
// the acceptance driver.  All reports are built fully in memory and only
// then written, so failures never leave partial files behind.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "btchar/charformula.hpp"

namespace btchar {

using njson = nlohmann::json;

// ---------------------------------------------------------------------------
// scenario schema

struct scenario {
  i64 p = 2;
  int precision = 12;
  int N = 2;
  bool has_spec = false;
  level_zero_spec spec;
  struct gamma_entry {
    std::string label;
    qmat g;
  };
  std::vector<gamma_entry> gammas;
  std::string command;
  int radius = 4;
  std::vector<int> radii;
  i64 budget = 2000000;
  std::string format = "json";
};

namespace scenario_detail {

inline void require_keys(const njson& obj, const std::string& where,
                         const std::set<std::string>& allowed,
                         const std::set<std::string>& required) {
  if (!obj.is_object()) throw schema_error(where + ": object expected");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw schema_error(where + ": unknown key '" + it.key() + "'");
  for (const auto& k : required)
    if (!obj.count(k)) throw schema_error(where + ": missing key '" + k + "'");
}

inline i64 get_int(const njson& obj, const std::string& where,
                   const std::string& key, std::optional<i64> dflt = {}) {
  if (!obj.count(key)) {
    if (dflt) return *dflt;
    throw schema_error(where + ": missing key '" + key + "'");
  }
  if (!obj[key].is_number_integer())
    throw schema_error(where + "." + key + ": integer expected");
  return obj[key].get<i64>();
}

}  // namespace scenario_detail

inline scenario parse_scenario(const njson& doc) {
  using scenario_detail::get_int;
  using scenario_detail::require_keys;
  scenario sc;
  require_keys(doc, "scenario", {"schema", "field", "spec", "gammas", "run"},
               {"schema", "field", "run"});
  if (!doc["schema"].is_string() ||
      doc["schema"].get<std::string>() != "btchar-scenario/1")
    throw schema_error("scenario.schema: expected 'btchar-scenario/1'");

  const njson& field = doc["field"];
  require_keys(field, "field", {"p", "precision"}, {"p"});
  sc.p = get_int(field, "field", "p");
  sc.precision = int(get_int(field, "field", "precision", 12));
  if (!is_prime(sc.p)) throw schema_error("field.p: prime expected");
  if (sc.precision < 2 || sc.precision > 64)
    throw schema_error("field.precision: out of range");

  if (doc.count("spec")) {
    const njson& sp = doc["spec"];
    require_keys(sp, "spec",
                 {"N", "e", "rho", "cusp_row", "xi_pow", "twist_pow"}, {"e"});
    sc.N = int(get_int(sp, "spec", "N", 2));
    if (sc.N != 2) throw schema_error("spec.N: only N = 2 is supported");
    sc.spec.p = sc.p;
    sc.spec.e = int(get_int(sp, "spec", "e"));
    sc.spec.rho = get_int(sp, "spec", "rho", 0);
    sc.spec.cusp_row = int(get_int(sp, "spec", "cusp_row", 0));
    sc.spec.xi_pow = get_int(sp, "spec", "xi_pow", 0);
    sc.spec.twist_pow = get_int(sp, "spec", "twist_pow", 0);
    sc.has_spec = true;
  }

  if (doc.count("gammas")) {
    if (!doc["gammas"].is_array())
      throw schema_error("gammas: array expected");
    for (const njson& ge : doc["gammas"]) {
      require_keys(ge, "gammas[]", {"label", "num", "den"}, {"label", "num"});
      scenario::gamma_entry e;
      if (!ge["label"].is_string())
        throw schema_error("gammas[].label: string expected");
      e.label = ge["label"].get<std::string>();
      i64 den = get_int(ge, "gammas[]", "den", 1);
      if (den <= 0) throw schema_error("gammas[].den: positive expected");
      const njson& num = ge["num"];
      if (!num.is_array() || num.size() != 2)
        throw schema_error("gammas[].num: 2x2 integer matrix expected");
      e.g = qmat(2);
      for (int i = 0; i < 2; ++i) {
        if (!num[i].is_array() || num[i].size() != 2)
          throw schema_error("gammas[].num: 2x2 integer matrix expected");
        for (int j = 0; j < 2; ++j) {
          if (!num[i][j].is_number_integer())
            throw schema_error("gammas[].num: integer entries expected");
          e.g(i, j) = rat(num[i][j].get<i64>(), den);
        }
      }
      sc.gammas.push_back(std::move(e));
    }
  }

  const njson& run = doc["run"];
  require_keys(run, "run",
               {"command", "radius", "radii", "budget", "format"},
               {"command"});
  if (!run["command"].is_string())
    throw schema_error("run.command: string expected");
  sc.command = run["command"].get<std::string>();
  static const std::set<std::string> cmds = {
      "building-ball", "elliptic-analyze", "fgl-table",
      "coeffsys-build", "char-eval",       "ep-check"};
  if (!cmds.count(sc.command))
    throw schema_error("run.command: unknown command '" + sc.command + "'");
  sc.radius = int(get_int(run, "run", "radius", 4));
  if (sc.radius < 1 || sc.radius > 8)
    throw schema_error("run.radius: out of range (1..8)");
  if (run.count("radii")) {
    if (!run["radii"].is_array()) throw schema_error("run.radii: array");
    for (const njson& r : run["radii"]) {
      if (!r.is_number_integer()) throw schema_error("run.radii: integers");
      sc.radii.push_back(int(r.get<i64>()));
    }
  }
  if (sc.radii.empty())
    for (int r = 2; r <= sc.radius; ++r) sc.radii.push_back(r);
  sc.budget = get_int(run, "run", "budget", 2000000);
  if (run.count("format")) {
    if (!run["format"].is_string()) throw schema_error("run.format: string");
    sc.format = run["format"].get<std::string>();
    if (sc.format != "json" && sc.format != "csv")
      throw schema_error("run.format: 'json' or 'csv' expected");
  }
  return sc;
}

inline scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot read scenario file: " + path);
  njson doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw schema_error(std::string("scenario parse error: ") + e.what());
  }
  return parse_scenario(doc);
}

// ---------------------------------------------------------------------------
// value serialization

inline std::string decimal_render(const cyc_ring& R, const cyc_ring::val& v) {
  double re = 0, im = 0;
  const double pi = 3.14159265358979323846;
  for (int j = 0; j < R.degree(); ++j) {
    if (v[j] == 0) continue;
    re += double(v[j]) * std::cos(2 * pi * j / double(R.m()));
    im += double(v[j]) * std::sin(2 * pi * j / double(R.m()));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f%+.6fi", re + 0.0, im + 0.0);
  return buf;
}

// comma-free coefficient rendering for CSV cells
inline std::string csv_coeffs(const cyc_ring::val& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ";";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

inline njson cyc_json(const cyc_ring& R, const cyc_ring::val& v) {
  njson out;
  out["coeffs"] = v;
  out["dec"] = decimal_render(R, v);
  return out;
}

inline njson character_value_json(const cyc_ring& R,
                                  const character_value& cv) {
  njson out;
  out["value"] = cyc_json(R, cv.value);
  out["m"] = cv.m;
  out["route"] = cv.route;
  out["radius"] = cv.radius;
  out["certified"] = cv.certified;
  out["gate_passed"] = cv.gate_passed;
  out["extension"] = cv.extension;
  return out;
}

// ---------------------------------------------------------------------------
// report builders (return complete report strings)

inline std::string report_building_ball(i64 p, int n, int radius, i64 budget,
                                        const std::string& format) {
  auto P = enumerate_ball(p, n, radius, std::size_t(budget));
  int edges = 0, tris = 0;
  for (const auto& s : P.simplices)
    (s.size() == 2 ? edges : tris) += 1;
  std::vector<i64> by_depth(radius + 1, 0);
  for (int d : P.depth) by_depth[d] += 1;
  if (format == "csv") {
    std::ostringstream os;
    os << "p,n,radius,vertices,edges,triangles\n"
       << p << "," << n << "," << radius << "," << P.verts.size() << ","
       << edges << "," << tris << "\n";
    return os.str();
  }
  njson out;
  out["schema"] = "btchar-report/1";
  out["command"] = "building-ball";
  out["p"] = p;
  out["n"] = n;
  out["radius"] = radius;
  out["vertices"] = P.verts.size();
  out["edges"] = edges;
  out["triangles"] = tris;
  out["by_depth"] = by_depth;
  return out.dump(2) + "\n";
}

inline std::string report_elliptic_analyze(const scenario& sc) {
  njson results = njson::array();
  std::ostringstream csv;
  csv << "gamma,e,f,v_E,minimal\n";
  for (const auto& ge : sc.gammas) {
    auto info = analyze_elliptic(ge.g, sc.p, sc.precision);
    njson r;
    r["gamma"] = ge.label;
    r["e"] = info.ef.e;
    r["f"] = info.ef.f;
    r["v_E"] = info.v_E;
    r["minimal"] = info.minimal;
    std::vector<std::string> cp;
    for (const rat& c : info.charpoly) cp.push_back(c.str());
    r["charpoly"] = cp;
    results.push_back(r);
    csv << ge.label << "," << info.ef.e << "," << info.ef.f << ","
        << info.v_E << "," << (info.minimal ? 1 : 0) << "\n";
  }
  if (sc.format == "csv") return csv.str();
  njson out;
  out["schema"] = "btchar-report/1";
  out["command"] = "elliptic-analyze";
  out["p"] = sc.p;
  out["precision"] = sc.precision;
  out["results"] = results;
  return out.dump(2) + "\n";
}

inline std::string fgl_table_report_string(int n, i64 p, int f) {
  auto T = character_table(std::make_shared<fgl_group>(n, p, f));
  const cyc_ring& R = *T.ring;
  njson out;
  out["schema"] = "btchar-report/1";
  out["command"] = "fgl-table";
  out["group"] = {{"n", n},
                  {"p", p},
                  {"f", f},
                  {"q", T.G->q()},
                  {"order", T.G->order()},
                  {"classes", T.G->num_classes()}};
  out["ring_m"] = R.m();
  njson classes = njson::array();
  for (int c = 0; c < T.G->num_classes(); ++c)
    classes.push_back(
        {{"order", T.G->class_order(c)}, {"size", T.G->class_size(c)}});
  out["classes"] = classes;
  out["degrees"] = T.degrees;
  njson rows = njson::array();
  for (int i = 0; i < T.num_irr(); ++i) {
    njson row = njson::array();
    for (int k = 0; k < T.G->num_classes(); ++k)
      row.push_back(cyc_json(R, T.chars[i][k]));
    rows.push_back(row);
  }
  out["table"] = rows;
  return out.dump(2) + "\n";
}

// cached variant: byte-identical output on warm cache
inline std::string report_fgl_table(int n, i64 p, int f,
                                    const std::string& cache_dir) {
  std::string cache_path;
  if (!cache_dir.empty()) {
    cache_path = cache_dir + "/fgl_" + std::to_string(n) + "_" +
                 std::to_string(p) + "_" + std::to_string(f) + ".json";
    std::ifstream in(cache_path);
    if (in) {
      std::ostringstream buf;
      buf << in.rdbuf();
      return buf.str();
    }
  }
  std::string rep = fgl_table_report_string(n, p, f);
  if (!cache_path.empty()) {
    std::ofstream outf(cache_path);
    if (outf) outf << rep;
  }
  return rep;
}

inline njson spec_json(const level_zero_spec& s) {
  return {{"p", s.p},         {"e", s.e},
          {"rho", s.rho},     {"cusp_row", s.cusp_row},
          {"xi_pow", s.xi_pow}, {"twist_pow", s.twist_pow}};
}

inline std::string report_coeffsys(const scenario& sc,
                                   std::shared_ptr<fgl_table> table = nullptr) {
  if (!sc.has_spec) throw schema_error("coeffsys-build: spec block required");
  lz_context ctx(sc.spec, std::move(table));
  auto P = enumerate_ball(sc.p, 2, sc.radius, std::size_t(sc.budget));
  auto cs = build_coefficient_system(ctx, P);
  auto cc = chain_complex(cs);
  auto ap = apartment_isotypic_check(ctx, cs, P);
  njson out;
  out["schema"] = "btchar-report/1";
  out["command"] = "coeffsys-build";
  out["spec"] = spec_json(ctx.spec);
  out["radius"] = sc.radius;
  out["vertex_dim"] = cs.vertex_dim;
  out["edge_dim"] = cs.edge_dim;
  out["vertices"] = P.verts.size();
  out["edges"] = cs.edges.size();
  out["complex"] = {{"dim0", cc.dim0},
                    {"dim1", cc.dim1},
                    {"d2_zero", cc.d2_zero},
                    {"h1_vanishes", complex_h1_vanishes(cc)}};
  out["apartment"] = {{"cells0", ap.apartment_cells0},
                      {"cells1", ap.apartment_cells1},
                      {"iso_dim0", ap.iso_dim0},
                      {"iso_dim1", ap.iso_dim1},
                      {"dims_match", ap.dims_match},
                      {"h1_vanishes", ap.h1_vanishes},
                      {"boundary_contamination", ap.boundary_contamination}};
  return out.dump(2) + "\n";
}

inline std::string report_ep_check(const scenario& sc,
                                   std::shared_ptr<fgl_table> table = nullptr) {
  if (!sc.has_spec) throw schema_error("ep-check: spec block required");
  lz_context ctx(sc.spec, std::move(table));
  auto ep = ep_function(ctx);
  auto P = enumerate_ball(sc.p, 2, sc.radius, std::size_t(sc.budget));
  i64 edges = 0;
  for (const auto& s : P.simplices)
    if (s.size() == 2) ++edges;
  njson terms = njson::array();
  rat signed_dim(0);
  for (const auto& t : ep.terms) {
    terms.push_back({{"degree", t.degree},
                     {"stabilizer", t.stabilizer},
                     {"weight", t.weight.str()},
                     {"dim", t.dim}});
    rat c = t.weight * rat(t.dim);
    signed_dim = t.degree % 2 == 0 ? signed_dim + c : signed_dim - c;
  }
  njson out;
  out["schema"] = "btchar-report/1";
  out["command"] = "ep-check";
  out["spec"] = spec_json(ctx.spec);
  out["terms"] = terms;
  out["signed_weighted_dim"] = signed_dim.str();
  out["ball"] = {{"radius", sc.radius},
                 {"vertices", P.verts.size()},
                 {"edges", edges},
                 {"euler_characteristic", i64(P.verts.size()) - edges},
                 {"euler_ok", i64(P.verts.size()) - edges == 1}};
  return out.dump(2) + "\n";
}

inline std::string report_char_eval(const scenario& sc,
                                    std::shared_ptr<fgl_table> table = nullptr) {
  if (!sc.has_spec) throw schema_error("char-eval: spec block required");
  if (sc.gammas.empty()) throw schema_error("char-eval: gammas required");
  lz_context ctx(sc.spec, std::move(table));
  const cyc_ring& R = ctx.ring();
  auto P = enumerate_ball(sc.p, 2, sc.radius, std::size_t(sc.budget));
  auto ep = ep_function(ctx);
  njson results = njson::array();
  std::ostringstream csv;
  csv << "gamma,route,value,dec,m,radius,certified,gate_passed,extension\n";
  for (const auto& ge : sc.gammas) {
    njson res;
    res["gamma"] = ge.label;
    njson routes = njson::array();
    std::vector<character_value> vals;
    auto push = [&](const character_value& cv) {
      routes.push_back(character_value_json(R, cv));
      vals.push_back(cv);
      csv << ge.label << "," << cv.route << "," << csv_coeffs(cv.value) << ","
          << decimal_render(R, cv.value) << "," << cv.m << "," << cv.radius
          << "," << (cv.certified ? 1 : 0) << "," << (cv.gate_passed ? 1 : 0)
          << "," << cv.extension << "\n";
    };
    auto info = analyze_elliptic(ge.g, sc.p, sc.precision);
    res["minimal"] = info.minimal;
    if (info.minimal)
      push(char_simple(ctx, ge.g, sc.precision));
    else
      routes.push_back({{"route", "simple"}, {"skipped", "gamma not minimal"}});
    push(char_fixed_sum(ctx, ge.g, P, sc.precision));
    push(char_orbital(ctx, ep, ge.g, P, sc.radii, sc.precision));
    if (ctx.spec.e == 1)
      push(char_supercuspidal_oracle(ctx, ge.g, P, sc.precision));
    bool agree = true;
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (!(vals[i].value == vals[0].value)) agree = false;
    if (!agree)
      throw oracle_disagreement("char-eval: routes disagree for gamma '" +
                                ge.label + "'");
    res["routes"] = routes;
    res["agree"] = agree;
    results.push_back(res);
  }
  if (sc.format == "csv") return csv.str();
  njson out;
  out["schema"] = "btchar-report/1";
  out["command"] = "char-eval";
  out["spec"] = spec_json(ctx.spec);
  out["ring_m"] = ctx.m();
  out["radius"] = sc.radius;
  out["radii"] = sc.radii;
  out["results"] = results;
  return out.dump(2) + "\n";
}

// dispatch a fully parsed scenario to its report builder
inline std::string run_scenario_report(const scenario& sc) {
  if (sc.command == "building-ball")
    return report_building_ball(sc.p, sc.N, sc.radius, sc.budget, sc.format);
  if (sc.command == "elliptic-analyze") return report_elliptic_analyze(sc);
  if (sc.command == "fgl-table") return report_fgl_table(2, sc.p, 1, "");
  if (sc.command == "coeffsys-build") return report_coeffsys(sc);
  if (sc.command == "char-eval") return report_char_eval(sc);
  if (sc.command == "ep-check") return report_ep_check(sc);
  throw schema_error("unknown command: " + sc.command);
}

}  // namespace btchar
