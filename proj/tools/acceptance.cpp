// Acceptance gate: one pass/fail line per criterion.
//
// Usage: acceptance <path-to-cli-binary> <path-to-scenarios-dir>
//
// Every criterion is evaluated independently; the process exit code is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "btchar/scenario.hpp"

namespace fs = std::filesystem;
using namespace btchar;
using clock_t_ = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, double secs,
            const std::string& detail = "") {
  std::printf("criterion %d [%s]: %s (%.1fs)%s%s\n", idx, name.c_str(),
              ok ? "PASS" : "FAIL", secs, detail.empty() ? "" : " — ",
              detail.c_str());
  if (!ok) ++g_failures;
}

template <class F>
void run_criterion(int idx, const std::string& name, double limit_secs, F f) {
  auto t0 = clock_t_::now();
  bool ok = false;
  std::string detail;
  try {
    detail = f();
    ok = true;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  double secs = std::chrono::duration<double>(clock_t_::now() - t0).count();
  if (ok && limit_secs > 0 && secs > limit_secs) {
    ok = false;
    detail = "time limit exceeded";
  }
  report(idx, name, ok, secs, detail);
}

void check(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

qmat companion2(i64 c0, i64 c1) {  // x^2 + c1 x + c0
  qmat g(2);
  g(0, 1) = rat(-c0);
  g(1, 0) = rat(1);
  g(1, 1) = rat(-c1);
  return g;
}

qmat companion3(i64 c0, i64 c1, i64 c2) {
  qmat g(3);
  g(1, 0) = rat(1);
  g(2, 1) = rat(1);
  g(0, 2) = rat(-c0);
  g(1, 2) = rat(-c1);
  g(2, 2) = rat(-c2);
  return g;
}

qmat mk2(i64 a, i64 b, i64 c, i64 d) {
  qmat g(2);
  g(0, 0) = rat(a);
  g(0, 1) = rat(b);
  g(1, 0) = rat(c);
  g(1, 1) = rat(d);
  return g;
}

int residue_class_of(const fgl_table& T, const qmat& u, i64 p) {
  fgl_group::elem el(4);
  int idx = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      rat r = u(i, j);
      check(r.is_zero() || r.val(p) >= 0, "residue: non-integral entry");
      i64 num = r.is_zero() ? 0 : mod_pos(r.n, p);
      i64 den = r.is_zero() ? 1 : invmod(mod_pos(r.d, p), p);
      el[idx++] = mulmod(num, den, p);
    }
  return T.G->class_of_elem(el);
}

// ---------------------------------------------------------------------------

std::string criterion_chains() {
  std::mt19937_64 rng(12345);
  std::vector<building_patch> patches;
  patches.push_back(enumerate_ball(2, 2, 3));
  patches.push_back(enumerate_ball(3, 2, 2));
  patches.push_back(enumerate_ball(2, 3, 2));
  int round_trips = 0, reversals = 0;
  for (int it = 0; it < 1000; ++it) {
    const building_patch& P = patches[it % patches.size()];
    const auto& simp = P.simplices[rng() % P.simplices.size()];
    // round trip through the hereditary-order side
    auto C = chain_of_simplex(P, simp);
    auto back = simplex_of_chain(P, C);
    check(back == simp, "order <-> simplex round trip failed");
    ++round_trips;
    // inclusion reversal against a random proper face
    std::vector<int> face;
    for (int v : simp)
      if (rng() % 2) face.push_back(v);
    if (face.empty() || face.size() == simp.size())
      face = {simp[rng() % simp.size()]};
    if (face.size() == simp.size()) continue;
    auto CF = chain_of_simplex(P, face);
    check(order_contains(CF, C), "face order must contain simplex order");
    check(!order_contains(C, CF), "inclusion reversal must be strict");
    ++reversals;
  }
  // U(A) cap E^* = U(B) with B = A cap E = o_E, over six fields E = F[gamma]
  struct probe {
    qmat gamma;
    i64 p;
  };
  std::vector<probe> probes = {
      {companion2(-2, 0), 2},    {companion2(1, 1), 2},
      {companion2(-3, 0), 3},    {companion2(1, 0), 3},
      {companion3(-2, 0, 0), 2}, {companion3(1, 1, 0), 2}};
  int samples = 0;
  for (const auto& pr : probes) {
    hereditary_order A(gamma_order_chain(pr.gamma, pr.p));
    int n = pr.gamma.n;
    for (i64 a = -2; a <= 2; ++a)
      for (i64 b = -2; b <= 2; ++b)
        for (i64 c = (n == 3 ? -1 : 0); c <= (n == 3 ? 1 : 0); ++c) {
          qmat g = qmat::identity(n).scaled(rat(a)) +
                   pr.gamma.scaled(rat(b)) +
                   (pr.gamma * pr.gamma).scaled(rat(c));
          rat d = g.det();
          if (d.is_zero()) continue;
          // v_E(g) = v_p(det g) / f; g in U(A) iff g is a unit of o_E
          bool unit_of_oE = d.val(pr.p) == 0;
          check(A.in_U(g) == unit_of_oE, "U(A) cap E^* != U(B)");
          ++samples;
        }
  }
  check(samples >= 100, "not enough parahoric samples");
  std::ostringstream os;
  os << round_trips << " round trips, " << reversals << " reversals, "
     << samples << " parahoric samples";
  return os.str();
}

std::string criterion_embedding() {
  struct probe {
    qmat gamma;
    i64 p;
  };
  std::vector<probe> probes = {{companion2(-2, 0), 2},
                               {companion2(1, 1), 2},
                               {companion2(-3, 0), 3},
                               {companion2(1, 0), 3}};
  int commuted = 0;
  for (const auto& pr : probes) {
    auto P = enumerate_ball(pr.p, 2, 3);
    geom_point jx = embed_gamma_point(P, pr.gamma);
    // j sends the isobarycenter of the gamma-stable chain to itself
    auto C = gamma_order_chain(pr.gamma, pr.p);
    check(jx == isobarycenter(simplex_of_chain(P, C)),
          "embedded point is not the chain isobarycenter");
    // E^* fixes j(x_E): exact barycentric agreement
    for (i64 a = -2; a <= 2; ++a)
      for (i64 b = -2; b <= 2; ++b) {
        qmat h = qmat::identity(2).scaled(rat(a)) + pr.gamma.scaled(rat(b));
        if (h.det().is_zero()) continue;
        check(apply_point(P, h, jx) == jx, "E^* does not fix j(x_E)");
        ++commuted;
      }
    // conjugation equivariance: j(h x) = h j(x)
    for (const qmat& h :
         {mk2(1, 1, 0, 1), mk2(1, 0, 1, 1), mk2(0, 1, 1, 0)}) {
      qmat gc = h * pr.gamma * h.inverse();
      check(embed_gamma_point(P, gc) == apply_point(P, h, jx),
            "embedding does not commute with conjugation");
      ++commuted;
    }
  }
  check(commuted >= 50, "not enough equivariance samples");
  return std::to_string(commuted) + " equivariance samples";
}

std::string criterion_unique_cell() {
  int checked = 0;
  for (i64 p : {i64(2), i64(3)}) {
    auto P = enumerate_ball(p, 2, 3);
    std::vector<qmat> gammas;
    qmat ram = companion2(-p, 0);
    qmat unram = p == 2 ? companion2(1, 1) : companion2(1, 0);
    for (const qmat& base : {ram, unram}) {
      gammas.push_back(base);
      gammas.push_back(base.scaled(rat(p)));
      for (const qmat& h :
           {mk2(1, 1, 0, 1), mk2(1, 0, 1, 1), mk2(0, 1, 1, 0)})
        gammas.push_back(h * base * h.inverse());
    }
    for (const qmat& g : gammas) {
      auto info = analyze_elliptic(g, p);
      check(info.minimal, "probe gamma must be minimal");
      auto fix = stabilized_simplices(P, g);  // brute force over the patch
      check(fix.size() == 1, "minimal gamma must stabilize exactly one cell");
      check(fix[0] == simplex_of_chain(P, gamma_order_chain(g, p)),
            "stabilized cell differs from the gamma-order simplex");
      ++checked;
    }
  }
  check(checked >= 20, "not enough minimal gammas");
  return std::to_string(checked) + " minimal gammas, unique cell each";
}

std::string criterion_route_agreement() {
  struct probe {
    level_zero_spec spec;
    std::vector<qmat> gammas;
  };
  auto gammas_for = [](i64 p) {
    qmat ram = companion2(-p, 0);
    qmat unram = p == 2 ? companion2(1, 1) : companion2(1, 0);
    qmat h = mk2(1, 1, 0, 1);
    return std::vector<qmat>{ram, unram, h * unram * h.inverse()};
  };
  std::vector<probe> probes;
  probes.push_back({{2, 2, 0, 0, 0, 0}, gammas_for(2)});
  probes.push_back({{2, 1, 0, 0, 0, 1}, gammas_for(2)});
  probes.push_back({{3, 2, 1, 0, 1, 2}, gammas_for(3)});
  probes.push_back({{3, 1, 0, 1, 0, 0}, gammas_for(3)});
  int pairs = 0;
  for (const auto& pb : probes) {
    lz_context ctx(pb.spec);
    auto P = enumerate_ball(pb.spec.p, 2, 4);
    auto ep = ep_function(ctx);
    for (const qmat& g : pb.gammas) {
      auto simple = char_simple(ctx, g);
      auto fixed = char_fixed_sum(ctx, g, P);
      auto orb = char_orbital(ctx, ep, g, P, {2, 3, 4});
      check(fixed.value == simple.value, "fixed-sum route disagrees");
      check(orb.value == simple.value, "orbital route disagrees");
      if (pb.spec.e == 1) {
        auto oracle = char_supercuspidal_oracle(ctx, g, P);
        check(oracle.value == simple.value, "Frobenius oracle disagrees");
      }
      ++pairs;
    }
  }
  check(pairs >= 12, "not enough (spec, gamma) pairs");
  return std::to_string(pairs) + " (spec, gamma) pairs agree on all routes";
}

std::string criterion_simple_gate() {
  std::ostringstream roots;
  for (i64 p : {i64(2), i64(3)}) {
    level_zero_spec spec{p, 1, 0, 0, 0, 1};  // depth zero, twist_pow = 1
    lz_context ctx(spec);
    const cyc_ring& R = ctx.ring();
    // ramified E: residue degree 1, the gate must yield exactly zero
    auto ram = char_simple(ctx, companion2(-p, 0));
    check(!ram.gate_passed, "ramified gate must close");
    check(ram.value == R.zero(), "ramified value must be exactly zero");
    // unramified E: value equals the finite-field cuspidal character value
    // up to the configured root of unity zeta_m^(twist_pow * t)
    // residue generates F_{q^2}^*, so the cuspidal value is nonzero
    qmat unram = p == 2 ? companion2(1, 1) : companion2(2, 2);
    for (int t : {0, 1}) {
      qmat g = t == 0 ? unram : unram.scaled(rat(p));
      auto cv = char_simple(ctx, g);
      check(cv.gate_passed, "unramified gate must pass");
      qmat unit = g.scaled(rat(1, ipow(p, t)));
      auto chi =
          ctx.T->chars[ctx.vertex_row][residue_class_of(*ctx.T, unit, p)];
      check(!(chi == R.zero()), "probe class must have nonzero table value");
      long k_found = -1;
      for (i64 k = 0; k < ctx.m(); ++k)
        if (cv.value == R.mul(R.zeta(k), chi)) {
          k_found = long(k);
          break;
        }
      check(k_found >= 0, "value is not a root of unity times the table value");
      check(k_found == mod_pos(spec.twist_pow * t, ctx.m()),
            "root of unity does not match the configured twist");
      roots << " p=" << p << ",v=" << t << ": zeta_" << ctx.m() << "^"
            << k_found << ";";
    }
  }
  return "gate exact" + roots.str();
}

std::string criterion_homology() {
  std::ostringstream os;
  for (i64 p : {i64(2), i64(3)}) {
    level_zero_spec spec{p, 2, 0, 0, 0, 0};
    lz_context ctx(spec);
    auto P = enumerate_ball(p, 2, 4);
    auto cs = build_coefficient_system(ctx, P);
    auto cc = chain_complex(cs);
    check(cc.d2_zero, "boundary squared must vanish");
    check(complex_h1_vanishes(cc), "interior H1 must vanish (exact rank)");
    auto ap = apartment_isotypic_check(ctx, cs, P);
    check(ap.dims_match,
          "isotypic dimensions must match the apartment cell counts");
    check(ap.h1_vanishes, "isotypic H1 must vanish");
    check(!ap.boundary_contamination, "radius 4 must clear the boundary");
    os << " p=" << p << ": iso(" << ap.iso_dim0 << "," << ap.iso_dim1
       << ")=cells(" << ap.apartment_cells0 << "," << ap.apartment_cells1
       << ");";
    // depth-zero supercuspidal systems concentrate in degree 0
    level_zero_spec sc{p, 1, 0, 0, 0, 0};
    lz_context cctx(sc);
    auto cs1 = build_coefficient_system(cctx, P);
    check(chain_complex(cs1).dim1 == 0, "cuspidal system must have no edges");
  }
  return "exact ranks" + os.str();
}

std::string criterion_finite_gl() {
  struct want {
    int n;
    i64 p;
    i64 cusp;
  };
  for (const auto& w : {want{2, 2, 1}, want{2, 3, 3}, want{3, 2, 2}}) {
    auto T = character_table(std::make_shared<fgl_group>(w.n, w.p, 1));
    const cyc_ring& R = *T.ring;
    // row orthogonality
    for (int i = 0; i < T.num_irr(); ++i)
      for (int j = i; j < T.num_irr(); ++j)
        check(inner_product(T, T.chars[i], T.chars[j]) == (i == j ? 1 : 0),
              "row orthogonality failed");
    // column orthogonality
    for (int k = 0; k < T.G->num_classes(); ++k)
      for (int l = 0; l < T.G->num_classes(); ++l) {
        auto acc = R.zero();
        for (int i = 0; i < T.num_irr(); ++i)
          acc = R.add(acc, R.mul(T.chars[i][k], R.conj(T.chars[i][l])));
        i64 v;
        check(R.is_int(acc, v), "column sum must be a rational integer");
        check(v == (k == l ? T.G->order() / T.G->class_size(k) : 0),
              "column orthogonality failed");
      }
    i64 sum_sq = 0;
    for (i64 d : T.degrees) sum_sq += d * d;
    check(sum_sq == T.G->order(), "sum of squared degrees != |G|");
    check(i64(cuspidal_rows(T).size()) == w.cusp, "wrong cuspidal count");
    // Gelfand-Graev: multiplicity free, support = generic characters
    auto gg = gelfand_graev(T);
    auto mults = decompose(T, gg);
    for (int i = 0; i < T.num_irr(); ++i) {
      check(mults[i] == 0 || mults[i] == 1, "Gelfand-Graev multiplicity > 1");
      check((mults[i] == 1) == is_generic(T, T.chars[i], &gg),
            "Gelfand-Graev support != generic characters");
    }
  }
  return "GL(2,2), GL(2,3), GL(3,2) exact";
}

std::string criterion_determinism(const std::string& cli,
                                  const std::string& scen_dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(scen_dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  check(!files.empty(), "no scenarios found");
  std::vector<std::string> blobs;
  for (int r = 0; r < 2; ++r) {
    fs::path cache = fs::path("accept_cache_" + std::to_string(r));
    fs::remove_all(cache);  // cold cache for both runs
    fs::create_directories(cache);
    std::ostringstream blob;
    for (const auto& f : files) {
      scenario sc = load_scenario(f.string());
      fs::path out = cache / (f.stem().string() + ".out");
      std::string cmd = cli + " " + sc.command + " --scenario " + f.string() +
                        " --cache-dir " + cache.string() + " --out " +
                        out.string();
      int rc = std::system(cmd.c_str());
      check(rc == 0, "CLI failed on " + f.filename().string());
      std::ifstream in(out, std::ios::binary);
      std::ostringstream body;
      body << in.rdbuf();
      blob << "== " << f.filename().string() << " ==\n" << body.str();
    }
    // exercise the table cache path as part of the corpus
    fs::path tout = cache / "fgl_cli.out";
    std::string cmd = cli + " fgl-table --n 2 --q 3 --cache-dir " +
                      cache.string() + " --out " + tout.string();
    check(std::system(cmd.c_str()) == 0, "CLI failed on fgl-table");
    std::ifstream tin(tout, std::ios::binary);
    std::ostringstream tbody;
    tbody << tin.rdbuf();
    blob << "== fgl-table ==\n" << tbody.str();
    blobs.push_back(blob.str());
  }
  check(blobs[0] == blobs[1], "cold-cache runs are not byte-identical");
  std::ostringstream os;
  os << files.size() + 1 << " runs byte-identical (" << blobs[0].size()
     << " bytes)";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <cli-binary> <scenarios-dir>\n";
    return 64;
  }
  std::string cli = argv[1];
  std::string scen_dir = argv[2];
  run_criterion(1, "chains-and-orders", 120, criterion_chains);
  run_criterion(2, "canonical-embedding", 0, criterion_embedding);
  run_criterion(3, "unique-stabilized-cell", 0, criterion_unique_cell);
  run_criterion(4, "route-agreement", 600, criterion_route_agreement);
  run_criterion(5, "simple-formula-gate", 0, criterion_simple_gate);
  run_criterion(6, "coefficient-homology", 0, criterion_homology);
  run_criterion(7, "finite-gl-exactness", 300, criterion_finite_gl);
  run_criterion(8, "determinism", 0, [&] {
    return criterion_determinism(cli, scen_dir);
  });
  return g_failures;
}
