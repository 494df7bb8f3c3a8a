#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "btchar/cyclotomic.hpp"
#include "btchar/gfq.hpp"

namespace btchar {

// The finite group GL(n, q) with full element enumeration and conjugacy
// class data.  Desk scale: |G| <= 480 (n <= 3, q <= 5).
class fgl_group {
 public:
  using elem = std::vector<i64>;  // n*n field codes, row major

  fgl_group(int n, i64 p, int f) : F_(p, f), n_(n) {
    if (n < 1 || n > 3) throw budget_exceeded("fgl_group: n out of range");
    enumerate();
    if (elems_.size() > 2000) throw budget_exceeded("fgl_group: group too big");
    build_classes();
  }

  const gfq& field() const { return F_; }
  int n() const { return n_; }
  i64 q() const { return F_.q(); }
  i64 order() const { return i64(elems_.size()); }

  const elem& at(int idx) const { return elems_[idx]; }
  int index(const elem& g) const {
    auto it = lookup_.find(code(g));
    if (it == lookup_.end()) throw error(errc::domain, "fgl_group: not in G");
    return it->second;
  }
  bool is_member(const elem& g) const { return lookup_.count(code(g)) > 0; }

  elem identity() const {
    elem e(n_ * n_, 0);
    for (int i = 0; i < n_; ++i) e[i * n_ + i] = 1;
    return e;
  }
  elem mul(const elem& a, const elem& b) const {
    elem r(n_ * n_, 0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        i64 s = 0;
        for (int t = 0; t < n_; ++t)
          s = F_.add(s, F_.mul(a[i * n_ + t], b[t * n_ + j]));
        r[i * n_ + j] = s;
      }
    return r;
  }
  elem inv(const elem& a) const { return elems_[inv_[index(a)]]; }
  int inv_index(int idx) const { return inv_[idx]; }
  int mul_index(int a, int b) const { return index(mul(elems_[a], elems_[b])); }

  i64 det(const elem& a) const {
    if (n_ == 1) return a[0];
    if (n_ == 2)
      return F_.sub(F_.mul(a[0], a[3]), F_.mul(a[1], a[2]));
    i64 d = 0;
    d = F_.add(d, F_.mul(a[0], F_.sub(F_.mul(a[4], a[8]), F_.mul(a[5], a[7]))));
    d = F_.sub(d, F_.mul(a[1], F_.sub(F_.mul(a[3], a[8]), F_.mul(a[5], a[6]))));
    d = F_.add(d, F_.mul(a[2], F_.sub(F_.mul(a[3], a[7]), F_.mul(a[4], a[6]))));
    return d;
  }

  int num_classes() const { return int(class_members_.size()); }
  int class_of(int idx) const { return class_of_[idx]; }
  int class_of_elem(const elem& g) const { return class_of_[index(g)]; }
  const std::vector<int>& class_members(int c) const {
    return class_members_[c];
  }
  int class_rep(int c) const { return class_members_[c][0]; }
  i64 class_size(int c) const { return i64(class_members_[c].size()); }
  int elem_order(int idx) const { return order_[idx]; }
  int class_order(int c) const { return order_[class_rep(c)]; }
  i64 exponent() const { return exponent_; }

  int inverse_class(int c) const { return class_of_[inv_[class_rep(c)]]; }
  int power_class(int c, i64 k) const {
    int n = order_[class_rep(c)];
    k = mod_pos(k, n);
    elem g = elems_[class_rep(c)];
    elem r = identity();
    for (i64 t = 0; t < k; ++t) r = mul(r, g);
    return class_of_[index(r)];
  }

 private:
  i64 code(const elem& g) const {
    i64 c = 0;
    for (int i = n_ * n_ - 1; i >= 0; --i) c = c * F_.q() + g[i];
    return c;
  }

  void enumerate() {
    i64 total = ipow(F_.q(), n_ * n_);
    for (i64 codev = 0; codev < total; ++codev) {
      elem g(n_ * n_);
      i64 t = codev;
      for (int i = 0; i < n_ * n_; ++i) {
        g[i] = t % F_.q();
        t /= F_.q();
      }
      if (det(g) == 0) continue;
      lookup_[code(g)] = int(elems_.size());
      elems_.push_back(std::move(g));
    }
    // inverses and orders
    int N = int(elems_.size());
    inv_.assign(N, -1);
    order_.assign(N, 0);
    elem e = identity();
    int id = index(e);
    exponent_ = 1;
    for (int i = 0; i < N; ++i) {
      elem x = elems_[i];
      elem acc = x;
      int ord = 1;
      while (index(acc) != id) {
        acc = mul(acc, x);
        ++ord;
      }
      order_[i] = ord;
      exponent_ = std::lcm(exponent_, i64(ord));
      // x^{ord-1} is the inverse
      elem ix = identity();
      for (int t = 0; t < ord - 1; ++t) ix = mul(ix, x);
      inv_[i] = index(ix);
    }
  }

  void build_classes() {
    int N = int(elems_.size());
    std::vector<int> cls(N, -1);
    std::vector<std::vector<int>> members;
    for (int i = 0; i < N; ++i) {
      if (cls[i] >= 0) continue;
      int c = int(members.size());
      std::vector<int> orb;
      for (int x = 0; x < N; ++x) {
        elem y = mul(mul(elems_[x], elems_[i]), elems_[inv_[x]]);
        int yi = index(y);
        if (cls[yi] < 0) {
          cls[yi] = c;
          orb.push_back(yi);
        }
      }
      std::sort(orb.begin(), orb.end());
      members.push_back(std::move(orb));
    }
    // deterministic class order: identity first, then by (element order,
    // class size, smallest member index)
    std::vector<int> perm(members.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = int(i);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
      auto key = [&](int c) {
        return std::tuple<int, size_t, int>(order_[members[c][0]],
                                            members[c].size(), members[c][0]);
      };
      return key(a) < key(b);
    });
    class_members_.clear();
    class_of_.assign(N, -1);
    for (int c : perm) {
      int nc = int(class_members_.size());
      for (int idx : members[c]) class_of_[idx] = nc;
      class_members_.push_back(members[c]);
    }
  }

  gfq F_;
  int n_;
  std::vector<elem> elems_;
  std::unordered_map<i64, int> lookup_;
  std::vector<int> inv_;
  std::vector<int> order_;
  std::vector<int> class_of_;
  std::vector<std::vector<int>> class_members_;
  i64 exponent_ = 1;
};

// ---------------------------------------------------------------------------
// small dense linear algebra over F_ell used by the Dixon algorithm

namespace dixon_detail {

using vec = std::vector<i64>;
using fmat = std::vector<vec>;

inline vec matvec(const fmat& A, const vec& v, i64 ell) {
  int n = int(A.size());
  vec r(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r[i] = mod_pos(r[i] + mulmod(A[i][j], v[j], ell), ell);
  return r;
}

// reduced row echelon; returns pivot columns
inline std::vector<int> rref(fmat& M, i64 ell) {
  std::vector<int> pivots;
  int rows = int(M.size());
  if (rows == 0) return pivots;
  int cols = int(M[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (M[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(M[r], M[pr]);
    i64 ipiv = invmod(M[r][c], ell);
    for (int j = 0; j < cols; ++j) M[r][j] = mulmod(M[r][j], ipiv, ell);
    for (int i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      i64 f = M[i][c];
      for (int j = 0; j < cols; ++j)
        M[i][j] = mod_pos(M[i][j] - mulmod(f, M[r][j], ell), ell);
    }
    pivots.push_back(c);
    ++r;
  }
  M.resize(r);
  return pivots;
}

inline i64 det_mod(fmat M, i64 ell) {
  int n = int(M.size());
  i64 d = 1;
  for (int c = 0; c < n; ++c) {
    int pr = -1;
    for (int i = c; i < n; ++i)
      if (M[i][c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) return 0;
    if (pr != c) {
      std::swap(M[c], M[pr]);
      d = mod_pos(-d, ell);
    }
    d = mulmod(d, M[c][c], ell);
    i64 ipiv = invmod(M[c][c], ell);
    for (int i = c + 1; i < n; ++i) {
      if (M[i][c] == 0) continue;
      i64 f = mulmod(M[i][c], ipiv, ell);
      for (int j = c; j < n; ++j)
        M[i][j] = mod_pos(M[i][j] - mulmod(f, M[c][j], ell), ell);
    }
  }
  return d;
}

// kernel basis of a square matrix
inline std::vector<vec> kernel(fmat M, i64 ell) {
  int n = int(M.size());
  auto pivots = rref(M, ell);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<vec> out;
  for (int c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    vec v(n, 0);
    v[c] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = mod_pos(-M[r][c], ell);
    out.push_back(std::move(v));
  }
  return out;
}

// characteristic polynomial coefficients (ascending) by interpolation
inline vec charpoly_mod(const fmat& A, i64 ell) {
  int n = int(A.size());
  std::vector<i64> xs, ys;
  for (i64 x = 0; x <= n; ++x) {
    fmat M = A;
    for (int i = 0; i < n; ++i) M[i][i] = mod_pos(M[i][i] - x, ell);
    xs.push_back(x);
    ys.push_back(det_mod(M, ell));
  }
  // Lagrange interpolation
  vec poly(n + 1, 0);
  for (int i = 0; i <= n; ++i) {
    vec basis{1};
    i64 denom = 1;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      // basis *= (x - xs[j])
      vec nb(basis.size() + 1, 0);
      for (size_t t = 0; t < basis.size(); ++t) {
        nb[t + 1] = mod_pos(nb[t + 1] + basis[t], ell);
        nb[t] = mod_pos(nb[t] - mulmod(basis[t], xs[j], ell), ell);
      }
      basis = nb;
      denom = mulmod(denom, mod_pos(xs[i] - xs[j], ell), ell);
    }
    i64 coef = mulmod(ys[i], invmod(denom, ell), ell);
    for (size_t t = 0; t < basis.size(); ++t)
      poly[t] = mod_pos(poly[t] + mulmod(coef, basis[t], ell), ell);
  }
  return poly;
}

inline i64 primitive_root(i64 ell) {
  std::vector<i64> fac;
  i64 n = ell - 1;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      fac.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) fac.push_back(n);
  for (i64 g = 2; g < ell; ++g) {
    bool ok = true;
    for (i64 f : fac)
      if (powmod(g, (ell - 1) / f, ell) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw error(errc::domain, "primitive_root: none found");
}

}  // namespace dixon_detail

// Exact character table of GL(n, q): degrees and cyclotomic values, rows in
// a deterministic order (by degree, then lexicographically by values).
struct fgl_table {
  std::shared_ptr<fgl_group> G;
  std::shared_ptr<cyc_ring> ring;  // Z[zeta_m], m = exponent(G)
  std::vector<i64> degrees;
  std::vector<std::vector<cyc_ring::val>> chars;  // [irr][class]

  int num_irr() const { return int(chars.size()); }
};

inline fgl_table character_table(std::shared_ptr<fgl_group> Gp) {
  using namespace dixon_detail;
  const fgl_group& G = *Gp;
  int c = G.num_classes();
  i64 n_ord = G.order();
  i64 m = G.exponent();
  // prime ell = 1 mod m, ell > 2|G|
  i64 ell = m + 1;
  while (!(is_prime(ell) && ell > 2 * n_ord)) ell += m;
  i64 w = powmod(primitive_root(ell), (ell - 1) / m, ell);

  // class constants: A_i[j][k] = a_{ijk} = #{x in C_i : x^{-1} z in C_j} / ..
  // counted as: for x in C_i, z in G: cnt[class(x^{-1} z)][class(z)]++, then
  // a_{ijk} = cnt[j][k] / |C_k| counts pairs with product in C_k
  std::vector<fmat> A(c, fmat(c, vec(c, 0)));
  for (int i = 0; i < c; ++i) {
    std::vector<std::vector<i64>> cnt(c, std::vector<i64>(c, 0));
    for (int xi : G.class_members(i)) {
      int xinv = G.inv_index(xi);
      for (i64 z = 0; z < n_ord; ++z) {
        int y = G.mul_index(xinv, int(z));
        cnt[G.class_of(y)][G.class_of(int(z))]++;
      }
    }
    for (int j = 0; j < c; ++j)
      for (int k = 0; k < c; ++k) {
        if (cnt[j][k] % G.class_size(k) != 0)
          throw error(errc::domain, "class constants not integral");
        A[i][j][k] = mod_pos(cnt[j][k] / G.class_size(k), ell);
      }
  }

  // simultaneous eigenvectors of the class matrices over F_ell
  std::vector<std::vector<vec>> spaces;  // each: list of basis vectors
  {
    std::vector<vec> full;
    for (int i = 0; i < c; ++i) {
      vec e(c, 0);
      e[i] = 1;
      full.push_back(e);
    }
    spaces.push_back(full);
  }
  for (int i = 1; i < c; ++i) {
    bool all_one = true;
    for (auto& S : spaces)
      if (S.size() > 1) all_one = false;
    if (all_one) break;
    std::vector<std::vector<vec>> next;
    for (auto& S : spaces) {
      int k = int(S.size());
      if (k == 1) {
        next.push_back(S);
        continue;
      }
      // restriction R of A_i to span(S): solve A_i s_j = sum R_tj s_t
      // using rref of the basis matrix
      fmat Br(k, vec(c));
      for (int t = 0; t < k; ++t) Br[t] = S[t];
      auto pivots = rref(Br, ell);
      if (int(pivots.size()) != k)
        throw error(errc::domain, "dixon: dependent subspace basis");
      std::vector<vec> Sr(Br.begin(), Br.end());
      // matrix of A_i on span(Sr), in the rref basis (coordinates read off
      // at the pivot columns)
      fmat R(k, vec(k, 0));
      for (int j = 0; j < k; ++j) {
        vec img = matvec(A[i], Sr[j], ell);
        for (int t = 0; t < k; ++t) {
          i64 coord = img[pivots[t]];
          R[t][j] = coord;
          for (int u = 0; u < c; ++u)
            img[u] = mod_pos(img[u] - mulmod(coord, Sr[t][u], ell), ell);
        }
        for (i64 u : img)
          if (u != 0)
            throw error(errc::domain, "dixon: class matrix leaves subspace");
      }
      vec cp = charpoly_mod(R, ell);
      std::vector<i64> roots;
      for (i64 lam = 0; lam < ell; ++lam) {
        i64 v = 0, x = 1;
        for (i64 coef : cp) {
          v = mod_pos(v + mulmod(coef, x, ell), ell);
          x = mulmod(x, lam, ell);
        }
        if (v == 0) roots.push_back(lam);
        if (int(roots.size()) == k) break;
      }
      for (i64 lam : roots) {
        fmat Rl = R;
        for (int t = 0; t < k; ++t) Rl[t][t] = mod_pos(Rl[t][t] - lam, ell);
        auto ker = kernel(Rl, ell);
        std::vector<vec> sub;
        for (auto& kv : ker) {
          vec v(c, 0);
          for (int t = 0; t < k; ++t)
            for (int u = 0; u < c; ++u)
              v[u] = mod_pos(v[u] + mulmod(kv[t], Sr[t][u], ell), ell);
          sub.push_back(std::move(v));
        }
        if (!sub.empty()) next.push_back(std::move(sub));
      }
    }
    spaces = std::move(next);
  }
  if (int(spaces.size()) != c)
    throw error(errc::domain, "dixon: eigenspace splitting incomplete");

  // identity must be class 0
  if (G.class_order(0) != 1)
    throw error(errc::domain, "dixon: identity class not first");

  // power maps: class of rep^t for each class, t < order(rep)
  std::vector<std::vector<int>> powcls(c);
  for (int k = 0; k < c; ++k) {
    int nk = G.class_order(k);
    int rep = G.class_rep(k);
    int cur = G.index(G.identity());
    for (int t = 0; t < nk; ++t) {
      powcls[k].push_back(G.class_of(cur));
      cur = G.mul_index(cur, rep);
    }
  }

  fgl_table T;
  T.G = Gp;
  T.ring = std::make_shared<cyc_ring>(m);
  const cyc_ring& RG = *T.ring;
  for (auto& S : spaces) {
    vec omega = S[0];
    if (omega[0] == 0)
      throw error(errc::domain, "dixon: eigenvector vanishes at identity");
    i64 norm = invmod(omega[0], ell);
    for (auto& x : omega) x = mulmod(x, norm, ell);
    // degree
    i64 s = 0;
    for (int k = 0; k < c; ++k) {
      i64 term = mulmod(omega[k], omega[G.inverse_class(k)], ell);
      s = mod_pos(s + mulmod(term, invmod(mod_pos(G.class_size(k), ell), ell),
                             ell),
                  ell);
    }
    i64 target = mulmod(mod_pos(n_ord, ell), invmod(s, ell), ell);
    i64 deg = -1;
    for (i64 d = 1; d * d <= n_ord; ++d)
      if (mulmod(d, d, ell) == target) {
        deg = d;
        break;
      }
    if (deg < 0) throw error(errc::domain, "dixon: degree not recovered");
    // chi(g_k) mod ell
    vec chi_mod(c);
    for (int k = 0; k < c; ++k)
      chi_mod[k] = mulmod(mulmod(deg, omega[k], ell),
                          invmod(mod_pos(G.class_size(k), ell), ell), ell);
    // cyclotomic lift class by class
    std::vector<cyc_ring::val> row;
    for (int k = 0; k < c; ++k) {
      int nk = G.class_order(k);
      i64 z = powmod(w, m / nk, ell);
      cyc_ring::val v = RG.zero();
      i64 ninv = invmod(nk, ell);
      for (int j = 0; j < nk; ++j) {
        i64 cj = 0;
        for (int t = 0; t < nk; ++t) {
          i64 term = mulmod(chi_mod[powcls[k][t]],
                            powmod(z, mod_pos(-i64(j) * t, nk), ell), ell);
          cj = mod_pos(cj + term, ell);
        }
        cj = mulmod(cj, ninv, ell);
        if (cj > n_ord)
          throw error(errc::domain, "dixon: root multiplicity out of range");
        if (cj != 0) v = RG.add(v, RG.scal(RG.zeta(i64(j) * (m / nk)), cj));
      }
      // consistency: evaluate back mod ell
      if (RG.eval_mod(v, w, ell) != chi_mod[k])
        throw oracle_disagreement("dixon: lift does not match modular value");
      row.push_back(std::move(v));
    }
    T.degrees.push_back(deg);
    T.chars.push_back(std::move(row));
  }
  // deterministic row order
  std::vector<int> perm(T.chars.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = int(i);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    if (T.degrees[a] != T.degrees[b]) return T.degrees[a] < T.degrees[b];
    return T.chars[a] < T.chars[b];
  });
  fgl_table S;
  S.G = T.G;
  S.ring = T.ring;
  for (int i : perm) {
    S.degrees.push_back(T.degrees[i]);
    S.chars.push_back(T.chars[i]);
  }
  return S;
}

// ---------------------------------------------------------------------------
// class-function utilities

using class_fn = std::vector<cyc_ring::val>;

// <a, b> = (1/|G|) sum_k |C_k| a_k conj(b_k); must be a rational integer.
inline i64 inner_product(const fgl_table& T, const class_fn& a,
                         const class_fn& b) {
  const cyc_ring& R = *T.ring;
  auto acc = R.zero();
  for (int k = 0; k < T.G->num_classes(); ++k)
    acc = R.add(acc, R.scal(R.mul(a[k], R.conj(b[k])), T.G->class_size(k)));
  i64 val;
  if (!R.is_int(acc, val) || val % T.G->order() != 0)
    throw error(errc::domain, "inner_product: not an integer multiple");
  return val / T.G->order();
}

// induction of a character of a subgroup H (given by element indices in G
// and a value function on them) to G, evaluated on every class.
inline class_fn induce(const fgl_table& T, const std::vector<int>& H,
                       const std::function<cyc_ring::val(int)>& chi_H) {
  const fgl_group& G = *T.G;
  const cyc_ring& R = *T.ring;
  std::vector<char> inH(G.order(), 0);
  std::vector<cyc_ring::val> val_at(G.order(), R.zero());
  for (int h : H) {
    inH[h] = 1;
    val_at[h] = chi_H(h);
  }
  class_fn out;
  for (int k = 0; k < G.num_classes(); ++k) {
    int g = G.class_rep(k);
    auto acc = R.zero();
    for (i64 x = 0; x < G.order(); ++x) {
      int cg = G.mul_index(G.mul_index(int(x), g), G.inv_index(int(x)));
      if (inH[cg]) acc = R.add(acc, val_at[cg]);
    }
    // divide by |H|
    cyc_ring::val v = R.zero();
    for (int i = 0; i < R.degree(); ++i) {
      if (acc[i] % i64(H.size()) != 0)
        throw error(errc::domain, "induce: non-integral character");
      v[i] = acc[i] / i64(H.size());
    }
    out.push_back(v);
  }
  return out;
}

// decomposition into irreducibles: multiplicities per table row
inline std::vector<i64> decompose(const fgl_table& T, const class_fn& f) {
  std::vector<i64> mult;
  for (int i = 0; i < T.num_irr(); ++i)
    mult.push_back(inner_product(T, f, T.chars[i]));
  return mult;
}

// ---------------------------------------------------------------------------
// standard subgroups of GL(n, q) as element-index lists

inline std::vector<int> borel_subgroup(const fgl_group& G) {
  std::vector<int> out;
  int n = G.n();
  for (i64 i = 0; i < G.order(); ++i) {
    const auto& g = G.at(int(i));
    bool upper = true;
    for (int r = 0; r < n && upper; ++r)
      for (int c = 0; c < r; ++c)
        if (g[r * n + c] != 0) upper = false;
    if (upper) out.push_back(int(i));
  }
  return out;
}

// unipotent radical of the standard parabolic with block sizes `blocks`
inline std::vector<int> parabolic_radical(const fgl_group& G,
                                          const std::vector<int>& blocks) {
  int n = G.n();
  std::vector<int> blk(n);
  {
    int pos = 0;
    for (size_t ib = 0; ib < blocks.size(); ++ib)
      for (int t = 0; t < blocks[ib]; ++t) blk[pos++] = int(ib);
    if (pos != n)
      throw error(errc::domain, "parabolic_radical: block sizes do not sum");
  }
  std::vector<int> out;
  for (i64 i = 0; i < G.order(); ++i) {
    const auto& g = G.at(int(i));
    bool ok = true;
    for (int r = 0; r < n && ok; ++r)
      for (int c = 0; c < n && ok; ++c) {
        i64 v = g[r * n + c];
        if (blk[r] == blk[c]) {
          // identity inside the diagonal blocks
          if (v != (r == c ? 1 : 0)) ok = false;
        } else if (blk[r] > blk[c]) {
          if (v != 0) ok = false;  // zero below the block diagonal
        }
        // entries above the block diagonal are free
      }
    if (ok) out.push_back(int(i));
  }
  return out;
}

// full upper unitriangular subgroup
inline std::vector<int> unipotent_subgroup(const fgl_group& G) {
  int n = G.n();
  std::vector<int> out;
  for (i64 i = 0; i < G.order(); ++i) {
    const auto& g = G.at(int(i));
    bool ok = true;
    for (int r = 0; r < n && ok; ++r)
      for (int c = 0; c <= r && ok; ++c) {
        if (r == c && g[r * n + c] != 1) ok = false;
        if (r > c && g[r * n + c] != 0) ok = false;
      }
    if (ok) out.push_back(int(i));
  }
  return out;
}

// character chi is cuspidal iff its restriction to every proper parabolic
// radical sums to zero (no nonzero Jacquet module)
inline bool is_cuspidal(const fgl_table& T, const class_fn& chi) {
  const fgl_group& G = *T.G;
  const cyc_ring& R = *T.ring;
  std::vector<std::vector<int>> radicals;
  if (G.n() == 1) return true;
  if (G.n() == 2) radicals.push_back(parabolic_radical(G, {1, 1}));
  if (G.n() == 3) {
    radicals.push_back(parabolic_radical(G, {1, 2}));
    radicals.push_back(parabolic_radical(G, {2, 1}));
  }
  for (const auto& U : radicals) {
    auto acc = R.zero();
    for (int u : U) acc = R.add(acc, chi[G.class_of(u)]);
    if (!R.is_zero(acc)) return false;
  }
  return true;
}

// multiplicative character t -> zeta_{q-1}^{a dlog t} of F_q^*, valued in the
// table's ring (q - 1 divides the group exponent)
inline cyc_ring::val mult_char(const fgl_table& T, i64 a, i64 t) {
  const gfq& F = T.G->field();
  i64 m = T.ring->m();
  if (m % (F.q() - 1) != 0)
    throw error(errc::domain, "mult_char: q-1 does not divide exponent");
  return T.ring->zeta((m / (F.q() - 1)) * a * F.dlog(t));
}

// character of Ind_B^G (rho_{a_1} x ... x rho_{a_n}) (principal series)
inline class_fn principal_series(const fgl_table& T, std::vector<i64> a) {
  const fgl_group& G = *T.G;
  if (int(a.size()) != G.n())
    throw error(errc::domain, "principal_series: wrong torus rank");
  auto B = borel_subgroup(G);
  return induce(T, B, [&](int h) {
    const auto& g = G.at(h);
    auto v = T.ring->one();
    for (int i = 0; i < G.n(); ++i)
      v = T.ring->mul(v, mult_char(T, a[i], g[i * G.n() + i]));
    return v;
  });
}

// Gelfand-Graev character: Ind_U^G psi with psi nondegenerate on the
// superdiagonal, via the additive character zeta_p^{trace}
inline class_fn gelfand_graev(const fgl_table& T) {
  const fgl_group& G = *T.G;
  const gfq& F = G.field();
  i64 m = T.ring->m();
  if (m % F.p() != 0)
    throw error(errc::domain, "gelfand_graev: p does not divide exponent");
  auto U = unipotent_subgroup(G);
  return induce(T, U, [&](int h) {
    const auto& g = G.at(h);
    i64 s = 0;
    for (int i = 0; i + 1 < G.n(); ++i)
      s = mod_pos(s + F.trace(g[i * G.n() + i + 1]), F.p());
    return T.ring->zeta((m / F.p()) * s);
  });
}

// <chi, Gelfand-Graev> in {0, 1}: genericity (multiplicity-free by theorem;
// anything else indicates an internal inconsistency)
inline bool is_generic(const fgl_table& T, const class_fn& chi,
                       const class_fn* gg = nullptr) {
  class_fn local;
  if (!gg) {
    local = gelfand_graev(T);
    gg = &local;
  }
  i64 mlt = inner_product(T, chi, *gg);
  if (mlt < 0 || mlt > 1)
    throw genericity_ambiguous("multiplicity " + std::to_string(mlt));
  return mlt == 1;
}

// generalized Steinberg attached to a character rho_a of F_q^*: the unique
// generic constituent of Ind_B(rho_a x rho_a) on GL(2, q); degree q.
struct steinberg_result {
  int irr_index;  // row in the table
  i64 degree;
};

inline steinberg_result generalized_steinberg(const fgl_table& T, i64 a) {
  if (T.G->n() != 2)
    throw error(errc::domain, "generalized_steinberg: GL(2) only");
  auto ind = principal_series(T, {a, a});
  auto mult = decompose(T, ind);
  auto gg = gelfand_graev(T);
  int found = -1;
  for (int i = 0; i < T.num_irr(); ++i) {
    if (mult[i] == 0) continue;
    if (is_generic(T, T.chars[i], &gg)) {
      if (found >= 0)
        throw genericity_ambiguous("two generic constituents");
      found = i;
    }
  }
  if (found < 0) throw genericity_ambiguous("no generic constituent");
  if (T.degrees[found] != T.G->q())
    throw oracle_disagreement("generalized Steinberg degree != q");
  return {found, T.degrees[found]};
}

// indices of the cuspidal rows of the table
inline std::vector<int> cuspidal_rows(const fgl_table& T) {
  std::vector<int> out;
  for (int i = 0; i < T.num_irr(); ++i)
    if (is_cuspidal(T, T.chars[i])) out.push_back(i);
  return out;
}

}  // namespace btchar
