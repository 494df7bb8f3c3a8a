#pragma once

#include <optional>
#include <vector>

#include "btchar/lattice.hpp"

namespace btchar {

// Periodic lattice chain in Q_p^n: strictly decreasing
//   L_0 > L_1 > ... > L_{r-1} > p L_0,
// continued by L_{i+r} = p L_i.  Stored in canonical form: members are the
// unique translates with det valuation in [d_min, d_min + n) where d_min is
// the least nonnegative value attained, sorted increasingly.  Two chains are
// equal as sets of lattices iff their canonical forms are equal.
class lattice_chain {
 public:
  static lattice_chain from_lattices(std::vector<lattice> Ls) {
    if (Ls.empty()) throw malformed_chain("empty chain");
    i64 p = Ls[0].p();
    int n = Ls[0].n();
    // translate every member so its det valuation lands in [0, n)
    for (auto& L : Ls) {
      int d = L.det_val();
      int shift = d >= 0 ? d / n : (d - n + 1) / n;  // floor(d / n)
      L = L.scaled_p(-shift);
    }
    std::sort(Ls.begin(), Ls.end(), [](const lattice& a, const lattice& b) {
      return a.det_val() < b.det_val();
    });
    Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
    lattice_chain C;
    C.L_ = std::move(Ls);
    C.validate(p, n);
    return C;
  }

  int period() const { return int(L_.size()); }
  i64 p() const { return L_[0].p(); }
  int n() const { return L_[0].n(); }
  const std::vector<lattice>& members() const { return L_; }

  // L_i for arbitrary integer index, via periodicity.
  lattice at(int i) const {
    int r = period();
    int q = i >= 0 ? i / r : (i - r + 1) / r;
    int m = i - q * r;
    return L_[m].scaled_p(q);
  }

  friend bool operator==(const lattice_chain& a, const lattice_chain& b) {
    return a.L_ == b.L_;
  }
  friend bool operator!=(const lattice_chain& a, const lattice_chain& b) {
    return !(a == b);
  }
  friend bool operator<(const lattice_chain& a, const lattice_chain& b) {
    return a.L_ < b.L_;
  }

 private:
  void validate(i64 p, int n) const {
    if (int(L_.size()) > n) throw malformed_chain("period exceeds dimension");
    for (size_t i = 0; i < L_.size(); ++i) {
      const lattice& cur = L_[i];
      lattice nxt = (i + 1 < L_.size()) ? L_[i + 1] : L_[0].scaled_p(1);
      if (cur.p() != p || cur.n() != n)
        throw malformed_chain("mixed ambient spaces");
      if (!cur.contains(nxt) || cur == nxt)
        throw malformed_chain("members do not form a strictly decreasing chain");
    }
  }

  std::vector<lattice> L_;
};

// g maps src into dst (no invertibility assumption on g).
inline bool maps_into(const qmat& g, const lattice& src, const lattice& dst) {
  i64 pd = ipow(src.p(), src.denom());
  for (int j = 0; j < src.n(); ++j) {
    std::vector<rat> x(src.n());
    for (int i = 0; i < src.n(); ++i) {
      rat s(0);
      for (int t = 0; t < src.n(); ++t)
        s = s + g(i, t) * rat(src.basis()(t, j), pd);
      x[i] = s;
    }
    if (!dst.contains(x)) return false;
  }
  return true;
}

// Hereditary order A = A(chain) = {g : g L_i <= L_i for all i}, together with
// its unit filtration and normalizer.
class hereditary_order {
 public:
  explicit hereditary_order(lattice_chain c) : chain_(std::move(c)) {}

  const lattice_chain& chain() const { return chain_; }
  int period() const { return chain_.period(); }
  i64 p() const { return chain_.p(); }
  int n() const { return chain_.n(); }

  // Invariant (m_0, ..., m_{r-1}): dimensions of the successive quotients
  // L_i / L_{i+1} over the residue field.
  std::vector<int> invariant() const {
    std::vector<int> m;
    for (int i = 0; i < period(); ++i) {
      int d = chain_.at(i + 1).det_val() - chain_.at(i).det_val();
      m.push_back(d);
    }
    return m;
  }

  bool in_order(const qmat& g) const {
    for (int i = 0; i < period(); ++i)
      if (!maps_into(g, chain_.at(i), chain_.at(i))) return false;
    return true;
  }

  bool in_radical(const qmat& g) const {
    for (int i = 0; i < period(); ++i)
      if (!maps_into(g, chain_.at(i), chain_.at(i + 1))) return false;
    return true;
  }

  // U(A): invertible elements stabilizing every member.
  bool in_U(const qmat& g) const {
    if (g.det().is_zero()) return false;
    if (g.det().val(p()) != 0) return false;
    return in_order(g);
  }

  // U^1(A) = 1 + rad(A).
  bool in_U1(const qmat& g) const {
    qmat d = g - qmat::identity(n());
    for (int i = 0; i < period(); ++i)
      if (!maps_into(d, chain_.at(i), chain_.at(i + 1))) return false;
    return in_U(g);
  }

  // Normalizer: g permutes the chain; returns the chain-index shift
  // (g L_i = L_{i+s}) or nullopt.
  std::optional<int> normalizer_shift(const qmat& g) const {
    rat dg = g.det();
    if (dg.is_zero()) return std::nullopt;
    int v = dg.val(p());
    // det valuation forces the candidate shift
    int r = period();
    int d0 = chain_.at(0).det_val();
    lattice img = chain_.at(0).apply(g);
    int di = img.det_val();
    // find s with det_val(L_s) = di
    for (int s = di - d0 - r * n(); s <= di - d0 + r * n(); ++s) {
      if (chain_.at(s).det_val() != di) continue;
      bool ok = true;
      for (int i = 0; i < r && ok; ++i)
        if (chain_.at(i).apply(g) != chain_.at(i + s)) ok = false;
      if (ok) return s;
    }
    (void)v;
    return std::nullopt;
  }

  friend bool operator==(const hereditary_order& a, const hereditary_order& b) {
    return a.chain_ == b.chain_;
  }

 private:
  lattice_chain chain_;
};

// The order A(chain) as a Z_p-lattice of rank n^2 inside M_n(Q_p):
// intersection of End(L_i) over the chain members.  Used as the ring-level
// oracle for the inclusion-reversing bijection.
inline lattice order_lattice(const lattice_chain& C) {
  int n = C.n();
  i64 p = C.p();
  auto end_lattice = [&](const lattice& L) {
    qmat B = L.basis_q();
    qmat Binv = B.inverse();
    // columns: vec(B E_kl B^{-1})
    std::vector<std::vector<rat>> cols;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        qmat E(n);
        E(k, l) = rat(1);
        qmat M = B * E * Binv;
        std::vector<rat> col;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) col.push_back(M(i, j));
        cols.push_back(std::move(col));
      }
    i64 D = 1;
    for (auto& col : cols)
      for (auto& e : col) D = std::lcm(D, e.d);
    mat Mi(n * n, n * n);
    for (int j = 0; j < n * n; ++j)
      for (int i = 0; i < n * n; ++i) Mi(i, j) = (cols[j][i] * rat(D)).n;
    return lattice::from_columns(p, Mi, vp(D, p));
  };
  lattice acc = end_lattice(C.members()[0]);
  for (int i = 1; i < C.period(); ++i)
    acc = intersect(acc, end_lattice(C.members()[i]));
  return acc;
}

inline bool order_contains(const lattice_chain& A, const lattice_chain& B) {
  return order_lattice(A).contains(order_lattice(B));
}

// Image of g in U(A)/U^1(A) = prod_i GL(m_i, F_p): one residue matrix per
// successive quotient, entries in [0, p).
struct parahoric_image {
  std::vector<mat> blocks;

  friend bool operator==(const parahoric_image& a, const parahoric_image& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (size_t i = 0; i < a.blocks.size(); ++i)
      if (!(a.blocks[i] == b.blocks[i])) return false;
    return true;
  }
};

inline parahoric_image parahoric_quotient(const hereditary_order& A,
                                          const qmat& g) {
  if (!A.in_U(g)) throw element_not_in_parahoric("parahoric_quotient");
  i64 p = A.p();
  int n = A.n();
  parahoric_image out;
  for (int i = 0; i < A.period(); ++i) {
    lattice Li = A.chain().at(i), Ln = A.chain().at(i + 1);
    auto ab = adapted_basis(Li, Ln);
    std::vector<int> live;  // basis vectors of L_i surviving in L_i / L_{i+1}
    for (int j = 0; j < n; ++j) {
      if (ab.exp[j] == 1)
        live.push_back(j);
      else if (ab.exp[j] != 0)
        throw malformed_chain("quotient not elementary abelian");
    }
    qmat C = ab.U.inverse() * g * ab.U;
    mat blk(int(live.size()), int(live.size()));
    for (size_t a = 0; a < live.size(); ++a)
      for (size_t b = 0; b < live.size(); ++b) {
        rat v = C(live[a], live[b]);
        if (v.val(p) < 0)
          throw element_not_in_parahoric("non-integral quotient action");
        i64 num = mod_pos(v.n, p);
        blk(int(a), int(b)) = mulmod(num, invmod(mod_pos(v.d, p), p), p);
      }
    out.blocks.push_back(blk);
  }
  return out;
}

}  // namespace btchar
