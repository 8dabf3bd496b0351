// Cohomology engine: definably compact sets go through an adapted regular
// complex whose order complex (barycentric model) carries the cochain
// algebra; locally closed sets go through the completion pair (P, Q) and
// the relative complex, which computes cohomology with definably compact
// supports.  One Smith-normal-form summary per boundary matrix serves Q, Z
// and Z/2 coefficients alike.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semitop/celldec.hpp"
#include "semitop/errors.hpp"
#include "semitop/linalg.hpp"
#include "semitop/qlin.hpp"
#include "semitop/stratal.hpp"

namespace semitop::cohom {

using celldec::Decomposition;
using celldec::RegularComplex;
using stratal::SemilinearSet;

enum class Coeff { Q, Z, Z2 };

inline std::string coeff_name(Coeff c) {
  switch (c) {
    case Coeff::Q: return "Q";
    case Coeff::Z: return "Z";
    case Coeff::Z2: return "Z2";
  }
  return "?";
}

// Per-degree ranks of H^p (or H^p_c), with torsion over Z.
struct BettiReport {
  Coeff coeff = Coeff::Q;
  std::vector<long> ranks;
  std::vector<std::vector<BigInt>> torsion;  // nonempty entries only for Z
  long euler = 0;

  long rank(size_t p) const { return p < ranks.size() ? ranks[p] : 0; }

  friend bool operator==(const BettiReport& a, const BettiReport& b) {
    return a.coeff == b.coeff && a.ranks == b.ranks && a.torsion == b.torsion &&
           a.euler == b.euler;
  }
  friend bool operator!=(const BettiReport& a, const BettiReport& b) {
    return !(a == b);
  }

  bool ranks_equal(const BettiReport& o) const { return ranks == o.ranks; }
};

// Abstract simplicial complex realizing the order complex of a regular
// complex: vertices are cells, simplices are chains in the face poset.
struct SimplicialComplex {
  int vertices = 0;
  std::vector<std::vector<std::vector<int>>> chains;  // [p] -> sorted chains

  int dim() const { return static_cast<int>(chains.size()) - 1; }
  long count(int p) const {
    return p >= 0 && p < static_cast<int>(chains.size())
               ? static_cast<long>(chains[p].size())
               : 0;
  }
};

inline SimplicialComplex order_complex(const RegularComplex& rc) {
  int n = static_cast<int>(rc.cells.size());
  // sort cell indices by dimension so chains extend upward
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rc.dims[a] < rc.dims[b]; });

  SimplicialComplex sc;
  sc.vertices = n;
  std::vector<std::vector<std::vector<int>>> ending(n);  // chains ending at i
  for (int i : order) {
    ending[i].push_back({i});
    for (int j : rc.faces[i])
      for (const auto& ch : ending[j]) {
        auto ext = ch;
        ext.push_back(i);
        ending[i].push_back(std::move(ext));
      }
  }
  for (int i = 0; i < n; ++i)
    for (auto& ch : ending[i]) {
      size_t p = ch.size() - 1;
      if (sc.chains.size() <= p) sc.chains.resize(p + 1);
      sc.chains[p].push_back(std::move(ch));
    }
  for (auto& level : sc.chains) std::sort(level.begin(), level.end());
  return sc;
}

namespace detail {

// Chain-complex summary of a simplicial pair (K, A): simplex counts and the
// Smith data of every boundary matrix, with A-simplices quotiented away.
struct ComplexData {
  std::vector<long> counts;                 // relative p-simplex counts
  std::vector<linalg::SnfSummary> boundary;  // boundary[p]: C_p -> C_{p-1}
};

inline ComplexData chain_data(const SimplicialComplex& k,
                              const std::vector<bool>& in_a) {
  int top = k.dim();
  ComplexData out;
  out.counts.assign(top + 1, 0);
  out.boundary.resize(top + 1);

  auto simplex_in_a = [&](const std::vector<int>& ch) {
    for (int v : ch)
      if (!in_a[v]) return false;
    return true;
  };

  std::vector<std::map<std::vector<int>, int>> index(top + 1);
  for (int p = 0; p <= top; ++p) {
    int idx = 0;
    for (const auto& ch : k.chains[p])
      if (!simplex_in_a(ch)) index[p][ch] = idx++;
    out.counts[p] = idx;
  }
  for (int p = 1; p <= top; ++p) {
    linalg::SparseIntMatrix m(static_cast<int>(out.counts[p - 1]),
                              static_cast<int>(out.counts[p]));
    for (const auto& [ch, col] : index[p]) {
      for (size_t drop = 0; drop < ch.size(); ++drop) {
        std::vector<int> face;
        face.reserve(ch.size() - 1);
        for (size_t i = 0; i < ch.size(); ++i)
          if (i != drop) face.push_back(ch[i]);
        auto it = index[p - 1].find(face);
        if (it == index[p - 1].end()) continue;  // face lies in A
        m.add(it->second, col, drop % 2 == 0 ? 1 : -1);
      }
    }
    out.boundary[p] = m.snf();
  }
  return out;
}

inline BettiReport report_from_data(const ComplexData& data, Coeff coeff) {
  BettiReport r;
  r.coeff = coeff;
  int top = static_cast<int>(data.counts.size()) - 1;
  auto rank_of = [&](int p) -> long {
    if (p < 1 || p > top) return 0;
    return coeff == Coeff::Z2 ? data.boundary[p].rank_mod(2)
                              : data.boundary[p].rank;
  };
  for (int p = 0; p <= top; ++p) {
    long h = data.counts[p] - rank_of(p) - rank_of(p + 1);
    r.ranks.push_back(h);
    if (coeff == Coeff::Z)
      r.torsion.push_back(p >= 1 ? data.boundary[p].factors
                                 : std::vector<BigInt>{});
    r.euler += (p % 2 == 0 ? 1 : -1) * static_cast<long>(data.counts[p]);
  }
  while (!r.ranks.empty() && r.ranks.back() == 0) r.ranks.pop_back();
  while (!r.torsion.empty() && r.torsion.back().empty()) r.torsion.pop_back();
  return r;
}

inline BettiReport zero_report(Coeff coeff) {
  BettiReport r;
  r.coeff = coeff;
  r.euler = 0;
  return r;
}

}  // namespace detail

// Adapted regular complex of a definably compact region, additionally
// partitioning the extra targets.
inline RegularComplex build_complex(const SemilinearSet& roi,
                                    const std::vector<SemilinearSet>& extras = {}) {
  std::vector<SemilinearSet> targets = extras;
  targets.push_back(roi);
  Decomposition d = celldec::decompose(roi.ambient(), targets, roi);
  return celldec::refine_to_complex(d, roi, extras);
}

inline std::vector<bool> vertices_inside(const RegularComplex& rc,
                                         const SemilinearSet& s) {
  std::vector<bool> in(rc.cells.size(), false);
  for (size_t i = 0; i < rc.cells.size(); ++i)
    in[i] = s.contains(rc.cells[i].sample_point());
  return in;
}

// H^p of a definably compact set with constant coefficients; unreduced, so
// H^0 counts the definably connected components.
inline BettiReport betti(const SemilinearSet& z, Coeff coeff,
                         const std::vector<SemilinearSet>& extras = {}) {
  if (stratal::is_empty(z)) return detail::zero_report(coeff);
  if (!stratal::is_definably_compact(z))
    throw NotCompact("betti: input is not definably compact");
  RegularComplex rc = build_complex(z, extras);
  SimplicialComplex sc = order_complex(rc);
  std::vector<bool> none(rc.cells.size(), false);
  return detail::report_from_data(detail::chain_data(sc, none), coeff);
}

namespace detail {

// x_j := u + x_j0, a definable homeomorphism wherever x_j0 stays finite;
// used to straighten diagonal escapes before the completion pair.
inline std::optional<SemilinearSet> try_shear(const SemilinearSet& s, int j, int j0) {
  for (auto& [L, region] : s.pieces())
    if (!(L & (stratal::Mask(1) << j0))) return std::nullopt;
  SemilinearSet out(s.ambient());
  for (auto& [L, region] : s.pieces()) {
    qlin::Region r(region.scope);
    for (const auto& d : region.disjuncts) {
      qlin::Polyhedron p;
      p.scope = d.scope;
      for (const auto& a : d.atoms) {
        qlin::LinForm by = qlin::LinForm::var(j) + qlin::LinForm::var(j0);
        p.atoms.push_back(qlin::Atom(a.form.substituted(j, by), a.rel));
      }
      r.disjuncts.push_back(std::move(p));
    }
    out.set_piece(L, std::move(r));
  }
  return out;
}

inline BettiReport betti_c_inner(const SemilinearSet& x, Coeff coeff,
                                 const std::vector<SemilinearSet>& extras,
                                 int shear_budget) {
  try {
    stratal::CompactPair pair = stratal::compact_pair(x);
    std::vector<SemilinearSet> ext = extras;
    ext.push_back(pair.Q);
    RegularComplex rc = build_complex(pair.P, ext);
    SimplicialComplex sc = order_complex(rc);
    std::vector<bool> in_q = vertices_inside(rc, pair.Q);
    BettiReport r = report_from_data(chain_data(sc, in_q), coeff);
    for (size_t p = pair.x_dim + 1; p < r.ranks.size(); ++p)
      if (r.ranks[p] != 0)
        throw InternalError("betti_c: rank above the dimension of the input");
    return r;
  } catch (const UnsupportedGeometry&) {
    if (shear_budget <= 0) throw;
    for (int j = 0; j < x.ambient(); ++j)
      for (int j0 = 0; j0 < x.ambient(); ++j0) {
        if (j == j0) continue;
        auto sheared = try_shear(x, j, j0);
        if (!sheared || stratal::equal(*sheared, x)) continue;
        try {
          return betti_c_inner(*sheared, coeff, {}, shear_budget - 1);
        } catch (const UnsupportedGeometry&) {
          continue;
        }
      }
    throw;
  }
}

}  // namespace detail

// H^p_c of a locally closed set, via the relative cochain complex of the
// completion pair.  Ranks above dim X vanish (post-checked, never silently
// wrong).
inline BettiReport betti_c(const SemilinearSet& x, Coeff coeff,
                           const std::vector<SemilinearSet>& extras = {}) {
  if (stratal::is_empty(x)) return detail::zero_report(coeff);
  if (!stratal::is_locally_closed(x))
    throw NotLocallyClosed("betti_c: input is not locally closed");
  return detail::betti_c_inner(x, coeff, extras, 2);
}

// ---------------------------------------------------------------------------
// Induced maps on cohomology over a field (Q or Z/2; Z reports the free rank).

namespace detail {

template <class F>
struct FieldComplex {
  using Elem = typename F::Elem;
  std::vector<std::map<std::vector<int>, int>> index;  // simplex -> column
  std::vector<long> counts;

  FieldComplex(const SimplicialComplex& k, const std::vector<bool>& inside) {
    int top = k.dim();
    index.resize(top + 1);
    counts.assign(top + 1, 0);
    for (int p = 0; p <= top; ++p) {
      int idx = 0;
      for (const auto& ch : k.chains[p]) {
        bool in = true;
        for (int v : ch)
          if (!inside[v]) in = false;
        if (in) index[p][ch] = idx++;
      }
      counts[p] = idx;
    }
  }

  // coboundary matrix delta^p: C^p -> C^{p+1}
  linalg::DenseMatrix<F> delta(int p) const {
    long rows = p + 1 < static_cast<int>(counts.size()) ? counts[p + 1] : 0;
    long cols = p < static_cast<int>(counts.size()) ? counts[p] : 0;
    linalg::DenseMatrix<F> m(static_cast<int>(rows), static_cast<int>(cols));
    if (rows == 0 || cols == 0) return m;
    for (const auto& [ch, row] : index[p + 1]) {
      for (size_t drop = 0; drop < ch.size(); ++drop) {
        std::vector<int> face;
        for (size_t i = 0; i < ch.size(); ++i)
          if (i != drop) face.push_back(ch[i]);
        auto it = index[p].find(face);
        if (it == index[p].end()) continue;
        typename F::Elem sgn = drop % 2 == 0 ? F::one() : F::neg(F::one());
        m.a[row][it->second] = F::add(m.a[row][it->second], sgn);
      }
    }
    return m;
  }

  std::vector<std::vector<Elem>> cocycles(int p) const {
    if (p < 0 || p >= static_cast<int>(counts.size()) || counts[p] == 0) return {};
    return delta(p).kernel_basis();
  }

  std::vector<std::vector<Elem>> coboundaries(int p) const {
    std::vector<std::vector<Elem>> out;
    if (p < 1 || p >= static_cast<int>(counts.size()) || counts[p] == 0) return out;
    linalg::DenseMatrix<F> d = delta(p - 1);
    for (int c = 0; c < d.cols; ++c) {
      std::vector<Elem> v(d.rows, F::zero());
      for (int r = 0; r < d.rows; ++r) v[r] = d.a[r][c];
      out.push_back(std::move(v));
    }
    return out;
  }

  long h_dim(int p) const {
    if (p < 0 || p >= static_cast<int>(counts.size())) return 0;
    long zp = counts[p] - delta(p).rank();
    long bp = p >= 1 ? delta(p - 1).rank() : 0;
    return zp - bp;
  }

  // restriction of a cochain on a supercomplex to this one
  std::vector<Elem> restrict_from(const FieldComplex& big, int p,
                                  const std::vector<Elem>& v) const {
    std::vector<Elem> out(counts[p], F::zero());
    for (const auto& [ch, col] : index[p]) {
      auto it = big.index[p].find(ch);
      if (it != big.index[p].end()) out[col] = v[it->second];
    }
    return out;
  }
};

}  // namespace detail

// Rank of H^degree(P) -> H^degree(Q) induced by the inclusion of the closed
// subset Q into the definably compact P.
inline long restriction_map_rank(const SemilinearSet& p, const SemilinearSet& q,
                                 Coeff coeff, int degree) {
  if (!stratal::is_definably_compact(p))
    throw NotCompact("restriction_map_rank: P is not definably compact");
  if (!stratal::subset(q, p) || !stratal::is_closed(q))
    throw std::invalid_argument("restriction_map_rank: Q must be closed in P");
  if (stratal::is_empty(q)) return 0;
  RegularComplex rc = build_complex(p, {q});
  SimplicialComplex sc = order_complex(rc);
  std::vector<bool> all(rc.cells.size(), true);
  std::vector<bool> in_q = vertices_inside(rc, q);

  auto run = [&](auto field) -> long {
    using F = decltype(field);
    detail::FieldComplex<F> big(sc, all), sub(sc, in_q);
    auto z = big.cocycles(degree);
    std::vector<std::vector<typename F::Elem>> mapped;
    for (auto& v : z) mapped.push_back(sub.restrict_from(big, degree, v));
    auto b = sub.coboundaries(degree);
    long dim = degree < static_cast<int>(sub.counts.size()) ? sub.counts[degree] : 0;
    return linalg::rank_modulo<F>(mapped, b, static_cast<int>(dim));
  };
  return coeff == Coeff::Z2 ? run(linalg::GF2{}) : run(linalg::RatField{});
}

// Mayer-Vietoris exactness audit for X = U ∪ V with U, V closed in a
// definably compact X.  Ranks of the two computable maps are measured and
// every node of the long exact sequence is checked by rank bookkeeping.
struct MvReport {
  bool exact = true;
  std::vector<long> h_x, h_u, h_v, h_w;        // dims of H^p over the field
  std::vector<long> alpha_rank, beta_rank;     // per degree
  std::vector<bool> node_x_ok, node_uv_ok;     // exactness at H^p(X), middle
};

inline MvReport mv_check(const SemilinearSet& x, const SemilinearSet& u,
                         const SemilinearSet& v, Coeff coeff) {
  if (!stratal::equal(stratal::unite(u, v), x))
    throw std::invalid_argument("mv_check: X != U ∪ V");
  if (!stratal::is_definably_compact(x))
    throw NotCompact("mv_check: X is not definably compact");
  if (!stratal::is_closed(u) || !stratal::is_closed(v))
    throw std::invalid_argument("mv_check: U, V must be closed");
  SemilinearSet w = stratal::intersect(u, v);

  RegularComplex rc = build_complex(x, {u, v, w});
  SimplicialComplex sc = order_complex(rc);
  std::vector<bool> all(rc.cells.size(), true);
  std::vector<bool> in_u = vertices_inside(rc, u);
  std::vector<bool> in_v = vertices_inside(rc, v);
  std::vector<bool> in_w = vertices_inside(rc, w);

  auto run = [&](auto field) -> MvReport {
    using F = decltype(field);
    using Elem = typename F::Elem;
    detail::FieldComplex<F> kx(sc, all), ku(sc, in_u), kv(sc, in_v), kw(sc, in_w);
    MvReport rep;
    int top = sc.dim() + 1;
    for (int p = 0; p <= top; ++p) {
      rep.h_x.push_back(kx.h_dim(p));
      rep.h_u.push_back(ku.h_dim(p));
      rep.h_v.push_back(kv.h_dim(p));
      rep.h_w.push_back(kw.h_dim(p));

      // alpha: H(X) -> H(U) ⊕ H(V)
      auto zx = kx.cocycles(p);
      std::vector<std::vector<Elem>> au;
      long du = p < static_cast<int>(ku.counts.size()) ? ku.counts[p] : 0;
      long dv = p < static_cast<int>(kv.counts.size()) ? kv.counts[p] : 0;
      for (auto& z : zx) {
        auto ru = ku.restrict_from(kx, p, z);
        auto rv = kv.restrict_from(kx, p, z);
        ru.insert(ru.end(), rv.begin(), rv.end());
        au.push_back(std::move(ru));
      }
      std::vector<std::vector<Elem>> buv;
      for (auto& b : ku.coboundaries(p)) {
        b.resize(du + dv, F::zero());
        buv.push_back(std::move(b));
      }
      for (auto& b : kv.coboundaries(p)) {
        std::vector<Elem> e(du, F::zero());
        e.insert(e.end(), b.begin(), b.end());
        buv.push_back(std::move(e));
      }
      rep.alpha_rank.push_back(
          linalg::rank_modulo<F>(au, buv, static_cast<int>(du + dv)));

      // beta: H(U) ⊕ H(V) -> H(U ∩ V)
      long dw = p < static_cast<int>(kw.counts.size()) ? kw.counts[p] : 0;
      std::vector<std::vector<Elem>> bimg;
      for (auto& z : ku.cocycles(p)) bimg.push_back(kw.restrict_from(ku, p, z));
      for (auto& z : kv.cocycles(p)) {
        auto r = kw.restrict_from(kv, p, z);
        for (auto& e : r) e = F::neg(e);
        bimg.push_back(std::move(r));
      }
      rep.beta_rank.push_back(
          linalg::rank_modulo<F>(bimg, kw.coboundaries(p), static_cast<int>(dw)));
    }
    for (int p = 0; p <= top; ++p) {
      long delta_prev =
          p >= 1 ? rep.h_w[p - 1] - rep.beta_rank[p - 1] : 0;  // rank of the connector
      bool at_x = rep.h_x[p] == rep.alpha_rank[p] + delta_prev;
      bool at_uv = rep.h_u[p] + rep.h_v[p] == rep.alpha_rank[p] + rep.beta_rank[p];
      rep.node_x_ok.push_back(at_x);
      rep.node_uv_ok.push_back(at_uv);
      rep.exact = rep.exact && at_x && at_uv;
    }
    return rep;
  };
  return coeff == Coeff::Z2 ? run(linalg::GF2{}) : run(linalg::RatField{});
}

// Homotopy axiom instance: crossing with a closed parameter interval leaves
// cohomology unchanged.  H^* is compared when X is definably compact, and
// H^*_c always (the projection is proper, its fibers are compact cubes).
inline bool homotopy_check(const SemilinearSet& x, const ExtRat& a, const ExtRat& b,
                           Coeff coeff) {
  if (!(a < b) && !(a == b)) throw std::invalid_argument("homotopy_check: need a <= b");
  if (a.is_inf()) throw std::invalid_argument("homotopy_check: a must be finite");
  if (!a.is_inf() && a.finite() < 0)
    throw std::invalid_argument("homotopy_check: interval must sit in [0, inf]");
  stratal::Interval iv{a, b, true, true, false};
  SemilinearSet prism = stratal::cylinder(x, iv);
  bool ok = betti_c(prism, coeff).ranks_equal(betti_c(x, coeff));
  if (stratal::is_definably_compact(x))
    ok = ok && betti(prism, coeff).ranks_equal(betti(x, coeff));
  return ok;
}

// The cohomology table of the complement of an exhausting core: for a cell
// of dimension r >= 1 the ranks are L^{1+[r=1]} in degrees 0 and r-1 and
// zero elsewhere.  The complement is modeled by its closure, onto which it
// deformation-retracts.
inline BettiReport complement_table(const celldec::Cell& c, const Rat& t, const Rat& s,
                                    Coeff coeff) {
  if (c.dim < 1)
    throw std::invalid_argument("complement_table: cell must have dimension >= 1");
  SemilinearSet core = celldec::cell_core(c, t, s);
  SemilinearSet rest = stratal::subtract(c.denotation(), core);
  SemilinearSet model = stratal::closure(rest);
  return betti(model, coeff);
}

}  // namespace semitop::cohom
