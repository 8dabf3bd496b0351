// Definable subsets of Gamma_inf^n, stored stratum by stratum: the trace on
// the support stratum L is a region over the finite coordinates in L.  The
// header implements the boolean algebra, the order topology (closure across
// strata at infinity), boundedness, definable compactness, and the
// completion machinery.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semitop/errors.hpp"
#include "semitop/qlin.hpp"

namespace semitop::stratal {

using qlin::Atom;
using qlin::LinForm;
using qlin::Polyhedron;
using qlin::Region;
using qlin::Rel;

using Mask = std::uint32_t;

inline std::set<int> mask_coords(Mask m) {
  std::set<int> s;
  for (int i = 0; i < 32; ++i)
    if (m & (Mask(1) << i)) s.insert(i);
  return s;
}

inline Mask coords_mask(const std::set<int>& s) {
  Mask m = 0;
  for (int i : s) m |= Mask(1) << i;
  return m;
}

// A point of Gamma_inf^n.
using Point = std::vector<ExtRat>;

// Semilinear subset of Gamma_inf^n.  Absent stratum key = empty stratum.
class SemilinearSet {
 public:
  SemilinearSet() : n_(0) {}
  explicit SemilinearSet(int n) : n_(n) {
    if (n < 0 || n > 16) throw DimensionMismatch("ambient dimension out of range");
  }

  int ambient() const { return n_; }
  const std::map<Mask, Region>& pieces() const { return pieces_; }

  static SemilinearSet empty(int n) { return SemilinearSet(n); }

  static SemilinearSet whole_space(int n) {
    SemilinearSet s(n);
    Mask all = n == 32 ? ~Mask(0) : (Mask(1) << n) - 1;
    for (Mask L = 0; L <= all; ++L) {
      s.pieces_[L] = Region::full(mask_coords(L));
      if (L == all) break;
    }
    return s;
  }

  void set_piece(Mask L, Region r) {
    if (coords_mask(r.scope) != L) throw DimensionMismatch("piece scope != support");
    r = qlin::pruned(std::move(r));
    if (r.trivially_empty())
      pieces_.erase(L);
    else
      pieces_[L] = std::move(r);
  }

  Region piece(Mask L) const {
    auto it = pieces_.find(L);
    if (it != pieces_.end()) return it->second;
    return Region::empty(mask_coords(L));
  }

  bool trivially_empty() const { return pieces_.empty(); }

  bool contains(const Point& p) const {
    if (static_cast<int>(p.size()) != n_) throw DimensionMismatch("point arity");
    Mask L = 0;
    std::map<int, Rat> fin;
    for (int i = 0; i < n_; ++i)
      if (!p[i].is_inf()) {
        L |= Mask(1) << i;
        fin[i] = p[i].finite();
      }
    auto it = pieces_.find(L);
    return it != pieces_.end() && it->second.contains(fin);
  }

 private:
  int n_;
  std::map<Mask, Region> pieces_;
};

inline void check_same_ambient(const SemilinearSet& a, const SemilinearSet& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("ambient dimension mismatch");
}

inline SemilinearSet unite(const SemilinearSet& a, const SemilinearSet& b) {
  check_same_ambient(a, b);
  SemilinearSet out(a.ambient());
  std::set<Mask> keys;
  for (auto& [L, r] : a.pieces()) keys.insert(L);
  for (auto& [L, r] : b.pieces()) keys.insert(L);
  for (Mask L : keys) out.set_piece(L, qlin::unite(a.piece(L), b.piece(L)));
  return out;
}

inline SemilinearSet intersect(const SemilinearSet& a, const SemilinearSet& b) {
  check_same_ambient(a, b);
  SemilinearSet out(a.ambient());
  for (auto& [L, r] : a.pieces())
    if (b.pieces().count(L)) out.set_piece(L, qlin::intersect(r, b.piece(L)));
  return out;
}

inline SemilinearSet complement(const SemilinearSet& a) {
  SemilinearSet out(a.ambient());
  Mask all = (Mask(1) << a.ambient()) - 1;
  for (Mask L = 0;; ++L) {
    out.set_piece(L, qlin::complement(a.piece(L)));
    if (L == all) break;
  }
  return out;
}

inline SemilinearSet subtract(const SemilinearSet& a, const SemilinearSet& b) {
  check_same_ambient(a, b);
  SemilinearSet out(a.ambient());
  for (auto& [L, r] : a.pieces()) out.set_piece(L, qlin::subtract(r, b.piece(L)));
  return out;
}

inline bool is_empty(const SemilinearSet& a) {
  for (auto& [L, r] : a.pieces())
    if (!qlin::is_empty(r)) return false;
  return true;
}

// Set equality by emptiness of the symmetric difference (DNF per stratum is
// not canonical, so syntactic comparison would be wrong).
inline bool equal(const SemilinearSet& a, const SemilinearSet& b) {
  return is_empty(subtract(a, b)) && is_empty(subtract(b, a));
}

inline bool subset(const SemilinearSet& a, const SemilinearSet& b) {
  return is_empty(subtract(a, b));
}

inline int dimension(const SemilinearSet& a) {
  int best = -1;
  for (auto& [L, r] : a.pieces()) best = std::max(best, qlin::dimension(r));
  return best;
}

inline std::optional<Point> sample_point(const SemilinearSet& a) {
  for (auto& [L, r] : a.pieces()) {
    auto s = qlin::sample_point(r);
    if (!s) continue;
    Point p;
    for (int i = 0; i < a.ambient(); ++i) {
      if (L & (Mask(1) << i))
        p.push_back(ExtRat(s->at(i)));
      else
        p.push_back(ExtRat::infinity());
    }
    return p;
  }
  return std::nullopt;
}

namespace detail {

// Limit set of one convex polyhedron piece (support Lpp) inside the target
// stratum L ⊆ Lpp: the points y with every box (y_i ± eps) x (N, inf]
// meeting the piece.  Computed by eliminating the escaping coordinates
// against a symbolic threshold N and keeping the N-free constraints, whose
// relaxation is the exact closure by convexity.
inline std::optional<Polyhedron> limit_into_stratum(const Polyhedron& piece,
                                                    Mask Lpp, Mask L) {
  std::set<int> target = mask_coords(L);
  std::set<int> escape = mask_coords(Lpp & ~L);

  std::optional<Polyhedron> cur = qlin::consolidate(piece);
  if (!cur || qlin::polyhedron_empty(*cur)) return std::nullopt;

  if (!escape.empty()) {
    int nvar = (cur->scope.empty() ? 0 : *cur->scope.rbegin()) + 1;
    Polyhedron p = *cur;
    p.scope.insert(nvar);
    for (int j : escape) {
      LinForm f = LinForm::var(nvar);  // N - x_j < 0
      f.set_coeff(j, Rat(-1));
      p.atoms.push_back(qlin::atom_lt(f));
    }
    cur = p;
    for (int j : escape) {
      cur = qlin::fm_step(*cur, j);
      if (!cur) return std::nullopt;
    }
    // Keep constraints not involving N; a constraint that forces большой N
    // (positive N coefficient, or an equality on N) kills the limit.
    Polyhedron kept;
    kept.scope = target;
    for (const Atom& a : cur->atoms) {
      Rat beta = a.form.coeff(nvar);
      if (beta == 0) {
        kept.atoms.push_back(a);
        continue;
      }
      if (a.rel == Rel::EQ || beta > 0) return std::nullopt;
      // beta < 0: satisfied for all large N; drop.
    }
    cur = kept;
  } else {
    cur->scope = target;
  }

  if (qlin::polyhedron_empty(*cur)) return std::nullopt;
  // Topological closure of a nonempty convex polyhedron: relax strict atoms.
  Polyhedron closed;
  closed.scope = target;
  for (Atom a : cur->atoms) {
    if (a.rel == Rel::LT) a.rel = Rel::LE;
    closed.atoms.push_back(std::move(a));
  }
  return qlin::consolidate(closed);
}

inline SemilinearSet closure_pass(const SemilinearSet& s) {
  SemilinearSet out = s;
  for (auto& [Lpp, region] : s.pieces()) {
    // Enumerate all L ⊆ Lpp (including Lpp itself for the in-stratum part).
    for (Mask L = Lpp;; L = (L - 1) & Lpp) {
      Region add(mask_coords(L));
      for (const Polyhedron& piece : region.disjuncts) {
        auto lim = limit_into_stratum(piece, Lpp, L);
        if (lim) add.disjuncts.push_back(std::move(*lim));
      }
      if (!add.disjuncts.empty())
        out.set_piece(L, qlin::unite(out.piece(L), add));
      if (L == 0) break;
    }
  }
  return out;
}

}  // namespace detail

// Smallest closed definable superset in the order topology of Gamma_inf^n.
// One pass over the strata poset computes every cross-stratum limit set;
// the loop re-runs until the result is stable.
inline SemilinearSet closure(const SemilinearSet& s) {
  SemilinearSet cur = detail::closure_pass(s);
  int guard = (1 << s.ambient()) * (s.ambient() + 1);
  for (int round = 0; round < guard; ++round) {
    SemilinearSet next = detail::closure_pass(cur);
    if (subset(next, cur)) return cur;
    cur = std::move(next);
  }
  return cur;
}

inline SemilinearSet interior(const SemilinearSet& s) {
  return complement(closure(complement(s)));
}

inline SemilinearSet frontier(const SemilinearSet& s) {
  return subtract(closure(s), s);
}

inline bool is_closed(const SemilinearSet& s) { return subset(closure(s), s); }

inline bool is_open(const SemilinearSet& s) { return is_closed(complement(s)); }

// Locally closed = open in its closure; decided as closure(S) \ S closed.
inline bool is_locally_closed(const SemilinearSet& s) {
  return is_closed(frontier(s));
}

// Greatest rational lower bound of the 1-d region, or nullopt when some
// nonempty disjunct is unbounded below.
inline std::optional<Rat> lower_bound_1d(const Region& r, int var) {
  std::optional<Rat> best;
  for (const auto& d : r.disjuncts) {
    auto c = qlin::consolidate(d);
    if (!c || qlin::polyhedron_empty(*c)) continue;
    std::optional<Rat> lo;
    for (const Atom& a : c->atoms) {
      Rat k = a.form.coeff(var);
      if (k == 0) continue;
      Rat bound = -a.form.constant() / k;
      if (a.rel == Rel::EQ) {
        if (!lo || bound < *lo) lo = bound;
      } else if (k < 0) {  // lower bound
        if (!lo || bound < *lo) lo = bound;
      }
    }
    if (!lo) return std::nullopt;
    if (!best || *lo < *best) best = lo;
  }
  return best ? best : std::optional<Rat>(Rat(0));  // empty region: any bound
}

// Bounded in Gamma_inf^n means contained in some product of [c_i, inf];
// only lower bounds matter because inf is the top of each factor.
inline bool is_bounded(const SemilinearSet& s) {
  for (auto& [L, region] : s.pieces())
    for (int i : mask_coords(L)) {
      Region proj = region;
      for (int v : mask_coords(L))
        if (v != i) proj = qlin::fm_eliminate(proj, v);
      if (!lower_bound_1d(proj, i)) return false;
    }
  return true;
}

inline bool is_definably_compact(const SemilinearSet& s) {
  return is_bounded(s) && is_closed(s);
}

// Coordinatewise translation x |-> x + shift (inf is fixed); a definable
// homeomorphism of Gamma_inf^n.
inline SemilinearSet translate(const SemilinearSet& s, const std::vector<Rat>& shift) {
  SemilinearSet out(s.ambient());
  for (auto& [L, region] : s.pieces()) {
    Region r(region.scope);
    for (const Polyhedron& d : region.disjuncts) {
      Polyhedron p;
      p.scope = d.scope;
      for (const Atom& a : d.atoms) {
        // y = x + shift, so substitute x_i = y_i - shift_i.
        LinForm f = a.form;
        for (int i : mask_coords(L)) {
          Rat k = f.coeff(i);
          if (k != 0) f.set_constant(f.constant() - k * shift[i]);
        }
        p.atoms.push_back(Atom(f, a.rel));
      }
      r.disjuncts.push_back(std::move(p));
    }
    out.set_piece(L, std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Definable completion: the coordinatewise map p(x) = (-x, 0) for x < 0 and
// (0, x) otherwise carries Gamma_inf into [0, inf] x [0, inf]; applying it in
// every coordinate embeds Gamma_inf^n into [0, inf]^{2n} homeomorphically.
// Coordinate i of the source pairs with (2i, 2i+1) of the image.

struct CompletionEmbedding {
  int source_ambient = 0;
  SemilinearSet image;

  Point map_point(const Point& x) const {
    Point y;
    for (const ExtRat& c : x) {
      if (c.is_inf()) {
        y.push_back(ExtRat(Rat(0)));
        y.push_back(ExtRat::infinity());
      } else if (c.finite() < 0) {
        y.push_back(ExtRat(-c.finite()));
        y.push_back(ExtRat(Rat(0)));
      } else {
        y.push_back(ExtRat(Rat(0)));
        y.push_back(c);
      }
    }
    return y;
  }
};

inline CompletionEmbedding completion_embed(const SemilinearSet& s) {
  int n = s.ambient();
  SemilinearSet image(2 * n);
  for (auto& [L, region] : s.pieces()) {
    std::vector<int> fin;
    for (int i : mask_coords(L)) fin.push_back(i);
    Mask M = 0;
    for (int i = 0; i < n; ++i) M |= Mask(1) << (2 * i);     // all u-coords finite
    for (int i : fin) M |= Mask(1) << (2 * i + 1);           // v-coords on support
    std::set<int> scope = mask_coords(M);

    // Sign pattern per finite coordinate: bit set = negative branch.
    for (std::uint32_t pat = 0; pat < (1u << fin.size()); ++pat) {
      for (const Polyhedron& d : region.disjuncts) {
        Polyhedron p;
        p.scope = scope;
        for (const Atom& a : d.atoms) {
          LinForm f(a.form.constant());
          for (size_t k = 0; k < fin.size(); ++k) {
            int i = fin[k];
            Rat c = a.form.coeff(i);
            if (c == 0) continue;
            if (pat & (1u << k))
              f.set_coeff(2 * i, -c);       // x_i = -u_i
            else
              f.set_coeff(2 * i + 1, c);    // x_i = v_i
          }
          p.atoms.push_back(Atom(f, a.rel));
        }
        for (size_t k = 0; k < fin.size(); ++k) {
          int i = fin[k];
          if (pat & (1u << k)) {
            p.atoms.push_back(qlin::atom_lt(Rat(-1) * LinForm::var(2 * i)));  // u > 0
            p.atoms.push_back(qlin::atom_eq(LinForm::var(2 * i + 1)));        // v = 0
          } else {
            p.atoms.push_back(qlin::atom_eq(LinForm::var(2 * i)));            // u = 0
            p.atoms.push_back(qlin::atom_le(Rat(-1) * LinForm::var(2 * i + 1)));
          }
        }
        for (int i = 0; i < n; ++i)
          if (!(L & (Mask(1) << i)))
            p.atoms.push_back(qlin::atom_eq(LinForm::var(2 * i)));  // u = 0 at inf
        Region r = image.piece(M);
        r.disjuncts.push_back(std::move(p));
        image.set_piece(M, std::move(r));
      }
    }
  }
  CompletionEmbedding e;
  e.source_ambient = n;
  e.image = std::move(image);
  return e;
}

// A definably compact pair (P, Q) presenting a locally closed X: P is the
// closure of a definable completion image of X, Q = P \ X is closed, and
// P \ Q is homeomorphic to X.
struct CompactPair {
  SemilinearSet P;
  SemilinearSet Q;
  SemilinearSet embedded_X;
  int x_dim = -1;
};

inline CompactPair compact_pair(const SemilinearSet& s) {
  if (!is_locally_closed(s)) {
    std::string msg = "compact_pair: input is not locally closed";
    SemilinearSet bad = intersect(closure(frontier(s)), s);
    if (auto w = sample_point(bad)) {
      msg += "; not open in its closure near (";
      for (size_t i = 0; i < w->size(); ++i)
        msg += (i ? ", " : "") + (*w)[i].str();
      msg += ")";
    }
    throw NotLocallyClosed(msg);
  }
  // Shift bounded-below coordinates to [0, inf] so the completion keeps the
  // negative branch empty (the u coordinates stay pinned at 0).
  SemilinearSet work = s;
  std::vector<Rat> shift(s.ambient(), Rat(0));
  bool any_shift = false;
  for (int i = 0; i < s.ambient(); ++i) {
    std::optional<Rat> lo = Rat(0);
    for (auto& [L, region] : s.pieces()) {
      if (!(L & (Mask(1) << i))) continue;
      Region proj = region;
      for (int v : mask_coords(L))
        if (v != i) proj = qlin::fm_eliminate(proj, v);
      auto b = lower_bound_1d(proj, i);
      if (!b) {
        lo = std::nullopt;
        break;
      }
      if (*b < *lo) lo = b;
    }
    if (lo && *lo < 0) {
      shift[i] = -*lo;
      any_shift = true;
    }
  }
  if (any_shift) work = translate(work, shift);

  CompactPair pair;
  CompletionEmbedding emb = completion_embed(work);
  pair.embedded_X = emb.image;
  pair.P = closure(emb.image);
  pair.Q = subtract(pair.P, emb.image);
  pair.x_dim = dimension(s);
  return pair;
}

// ---------------------------------------------------------------------------
// Product with a parameter interval and related shape helpers.

struct Interval {
  ExtRat lo, hi;      // lo <= hi; hi may be inf
  bool lo_closed = true, hi_closed = true;
  bool lo_unbounded = false;  // (-inf, ...)
};

// S x I placed in the last coordinate of Gamma_inf^{n+1}.
inline SemilinearSet cylinder(const SemilinearSet& s, const Interval& iv) {
  int n = s.ambient();
  SemilinearSet out(n + 1);
  for (auto& [L, region] : s.pieces()) {
    // Finite part of the interval.
    bool finite_nonempty = true;
    if (!iv.lo_unbounded && iv.lo.is_inf()) finite_nonempty = false;
    if (finite_nonempty && !iv.lo_unbounded && !iv.hi.is_inf()) {
      if (iv.lo.finite() > iv.hi.finite()) finite_nonempty = false;
      if (iv.lo.finite() == iv.hi.finite() && !(iv.lo_closed && iv.hi_closed))
        finite_nonempty = false;
    }
    if (finite_nonempty) {
      Mask M = L | (Mask(1) << n);
      Region r(mask_coords(M));
      for (const Polyhedron& d : region.disjuncts) {
        Polyhedron p;
        p.scope = r.scope;
        p.atoms = d.atoms;
        if (!iv.lo_unbounded) {
          LinForm f = Rat(-1) * LinForm::var(n);
          f.set_constant(iv.lo.finite());
          p.atoms.push_back(Atom(f, iv.lo_closed ? Rel::LE : Rel::LT));
        }
        if (!iv.hi.is_inf()) {
          LinForm f = LinForm::var(n);
          f.set_constant(-iv.hi.finite());
          p.atoms.push_back(Atom(f, iv.hi_closed ? Rel::LE : Rel::LT));
        }
        r.disjuncts.push_back(std::move(p));
      }
      out.set_piece(M, qlin::unite(out.piece(M), r));
    }
    if (iv.hi.is_inf() && iv.hi_closed)
      out.set_piece(L, qlin::unite(out.piece(L), region));  // x_{n} = inf slice
  }
  return out;
}

// Coordinate permutation: new coordinate j carries old coordinate perm[j].
inline SemilinearSet permute(const SemilinearSet& s, const std::vector<int>& perm) {
  int n = s.ambient();
  SemilinearSet out(n);
  for (auto& [L, region] : s.pieces()) {
    Mask M = 0;
    std::map<int, int> old_to_new;
    for (int j = 0; j < n; ++j) old_to_new[perm[j]] = j;
    for (int i = 0; i < n; ++i)
      if (L & (Mask(1) << i)) M |= Mask(1) << old_to_new[i];
    Region r(mask_coords(M));
    for (const Polyhedron& d : region.disjuncts) {
      Polyhedron p;
      p.scope = r.scope;
      for (const Atom& a : d.atoms) {
        LinForm f(a.form.constant());
        for (auto& [i, c] : a.form.coeffs()) f.set_coeff(old_to_new[i], c);
        p.atoms.push_back(Atom(f, a.rel));
      }
      r.disjuncts.push_back(std::move(p));
    }
    out.set_piece(M, std::move(r));
  }
  return out;
}

// Fiber over the last coordinate: { x : (x, w) in S }.
inline SemilinearSet fiber_last(const SemilinearSet& s, const ExtRat& w) {
  int n = s.ambient();
  if (n == 0) throw DimensionMismatch("fiber of a 0-dimensional set");
  int last = n - 1;
  SemilinearSet out(n - 1);
  for (auto& [L, region] : s.pieces()) {
    bool has_last = (L & (Mask(1) << last)) != 0;
    if (w.is_inf() != !has_last) continue;
    Mask M = L & ~(Mask(1) << last);
    Region r(mask_coords(M));
    for (const Polyhedron& d : region.disjuncts) {
      Polyhedron p;
      p.scope = r.scope;
      for (const Atom& a : d.atoms) {
        LinForm f = w.is_inf() ? a.form : a.form.substituted(last, LinForm(w.finite()));
        p.atoms.push_back(Atom(std::move(f), a.rel));
      }
      r.disjuncts.push_back(std::move(p));
    }
    out.set_piece(M, std::move(r));
  }
  return out;
}

// Largest |constant| over all atoms (after normalization) plus one: every
// bounded feature of the set lives below this threshold.
inline Rat feature_bound(const SemilinearSet& s) {
  Rat m(0);
  for (auto& [L, region] : s.pieces())
    for (const auto& d : region.disjuncts)
      for (const auto& a : d.atoms) {
        Rat c = a.form.normalized().constant();
        if (c < 0) c = -c;
        if (c > m) m = c;
      }
  return m + 1;
}

}  // namespace semitop::stratal
