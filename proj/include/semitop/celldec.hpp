// Cell decomposition of Gamma_inf^n adapted to given semilinear sets,
// refinement to a regular complex with a verified face poset, definably
// connected components, and the exhausting cores C_(t,s) of cells.
//
// Decomposition is a linear variant of cylindrical decomposition: collect
// the boundary value of every atom with respect to its top coordinate,
// close the collection under pairwise differences while projecting down,
// then lift stratum by stratum, sorting the applicable bound functions over
// every base cell and interleaving graph and band cells, always topped by
// the graph of the constant inf.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "semitop/errors.hpp"
#include "semitop/qlin.hpp"
#include "semitop/stratal.hpp"

namespace semitop::celldec {

using qlin::Atom;
using qlin::LinForm;
using qlin::Polyhedron;
using qlin::Region;
using qlin::Rel;
using stratal::Mask;
using stratal::SemilinearSet;

// Bound function of a cell level: affine in the base coordinates, the
// constant inf (tops of bands, graphs over the inf stratum), or the absent
// lower bound of a (-inf, g) band.
struct CellFn {
  enum class Kind { Affine, ConstInf, NegInf };
  Kind kind = Kind::Affine;
  LinForm form;  // meaningful for Affine only

  static CellFn affine(LinForm f) { return {Kind::Affine, std::move(f)}; }
  static CellFn const_inf() { return {Kind::ConstInf, {}}; }
  static CellFn neg_inf() { return {Kind::NegInf, {}}; }
};

struct CellLevel {
  bool is_graph = false;
  CellFn h;        // graph function (Affine or ConstInf)
  CellFn lo, hi;   // band bounds: lo in {Affine, NegInf}, hi in {Affine, ConstInf}
};

struct Cell {
  int ambient = 0;
  std::vector<CellLevel> levels;
  Mask support = 0;
  Polyhedron poly;                // trace on the support stratum
  std::map<int, Rat> sample;      // witness for the finite coordinates
  int dim = 0;                    // number of band levels

  SemilinearSet denotation() const {
    SemilinearSet s(ambient);
    Region r(stratal::mask_coords(support));
    r.disjuncts.push_back(poly);
    s.set_piece(support, std::move(r));
    return s;
  }

  stratal::Point sample_point() const {
    stratal::Point p;
    for (int i = 0; i < ambient; ++i) {
      if (support & (Mask(1) << i))
        p.push_back(ExtRat(sample.at(i)));
      else
        p.push_back(ExtRat::infinity());
    }
    return p;
  }
};

struct Decomposition {
  int ambient = 0;
  std::vector<Cell> cells;
};

namespace detail {

// Canonical key for pooled forms: sign-normalized so f and -f collide.
inline LinForm pool_key(const LinForm& f) {
  if (f.is_constant()) return LinForm();
  Rat lead = f.coeffs().begin()->second;
  return Rat(1) / lead * f;
}

// Coordinate bounding interval of a convex cell trace, for cheap adjacency
// prefilters.  Unset ends mean unbounded.
struct Box {
  std::vector<std::optional<Rat>> lo, hi;  // indexed by ambient coordinate
  Mask support = 0;
};

inline Box cell_box(const Cell& c) {
  Box b;
  b.support = c.support;
  b.lo.resize(c.ambient);
  b.hi.resize(c.ambient);
  for (int i : stratal::mask_coords(c.support)) {
    Polyhedron p = c.poly;
    std::optional<Polyhedron> cur = p;
    for (int v : stratal::mask_coords(c.support))
      if (v != i && cur) cur = qlin::fm_step(*cur, v);
    if (!cur) continue;
    for (const Atom& a : cur->atoms) {
      Rat k = a.form.coeff(i);
      if (k == 0) continue;
      Rat bound = -a.form.constant() / k;
      if (a.rel == Rel::EQ) {
        b.lo[i] = b.hi[i] = bound;
      } else if (k > 0) {
        if (!b.hi[i] || bound < *b.hi[i]) b.hi[i] = bound;
      } else {
        if (!b.lo[i] || bound > *b.lo[i]) b.lo[i] = bound;
      }
    }
  }
  return b;
}

// Can the closed hulls of two cells possibly meet?  Coordinates outside a
// cell's support sit exactly at inf; a finite trace unbounded above reaches
// inf in the closure.
inline bool boxes_may_touch(const Box& a, const Box& b, int n) {
  for (int i = 0; i < n; ++i) {
    bool a_fin = a.support & (Mask(1) << i);
    bool b_fin = b.support & (Mask(1) << i);
    if (!a_fin && !b_fin) continue;
    if (!a_fin) {
      if (b.hi[i]) return false;  // b stays below some finite bound
      continue;
    }
    if (!b_fin) {
      if (a.hi[i]) return false;
      continue;
    }
    if (a.lo[i] && b.hi[i] && *a.lo[i] > *b.hi[i]) return false;
    if (b.lo[i] && a.hi[i] && *b.lo[i] > *a.hi[i]) return false;
  }
  return true;
}

}  // namespace detail

// Decomposition of Gamma_inf^n into cells, adapted to the targets: every
// target is a union of cells.  When roi is given, branches of the lifting
// tree that cannot meet roi are pruned (the result then only covers roi's
// neighborhood in the tree, which is what the complex machinery needs).
inline Decomposition decompose(int n, const std::vector<SemilinearSet>& targets,
                               const std::optional<SemilinearSet>& roi = std::nullopt,
                               bool verify_order = false) {
  for (auto& t : targets)
    if (t.ambient() != n) throw DimensionMismatch("decompose: ambient mismatch");
  if (roi && roi->ambient() != n) throw DimensionMismatch("decompose: roi mismatch");

  // ---- projection phase: boundary forms per level, closed under pairwise
  // differences pushed to lower levels.
  std::set<LinForm> pool;
  auto add_pool = [&](const LinForm& f) {
    if (f.is_constant()) return;
    pool.insert(detail::pool_key(f));
  };
  for (auto& t : targets)
    for (auto& [L, region] : t.pieces())
      for (auto& d : region.disjuncts)
        for (auto& a : d.atoms) add_pool(a.form);

  std::vector<std::set<LinForm>> bounds(n);  // bounds[k]: forms over coords < k
  for (int k = n - 1; k >= 0; --k) {
    for (const LinForm& f : pool) {
      if (f.top_var() != k) continue;
      Rat a = f.coeff(k);
      LinForm rest = f;
      rest.set_coeff(k, Rat(0));
      bounds[k].insert(Rat(-1) / a * rest);
    }
    std::vector<LinForm> bs(bounds[k].begin(), bounds[k].end());
    for (size_t i = 0; i < bs.size(); ++i)
      for (size_t j = i + 1; j < bs.size(); ++j) add_pool(bs[i] - bs[j]);
  }

  // Projections of roi to the first k coordinates, for pruning.
  std::vector<SemilinearSet> roi_proj;
  if (roi) {
    roi_proj.resize(n + 1, SemilinearSet(0));
    SemilinearSet cur = *roi;
    roi_proj[n] = cur;
    for (int k = n - 1; k >= 0; --k) {
      SemilinearSet proj(k);
      for (auto& [L, region] : cur.pieces()) {
        Mask M = L & ((Mask(1) << k) - 1);
        Region r = region;
        if (L & (Mask(1) << k)) r = qlin::fm_eliminate(r, k);
        proj.set_piece(M, qlin::unite(proj.piece(M), r));
      }
      roi_proj[k] = proj;
      cur = std::move(proj);
    }
  }

  // ---- lifting phase.
  std::vector<Cell> level;
  Cell root;
  root.ambient = n;
  level.push_back(root);

  for (int k = 0; k < n; ++k) {
    std::vector<Cell> next;
    for (const Cell& base : level) {
      std::vector<LinForm> usable;
      for (const LinForm& b : bounds[k]) {
        bool ok = true;
        for (auto& [v, c] : b.coeffs())
          if (!(base.support & (Mask(1) << v))) ok = false;
        if (ok) usable.push_back(b);
      }
      // Order the bound functions over this base cell.  Sign-invariance of
      // the pooled differences makes the sample evaluation exact.
      std::vector<std::pair<Rat, LinForm>> vals;
      for (auto& b : usable) vals.emplace_back(b.eval(base.sample), b);
      std::sort(vals.begin(), vals.end(),
                [](auto& x, auto& y) { return x.first < y.first; });
      std::vector<std::pair<Rat, LinForm>> distinct;
      for (auto& v : vals) {
        if (!distinct.empty() && distinct.back().first == v.first) continue;
        distinct.push_back(v);
      }
      if (verify_order)
        for (size_t i = 0; i < vals.size(); ++i)
          for (size_t j = i + 1; j < vals.size(); ++j) {
            Polyhedron test = base.poly;
            LinForm d = vals[i].second - vals[j].second;
            bool same_val = vals[i].first == vals[j].first;
            test.atoms.push_back(same_val ? qlin::atom_lt(d)
                                          : qlin::atom_le(Rat(-1) * d));
            Polyhedron test2 = base.poly;
            test2.atoms.push_back(same_val ? qlin::atom_lt(Rat(-1) * d)
                                           : qlin::atom_eq(d));
            if (!qlin::polyhedron_empty(test) || (same_val && !qlin::polyhedron_empty(test2)))
              throw InternalError("decompose: bound order not invariant on base cell");
          }

      auto push = [&](Cell c) {
        if (roi) {
          const SemilinearSet& pr = roi_proj[k + 1];
          Region piece = pr.piece(c.support);
          Region mine(stratal::mask_coords(c.support));
          mine.disjuncts.push_back(c.poly);
          if (qlin::is_empty(qlin::intersect(mine, piece))) return;
        }
        next.push_back(std::move(c));
      };

      auto band = [&](const CellFn& lo, const CellFn& hi) {
        Cell c = base;
        CellLevel lv;
        lv.is_graph = false;
        lv.lo = lo;
        lv.hi = hi;
        c.levels.push_back(lv);
        c.support |= Mask(1) << k;
        c.poly.scope.insert(k);
        ++c.dim;
        Rat sample_val;
        if (lo.kind == CellFn::Kind::Affine) {
          LinForm f = lo.form;            // lo < x_k
          f.set_coeff(k, Rat(-1));
          c.poly.atoms.push_back(qlin::atom_lt(f));
        }
        if (hi.kind == CellFn::Kind::Affine) {
          LinForm f = LinForm::var(k);    // x_k < hi
          f -= hi.form;
          c.poly.atoms.push_back(qlin::atom_lt(f));
        }
        if (lo.kind == CellFn::Kind::Affine && hi.kind == CellFn::Kind::Affine)
          sample_val = (lo.form.eval(base.sample) + hi.form.eval(base.sample)) / 2;
        else if (lo.kind == CellFn::Kind::Affine)
          sample_val = lo.form.eval(base.sample) + 1;
        else if (hi.kind == CellFn::Kind::Affine)
          sample_val = hi.form.eval(base.sample) - 1;
        else
          sample_val = 0;
        c.sample[k] = sample_val;
        push(std::move(c));
      };
      auto graph = [&](const LinForm& h) {
        Cell c = base;
        CellLevel lv;
        lv.is_graph = true;
        lv.h = CellFn::affine(h);
        c.levels.push_back(lv);
        c.support |= Mask(1) << k;
        c.poly.scope.insert(k);
        LinForm f = LinForm::var(k);
        f -= h;
        c.poly.atoms.push_back(qlin::atom_eq(f));
        c.sample[k] = h.eval(base.sample);
        push(std::move(c));
      };

      if (distinct.empty()) {
        band(CellFn::neg_inf(), CellFn::const_inf());
      } else {
        band(CellFn::neg_inf(), CellFn::affine(distinct.front().second));
        for (size_t i = 0; i < distinct.size(); ++i) {
          graph(distinct[i].second);
          if (i + 1 < distinct.size())
            band(CellFn::affine(distinct[i].second),
                 CellFn::affine(distinct[i + 1].second));
        }
        band(CellFn::affine(distinct.back().second), CellFn::const_inf());
      }
      {  // graph of the constant inf: the top stratum of the fiber
        Cell c = base;
        CellLevel lv;
        lv.is_graph = true;
        lv.h = CellFn::const_inf();
        c.levels.push_back(lv);
        push(std::move(c));
      }
    }
    level = std::move(next);
  }

  Decomposition d;
  d.ambient = n;
  d.cells = std::move(level);
  return d;
}

// Indices of the cells lying inside s.  Valid whenever the decomposition was
// adapted to s: each cell is then inside or disjoint, so the sample decides.
inline std::vector<int> cells_inside(const Decomposition& d, const SemilinearSet& s) {
  std::vector<int> out;
  for (size_t i = 0; i < d.cells.size(); ++i)
    if (s.contains(d.cells[i].sample_point())) out.push_back(static_cast<int>(i));
  return out;
}

// Definably connected components, as clopen unions of adapted cells.  Two
// cells inside S are adjacent when one meets the closure of the other.
inline std::vector<SemilinearSet> connected_components(const SemilinearSet& s) {
  if (is_empty(s)) return {};
  Decomposition d = decompose(s.ambient(), {s}, s);
  std::vector<int> in = cells_inside(d, s);

  std::vector<SemilinearSet> closures;
  std::vector<detail::Box> boxes;
  closures.reserve(in.size());
  for (int idx : in) {
    closures.push_back(stratal::closure(d.cells[idx].denotation()));
    boxes.push_back(detail::cell_box(d.cells[idx]));
  }

  std::vector<int> parent(in.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (size_t i = 0; i < in.size(); ++i)
    for (size_t j = i + 1; j < in.size(); ++j) {
      if (find(i) == find(j)) continue;
      if (!detail::boxes_may_touch(boxes[i], boxes[j], s.ambient())) continue;
      const Cell& ci = d.cells[in[i]];
      const Cell& cj = d.cells[in[j]];
      bool adj = closures[i].contains(cj.sample_point()) ||
                 closures[j].contains(ci.sample_point());
      if (!adj) {
        adj = !stratal::is_empty(stratal::intersect(closures[i], cj.denotation())) ||
              !stratal::is_empty(stratal::intersect(closures[j], ci.denotation()));
      }
      if (adj) parent[find(i)] = find(j);
    }

  std::map<int, SemilinearSet> comps;
  for (size_t i = 0; i < in.size(); ++i) {
    int r = find(static_cast<int>(i));
    auto it = comps.find(r);
    if (it == comps.end())
      comps.emplace(r, d.cells[in[i]].denotation());
    else
      it->second = stratal::unite(it->second, d.cells[in[i]].denotation());
  }
  std::vector<SemilinearSet> out;
  for (auto& [r, c] : comps) out.push_back(std::move(c));
  return out;
}

// Finite cell complex with face poset satisfying the frontier condition.
struct RegularComplex {
  int ambient = 0;
  std::vector<Cell> cells;
  std::vector<SemilinearSet> closures;          // cached closure per cell
  std::vector<std::vector<int>> faces;          // proper faces, by index
  std::vector<int> dims;

  int dimension() const {
    int m = -1;
    for (int d : dims) m = std::max(m, d);
    return m;
  }
};

namespace detail {

// Certify the closure structure of one cell at infinity: beyond a large
// enough threshold, the escaping directions must split into blocks of at
// most two coordinates, each block decoupled from the bounded slice.  Axis
// blocks are products; a planar block compactifies like the ambient-2
// wedge pattern crossed with its slice.  Returns false when no threshold
// certifies the cell.
inline bool end_pattern_ok(const Cell& c, const std::vector<int>& unbounded,
                           const Rat& threshold) {
  for (std::uint32_t pat = 1; pat < (1u << unbounded.size()); ++pat) {
    std::set<int> J;
    for (size_t t = 0; t < unbounded.size(); ++t)
      if (pat & (1u << t)) J.insert(unbounded[t]);
    if (J.size() <= 1) continue;

    Polyhedron p = c.poly;
    for (int j : J) {
      LinForm f(threshold);  // x_j > threshold
      f.set_coeff(j, Rat(-1));
      p.atoms.push_back(qlin::atom_lt(f));
    }
    for (int i : unbounded)
      if (!J.count(i)) {
        LinForm f = LinForm::var(i);
        f.set_constant(-threshold);
        p.atoms.push_back(qlin::atom_le(f));
      }
    if (qlin::polyhedron_empty(p)) continue;
    Polyhedron t = qlin::tighten(p);  // drop constraints implied beyond the threshold

    // Coupling graph over J from the surviving constraints.
    std::map<int, int> comp;
    for (int j : J) comp[j] = j;
    std::function<int(int)> find = [&](int x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (const Atom& a : t.atoms) {
      std::vector<int> jv;
      bool slice_coupled = false;
      for (auto& [v, coef] : a.form.coeffs()) {
        if (J.count(v))
          jv.push_back(v);
        else
          slice_coupled = true;
      }
      if (jv.empty()) continue;
      if (slice_coupled) return false;
      if (jv.size() == 1) continue;
      if (jv.size() > 2) return false;
      comp[find(jv[0])] = find(jv[1]);
    }
    std::map<int, int> size;
    for (int j : J) ++size[find(j)];
    for (auto& [r, s] : size)
      if (s > 2) return false;
  }
  return true;
}

inline bool end_geometry_ok(const Cell& c, const Rat& threshold) {
  std::vector<int> unbounded;
  for (int i : stratal::mask_coords(c.support)) {
    Polyhedron p = c.poly;
    LinForm f(threshold);  // threshold - x_i < 0, i.e. x_i > threshold
    f.set_coeff(i, Rat(-1));
    p.atoms.push_back(qlin::atom_lt(f));
    if (!qlin::polyhedron_empty(p)) unbounded.push_back(i);
  }
  if (unbounded.size() <= 1) return true;
  Rat t = threshold;
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (end_pattern_ok(c, unbounded, t)) return true;
    t = 2 * t + 4;
  }
  return false;
}

}  // namespace detail

// Refine a decomposition over a definably compact region of interest into a
// complex whose cells satisfy the frontier condition (verified symbolically;
// never returns an unverified complex).
inline RegularComplex refine_to_complex(const Decomposition& d0, const SemilinearSet& roi,
                                        const std::vector<SemilinearSet>& extra_targets = {}) {
  int n = roi.ambient();
  if (!stratal::is_definably_compact(roi))
    throw NotCompact("refine_to_complex: region of interest is not definably compact");

  std::vector<SemilinearSet> targets = extra_targets;
  targets.push_back(roi);
  for (const Cell& c : d0.cells) {
    SemilinearSet den = c.denotation();
    if (!stratal::is_empty(stratal::intersect(den, roi))) targets.push_back(den);
  }

  size_t initial_cells = std::max<size_t>(d0.cells.size(), 4);
  size_t max_rounds = 2 * initial_cells * initial_cells;

  Decomposition d;
  for (size_t round = 0; round < max_rounds; ++round) {
    d = decompose(n, targets, roi);
    std::vector<int> in = cells_inside(d, roi);

    std::vector<SemilinearSet> closures;
    std::vector<detail::Box> boxes;
    for (int idx : in) {
      closures.push_back(stratal::closure(d.cells[idx].denotation()));
      boxes.push_back(detail::cell_box(d.cells[idx]));
    }

    Rat threshold = stratal::feature_bound(roi);
    for (auto& cl : closures) {
      Rat f = stratal::feature_bound(cl);
      if (f > threshold) threshold = f;
    }
    if (n >= 3)
      for (int idx : in)
        if (!detail::end_geometry_ok(d.cells[idx], threshold))
          throw UnsupportedGeometry(
              "refine_to_complex: cell escapes to infinity in a non-product "
              "pattern that the engine cannot certify");

    // frontier condition: every cell meeting the closure of another lies
    // inside that closure.
    bool ok = true;
    std::vector<SemilinearSet> violations;
    std::vector<std::vector<int>> faces(in.size());
    for (size_t i = 0; i < in.size() && ok; ++i) {
      for (size_t j = 0; j < in.size(); ++j) {
        if (i == j) continue;
        if (!detail::boxes_may_touch(boxes[i], boxes[j], n)) continue;
        const Cell& cj = d.cells[in[j]];
        SemilinearSet meet = stratal::intersect(closures[i], cj.denotation());
        if (stratal::is_empty(meet)) continue;
        if (stratal::subset(cj.denotation(), closures[i])) {
          faces[i].push_back(static_cast<int>(j));
        } else {
          ok = false;
          violations.push_back(closures[i]);
          break;
        }
      }
    }
    if (!ok) {
      for (auto& v : violations) targets.push_back(v);
      continue;
    }

    RegularComplex rc;
    rc.ambient = n;
    for (size_t i = 0; i < in.size(); ++i) {
      rc.cells.push_back(d.cells[in[i]]);
      rc.closures.push_back(closures[i]);
      rc.dims.push_back(d.cells[in[i]].dim);
    }
    rc.faces = std::move(faces);
    // grading sanity: proper faces have strictly smaller dimension.
    for (size_t i = 0; i < rc.faces.size(); ++i)
      for (int j : rc.faces[i])
        if (rc.dims[j] >= rc.dims[i])
          throw InternalError("refine_to_complex: face relation is not graded");
    return rc;
  }
  throw UnsupportedGeometry("refine_to_complex: frontier condition did not stabilize");
}

// ---------------------------------------------------------------------------
// The exhausting family of closed bounded cores of a cell inside [0,inf]^m.
// Bands with a finite top shrink by gamma = min{(g-f)/2, t}; bands running
// to inf are cut at f+s and shrink by gamma = min{s/2, t}; graphs restrict
// to the core of the base; singleton levels are kept.

inline SemilinearSet nonneg_box(int n) {
  SemilinearSet s(n);
  Mask all = (Mask(1) << n) - 1;
  for (Mask L = 0;; ++L) {
    std::vector<Atom> atoms;
    for (int i : stratal::mask_coords(L))
      atoms.push_back(qlin::atom_le(Rat(-1) * LinForm::var(i)));
    s.set_piece(L, Region::of(stratal::mask_coords(L), std::move(atoms)));
    if (L == all) break;
  }
  return s;
}

inline SemilinearSet cell_core(const Cell& c, const Rat& t, const Rat& s) {
  if (t <= 0 || s <= 0) throw std::invalid_argument("cell_core: need 0 < t, s");
  if (!stratal::subset(c.denotation(), nonneg_box(c.ambient)))
    throw std::invalid_argument("cell_core: cell is not contained in [0,inf]^m");

  // Disjunction of conjunctions over the support coordinates.
  std::vector<std::vector<Atom>> disjuncts{{}};
  int k = -1;
  for (const CellLevel& lv : c.levels) {
    ++k;
    if (lv.is_graph) {
      if (lv.h.kind == CellFn::Kind::ConstInf) continue;  // coordinate stays inf
      LinForm f = LinForm::var(k);
      f -= lv.h.form;
      for (auto& dj : disjuncts) dj.push_back(qlin::atom_eq(f));
      continue;
    }
    if (lv.lo.kind != CellFn::Kind::Affine)
      throw std::invalid_argument("cell_core: band without finite lower bound");
    const LinForm& f = lv.lo.form;
    if (lv.hi.kind == CellFn::Kind::ConstInf) {
      Rat gamma = std::min(Rat(s / 2), t);
      // f + gamma <= x_k <= f + s - gamma
      LinForm lo = f;
      lo.set_constant(lo.constant() + gamma);
      lo.set_coeff(k, lo.coeff(k) - 1);              // f + gamma - x_k <= 0
      LinForm hi = LinForm::var(k) - f;
      hi.set_constant(hi.constant() - s + gamma);    // x_k - f - s + gamma <= 0
      for (auto& dj : disjuncts) {
        dj.push_back(qlin::atom_le(lo));
        dj.push_back(qlin::atom_le(hi));
      }
    } else {
      const LinForm& g = lv.hi.form;
      // Case split on min{(g-f)/2, t}.
      std::vector<std::vector<Atom>> out;
      for (auto& dj : disjuncts) {
        {  // narrow band: g - f <= 2t, core pinches to the middle graph.
          auto d2 = dj;
          LinForm width = g - f;
          width.set_constant(width.constant() - 2 * t);
          d2.push_back(qlin::atom_le(width));          // g - f - 2t <= 0
          LinForm mid = Rat(2) * LinForm::var(k) - f - g;
          d2.push_back(qlin::atom_eq(mid));            // 2 x_k = f + g
          out.push_back(std::move(d2));
        }
        {  // wide band: g - f >= 2t, core is [f + t, g - t].
          auto d2 = dj;
          LinForm width = Rat(-1) * (g - f);
          width.set_constant(width.constant() + 2 * t);
          d2.push_back(qlin::atom_le(width));          // 2t - (g - f) <= 0
          LinForm lo = f;
          lo.set_constant(lo.constant() + t);
          lo.set_coeff(k, lo.coeff(k) - 1);
          d2.push_back(qlin::atom_le(lo));             // f + t <= x_k
          LinForm hi = LinForm::var(k) - g;
          hi.set_constant(hi.constant() + t);
          d2.push_back(qlin::atom_le(hi));             // x_k <= g - t
          out.push_back(std::move(d2));
        }
      }
      disjuncts = std::move(out);
    }
  }

  SemilinearSet core(c.ambient);
  Region r(stratal::mask_coords(c.support));
  for (auto& dj : disjuncts) r.disjuncts.push_back(Polyhedron(r.scope, dj));
  core.set_piece(c.support, std::move(r));
  return core;
}

// Convenience: build a cell level by level from (graph form | band bounds).
struct CellBuilder {
  Cell cell;

  explicit CellBuilder(int ambient) {
    cell.ambient = ambient;
  }

  CellBuilder& graph(LinForm h) {
    int k = static_cast<int>(cell.levels.size());
    CellLevel lv;
    lv.is_graph = true;
    lv.h = CellFn::affine(h);
    cell.levels.push_back(lv);
    cell.support |= Mask(1) << k;
    cell.poly.scope.insert(k);
    LinForm f = LinForm::var(k);
    f -= h;
    cell.poly.atoms.push_back(qlin::atom_eq(f));
    cell.sample[k] = h.eval(cell.sample);
    return *this;
  }
  CellBuilder& graph_inf() {
    CellLevel lv;
    lv.is_graph = true;
    lv.h = CellFn::const_inf();
    cell.levels.push_back(lv);
    return *this;
  }
  CellBuilder& band(std::optional<LinForm> lo, std::optional<LinForm> hi) {
    int k = static_cast<int>(cell.levels.size());
    CellLevel lv;
    lv.is_graph = false;
    lv.lo = lo ? CellFn::affine(*lo) : CellFn::neg_inf();
    lv.hi = hi ? CellFn::affine(*hi) : CellFn::const_inf();
    cell.levels.push_back(lv);
    cell.support |= Mask(1) << k;
    cell.poly.scope.insert(k);
    ++cell.dim;
    if (lo) {
      LinForm f = *lo;
      f.set_coeff(k, f.coeff(k) - 1);
      cell.poly.atoms.push_back(qlin::atom_lt(f));
    }
    if (hi) {
      LinForm f = LinForm::var(k);
      f -= *hi;
      cell.poly.atoms.push_back(qlin::atom_lt(f));
    }
    if (lo && hi)
      cell.sample[k] = (lo->eval(cell.sample) + hi->eval(cell.sample)) / 2;
    else if (lo)
      cell.sample[k] = lo->eval(cell.sample) + 1;
    else if (hi)
      cell.sample[k] = hi->eval(cell.sample) - 1;
    else
      cell.sample[k] = 0;
    return *this;
  }
};

}  // namespace semitop::celldec
