// Exact rational linear arithmetic and quantifier elimination over the
// ordered divisible group (Q, <, +).  Everything downstream (topology,
// decomposition, cohomology) reduces to the operations in this header.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace semitop {

// Exact rational scalar.  Stored in lowest terms with positive denominator
// (cpp_rational maintains both invariants).
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(long n, long d = 1) { return Rat(n, d); }

inline std::string rat_to_string(const Rat& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

// Element of Gamma_inf = Q ∪ {inf}.  inf is the top element; x + inf = inf.
// Subtraction that would need -inf is rejected.
class ExtRat {
 public:
  ExtRat() : inf_(false), v_(0) {}
  ExtRat(Rat v) : inf_(false), v_(std::move(v)) {}       // NOLINT(implicit)
  ExtRat(long v) : inf_(false), v_(v) {}                 // NOLINT(implicit)
  static ExtRat infinity() { ExtRat e; e.inf_ = true; return e; }

  bool is_inf() const { return inf_; }
  const Rat& finite() const {
    if (inf_) throw std::domain_error("ExtRat: inf has no finite value");
    return v_;
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }

  friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtRat(a.v_ + b.v_);
  }
  // Partial: defined only when the result stays in Gamma_inf.
  friend ExtRat operator-(const ExtRat& a, const ExtRat& b) {
    if (b.inf_) throw std::domain_error("ExtRat: subtraction of inf");
    if (a.inf_) return infinity();
    return ExtRat(a.v_ - b.v_);
  }

  std::string str() const { return inf_ ? "inf" : rat_to_string(v_); }

 private:
  bool inf_;
  Rat v_;
};

namespace qlin {

// A rational affine form  sum_i coeffs[i] * x_i + constant  over finitely
// many coordinates.  Zero coefficients are never stored.
class LinForm {
 public:
  LinForm() = default;
  explicit LinForm(Rat c) : constant_(std::move(c)) {}
  static LinForm var(int i) {
    LinForm f;
    f.coeffs_[i] = 1;
    return f;
  }

  const std::map<int, Rat>& coeffs() const { return coeffs_; }
  const Rat& constant() const { return constant_; }
  Rat coeff(int i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? Rat(0) : it->second;
  }
  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }

  void set_coeff(int i, Rat c) {
    if (c == 0)
      coeffs_.erase(i);
    else
      coeffs_[i] = std::move(c);
  }
  void set_constant(Rat c) { constant_ = std::move(c); }

  // Largest coordinate index present, or -1 for constants.
  int top_var() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  std::set<int> vars() const {
    std::set<int> s;
    for (auto& [i, c] : coeffs_) s.insert(i);
    return s;
  }

  LinForm& operator+=(const LinForm& o) {
    for (auto& [i, c] : o.coeffs_) set_coeff(i, coeff(i) + c);
    constant_ += o.constant_;
    return *this;
  }
  LinForm& operator-=(const LinForm& o) {
    for (auto& [i, c] : o.coeffs_) set_coeff(i, coeff(i) - c);
    constant_ -= o.constant_;
    return *this;
  }
  friend LinForm operator+(LinForm a, const LinForm& b) { return a += b; }
  friend LinForm operator-(LinForm a, const LinForm& b) { return a -= b; }
  friend LinForm operator*(const Rat& k, const LinForm& f) {
    LinForm g;
    if (k == 0) return g;
    for (auto& [i, c] : f.coeffs_) g.coeffs_[i] = k * c;
    g.constant_ = k * f.constant_;
    return g;
  }
  friend bool operator==(const LinForm& a, const LinForm& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator<(const LinForm& a, const LinForm& b) {
    if (a.coeffs_ != b.coeffs_) return a.coeffs_ < b.coeffs_;
    return a.constant_ < b.constant_;
  }

  Rat eval(const std::map<int, Rat>& point) const {
    Rat v = constant_;
    for (auto& [i, c] : coeffs_) v += c * point.at(i);
    return v;
  }

  // Replace x_v by the form `by` (which must not mention v).
  LinForm substituted(int v, const LinForm& by) const {
    LinForm g = *this;
    Rat a = g.coeff(v);
    if (a == 0) return g;
    g.set_coeff(v, Rat(0));
    g += a * by;
    return g;
  }

  // Scale so the leading coefficient (lowest index) is +1 or -1; constants
  // scale to 0 or +1/-1.  Used for canonical keying only.
  LinForm normalized() const {
    if (coeffs_.empty()) {
      LinForm g;
      if (constant_ != 0) g.constant_ = constant_ > 0 ? 1 : -1;
      return g;
    }
    Rat lead = coeffs_.begin()->second;
    Rat k = lead > 0 ? lead : Rat(-lead);
    return Rat(1) / k * *this;
  }

  std::string str(const std::string& prefix = "x") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [i, c] : coeffs_) {
      if (!first) os << (c > 0 ? " + " : " - ");
      else if (c < 0) os << "-";
      first = false;
      Rat a = c > 0 ? c : Rat(-c);
      if (a != 1) os << rat_to_string(a) << "*";
      os << prefix << (i + 1);
    }
    if (constant_ != 0) {
      if (!first) os << (constant_ > 0 ? " + " : " - ");
      else if (constant_ < 0) os << "-";
      Rat a = constant_ > 0 ? constant_ : Rat(-constant_);
      os << rat_to_string(a);
    }
    return os.str();
  }

 private:
  std::map<int, Rat> coeffs_;
  Rat constant_ = 0;
};

enum class Rel : std::uint8_t { LT, LE, EQ };

// Atomic constraint "form rel 0".
struct Atom {
  LinForm form;
  Rel rel = Rel::LE;

  Atom() = default;
  Atom(LinForm f, Rel r) : form(std::move(f)), rel(r) {}

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.rel == b.rel && a.form == b.form;
  }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.rel != b.rel) return a.rel < b.rel;
    return a.form < b.form;
  }

  bool eval(const std::map<int, Rat>& point) const {
    Rat v = form.eval(point);
    switch (rel) {
      case Rel::LT: return v < 0;
      case Rel::LE: return v <= 0;
      case Rel::EQ: return v == 0;
    }
    return false;
  }

  std::string str(const std::string& prefix = "x") const {
    static const char* rels[] = {" < 0", " <= 0", " = 0"};
    return form.str(prefix) + rels[static_cast<int>(rel)];
  }
};

inline Atom atom_lt(LinForm f) { return Atom(std::move(f), Rel::LT); }
inline Atom atom_le(LinForm f) { return Atom(std::move(f), Rel::LE); }
inline Atom atom_eq(LinForm f) { return Atom(std::move(f), Rel::EQ); }

// Conjunction of atoms over a finite coordinate scope; denotes a convex
// rational polyhedron (possibly with strict faces) in Q^scope.
struct Polyhedron {
  std::set<int> scope;
  std::vector<Atom> atoms;

  Polyhedron() = default;
  Polyhedron(std::set<int> s, std::vector<Atom> a)
      : scope(std::move(s)), atoms(std::move(a)) {}

  bool contains(const std::map<int, Rat>& point) const {
    for (auto& a : atoms)
      if (!a.eval(point)) return false;
    return true;
  }
};

// Finite union of polyhedra over a shared scope.  The empty disjunct list
// denotes the empty set; a single atom-free disjunct denotes Q^scope.
struct Region {
  std::set<int> scope;
  std::vector<Polyhedron> disjuncts;

  Region() = default;
  explicit Region(std::set<int> s) : scope(std::move(s)) {}

  static Region empty(std::set<int> s) { return Region(std::move(s)); }
  static Region full(std::set<int> s) {
    Region r(s);
    r.disjuncts.emplace_back(std::move(s), std::vector<Atom>{});
    return r;
  }
  static Region of(std::set<int> s, std::vector<Atom> atoms) {
    Region r(s);
    r.disjuncts.emplace_back(r.scope, std::move(atoms));
    return r;
  }

  bool trivially_empty() const { return disjuncts.empty(); }

  bool contains(const std::map<int, Rat>& point) const {
    for (auto& d : disjuncts)
      if (d.contains(point)) return true;
    return false;
  }
};

namespace detail {

// Bound classification of an atom with respect to one linear part.
// Atoms are grouped by the normalized variable part l (leading coeff +1);
// each atom then reads  l {<,<=,=,>,>=} bound  for a constant-free... the
// bound is itself an affine form over the *other* variables when grouping
// per variable during FM, or a rational when the linear part is the whole
// variable part.  Consolidation below uses rational bounds only.
struct BoundInfo {
  // lower: bound < l or bound <= l ; upper: l < bound or l <= bound.
  std::optional<std::pair<Rat, bool>> lo;  // (value, strict)
  std::optional<std::pair<Rat, bool>> hi;
  std::optional<Rat> eq;
  bool contradictory = false;
};

}  // namespace detail

// Remove redundant atoms of a conjunction by exact per-linear-part interval
// reasoning.  Returns nullopt when a contradiction among proportional atoms
// or constant atoms is detected.  This is not a full emptiness test.
inline std::optional<Polyhedron> consolidate(const Polyhedron& p) {
  std::map<LinForm, detail::BoundInfo> groups;
  for (const Atom& a : p.atoms) {
    if (a.form.is_constant()) {
      const Rat& c = a.form.constant();
      bool ok = a.rel == Rel::LT ? c < 0 : a.rel == Rel::LE ? c <= 0 : c == 0;
      if (!ok) return std::nullopt;
      continue;
    }
    // Split form = linpart + c; normalize linpart's leading coeff to +1.
    LinForm lin = a.form;
    Rat c = lin.constant();
    lin.set_constant(Rat(0));
    Rat lead = lin.coeffs().begin()->second;
    LinForm key = Rat(1) / lead * lin;  // leading coefficient +1
    //  form rel 0  <=>  lin rel -c  <=>  key rel' bound  (rel flips if lead < 0)
    Rat bound = -c / lead;
    bool flipped = lead < 0;
    auto& g = groups[key];
    if (a.rel == Rel::EQ) {
      if (g.eq && *g.eq != bound) return std::nullopt;
      g.eq = bound;
    } else {
      bool strict = a.rel == Rel::LT;
      if (!flipped) {  // key < bound or key <= bound : upper
        if (!g.hi || bound < g.hi->first ||
            (bound == g.hi->first && strict && !g.hi->second))
          g.hi = {bound, strict};
      } else {  // lower
        if (!g.lo || bound > g.lo->first ||
            (bound == g.lo->first && strict && !g.lo->second))
          g.lo = {bound, strict};
      }
    }
  }

  Polyhedron out;
  out.scope = p.scope;
  for (auto& [key, g] : groups) {
    if (g.lo && g.hi) {
      if (g.lo->first > g.hi->first) return std::nullopt;
      if (g.lo->first == g.hi->first) {
        if (g.lo->second || g.hi->second) return std::nullopt;
        if (g.eq && *g.eq != g.lo->first) return std::nullopt;
        g.eq = g.lo->first;  // pinched interval
      }
    }
    if (g.eq) {
      if (g.lo && (g.lo->first > *g.eq || (g.lo->first == *g.eq && g.lo->second)))
        return std::nullopt;
      if (g.hi && (g.hi->first < *g.eq || (g.hi->first == *g.eq && g.hi->second)))
        return std::nullopt;
      LinForm f = key;
      f.set_constant(-*g.eq);
      out.atoms.push_back(atom_eq(f));
      continue;
    }
    if (g.lo) {
      LinForm f = Rat(-1) * key;
      f.set_constant(f.constant() + g.lo->first);
      out.atoms.push_back(Atom(f, g.lo->second ? Rel::LT : Rel::LE));
    }
    if (g.hi) {
      LinForm f = key;
      f.set_constant(f.constant() - g.hi->first);
      out.atoms.push_back(Atom(f, g.hi->second ? Rel::LT : Rel::LE));
    }
  }
  std::sort(out.atoms.begin(), out.atoms.end());
  return out;
}

// Substitute x_v := by into every atom.  `by` must not mention v.
inline Polyhedron substitute(const Polyhedron& p, int v, const LinForm& by) {
  Polyhedron q;
  q.scope = p.scope;
  q.scope.erase(v);
  for (const Atom& a : p.atoms) {
    Atom b(a.form.substituted(v, by), a.rel);
    q.atoms.push_back(std::move(b));
  }
  return q;
}

// One Fourier-Motzkin step: eliminate x_v from a conjunction.  An equality
// mentioning v is used as an exact substitution; otherwise lower and upper
// bounds are cross-combined (LT wins over LE).
inline std::optional<Polyhedron> fm_step(const Polyhedron& p, int v) {
  auto cons = consolidate(p);
  if (!cons) return std::nullopt;
  const Polyhedron& c = *cons;

  for (const Atom& a : c.atoms) {
    if (a.rel == Rel::EQ && a.form.coeff(v) != 0) {
      Rat k = a.form.coeff(v);
      LinForm rest = a.form;
      rest.set_coeff(v, Rat(0));
      LinForm by = Rat(-1) / k * rest;  // x_v = by
      return consolidate(substitute(c, v, by));
    }
  }

  // lower: x_v > or >= form ; upper: x_v < or <= form.
  std::vector<std::pair<LinForm, bool>> lowers, uppers;
  Polyhedron q;
  q.scope = c.scope;
  q.scope.erase(v);
  for (const Atom& a : c.atoms) {
    Rat k = a.form.coeff(v);
    if (k == 0) {
      q.atoms.push_back(a);
      continue;
    }
    LinForm rest = a.form;
    rest.set_coeff(v, Rat(0));
    LinForm bound = Rat(-1) / k * rest;
    bool strict = a.rel == Rel::LT;
    if (k > 0)
      uppers.emplace_back(std::move(bound), strict);
    else
      lowers.emplace_back(std::move(bound), strict);
  }
  for (auto& [lo, ls] : lowers)
    for (auto& [hi, hs] : uppers) {
      Atom a(lo - hi, (ls || hs) ? Rel::LT : Rel::LE);
      q.atoms.push_back(std::move(a));
    }
  return consolidate(q);
}

// Exact emptiness of a conjunction, by eliminating every variable.
inline bool polyhedron_empty(const Polyhedron& p) {
  std::optional<Polyhedron> cur = consolidate(p);
  if (!cur) return true;
  while (!cur->scope.empty()) {
    int v = *cur->scope.rbegin();
    cur = fm_step(*cur, v);
    if (!cur) return true;
  }
  return false;
}

inline bool is_empty(const Region& r) {
  for (auto& d : r.disjuncts)
    if (!polyhedron_empty(d)) return false;
  return true;
}

// Syntactic subsumption + emptiness pruning of a disjunct list.
inline Region pruned(Region r) {
  std::vector<Polyhedron> keep;
  for (auto& d : r.disjuncts) {
    auto c = consolidate(d);
    if (!c || polyhedron_empty(*c)) continue;
    keep.push_back(std::move(*c));
  }
  // d subsumed by e when atoms(e) ⊆ atoms(d) (e is weaker).
  std::vector<bool> dead(keep.size(), false);
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j) {
      if (i == j || dead[i] || dead[j]) continue;
      const auto& big = keep[i].atoms;
      const auto& small = keep[j].atoms;
      if (small.size() <= big.size() &&
          std::includes(big.begin(), big.end(), small.begin(), small.end()))
        dead[i] = true;
    }
  Region out(r.scope);
  for (size_t i = 0; i < keep.size(); ++i)
    if (!dead[i]) out.disjuncts.push_back(std::move(keep[i]));
  return out;
}

// Exact projection of a region along one coordinate (per-disjunct FM).
inline Region fm_eliminate(const Region& r, int v) {
  if (!r.scope.count(v)) throw std::invalid_argument("fm_eliminate: var not in scope");
  Region out(r.scope);
  out.scope.erase(v);
  for (auto& d : r.disjuncts) {
    auto q = fm_step(d, v);
    if (q) out.disjuncts.push_back(std::move(*q));
  }
  return pruned(out);
}

inline Region intersect(const Region& a, const Region& b) {
  if (a.scope != b.scope) throw std::invalid_argument("intersect: scope mismatch");
  Region out(a.scope);
  for (auto& da : a.disjuncts)
    for (auto& db : b.disjuncts) {
      Polyhedron p;
      p.scope = a.scope;
      p.atoms = da.atoms;
      p.atoms.insert(p.atoms.end(), db.atoms.begin(), db.atoms.end());
      auto c = consolidate(p);
      if (c && !polyhedron_empty(*c)) out.disjuncts.push_back(std::move(*c));
    }
  return pruned(out);
}

inline Region unite(const Region& a, const Region& b) {
  if (a.scope != b.scope) throw std::invalid_argument("unite: scope mismatch");
  Region out(a.scope);
  out.disjuncts = a.disjuncts;
  out.disjuncts.insert(out.disjuncts.end(), b.disjuncts.begin(), b.disjuncts.end());
  return pruned(out);
}

// Complement within Q^scope, by De Morgan over the disjuncts.
inline Region complement(const Region& r) {
  Region acc = Region::full(r.scope);
  for (auto& d : r.disjuncts) {
    // negate one conjunction: union over atoms of the negated atom.
    Region neg(r.scope);
    for (const Atom& a : d.atoms) {
      switch (a.rel) {
        case Rel::LT:
          neg.disjuncts.push_back(Polyhedron(r.scope, {atom_le(Rat(-1) * a.form)}));
          break;
        case Rel::LE:
          neg.disjuncts.push_back(Polyhedron(r.scope, {atom_lt(Rat(-1) * a.form)}));
          break;
        case Rel::EQ:
          neg.disjuncts.push_back(Polyhedron(r.scope, {atom_lt(a.form)}));
          neg.disjuncts.push_back(Polyhedron(r.scope, {atom_lt(Rat(-1) * a.form)}));
          break;
      }
    }
    acc = intersect(acc, neg);
  }
  return acc;
}

inline Region subtract(const Region& a, const Region& b) {
  return intersect(a, complement(b));
}

inline bool equal(const Region& a, const Region& b) {
  return is_empty(subtract(a, b)) && is_empty(subtract(b, a));
}

// Semantic redundancy pass: drop an atom when region-with-its-negation is
// empty.  Costlier than consolidate; used after large QE pipelines.
inline Polyhedron tighten(const Polyhedron& p) {
  auto cons = consolidate(p);
  if (!cons) return p;
  Polyhedron cur = *cons;
  for (size_t i = 0; i < cur.atoms.size();) {
    Polyhedron without = cur;
    Atom dropped = without.atoms[i];
    without.atoms.erase(without.atoms.begin() + i);
    if (dropped.rel == Rel::EQ) {
      ++i;  // equalities carry dimension information; keep them.
      continue;
    }
    Polyhedron test = without;
    Atom neg = dropped.rel == Rel::LT ? atom_le(Rat(-1) * dropped.form)
                                      : atom_lt(Rat(-1) * dropped.form);
    test.atoms.push_back(neg);
    if (polyhedron_empty(test))
      cur = without;
    else
      ++i;
  }
  return cur;
}

inline Region tightened(Region r) {
  for (auto& d : r.disjuncts) d = tighten(d);
  return pruned(std::move(r));
}

enum class Quant : std::uint8_t { Exists, ForAll };

// Full quantifier elimination over (Q, <, +).  The prefix is read left to
// right, so {(E,y),(A,z)} body means  ∃y ∀z body.  Universals go through
// complementation.
inline Region qe(const std::vector<std::pair<Quant, int>>& prefix, Region body) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    auto [q, v] = *it;
    if (!body.scope.count(v)) throw std::invalid_argument("qe: var not in scope");
    if (q == Quant::Exists) {
      body = fm_eliminate(body, v);
    } else {
      body = complement(fm_eliminate(complement(body), v));
    }
  }
  return body;
}

// O-minimal dimension of the denoted set; -1 for the empty set.  Per
// disjunct: |scope| minus the rank of the implied equality system (declared
// equalities plus inequalities that hold with equality on the whole
// disjunct).
inline int dimension(const Region& r) {
  int best = -1;
  for (auto& d0 : r.disjuncts) {
    auto cons = consolidate(d0);
    if (!cons || polyhedron_empty(*cons)) continue;
    const Polyhedron& d = *cons;
    std::vector<LinForm> eqs;
    for (size_t i = 0; i < d.atoms.size(); ++i) {
      const Atom& a = d.atoms[i];
      if (a.rel == Rel::EQ) {
        eqs.push_back(a.form);
      } else if (a.rel == Rel::LE) {
        Polyhedron strict = d;
        strict.atoms[i].rel = Rel::LT;
        if (polyhedron_empty(strict)) eqs.push_back(a.form);
      }
    }
    // Rank of the homogeneous parts: reduce each new row against a basis
    // kept in echelon form (keyed by leading variable).
    std::map<int, LinForm> basis;
    for (LinForm f : eqs) {
      f.set_constant(Rat(0));
      while (!f.is_constant()) {
        int lead = f.coeffs().begin()->first;
        auto it = basis.find(lead);
        if (it == basis.end()) {
          basis.emplace(lead, std::move(f));
          break;
        }
        f -= f.coeff(lead) / it->second.coeff(lead) * it->second;
      }
    }
    int dim = static_cast<int>(d.scope.size()) - static_cast<int>(basis.size());
    best = std::max(best, dim);
  }
  return best;
}

// A rational witness inside the region, via FM back-substitution.
inline std::optional<std::map<int, Rat>> sample_point_poly(const Polyhedron& p0) {
  auto cons = consolidate(p0);
  if (!cons) return std::nullopt;
  const Polyhedron& p = *cons;
  if (p.scope.empty())
    return polyhedron_empty(p) ? std::nullopt
                               : std::optional<std::map<int, Rat>>{std::map<int, Rat>{}};

  int v = *p.scope.rbegin();
  // Equality substitution first.
  for (const Atom& a : p.atoms) {
    if (a.rel == Rel::EQ && a.form.coeff(v) != 0) {
      Rat k = a.form.coeff(v);
      LinForm rest = a.form;
      rest.set_coeff(v, Rat(0));
      LinForm by = Rat(-1) / k * rest;
      auto sub = sample_point_poly(substitute(p, v, by));
      if (!sub) return std::nullopt;
      (*sub)[v] = by.eval(*sub);
      return sub;
    }
  }
  auto q = fm_step(p, v);
  if (!q) return std::nullopt;
  auto sub = sample_point_poly(*q);
  if (!sub) return std::nullopt;

  std::optional<std::pair<Rat, bool>> lo, hi;
  for (const Atom& a : p.atoms) {
    Rat k = a.form.coeff(v);
    if (k == 0) continue;
    LinForm rest = a.form;
    rest.set_coeff(v, Rat(0));
    Rat bound = (Rat(-1) / k * rest).eval(*sub);
    bool strict = a.rel == Rel::LT;
    if (k > 0) {
      if (!hi || bound < hi->first || (bound == hi->first && strict)) hi = {bound, strict};
    } else {
      if (!lo || bound > lo->first || (bound == lo->first && strict)) lo = {bound, strict};
    }
  }
  Rat val;
  if (lo && hi)
    val = lo->first == hi->first ? lo->first : (lo->first + hi->first) / 2;
  else if (lo)
    val = lo->second ? lo->first + 1 : lo->first;
  else if (hi)
    val = hi->second ? hi->first - 1 : hi->first;
  else
    val = 0;
  (*sub)[v] = val;
  return sub;
}

inline std::optional<std::map<int, Rat>> sample_point(const Region& r) {
  for (auto& d : r.disjuncts) {
    auto s = sample_point_poly(d);
    if (s) return s;
  }
  return std::nullopt;
}

}  // namespace qlin
}  // namespace semitop
