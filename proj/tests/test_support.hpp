// Shared helpers for the test suites: seeded random rational geometry and
// the grid-witness projection oracle.
#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "semitop/qlin.hpp"

namespace testsup {

using namespace semitop;
using namespace semitop::qlin;

using Rng = std::mt19937_64;

inline Rat random_rat(Rng& rng, int lo = -5, int hi = 5, int max_den = 2) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rat(num(rng), den(rng));
}

inline LinForm random_form(Rng& rng, const std::set<int>& vars) {
  LinForm f(random_rat(rng));
  std::uniform_int_distribution<int> coin(0, 2);
  bool any = false;
  for (int v : vars) {
    int c = coin(rng);
    if (c != 0) {
      f.set_coeff(v, random_rat(rng, -2, 2, 1));
      any = any || f.coeff(v) != 0;
    }
  }
  if (!any && !vars.empty()) f.set_coeff(*vars.begin(), Rat(1));
  return f;
}

inline Atom random_atom(Rng& rng, const std::set<int>& vars) {
  std::uniform_int_distribution<int> rel(0, 5);
  int r = rel(rng);
  LinForm f = random_form(rng, vars);
  if (r == 0) return atom_eq(f);       // sparse equalities
  if (r <= 2) return atom_lt(f);
  return atom_le(f);
}

inline Region random_region(Rng& rng, const std::set<int>& vars,
                            int max_disjuncts = 3, int max_atoms = 4) {
  std::uniform_int_distribution<int> nd(1, max_disjuncts);
  std::uniform_int_distribution<int> na(1, max_atoms);
  Region r(vars);
  int d = nd(rng);
  for (int i = 0; i < d; ++i) {
    Polyhedron p;
    p.scope = vars;
    int a = na(rng);
    for (int j = 0; j < a; ++j) p.atoms.push_back(random_atom(rng, vars));
    r.disjuncts.push_back(std::move(p));
  }
  return r;
}

// Exhaustive witness search for  exists w . (x, w) in r  over candidate
// values: the atom roots at x, their midpoints and unit offsets, and a
// uniform grid of the given pitch.  Complete for unions of rational
// intervals because every nonempty interval contains either a root, a
// midpoint of two roots, or a root shifted by one.
inline bool witness_exists(const Region& r, int v, const std::map<int, Rat>& x,
                           const Rat& pitch, const Rat& grid_lo, const Rat& grid_hi) {
  std::vector<Rat> candidates;
  candidates.push_back(Rat(0));
  std::vector<Rat> roots;
  for (const auto& d : r.disjuncts)
    for (const auto& a : d.atoms) {
      Rat k = a.form.coeff(v);
      if (k == 0) continue;
      LinForm rest = a.form;
      rest.set_coeff(v, Rat(0));
      roots.push_back(-rest.eval(x) / k);
    }
  for (size_t i = 0; i < roots.size(); ++i) {
    candidates.push_back(roots[i]);
    candidates.push_back(roots[i] + 1);
    candidates.push_back(roots[i] - 1);
    candidates.push_back(roots[i] + pitch);
    candidates.push_back(roots[i] - pitch);
    for (size_t j = i + 1; j < roots.size(); ++j)
      candidates.push_back((roots[i] + roots[j]) / 2);
  }
  for (Rat g = grid_lo; g <= grid_hi; g += pitch) candidates.push_back(g);

  std::map<int, Rat> pt = x;
  for (const Rat& c : candidates) {
    pt[v] = c;
    if (r.contains(pt)) return true;
  }
  return false;
}

// Minimum positive gap among the constants of the region's atoms (after
// normalizing each atom's leading coefficient), used as the oracle's grid
// pitch baseline.
inline Rat min_constant_gap(const Region& r) {
  std::vector<Rat> cs;
  cs.push_back(Rat(0));
  for (const auto& d : r.disjuncts)
    for (const auto& a : d.atoms) cs.push_back(a.form.normalized().constant());
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  Rat gap(1);
  for (size_t i = 1; i < cs.size(); ++i) {
    Rat g = cs[i] - cs[i - 1];
    if (g > 0 && g < gap) gap = g;
  }
  return gap;
}

}  // namespace testsup
