// One-parameter tameness: partition the parameter line Gamma_inf into
// finitely many intervals and points over which the fibers of a definable
// family keep constant invariants (component count, Betti data).  The
// partition is read off a decomposition of the total space with the
// parameter as the base coordinate, so fiber cell structure is constant
// over every piece by construction; the records are computed at one sample
// parameter per piece.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semitop/celldec.hpp"
#include "semitop/cohom.hpp"
#include "semitop/errors.hpp"
#include "semitop/stratal.hpp"

namespace semitop::family {

using stratal::SemilinearSet;

struct ParamInterval {
  // kinds: "(-inf,a)", "[a,a]", "(a,b)", "(b,inf)", "(-inf,inf)", "[inf,inf]"
  std::string kind;
  std::optional<Rat> lo, hi;

  friend bool operator==(const ParamInterval& x, const ParamInterval& y) {
    return x.kind == y.kind && x.lo == y.lo && x.hi == y.hi;
  }
};

struct PieceRecord {
  ParamInterval interval;
  ExtRat sample{Rat(0)};
  long pi0 = 0;
  std::optional<cohom::BettiReport> betti;    // absent when the fiber is not compact
  std::optional<cohom::BettiReport> betti_c;  // absent when not locally closed
  std::vector<std::string> diagnostics;
};

struct FamilyPartition {
  std::vector<PieceRecord> pieces;  // in increasing parameter order, inf last
};

namespace detail {

struct AxisPiece {
  ParamInterval iv;
  ExtRat sample{Rat(0)};
};

// Parameter-axis cells of a decomposition of the permuted total space
// (parameter moved to the base coordinate), in increasing order.
inline std::vector<AxisPiece> axis_pieces(const SemilinearSet& permuted) {
  celldec::Decomposition d = celldec::decompose(permuted.ambient(), {permuted});
  std::vector<AxisPiece> out;
  auto seen = [&](const ParamInterval& iv) {
    for (auto& p : out)
      if (p.iv == iv) return true;
    return false;
  };
  for (const celldec::Cell& c : d.cells) {
    const celldec::CellLevel& lv = c.levels.front();
    AxisPiece p;
    if (lv.is_graph) {
      if (lv.h.kind == celldec::CellFn::Kind::ConstInf) {
        p.iv = {"[inf,inf]", std::nullopt, std::nullopt};
        p.sample = ExtRat::infinity();
      } else {
        Rat a = lv.h.form.constant();
        p.iv = {"[a,a]", a, a};
        p.sample = ExtRat(a);
      }
    } else {
      bool has_lo = lv.lo.kind == celldec::CellFn::Kind::Affine;
      bool has_hi = lv.hi.kind == celldec::CellFn::Kind::Affine;
      if (has_lo && has_hi) {
        Rat a = lv.lo.form.constant(), b = lv.hi.form.constant();
        p.iv = {"(a,b)", a, b};
        p.sample = ExtRat((a + b) / 2);
      } else if (has_lo) {
        Rat b = lv.lo.form.constant();
        p.iv = {"(b,inf)", b, std::nullopt};
        p.sample = ExtRat(b + 1);
      } else if (has_hi) {
        Rat a = lv.hi.form.constant();
        p.iv = {"(-inf,a)", std::nullopt, a};
        p.sample = ExtRat(a - 1);
      } else {
        p.iv = {"(-inf,inf)", std::nullopt, std::nullopt};
        p.sample = ExtRat(Rat(0));
      }
    }
    if (!seen(p.iv)) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const AxisPiece& x, const AxisPiece& y) {
    auto key = [](const AxisPiece& p) -> std::pair<int, Rat> {
      if (p.iv.kind == "[inf,inf]") return {2, Rat(0)};
      if (!p.iv.lo && !p.iv.hi) return {0, Rat(0)};
      if (!p.iv.lo) return {0, *p.iv.hi - 1};  // (-inf, a) precedes a
      Rat lo = *p.iv.lo;
      // a point [a,a] sits between (.,a) and (a,.)
      return {1, p.iv.kind == "[a,a]" ? Rat(2 * lo) : Rat(2 * lo + 1)};
    };
    auto kx = key(x), ky = key(y);
    if (kx.first != ky.first) return kx.first < ky.first;
    return kx.second < ky.second;
  });
  return out;
}

}  // namespace detail

// Scan a family Z ⊆ Gamma_inf^{n+1} along its last coordinate.
inline FamilyPartition family_scan(const SemilinearSet& z, cohom::Coeff coeff,
                                   bool with_cohomology = true) {
  if (z.ambient() < 2)
    throw DimensionMismatch("family_scan: need a total space of dimension >= 2");
  int n1 = z.ambient();
  int param = n1 - 1;

  std::vector<int> perm(n1);
  perm[0] = param;
  for (int j = 1; j < n1; ++j) perm[j] = j - 1;
  SemilinearSet permuted = stratal::permute(z, perm);

  FamilyPartition fp;
  for (const detail::AxisPiece& ap : detail::axis_pieces(permuted)) {
    PieceRecord rec;
    rec.interval = ap.iv;
    rec.sample = ap.sample;
    SemilinearSet fiber = stratal::fiber_last(z, ap.sample);
    rec.pi0 = static_cast<long>(celldec::connected_components(fiber).size());
    if (with_cohomology) {
      if (stratal::is_definably_compact(fiber))
        rec.betti = cohom::betti(fiber, coeff);
      else
        rec.diagnostics.push_back("fiber is not definably compact; H^* omitted");
      if (stratal::is_locally_closed(fiber))
        rec.betti_c = cohom::betti_c(fiber, coeff);
      else
        rec.diagnostics.push_back("fiber is not locally closed; H^*_c omitted");
    }
    fp.pieces.push_back(std::move(rec));
  }
  return fp;
}

inline FamilyPartition pi0_scan(const SemilinearSet& z) {
  return family_scan(z, cohom::Coeff::Q, false);
}

}  // namespace semitop::family
