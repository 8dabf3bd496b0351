#include <catch2/catch_amalgamated.hpp>

#include "semitop/stratal.hpp"
#include "test_support.hpp"

using namespace semitop;
using namespace semitop::stratal;
using qlin::atom_eq;
using qlin::atom_le;
using qlin::atom_lt;
using qlin::Region;

namespace {

qlin::LinForm lf(std::initializer_list<std::pair<int, long>> coeffs, long c = 0,
                 long cd = 1) {
  qlin::LinForm f(Rat(c, cd));
  for (auto& [v, k] : coeffs) f.set_coeff(v, Rat(k));
  return f;
}

SemilinearSet from_atoms(int n, Mask L, std::vector<qlin::Atom> atoms) {
  SemilinearSet s(n);
  s.set_piece(L, Region::of(mask_coords(L), std::move(atoms)));
  return s;
}

// Random semilinear set in Gamma_inf^2 with small constants.
SemilinearSet random_set2(testsup::Rng& rng) {
  SemilinearSet s(2);
  std::uniform_int_distribution<int> npieces(1, 3);
  std::uniform_int_distribution<int> which(0, 3);
  int k = npieces(rng);
  for (int i = 0; i < k; ++i) {
    Mask L = static_cast<Mask>(which(rng));
    auto scope = mask_coords(L);
    Region r = testsup::random_region(rng, scope, 2, 3);
    s.set_piece(L, qlin::unite(s.piece(L), r));
  }
  return s;
}

Point pt(std::vector<ExtRat> v) { return v; }

}  // namespace

TEST_CASE("boolean algebra on strata") {
  SemilinearSet empty = SemilinearSet::empty(2);
  CHECK(equal(complement(empty), SemilinearSet::whole_space(2)));

  // {(x, inf) : x >= 0} union {(x, y) : y = 0} has pieces at 0b01 and 0b11.
  SemilinearSet ray = from_atoms(2, 0b01, {atom_le(Rat(-1) * lf({{0, 1}}))});
  SemilinearSet axis = from_atoms(2, 0b11, {atom_eq(lf({{1, 1}}))});
  SemilinearSet u = unite(ray, axis);
  CHECK(u.pieces().size() == 2);
  CHECK(u.pieces().count(0b01) == 1);
  CHECK(u.pieces().count(0b11) == 1);

  CHECK(is_empty(intersect(u, complement(u))));
  CHECK(equal(unite(u, complement(u)), SemilinearSet::whole_space(2)));
}

TEST_CASE("membership across strata") {
  SemilinearSet ray = from_atoms(2, 0b01, {atom_le(Rat(-1) * lf({{0, 1}}))});
  CHECK(ray.contains(pt({ExtRat(Rat(3)), ExtRat::infinity()})));
  CHECK(!ray.contains(pt({ExtRat(Rat(-1)), ExtRat::infinity()})));
  CHECK(!ray.contains(pt({ExtRat(Rat(3)), ExtRat(Rat(0))})));
}

TEST_CASE("closure adds the point at infinity to a horizontal ray") {
  // {(x, 0) : x >= 0} in Gamma_inf^2; closure adds (inf, 0).
  SemilinearSet s = from_atoms(
      2, 0b11, {atom_le(Rat(-1) * lf({{0, 1}})), atom_eq(lf({{1, 1}}))});
  SemilinearSet c = closure(s);
  CHECK(c.contains(pt({ExtRat::infinity(), ExtRat(Rat(0))})));
  CHECK(!c.contains(pt({ExtRat::infinity(), ExtRat(Rat(1))})));
  CHECK(!c.contains(pt({ExtRat::infinity(), ExtRat::infinity()})));

  SemilinearSet expect = s;
  expect.set_piece(0b10, Region::of({1}, {atom_eq(lf({{1, 1}}))}));
  CHECK(equal(c, expect));
}

TEST_CASE("closure of a bounded open interval is the closed interval") {
  SemilinearSet s = from_atoms(
      1, 0b1, {atom_lt(Rat(-1) * lf({{0, 1}}, -2)), atom_lt(lf({{0, 1}}, -5))});
  SemilinearSet expect = from_atoms(
      1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}}, -2)), atom_le(lf({{0, 1}}, -5))});
  CHECK(equal(closure(s), expect));
}

TEST_CASE("closure of the open wedge y > x >= 0") {
  SemilinearSet s = from_atoms(
      2, 0b11, {atom_lt(lf({{0, 1}, {1, -1}})), atom_le(Rat(-1) * lf({{0, 1}}))});
  SemilinearSet c = closure(s);

  SemilinearSet expect(2);
  expect.set_piece(0b11, Region::of({0, 1}, {atom_le(lf({{0, 1}, {1, -1}})),
                                             atom_le(Rat(-1) * lf({{0, 1}}))}));
  expect.set_piece(0b01, Region::of({0}, {atom_le(Rat(-1) * lf({{0, 1}}))}));
  expect.set_piece(0b00, Region::full({}));
  CHECK(equal(c, expect));
}

TEST_CASE("interior and frontier in Gamma_inf") {
  // interior([a, b]) = (a, b)
  SemilinearSet closed = from_atoms(
      1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}})), atom_le(lf({{0, 1}}, -1))});
  SemilinearSet open = from_atoms(
      1, 0b1, {atom_lt(Rat(-1) * lf({{0, 1}})), atom_lt(lf({{0, 1}}, -1))});
  CHECK(equal(interior(closed), open));

  // interior([b, inf]) = (b, inf]: the basic open at the top.
  SemilinearSet upper(1);
  upper.set_piece(0b1, Region::of({0}, {atom_le(Rat(-1) * lf({{0, 1}}, -3))}));
  upper.set_piece(0b0, Region::full({}));
  SemilinearSet upper_open(1);
  upper_open.set_piece(0b1, Region::of({0}, {atom_lt(Rat(-1) * lf({{0, 1}}, -3))}));
  upper_open.set_piece(0b0, Region::full({}));
  CHECK(equal(interior(upper), upper_open));

  // frontier of the open unit square is its boundary square.
  SemilinearSet square = from_atoms(
      2, 0b11, {atom_lt(Rat(-1) * lf({{0, 1}})), atom_lt(lf({{0, 1}}, -1)),
                atom_lt(Rat(-1) * lf({{1, 1}})), atom_lt(lf({{1, 1}}, -1))});
  SemilinearSet fr = frontier(square);
  CHECK(fr.contains(pt({ExtRat(Rat(0)), ExtRat(Rat(1, 2))})));
  CHECK(fr.contains(pt({ExtRat(Rat(1)), ExtRat(Rat(1))})));
  CHECK(!fr.contains(pt({ExtRat(Rat(1, 2)), ExtRat(Rat(1, 2))})));
  CHECK(dimension(fr) == 1);
}

TEST_CASE("open / closed / locally closed predicates") {
  SemilinearSet whole = SemilinearSet::whole_space(2);
  CHECK(is_open(whole));
  CHECK(is_closed(whole));
  CHECK(is_locally_closed(whole));

  // (0, 1] in Gamma_inf: locally closed, neither open nor closed.
  SemilinearSet half = from_atoms(
      1, 0b1, {atom_lt(Rat(-1) * lf({{0, 1}})), atom_le(lf({{0, 1}}, -1))});
  CHECK(!is_open(half));
  CHECK(!is_closed(half));
  CHECK(is_locally_closed(half));

  // The finite ray {x >= 0} misses its limit at inf: not closed, locally closed.
  SemilinearSet ray = from_atoms(1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}}))});
  CHECK(!is_closed(ray));
  CHECK(is_locally_closed(ray));

  // Union of an open and a disjoint closed piece that touch at a limit:
  // [0,1) ∪ {1} is closed, (0,1) ∪ [2,3] is locally closed.
  SemilinearSet mix = unite(
      from_atoms(1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}})), atom_lt(lf({{0, 1}}, -1))}),
      from_atoms(1, 0b1, {atom_eq(lf({{0, 1}}, -1))}));
  CHECK(is_closed(mix));
}

TEST_CASE("boundedness and definable compactness") {
  // [0, inf]^2 is definably compact.
  SemilinearSet box(2);
  box.set_piece(0b11, Region::of({0, 1}, {atom_le(Rat(-1) * lf({{0, 1}})),
                                          atom_le(Rat(-1) * lf({{1, 1}}))}));
  box.set_piece(0b01, Region::of({0}, {atom_le(Rat(-1) * lf({{0, 1}}))}));
  box.set_piece(0b10, Region::of({1}, {atom_le(Rat(-1) * lf({{1, 1}}))}));
  box.set_piece(0b00, Region::full({}));
  CHECK(is_bounded(box));
  CHECK(is_definably_compact(box));

  // {x in Gamma : x >= 0} without the inf point: bounded, not closed.
  SemilinearSet ray = from_atoms(1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}}))});
  CHECK(is_bounded(ray));
  CHECK(!is_definably_compact(ray));

  // Neither full Gamma nor full Gamma_inf is bounded below (inf only tops
  // the order), so neither is definably compact; [c, inf] is the compact
  // model interval.
  SemilinearSet gamma = from_atoms(1, 0b1, {});
  CHECK(!is_bounded(gamma));
  CHECK(!is_definably_compact(gamma));
  CHECK(!is_bounded(SemilinearSet::whole_space(1)));
  CHECK(!is_definably_compact(SemilinearSet::whole_space(1)));
  SemilinearSet upper(1);
  upper.set_piece(0b1, Region::of({0}, {atom_le(Rat(-1) * lf({{0, 1}}, 7))}));
  upper.set_piece(0b0, Region::full({}));
  CHECK(is_definably_compact(upper));
}

TEST_CASE("completion embedding p(x) piecewise image") {
  // p(Gamma_inf) subset of [0,inf]^2, p(0) = (0,0), p(inf) = (0,inf),
  // image of (-1,1) = {(u,0) : 0<u<1} ∪ {(0,v) : 0<=v<1}.
  SemilinearSet gamma_inf = SemilinearSet::whole_space(1);
  CompletionEmbedding e = completion_embed(gamma_inf);
  CHECK(e.image.contains(pt({ExtRat(Rat(5)), ExtRat(Rat(0))})));     // p(-5)
  CHECK(e.image.contains(pt({ExtRat(Rat(0)), ExtRat(Rat(7))})));     // p(7)
  CHECK(e.image.contains(pt({ExtRat(Rat(0)), ExtRat::infinity()}))); // p(inf)
  CHECK(!e.image.contains(pt({ExtRat(Rat(1)), ExtRat(Rat(1))})));
  CHECK(!e.image.contains(pt({ExtRat::infinity(), ExtRat(Rat(0))})));
  CHECK(e.map_point(pt({ExtRat(Rat(0))})) == pt({ExtRat(Rat(0)), ExtRat(Rat(0))}));
  CHECK(e.map_point(pt({ExtRat::infinity()})) ==
        pt({ExtRat(Rat(0)), ExtRat::infinity()}));

  SemilinearSet iv = from_atoms(
      1, 0b1, {atom_lt(Rat(-1) * lf({{0, 1}}, 1)), atom_lt(lf({{0, 1}}, -1))});
  CompletionEmbedding ei = completion_embed(iv);
  SemilinearSet expect(2);
  expect.set_piece(0b11,
                   qlin::unite(Region::of({0, 1}, {atom_lt(Rat(-1) * lf({{0, 1}})),
                                                   atom_lt(lf({{0, 1}}, -1)),
                                                   atom_eq(lf({{1, 1}}))}),
                               Region::of({0, 1}, {atom_eq(lf({{0, 1}})),
                                                   atom_le(Rat(-1) * lf({{1, 1}})),
                                                   atom_lt(lf({{1, 1}}, -1))})));
  CHECK(equal(ei.image, expect));
}

TEST_CASE("compact_pair on basic intervals") {
  // S = (0, 1): P is a closed arc, Q its two endpoints.
  SemilinearSet s = from_atoms(
      1, 0b1, {atom_lt(Rat(-1) * lf({{0, 1}})), atom_lt(lf({{0, 1}}, -1))});
  CompactPair pr = compact_pair(s);
  CHECK(is_definably_compact(pr.P));
  CHECK(is_closed(pr.Q));
  CHECK(equal(subtract(pr.P, pr.Q), pr.embedded_X));
  CHECK(dimension(pr.Q) == 0);
  CHECK(pr.x_dim == 1);

  // S = Gamma_inf: the completion adds the single missing end (the image of
  // the lower end of Gamma), so Q is one point and P \ Q presents S.
  CompactPair pw = compact_pair(SemilinearSet::whole_space(1));
  CHECK(dimension(pw.Q) == 0);
  CHECK(equal(subtract(pw.P, pw.Q), pw.embedded_X));
  CHECK(pw.Q.contains(pt({ExtRat::infinity(), ExtRat(Rat(0))})));

  // An already compact S pairs with Q = empty.
  SemilinearSet seg = from_atoms(
      1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}})), atom_le(lf({{0, 1}}, -1))});
  CHECK(is_empty(compact_pair(seg).Q));

  // S = (b, inf]: P = [b, inf], Q = {b}.
  SemilinearSet tail(1);
  tail.set_piece(0b1, Region::of({0}, {atom_lt(Rat(-1) * lf({{0, 1}}, -2))}));
  tail.set_piece(0b0, Region::full({}));
  CompactPair pt2 = compact_pair(tail);
  CHECK(dimension(pt2.Q) == 0);
  CHECK(equal(subtract(pt2.P, pt2.Q), pt2.embedded_X));

  // The open square plus one boundary corner is not locally closed: no
  // neighborhood of the corner inside the closed square stays in the set.
  SemilinearSet open_sq = from_atoms(
      2, 0b11, {atom_lt(Rat(-1) * lf({{0, 1}})), atom_lt(lf({{0, 1}}, -1)),
                atom_lt(Rat(-1) * lf({{1, 1}})), atom_lt(lf({{1, 1}}, -1))});
  SemilinearSet corner =
      from_atoms(2, 0b11, {atom_eq(lf({{0, 1}})), atom_eq(lf({{1, 1}}))});
  SemilinearSet square_plus_corner = unite(open_sq, corner);
  CHECK(!is_locally_closed(square_plus_corner));
  CHECK_THROWS_AS(compact_pair(square_plus_corner), NotLocallyClosed);
}

TEST_CASE("cylinder, permute, fiber helpers") {
  SemilinearSet seg = from_atoms(
      1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}})), atom_le(lf({{0, 1}}, -1))});
  Interval unit{ExtRat(Rat(0)), ExtRat(Rat(1)), true, true, false};
  SemilinearSet prism = cylinder(seg, unit);
  CHECK(prism.contains(pt({ExtRat(Rat(1, 2)), ExtRat(Rat(1))})));
  CHECK(!prism.contains(pt({ExtRat(Rat(1, 2)), ExtRat(Rat(2))})));

  Interval to_inf{ExtRat(Rat(0)), ExtRat::infinity(), true, true, false};
  SemilinearSet tube = cylinder(seg, to_inf);
  CHECK(tube.contains(pt({ExtRat(Rat(1, 2)), ExtRat::infinity()})));
  CHECK(is_definably_compact(tube));

  SemilinearSet fib = fiber_last(tube, ExtRat::infinity());
  CHECK(equal(fib, seg));
  SemilinearSet fib2 = fiber_last(tube, ExtRat(Rat(17)));
  CHECK(equal(fib2, seg));

  SemilinearSet swapped = permute(tube, {1, 0});
  CHECK(swapped.contains(pt({ExtRat::infinity(), ExtRat(Rat(1, 2))})));
}

TEST_CASE("property: closure is extensive, idempotent, monotone, additive") {
  testsup::Rng rng(31415);
  for (int round = 0; round < 12; ++round) {
    SemilinearSet a = random_set2(rng);
    SemilinearSet b = random_set2(rng);
    SemilinearSet ca = closure(a);
    CHECK(subset(a, ca));
    CHECK(equal(closure(ca), ca));
    CHECK(subset(ca, closure(unite(a, b))));
    CHECK(equal(closure(unite(a, b)), unite(ca, closure(b))));
  }
  CHECK(is_empty(closure(SemilinearSet::empty(2))));
}

TEST_CASE("property: interior is the dual of closure") {
  testsup::Rng rng(2718);
  for (int round = 0; round < 8; ++round) {
    SemilinearSet a = random_set2(rng);
    CHECK(equal(interior(a), complement(closure(complement(a)))));
    CHECK(subset(interior(a), a));
  }
}

TEST_CASE("property: compact iff closed and bounded; projections bounded below") {
  testsup::Rng rng(10007);
  int compact_seen = 0;
  for (int round = 0; round < 30; ++round) {
    SemilinearSet a = closure(random_set2(rng));
    bool cb = is_closed(a) && is_bounded(a);
    CHECK(is_definably_compact(a) == cb);
    if (cb && !is_empty(a)) {
      ++compact_seen;
      for (int i = 0; i < 2; ++i) {
        // every coordinate projection admits a rational lower bound witness.
        for (auto& [L, region] : a.pieces()) {
          if (!(L & (Mask(1) << i))) continue;
          Region proj = region;
          for (int v : mask_coords(L))
            if (v != i) proj = qlin::fm_eliminate(proj, v);
          CHECK(lower_bound_1d(proj, i).has_value());
        }
      }
    }
  }
  CHECK(compact_seen > 0);
}

TEST_CASE("property: completion embedding preserves and reflects membership") {
  testsup::Rng rng(555);
  for (int round = 0; round < 10; ++round) {
    SemilinearSet a = random_set2(rng);
    CompletionEmbedding e = completion_embed(a);
    for (int k = 0; k < 20; ++k) {
      Point p;
      std::uniform_int_distribution<int> coin(0, 4);
      for (int i = 0; i < 2; ++i)
        p.push_back(coin(rng) == 0 ? ExtRat::infinity()
                                   : ExtRat(testsup::random_rat(rng, -6, 6, 2)));
      CHECK(a.contains(p) == e.image.contains(e.map_point(p)));
    }
  }
}

TEST_CASE("property: compact pair presents X and Q is small on dense inputs") {
  testsup::Rng rng(8080);
  int dense_seen = 0;
  for (int round = 0; round < 10; ++round) {
    SemilinearSet a = random_set2(rng);
    if (!is_locally_closed(a)) continue;
    CompactPair pr = compact_pair(a);
    CHECK(is_definably_compact(pr.P));
    CHECK(is_closed(pr.Q));
    CHECK(equal(subtract(pr.P, pr.Q), pr.embedded_X));
    CHECK(pr.x_dim == dimension(a));
    // When X is dense in P the complement has strictly smaller dimension.
    if (equal(closure(pr.embedded_X), pr.P) && !is_empty(pr.Q)) {
      ++dense_seen;
      CHECK(dimension(pr.Q) < dimension(pr.P));
    }
  }
  CHECK(dense_seen > 0);
}
