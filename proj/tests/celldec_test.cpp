#include <catch2/catch_amalgamated.hpp>

#include "semitop/celldec.hpp"
#include "test_support.hpp"

using namespace semitop;
using namespace semitop::celldec;
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

SemilinearSet interval01() {
  return from_atoms(1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}})), atom_le(lf({{0, 1}}, -1))});
}

SemilinearSet union_of_cells(const Decomposition& d, const std::vector<int>& idx) {
  SemilinearSet u(d.ambient);
  for (int i : idx) u = unite(u, d.cells[i].denotation());
  return u;
}

void check_partition(const Decomposition& d) {
  SemilinearSet all(d.ambient);
  for (auto& c : d.cells) {
    SemilinearSet den = c.denotation();
    CHECK(is_empty(intersect(all, den)));  // pairwise disjoint, incrementally
    all = unite(all, den);
  }
  CHECK(equal(all, SemilinearSet::whole_space(d.ambient)));
}

}  // namespace

TEST_CASE("decompose the unit interval in Gamma_inf^1") {
  Decomposition d = decompose(1, {interval01()}, std::nullopt, true);
  // (-inf,0), {0}, (0,1), {1}, (1,inf), {inf}
  CHECK(d.cells.size() == 6);
  check_partition(d);
  std::vector<int> in = cells_inside(d, interval01());
  CHECK(in.size() == 3);
  CHECK(equal(union_of_cells(d, in), interval01()));
}

TEST_CASE("decompose with no targets still partitions") {
  Decomposition d = decompose(2, {});
  check_partition(d);
  // per axis: the full band and the inf graph -> 4 strata cells
  CHECK(d.cells.size() == 4);
}

TEST_CASE("decompose adapted to the diagonal of Gamma^2") {
  SemilinearSet diag = from_atoms(2, 0b11, {atom_eq(lf({{0, 1}, {1, -1}}))});
  Decomposition d = decompose(2, {diag}, std::nullopt, true);
  check_partition(d);
  std::vector<int> in = cells_inside(d, diag);
  CHECK(equal(union_of_cells(d, in), diag));
  // every target is a union of cells; each cell inside is 0- or 1-dimensional
  for (int i : in) CHECK(d.cells[i].dim <= 1);
}

TEST_CASE("projection of a decomposition is a decomposition") {
  SemilinearSet diag = from_atoms(2, 0b11, {atom_eq(lf({{0, 1}, {1, -1}}))});
  SemilinearSet band = from_atoms(2, 0b11, {atom_lt(lf({{0, 1}, {1, -1}}, 2))});
  Decomposition d = decompose(2, {diag, band});
  check_partition(d);

  // project every cell to the first coordinate and deduplicate
  std::vector<SemilinearSet> projected;
  for (auto& c : d.cells) {
    Cell head = c;
    head.levels.resize(1);
    head.ambient = 1;
    head.support &= 0b1;
    Polyhedron p;
    p.scope = {};
    if (head.support & 0b1) p.scope = {0};
    for (auto& a : c.poly.atoms)
      if (a.form.top_var() <= 0) p.atoms.push_back(a);
    head.poly = p;
    SemilinearSet den = head.denotation();
    bool seen = false;
    for (auto& q : projected)
      if (equal(q, den)) seen = true;
    if (!seen) projected.push_back(den);
  }
  SemilinearSet u(1);
  for (size_t i = 0; i < projected.size(); ++i) {
    for (size_t j = i + 1; j < projected.size(); ++j)
      CHECK(is_empty(intersect(projected[i], projected[j])));
    u = unite(u, projected[i]);
  }
  CHECK(equal(u, SemilinearSet::whole_space(1)));
}

TEST_CASE("components: two segments") {
  SemilinearSet two = unite(
      interval01(),
      from_atoms(1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}}, -2)), atom_le(lf({{0, 1}}, -3))}));
  auto comps = connected_components(two);
  CHECK(comps.size() == 2);
  SemilinearSet u(1);
  for (auto& c : comps) {
    CHECK(is_empty(intersect(u, c)));
    u = unite(u, c);
  }
  CHECK(equal(u, two));
}

TEST_CASE("components: two diagonal arcs joined at (inf, inf)") {
  SemilinearSet a = closure(from_atoms(
      2, 0b11, {atom_eq(lf({{0, 1}, {1, -1}})), atom_le(Rat(-1) * lf({{0, 1}}))}));
  SemilinearSet b = closure(from_atoms(
      2, 0b11, {atom_eq(lf({{0, 1}, {1, -1}}, 5)), atom_le(Rat(-1) * lf({{0, 1}}))}));
  CHECK(a.contains({ExtRat::infinity(), ExtRat::infinity()}));
  CHECK(b.contains({ExtRat::infinity(), ExtRat::infinity()}));
  auto comps = connected_components(unite(a, b));
  CHECK(comps.size() == 1);
}

TEST_CASE("components: plane minus a point at infinity stays connected") {
  // U = Gamma_inf^2 minus {(inf, 0)}: connected but not definably normal.
  SemilinearSet pt = from_atoms(2, 0b10, {atom_eq(lf({{1, 1}}))});
  SemilinearSet u = subtract(SemilinearSet::whole_space(2), pt);
  auto comps = connected_components(u);
  CHECK(comps.size() == 1);
}

TEST_CASE("every cell of a decomposition is definably connected") {
  SemilinearSet diag = from_atoms(2, 0b11, {atom_eq(lf({{0, 1}, {1, -1}}, -1))});
  SemilinearSet box = from_atoms(2, 0b11, {atom_le(Rat(-1) * lf({{0, 1}})),
                                           atom_le(lf({{0, 1}}, -2)),
                                           atom_le(Rat(-1) * lf({{1, 1}}))});
  Decomposition d = decompose(2, {diag, box});
  for (auto& c : d.cells)
    CHECK(connected_components(c.denotation()).size() == 1);
}

TEST_CASE("refine_to_complex: the closed unit square becomes the 9-cell grid") {
  SemilinearSet sq = from_atoms(
      2, 0b11, {atom_le(Rat(-1) * lf({{0, 1}})), atom_le(lf({{0, 1}}, -1)),
                atom_le(Rat(-1) * lf({{1, 1}})), atom_le(lf({{1, 1}}, -1))});
  Decomposition d = decompose(2, {sq}, sq);
  RegularComplex rc = refine_to_complex(d, sq);
  CHECK(rc.cells.size() == 9);
  int by_dim[3] = {0, 0, 0};
  for (int dd : rc.dims) ++by_dim[dd];
  CHECK(by_dim[0] == 4);
  CHECK(by_dim[1] == 4);
  CHECK(by_dim[2] == 1);
  // the 2-cell has all other cells as faces
  for (size_t i = 0; i < rc.cells.size(); ++i)
    if (rc.dims[i] == 2) CHECK(rc.faces[i].size() == 8);
}

TEST_CASE("refine_to_complex: [0, inf] is three cells") {
  SemilinearSet ray(1);
  ray.set_piece(0b1, Region::of({0}, {atom_le(Rat(-1) * lf({{0, 1}}))}));
  ray.set_piece(0b0, Region::full({}));
  Decomposition d = decompose(1, {ray}, ray);
  RegularComplex rc = refine_to_complex(d, ray);
  REQUIRE(rc.cells.size() == 3);
  int zero = 0, one = 0;
  for (size_t i = 0; i < rc.cells.size(); ++i) {
    if (rc.dims[i] == 0) ++zero;
    if (rc.dims[i] == 1) {
      ++one;
      CHECK(rc.faces[i].size() == 2);  // {0} and {inf}
    }
  }
  CHECK(zero == 2);
  CHECK(one == 1);
}

TEST_CASE("refine_to_complex: closed wedge with an edge at infinity") {
  SemilinearSet wedge = closure(from_atoms(
      2, 0b11, {atom_le(Rat(-1) * lf({{1, 1}})), atom_le(lf({{1, 1}, {0, -1}}))}));
  // wedge = closure{0 <= y <= x}: gains the edge {inf} x [0, inf] and (inf, inf).
  CHECK(wedge.contains({ExtRat::infinity(), ExtRat(Rat(3))}));
  CHECK(wedge.contains({ExtRat::infinity(), ExtRat::infinity()}));
  Decomposition d = decompose(2, {wedge}, wedge);
  RegularComplex rc = refine_to_complex(d, wedge);
  bool has_inf_edge = false, has_inf_corner = false;
  for (size_t i = 0; i < rc.cells.size(); ++i) {
    const Cell& c = rc.cells[i];
    if (c.support == 0b10 && rc.dims[i] == 1) has_inf_edge = true;
    if (c.support == 0b00) has_inf_corner = true;
  }
  CHECK(has_inf_edge);
  CHECK(has_inf_corner);
  // frontier condition was verified internally; spot-check one closure
  for (size_t i = 0; i < rc.cells.size(); ++i) {
    SemilinearSet rebuilt = rc.cells[i].denotation();
    for (int j : rc.faces[i]) rebuilt = unite(rebuilt, rc.cells[j].denotation());
    CHECK(equal(rebuilt, rc.closures[i]));
  }
}

TEST_CASE("cell_core: finite interval, unbounded interval, singleton") {
  // C = (d, e) with small t: [d+t, e-t]
  CellBuilder b1(1);
  b1.band(lf({}, 1), lf({}, 5));  // (1, 5)
  SemilinearSet core = cell_core(b1.cell, Rat(1), Rat(10));
  SemilinearSet expect = from_atoms(
      1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}}, -2)), atom_le(lf({{0, 1}}, -4))});
  CHECK(equal(core, expect));

  // large t pinches to the midpoint
  SemilinearSet pinched = cell_core(b1.cell, Rat(7), Rat(10));
  CHECK(equal(pinched, from_atoms(1, 0b1, {atom_eq(lf({{0, 1}}, -3))})));

  // C = (d, inf): [d + gamma, d + s - gamma], gamma = min{s/2, t}
  CellBuilder b2(1);
  b2.band(lf({}, 2), std::nullopt);  // (2, inf)
  SemilinearSet core2 = cell_core(b2.cell, Rat(1), Rat(3));
  SemilinearSet expect2 = from_atoms(
      1, 0b1, {atom_le(Rat(-1) * lf({{0, 1}}, -3)), atom_le(lf({{0, 1}}, -4))});
  CHECK(equal(core2, expect2));  // [3, 4]

  // singleton: core equals the cell
  CellBuilder b3(1);
  b3.graph(lf({}, 4));
  CHECK(equal(cell_core(b3.cell, Rat(1), Rat(3)), b3.cell.denotation()));

  // cells outside [0, inf]^m are rejected
  CellBuilder b4(1);
  b4.band(lf({}, -2), lf({}, 5));
  CHECK_THROWS(cell_core(b4.cell, Rat(1), Rat(3)));
}

TEST_CASE("cell_core: properties of the family") {
  // C = (0, inf) x fiber band (x2, inf) over it, inside [0, inf]^2.
  CellBuilder b(2);
  b.band(lf({}, 0), std::nullopt);
  b.band(lf({{0, 1}}), std::nullopt);  // x2 in (x1, inf)
  const Cell& c = b.cell;

  SemilinearSet c00 = cell_core(c, Rat(1), Rat(4));
  CHECK(is_definably_compact(c00));
  CHECK(subset(c00, c.denotation()));

  // monotone: 0 < t' < t < s/2 < s < s' gives C_(t,s) subset C_(t',s')
  SemilinearSet small = cell_core(c, Rat(1), Rat(4));
  SemilinearSet big = cell_core(c, Rat(1, 2), Rat(8));
  CHECK(subset(small, big));

  // exhaustion: sampled compact points are swallowed by some core
  SemilinearSet pts(2);
  pts.set_piece(0b11, Region::of({0, 1}, {atom_eq(lf({{0, 1}}, -7)),
                                          atom_eq(lf({{1, 1}}, -9))}));
  bool covered = false;
  for (long s = 4; s <= 64 && !covered; s *= 2)
    if (subset(pts, cell_core(c, Rat(1, 2), Rat(s)))) covered = true;
  CHECK(covered);
}
