// Exact matrix kernels for the cohomology engine: a Smith-normal-form
// summary of sparse integer matrices (rank, invariant factors, ranks modulo
// a prime) and dense Gaussian elimination over a field for induced maps.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "semitop/errors.hpp"
#include "semitop/qlin.hpp"

namespace semitop::linalg {

// Rank and invariant-factor data of an integer matrix.
struct SnfSummary {
  long rank = 0;
  std::vector<BigInt> factors;  // invariant factors > 1, divisibility-sorted

  long rank_mod(long p) const {
    long drop = 0;
    for (const BigInt& f : factors)
      if (f % p == 0) ++drop;
    return rank - drop;
  }
};

class SparseIntMatrix {
 public:
  SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void add(int r, int c, long v) {
    if (v == 0) return;
    auto [it, fresh] = row_[r].emplace(c, v);
    if (!fresh) {
      it->second += v;
      if (it->second == 0) row_[r].erase(it);
    }
  }

  // Destructive Smith-normal-form summary: unimodular row/column operations
  // at ±1 pivots clear almost everything in boundary-style matrices; the
  // small residue goes through the classic dense algorithm.
  SnfSummary snf() {
    SnfSummary out;
    std::vector<std::map<int, int>> col_rows(cols_);  // col -> rows with entries
    for (int r = 0; r < rows_; ++r)
      for (auto& [c, v] : row_[r]) col_rows[c].emplace(r, 0);
    std::vector<bool> row_dead(rows_, false), col_dead(cols_, false);

    while (true) {
      // best ±1 pivot by fill estimate
      int pr = -1, pc = -1;
      long best = -1;
      for (int r = 0; r < rows_; ++r) {
        if (row_dead[r]) continue;
        for (auto& [c, v] : row_[r]) {
          if (col_dead[c]) continue;
          if (v != 1 && v != -1) continue;
          long fill = (long)(row_[r].size() - 1) * (long)(col_rows[c].size() - 1);
          if (best < 0 || fill < best) {
            best = fill;
            pr = r;
            pc = c;
            if (fill == 0) break;
          }
        }
        if (best == 0) break;
      }
      if (pr < 0) break;

      BigInt pivot = row_[pr][pc];
      std::vector<int> rows_with_c;
      for (auto& [r, dummy] : col_rows[pc])
        if (r != pr && !row_dead[r] && row_[r].count(pc)) rows_with_c.push_back(r);
      for (int r : rows_with_c) {
        BigInt factor = row_[r][pc] / pivot;  // pivot is ±1
        for (auto& [c, v] : row_[pr]) {
          if (col_dead[c]) continue;
          auto [it, fresh] = row_[r].emplace(c, 0);
          it->second -= factor * v;
          if (it->second == 0) {
            row_[r].erase(it);
            col_rows[c].erase(r);
          } else if (fresh) {
            col_rows[c].emplace(r, 0);
          }
        }
      }
      row_dead[pr] = true;
      col_dead[pc] = true;
      for (auto& [c, v] : row_[pr]) col_rows[c].erase(pr);
      row_[pr].clear();
      ++out.rank;
    }

    // Dense residue.
    std::vector<int> live_rows, live_cols;
    for (int r = 0; r < rows_; ++r)
      if (!row_dead[r] && !row_[r].empty()) live_rows.push_back(r);
    std::map<int, int> col_index;
    for (int r : live_rows)
      for (auto& [c, v] : row_[r])
        if (!col_dead[c]) col_index.emplace(c, 0);
    {
      int i = 0;
      for (auto& [c, idx] : col_index) idx = i++;
    }
    int nr = static_cast<int>(live_rows.size());
    int nc = static_cast<int>(col_index.size());
    if (nr > 0 && nc > 0) {
      std::vector<std::vector<BigInt>> a(nr, std::vector<BigInt>(nc, BigInt(0)));
      for (int i = 0; i < nr; ++i)
        for (auto& [c, v] : row_[live_rows[i]])
          if (!col_dead[c]) a[i][col_index[c]] = v;
      dense_snf(a, out);
    }

    std::sort(out.factors.begin(), out.factors.end());
    divisibility_chain(out.factors);
    return out;
  }

 private:
  static void dense_snf(std::vector<std::vector<BigInt>>& a, SnfSummary& out) {
    int nr = static_cast<int>(a.size());
    int nc = static_cast<int>(a[0].size());
    int top = 0;
    while (top < nr && top < nc) {
      // locate a minimal nonzero entry
      int pr = -1, pc = -1;
      BigInt best(0);
      for (int i = top; i < nr; ++i)
        for (int j = top; j < nc; ++j) {
          if (a[i][j] == 0) continue;
          BigInt v = abs(a[i][j]);
          if (pr < 0 || v < best) {
            best = v;
            pr = i;
            pc = j;
          }
        }
      if (pr < 0) break;
      std::swap(a[top], a[pr]);
      for (int i = 0; i < nr; ++i) std::swap(a[i][top], a[i][pc]);

      bool clean = true;
      for (int i = top + 1; i < nr && clean; ++i) {
        if (a[i][top] == 0) continue;
        BigInt q = a[i][top] / a[top][top];
        for (int j = top; j < nc; ++j) a[i][j] -= q * a[top][j];
        if (a[i][top] != 0) clean = false;  // remainder: smaller pivot appears
      }
      if (!clean) continue;
      for (int j = top + 1; j < nc && clean; ++j) {
        if (a[top][j] == 0) continue;
        BigInt q = a[top][j] / a[top][top];
        for (int i = top; i < nr; ++i) a[i][j] -= q * a[i][top];
        if (a[top][j] != 0) clean = false;
      }
      if (!clean) continue;
      BigInt d = abs(a[top][top]);
      ++out.rank;
      if (d > 1) out.factors.push_back(d);
      ++top;
    }
  }

  static void divisibility_chain(std::vector<BigInt>& f) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i + 1 < f.size(); ++i) {
        if (f[i + 1] % f[i] == 0) continue;
        BigInt g = gcd(f[i], f[i + 1]);
        BigInt l = f[i] / g * f[i + 1];
        f[i] = g;
        f[i + 1] = l;
        changed = true;
      }
      std::sort(f.begin(), f.end());
      f.erase(std::remove(f.begin(), f.end(), BigInt(1)), f.end());
    }
  }

  int rows_, cols_;
  std::vector<std::map<int, BigInt>> row_;
};

// ---------------------------------------------------------------------------
// Dense elimination over a field, for cocycle spaces and induced-map ranks.

struct RatField {
  using Elem = Rat;
  static Elem zero() { return Rat(0); }
  static Elem one() { return Rat(1); }
  static bool is_zero(const Elem& x) { return x == 0; }
  static Elem neg(const Elem& x) { return -x; }
  static Elem add(const Elem& a, const Elem& b) { return a + b; }
  static Elem sub(const Elem& a, const Elem& b) { return a - b; }
  static Elem mul(const Elem& a, const Elem& b) { return a * b; }
  static Elem div(const Elem& a, const Elem& b) { return a / b; }
  static Elem from_int(long v) { return Rat(v); }
};

struct GF2 {
  using Elem = std::uint8_t;
  static Elem zero() { return 0; }
  static Elem one() { return 1; }
  static bool is_zero(Elem x) { return x == 0; }
  static Elem neg(Elem x) { return x; }
  static Elem add(Elem a, Elem b) { return a ^ b; }
  static Elem sub(Elem a, Elem b) { return a ^ b; }
  static Elem mul(Elem a, Elem b) { return a & b; }
  static Elem div(Elem a, Elem b) {
    if (b == 0) throw InternalError("GF2 division by zero");
    return a;
  }
  static Elem from_int(long v) { return static_cast<Elem>(((v % 2) + 2) % 2); }
};

template <class F>
struct DenseMatrix {
  using Elem = typename F::Elem;
  int rows = 0, cols = 0;
  std::vector<std::vector<Elem>> a;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(r, std::vector<Elem>(c, F::zero())) {}

  // Row-reduce in place; returns the rank.
  int rank_in_place() {
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
      int p = -1;
      for (int i = r; i < rows; ++i)
        if (!F::is_zero(a[i][c])) {
          p = i;
          break;
        }
      if (p < 0) continue;
      std::swap(a[r], a[p]);
      Elem inv = F::div(F::one(), a[r][c]);
      for (int j = c; j < cols; ++j) a[r][j] = F::mul(a[r][j], inv);
      for (int i = 0; i < rows; ++i) {
        if (i == r || F::is_zero(a[i][c])) continue;
        Elem f = a[i][c];
        for (int j = c; j < cols; ++j) a[i][j] = F::sub(a[i][j], F::mul(f, a[r][j]));
      }
      ++r;
    }
    return r;
  }

  int rank() const {
    DenseMatrix copy = *this;
    return copy.rank_in_place();
  }

  // Basis of the right kernel (columns x with A x = 0).
  std::vector<std::vector<Elem>> kernel_basis() const {
    DenseMatrix m = *this;
    // record pivot column per reduced row
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
      int p = -1;
      for (int i = r; i < m.rows; ++i)
        if (!F::is_zero(m.a[i][c])) {
          p = i;
          break;
        }
      if (p < 0) continue;
      std::swap(m.a[r], m.a[p]);
      Elem inv = F::div(F::one(), m.a[r][c]);
      for (int j = c; j < m.cols; ++j) m.a[r][j] = F::mul(m.a[r][j], inv);
      for (int i = 0; i < m.rows; ++i) {
        if (i == r || F::is_zero(m.a[i][c])) continue;
        Elem f = m.a[i][c];
        for (int j = c; j < m.cols; ++j)
          m.a[i][j] = F::sub(m.a[i][j], F::mul(f, m.a[r][j]));
      }
      pivot_col.push_back(c);
      ++r;
    }
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<Elem>> basis;
    for (int c = 0; c < m.cols; ++c) {
      if (is_pivot[c]) continue;
      std::vector<Elem> v(m.cols, F::zero());
      v[c] = F::one();
      for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i)
        v[pivot_col[i]] = F::neg(m.a[i][c]);
      basis.push_back(std::move(v));
    }
    return basis;
  }
};

// dim of span(U ∪ W) - dim span(W): the rank of U modulo the subspace W.
template <class F>
int rank_modulo(const std::vector<std::vector<typename F::Elem>>& u,
                const std::vector<std::vector<typename F::Elem>>& w, int dim) {
  DenseMatrix<F> both(static_cast<int>(u.size() + w.size()), dim);
  int r = 0;
  for (auto& v : w) both.a[r++] = v;
  for (auto& v : u) both.a[r++] = v;
  DenseMatrix<F> wonly(static_cast<int>(w.size()), dim);
  r = 0;
  for (auto& v : w) wonly.a[r++] = v;
  return both.rank_in_place() - wonly.rank_in_place();
}

}  // namespace semitop::linalg
