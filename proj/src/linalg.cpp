#include "jtk/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jtk {

SparseVec to_sparse(const DenseVec& v) {
  SparseVec out;
  for (int i = 0; i < (int)v.size(); ++i)
    if (!v[i].is_zero()) out.emplace_back(i, v[i]);
  return out;
}

DenseVec to_dense(const SparseVec& v, int n) {
  DenseVec out(n, Scalar());
  for (const auto& [i, c] : v) {
    if (i < 0 || i >= n) throw std::out_of_range("to_dense: index out of range");
    out[i] = c;
  }
  return out;
}

bool sparse_is_zero(const SparseVec& v) { return v.empty(); }

bool dense_is_zero(const DenseVec& v) {
  for (const auto& s : v)
    if (!s.is_zero()) return false;
  return true;
}

void dense_axpy(DenseVec& y, const Scalar& c, const DenseVec& x) {
  if (y.size() != x.size()) throw std::invalid_argument("dense_axpy: size mismatch");
  if (c.is_zero()) return;
  for (size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

void dense_scale(DenseVec& v, const Scalar& c) {
  for (auto& s : v) s *= c;
}

DenseVec dense_conj(const DenseVec& v) {
  DenseVec out = v;
  for (auto& s : out) s = s.conj();
  return out;
}

DenseMat dense_mat(int rows, int cols) {
  return DenseMat(rows, DenseVec(cols, Scalar()));
}

DenseMat mat_mul(const DenseMat& a, const DenseMat& b) {
  int n = (int)a.size(), k = (int)b.size(), m = k ? (int)b[0].size() : 0;
  DenseMat out = dense_mat(n, m);
  for (int i = 0; i < n; ++i) {
    if ((int)a[i].size() != k) throw std::invalid_argument("mat_mul: shape mismatch");
    for (int t = 0; t < k; ++t) {
      if (a[i][t].is_zero()) continue;
      for (int j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  }
  return out;
}

DenseMat mat_conj_transpose(const DenseMat& a) {
  int n = (int)a.size(), m = n ? (int)a[0].size() : 0;
  DenseMat out = dense_mat(m, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) out[j][i] = a[i][j].conj();
  return out;
}

DenseMat mat_add(const DenseMat& a, const DenseMat& b) {
  DenseMat out = a;
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out[i].size(); ++j) out[i][j] += b[i][j];
  return out;
}

void mat_axpy(DenseMat& y, const Scalar& c, const DenseMat& x) {
  for (size_t i = 0; i < y.size(); ++i) dense_axpy(y[i], c, x[i]);
}

bool mat_is_zero(const DenseMat& a) {
  for (const auto& row : a)
    if (!dense_is_zero(row)) return false;
  return true;
}

DenseVec mat_flatten(const DenseMat& a) {
  DenseVec out;
  for (const auto& row : a) out.insert(out.end(), row.begin(), row.end());
  return out;
}

void sparse_axpy(SparseVec& y, const Scalar& c, const SparseVec& x) {
  if (c.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() && j < x.size()) {
    if (y[i].first < x[j].first) {
      out.push_back(y[i++]);
    } else if (y[i].first > x[j].first) {
      Scalar v = c * x[j].second;
      if (!v.is_zero()) out.emplace_back(x[j].first, v);
      ++j;
    } else {
      Scalar v = y[i].second + c * x[j].second;
      if (!v.is_zero()) out.emplace_back(y[i].first, v);
      ++i;
      ++j;
    }
  }
  while (i < y.size()) out.push_back(y[i++]);
  while (j < x.size()) {
    Scalar v = c * x[j].second;
    if (!v.is_zero()) out.emplace_back(x[j].first, v);
    ++j;
  }
  y = std::move(out);
}

void sparse_scale(SparseVec& v, const Scalar& c) {
  if (c.is_zero()) {
    v.clear();
    return;
  }
  for (auto& e : v) e.second *= c;
}

SparseVec sparse_add(const SparseVec& a, const SparseVec& b) {
  SparseVec out = a;
  sparse_axpy(out, Scalar(1), b);
  return out;
}

SparseVec sparse_sub(const SparseVec& a, const SparseVec& b) {
  SparseVec out = a;
  sparse_axpy(out, Scalar(-1), b);
  return out;
}

SparseVec sparse_conj(const SparseVec& a) {
  SparseVec out = a;
  for (auto& e : out) e.second = e.second.conj();
  return out;
}

Scalar sparse_get(const SparseVec& v, int idx) {
  auto it = std::lower_bound(v.begin(), v.end(), idx,
                             [](const Entry& e, int k) { return e.first < k; });
  if (it != v.end() && it->first == idx) return it->second;
  return Scalar();
}

void SparseMatrix::set(int r, int c, const Scalar& v) {
  if (r < 0 || r >= nrows || c < 0 || c >= ncols)
    throw std::out_of_range("SparseMatrix::set");
  auto& row = rows[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, int k) { return e.first < k; });
  if (it != row.end() && it->first == c) {
    if (v.is_zero())
      row.erase(it);
    else
      it->second = v;
  } else if (!v.is_zero()) {
    row.insert(it, {c, v});
  }
}

Scalar SparseMatrix::get(int r, int c) const {
  if (r < 0 || r >= nrows || c < 0 || c >= ncols)
    throw std::out_of_range("SparseMatrix::get");
  return sparse_get(rows[r], c);
}

void SparseMatrix::add_to(int r, int c, const Scalar& v) {
  if (v.is_zero()) return;
  Scalar cur = get(r, c);
  set(r, c, cur + v);
}

long SparseMatrix::nnz() const {
  long n = 0;
  for (const auto& row : rows) n += (long)row.size();
  return n;
}

bool SparseMatrix::is_zero() const {
  for (const auto& row : rows)
    if (!row.empty()) return false;
  return true;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(ncols, nrows);
  for (int r = 0; r < nrows; ++r)
    for (const auto& [c, v] : rows[r]) t.rows[c].emplace_back(r, v);
  return t;  // each row already sorted: r increases in the outer loop
}

std::vector<Entry> SparseMatrix::rows_of_col(int c) const {
  std::vector<Entry> out;
  for (int r = 0; r < nrows; ++r) {
    Scalar v = sparse_get(rows[r], c);
    if (!v.is_zero()) out.emplace_back(r, v);
  }
  return out;
}

DenseVec SparseMatrix::apply(const DenseVec& x) const {
  if ((int)x.size() != ncols) throw std::invalid_argument("apply: size mismatch");
  DenseVec out(nrows, Scalar());
  for (int r = 0; r < nrows; ++r) {
    Scalar acc;
    for (const auto& [c, v] : rows[r]) acc += v * x[c];
    out[r] = acc;
  }
  return out;
}

SparseVec SparseMatrix::apply_sparse(const SparseVec& x) const {
  SparseVec out;
  for (int r = 0; r < nrows; ++r) {
    Scalar acc;
    for (const auto& [c, v] : rows[r]) {
      Scalar xc = sparse_get(x, c);
      if (!xc.is_zero()) acc += v * xc;
    }
    if (!acc.is_zero()) out.emplace_back(r, acc);
  }
  return out;
}

SparseMatrix sparse_mul(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.ncols != b.nrows) throw std::invalid_argument("sparse_mul: shape mismatch");
  SparseMatrix c(a.nrows, b.ncols);
  for (int r = 0; r < a.nrows; ++r) {
    SparseVec acc;
    for (const auto& [k, av] : a.rows[r]) sparse_axpy(acc, av, b.rows[k]);
    c.rows[r] = std::move(acc);
  }
  return c;
}

namespace {

// Core elimination. Rows are reduced in place; returns pivot columns and,
// for each pivot, the row index holding it. Pivot choice is the lowest
// remaining row index with a nonzero entry in the current column, so the
// outcome does not depend on thread count.
struct Elim {
  std::vector<SparseVec> rows;
  std::vector<int> pivot_cols;
  std::vector<int> pivot_rows;
};

Elim eliminate(std::vector<SparseVec> rows, int ncols, bool parallel) {
  Elim e;
  std::vector<char> used(rows.size(), 0);
  for (int col = 0; col < ncols; ++col) {
    int prow = -1;
    for (int r = 0; r < (int)rows.size(); ++r) {
      if (used[r]) continue;
      if (!rows[r].empty() && rows[r].front().first == col) {
        prow = r;
        break;
      }
    }
    if (prow < 0) continue;
    used[prow] = 1;
    e.pivot_cols.push_back(col);
    e.pivot_rows.push_back(prow);
    Scalar inv = rows[prow].front().second.inverse();
    sparse_scale(rows[prow], inv);
    const SparseVec& pivot = rows[prow];
    int n = (int)rows.size();
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
      for (int r = 0; r < n; ++r) {
        if (r == prow) continue;
        Scalar c = sparse_get(rows[r], col);
        if (!c.is_zero()) sparse_axpy(rows[r], -c, pivot);
      }
    } else {
      for (int r = 0; r < n; ++r) {
        if (r == prow) continue;
        Scalar c = sparse_get(rows[r], col);
        if (!c.is_zero()) sparse_axpy(rows[r], -c, pivot);
      }
    }
  }
  e.rows = std::move(rows);
  return e;
}

}  // namespace

RrefResult rref(const SparseMatrix& m, bool parallel) {
  Elim e = eliminate(m.rows, m.ncols, parallel);
  RrefResult res;
  res.rank = (int)e.pivot_cols.size();
  res.pivot_cols = e.pivot_cols;
  res.rows.reserve(res.rank);
  for (int r : e.pivot_rows) res.rows.push_back(std::move(e.rows[r]));
  return res;
}

RankKernel rank_kernel(const SparseMatrix& m, bool parallel) {
  RrefResult rr = rref(m, parallel);
  RankKernel rk;
  rk.rank = rr.rank;
  rk.pivot_cols = rr.pivot_cols;
  std::vector<char> is_pivot(m.ncols, 0);
  for (int c : rr.pivot_cols) is_pivot[c] = 1;
  // Free column f gives the kernel vector with 1 at f and -entry at each
  // pivot column, read off the RREF rows.
  for (int f = 0; f < m.ncols; ++f) {
    if (is_pivot[f]) continue;
    SparseVec v;
    for (int p = 0; p < rr.rank; ++p) {
      Scalar c = sparse_get(rr.rows[p], f);
      if (!c.is_zero()) v.emplace_back(rr.pivot_cols[p], -c);
    }
    v.emplace_back(f, Scalar(1));
    std::sort(v.begin(), v.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    rk.kernel.push_back(std::move(v));
  }
  return rk;
}

int rank_of(const SparseMatrix& m) { return rref(m).rank; }

int rank_of_vectors(const std::vector<SparseVec>& vecs, int ncols) {
  SparseMatrix m((int)vecs.size(), ncols);
  m.rows = vecs;
  return rank_of(m);
}

int rank_of_vectors(const std::vector<DenseVec>& vecs, int ncols) {
  SparseMatrix m((int)vecs.size(), ncols);
  for (int i = 0; i < (int)vecs.size(); ++i) m.rows[i] = to_sparse(vecs[i]);
  return rank_of(m);
}

std::optional<DenseVec> solve_in_span(const std::vector<SparseVec>& gens,
                                      const SparseVec& target, int ncols) {
  // Columns of the system are the generators; augment with the target as
  // one extra column and row-reduce.
  int k = (int)gens.size();
  SparseMatrix sys(ncols, k + 1);
  for (int j = 0; j < k; ++j)
    for (const auto& [i, c] : gens[j]) {
      if (i < 0 || i >= ncols) throw std::out_of_range("solve_in_span: generator index");
      sys.rows[i].emplace_back(j, c);
    }
  for (const auto& [i, c] : target) {
    if (i < 0 || i >= ncols) throw std::out_of_range("solve_in_span: target index");
    sys.rows[i].emplace_back(k, c);
  }
  for (auto& row : sys.rows)
    std::sort(row.begin(), row.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
  RrefResult rr = rref(sys);
  DenseVec x(k, Scalar());
  for (int p = 0; p < rr.rank; ++p) {
    int pc = rr.pivot_cols[p];
    if (pc == k) return std::nullopt;  // pivot in the augmented column
    x[pc] = sparse_get(rr.rows[p], k);
  }
  return x;
}

std::optional<DenseVec> solve_in_span(const std::vector<DenseVec>& gens,
                                      const DenseVec& target, int ncols) {
  std::vector<SparseVec> sg;
  sg.reserve(gens.size());
  for (const auto& g : gens) sg.push_back(to_sparse(g));
  return solve_in_span(sg, to_sparse(target), ncols);
}

std::vector<SparseVec> image_basis(const SparseMatrix& m) {
  RrefResult rr = rref(m);
  SparseMatrix t = m.transpose();
  std::vector<SparseVec> out;
  out.reserve(rr.rank);
  for (int c : rr.pivot_cols) out.push_back(t.rows[c]);
  return out;
}

}  // namespace jtk
