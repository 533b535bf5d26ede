#pragma once

// Exact sparse linear algebra over Q / Q(i).
//
// Sparse vectors are index-sorted entry lists with no stored zeros.
// Rank, kernel and span membership all go through a deterministic reduced
// row echelon form: columns are processed left to right and the pivot is
// the first remaining row (lowest index) with a nonzero entry in the
// column. RREF of a matrix is unique, so serial and parallel elimination
// produce identical results; the parallel path only splits the per-pivot
// row updates across threads.

#include "jtk/scalar.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace jtk {

using Entry = std::pair<int, Scalar>;
using SparseVec = std::vector<Entry>;    // sorted by index, nonzero values
using DenseVec = std::vector<Scalar>;

SparseVec to_sparse(const DenseVec& v);
DenseVec to_dense(const SparseVec& v, int n);
bool sparse_is_zero(const SparseVec& v);

bool dense_is_zero(const DenseVec& v);
// y += c * x
void dense_axpy(DenseVec& y, const Scalar& c, const DenseVec& x);
void dense_scale(DenseVec& v, const Scalar& c);
DenseVec dense_conj(const DenseVec& v);

// Small dense matrices (rows of DenseVec), used for concrete matrix
// realizations of triples and the M2(A) embedding.
using DenseMat = std::vector<DenseVec>;

DenseMat dense_mat(int rows, int cols);
DenseMat mat_mul(const DenseMat& a, const DenseMat& b);
DenseMat mat_conj_transpose(const DenseMat& a);
DenseMat mat_add(const DenseMat& a, const DenseMat& b);
void mat_axpy(DenseMat& y, const Scalar& c, const DenseMat& x);
bool mat_is_zero(const DenseMat& a);
DenseVec mat_flatten(const DenseMat& a);  // row-major

// y += c * x
void sparse_axpy(SparseVec& y, const Scalar& c, const SparseVec& x);
void sparse_scale(SparseVec& v, const Scalar& c);
SparseVec sparse_add(const SparseVec& a, const SparseVec& b);
SparseVec sparse_sub(const SparseVec& a, const SparseVec& b);
SparseVec sparse_conj(const SparseVec& a);
Scalar sparse_get(const SparseVec& v, int idx);

struct SparseMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<SparseVec> rows;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : nrows(r), ncols(c), rows(r) {}

  void set(int r, int c, const Scalar& v);
  Scalar get(int r, int c) const;
  void add_to(int r, int c, const Scalar& v);
  long nnz() const;
  bool is_zero() const;

  SparseMatrix transpose() const;
  DenseVec apply(const DenseVec& x) const;          // this * x
  SparseVec apply_sparse(const SparseVec& x) const;
  // Entries (row, value) of column c, in row order.
  std::vector<Entry> rows_of_col(int c) const;
};

// C = A * B (sparse row-major product).
SparseMatrix sparse_mul(const SparseMatrix& a, const SparseMatrix& b);

struct RrefResult {
  int rank = 0;
  std::vector<int> pivot_cols;        // increasing
  std::vector<SparseVec> rows;        // the RREF rows, zero rows dropped
};

// Unique reduced row echelon form. `parallel` selects the OpenMP update
// path; the result is identical either way.
RrefResult rref(const SparseMatrix& m, bool parallel = true);

struct RankKernel {
  int rank = 0;
  std::vector<int> pivot_cols;
  // Kernel basis in reduced echelon form: one vector per free column,
  // with a unit entry at that free column. Ordered by free column.
  std::vector<SparseVec> kernel;
};

// Rank and right kernel {x : M x = 0} of M.
RankKernel rank_kernel(const SparseMatrix& m, bool parallel = true);

int rank_of(const SparseMatrix& m);

// Rank of the span of a list of vectors (as rows).
int rank_of_vectors(const std::vector<SparseVec>& vecs, int ncols);
int rank_of_vectors(const std::vector<DenseVec>& vecs, int ncols);

// Exact coefficients expressing `target` in the span of `gens`, or nullopt.
// Solves sum_j x_j gens[j] = target; free coordinates are set to zero, so
// the answer is deterministic.
std::optional<DenseVec> solve_in_span(const std::vector<SparseVec>& gens,
                                      const SparseVec& target, int ncols);
std::optional<DenseVec> solve_in_span(const std::vector<DenseVec>& gens,
                                      const DenseVec& target, int ncols);

// Basis of the column space: the columns of M at the RREF pivot positions.
std::vector<SparseVec> image_basis(const SparseMatrix& m);

}  // namespace jtk
