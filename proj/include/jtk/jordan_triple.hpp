#pragma once

// Finite-dimensional Jordan triple systems by structure constants.
//
// A triple V carries a product {x,y,z} that is linear and symmetric in the
// outer variables x, z and conjugate-linear in the middle variable y
// (plain linear over Q). Conjugation acts on coordinates relative to the
// fixed basis, so conj(e_j) = e_j by convention. The box operator
// a box b sends x to {a,b,x}; V0 is the span of all such operators and
// carries the conjugate-linear map natural: sum a_i box b_i  |->
// sum b_i box a_i, well defined whenever relations among boxes are stable
// under the coefficient-conjugated swap.

#include "jtk/linalg.hpp"
#include "jtk/scalar.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jtk {

// Concrete realization of a triple as a space of nmat x nmat matrices
// closed under the product x sigma(y) z + z sigma(y) x, where sigma is the
// conjugate transpose when `star` is set and the identity otherwise.
// Attached by the catalog; consumed by the M2(A) embedding.
struct AssocRealization {
  int nmat = 0;
  bool star = false;
  bool unnormalized = false;  // product carries no 1/2 factor
  std::vector<DenseMat> basis_mats;
};

struct JordanTriple {
  std::string label;
  Field field = Field::Q;
  int dim = 0;
  // c[(i*dim + j)*dim + k] = {e_i, e_j, e_k} in basis coordinates.
  std::vector<DenseVec> c;
  // Coordinates of a unit element, when one exists (matrix triples).
  std::optional<DenseVec> unit;
  // Present for triples of square matrices; see AssocRealization.
  std::optional<AssocRealization> assoc;

  bool unnormalized_assoc() const { return assoc && assoc->unnormalized; }

  const DenseVec& basis_triple(int i, int j, int k) const {
    return c[((size_t)i * dim + j) * dim + k];
  }

  // {x, y, z} with coordinate conjugation applied to y.
  DenseVec triple(const DenseVec& x, const DenseVec& y, const DenseVec& z) const;

  // Matrix of x |-> {a, b, x}; linear in a, conjugate-linear in b.
  SparseMatrix box(const DenseVec& a, const DenseVec& b) const;
  SparseMatrix box_basis(int i, int j) const;  // e_i box e_j
};

struct CheckReport {
  bool pass = true;
  std::string witness;

  void fail(const std::string& w) {
    if (pass) {
      pass = false;
      witness = w;
    }
  }
};

// Structure tensor symmetry {e_i, e_j, e_k} = {e_k, e_j, e_i}.
CheckReport check_outer_symmetry(const JordanTriple& V);

// The Jordan triple identity
//   {x,y,{a,b,c}} = {{x,y,a},b,c} - {a,{y,x,b},c} + {a,b,{x,y,c}}
// on all basis 5-tuples; over Q(i) additionally with the middle arguments
// y, b scaled by i, which exercises the conjugate-linear slots.
CheckReport check_jordan_identity(const JordanTriple& V);

struct V0Basis {
  int vdim = 0;  // dim V
  int dim = 0;   // dim V0
  // Basis pairs (i,j) selected greedily in lexicographic order; the basis
  // operator for position p is e_i box e_j with (i,j) = generator_index[p].
  std::vector<std::pair<int, int>> generator_index;
  std::vector<SparseMatrix> basis_ops;
  std::vector<SparseVec> basis_flat;  // row-major vectorized basis_ops
  // Kernel of pair |-> operator over the full pair space (pair index
  // i*dim + j): all relations sum lambda_{ij} e_i box e_j = 0.
  std::vector<SparseVec> relation_kernel;
  // Matrix of natural in this basis; apply to conjugated coordinates.
  SparseMatrix natural_matrix;
};

V0Basis compute_V0(const JordanTriple& V);

// Coordinates of the operator h in the V0 basis, or nullopt if h is not
// in V0. Deterministic (free coordinates of the underlying solve are 0).
std::optional<DenseVec> coords_in_V0(const V0Basis& v0, const SparseMatrix& h);

// For every relation sum lambda_{ij} e_i box e_j = 0, checks
// sum conj(lambda_{ij}) e_j box e_i = 0.
CheckReport verify_natural_well_defined(const JordanTriple& V, const V0Basis& v0);

// h given by V0-basis coordinates; returns the coordinates of h^natural.
// Conjugate-linear: conjugates the input coordinates, then applies
// natural_matrix.
DenseVec natural_on_V0(const V0Basis& v0, const DenseVec& hcoords);

// Row-major vectorization used for all operator solves.
SparseVec flatten_op(const SparseMatrix& m);

}  // namespace jtk
