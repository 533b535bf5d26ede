#pragma once

// Jordan triple modules: a space M with partial triple products
//   {m,a,b}_1 : M x V x V -> M,   {a,m,b}_2 : V x M x V -> M,
//   {a,b,m}_3 : V x V x M -> M,
// where {a,b,c}_1 = {c,b,a}_3 always (product 3 is read off product 1 and
// never stored). Two conjugation patterns are supported:
//   Self: every product is linear in the outer slots and conjugate-linear
//         in the middle slot, so a triple is a module over itself with all
//         three products equal to its triple product.
//   Dual: product 1 linear in the first two slots, conjugate-linear in the
//         last; product 2 conjugate-linear in all slots (the pattern of
//         dual modules; only reachable through module files).
// Over Q the two coincide.

#include "jtk/jordan_triple.hpp"
#include "jtk/linalg.hpp"

#include <string>
#include <vector>

namespace jtk {

enum class ModulePattern { Self, Dual };

struct TripleModule {
  std::string label;
  int vdim = 0;
  int mdim = 0;
  ModulePattern pattern = ModulePattern::Self;
  // a1[(i*vdim + j)*vdim + k] = {m_i, e_j, e_k}_1
  std::vector<DenseVec> a1;
  // a2[(i*mdim + j)*vdim + k] = {e_i, m_j, e_k}_2
  std::vector<DenseVec> a2;
  bool is_self = false;

  const DenseVec& basis_a1(int i, int j, int k) const {
    return a1[((size_t)i * vdim + j) * vdim + k];
  }
  const DenseVec& basis_a2(int i, int j, int k) const {
    return a2[((size_t)i * mdim + j) * vdim + k];
  }
};

// Whether the given slot (0, 1, 2) of product 1 or 2 is conjugate-linear
// under the pattern.
bool module_slot_conjugates(ModulePattern p, int product, int slot_index);

// Generic evaluators; conjugation of coordinates follows the pattern.
DenseVec act1(const TripleModule& M, const DenseVec& m, const DenseVec& x,
              const DenseVec& y);
DenseVec act2(const TripleModule& M, const DenseVec& x, const DenseVec& m,
              const DenseVec& y);
DenseVec act3(const TripleModule& M, const DenseVec& x, const DenseVec& y,
              const DenseVec& m);

// Box operators V -> M as mdim x vdim matrices.
// box_um(u, m): v |-> {u, m, v}_2;  box_mu(m, u): v |-> {m, u, v}_1.
SparseMatrix box_um(const TripleModule& M, const DenseVec& u, const DenseVec& m);
SparseMatrix box_mu(const TripleModule& M, const DenseVec& m, const DenseVec& u);

// Matrix of a box b acting on M: m |-> {a, b, m}_3.
SparseMatrix box_on_module(const TripleModule& M, const DenseVec& a,
                           const DenseVec& b);

// The module identity
//   {a,b,{c,d,e}} = {{a,b,c},d,e} - {c,{b,a,d},e} + {c,d,{a,b,e}}
// on all basis 5-tuples with the module element in each of the five
// positions; over Q(i) also with middle slots (b, d) scaled by i.
CheckReport check_module_axioms(const JordanTriple& V, const TripleModule& M);

// {m,V,V} = 0 => m = 0 and {V,m,V} = 0 => m = 0, by exact rank.
bool check_module_nondegenerate(const JordanTriple& V, const TripleModule& M);

struct M0Basis {
  int vdim = 0;
  int mdim = 0;
  int dim = 0;  // dim M0
  // Generator g_p for p < vdim*mdim is e_i box m_j with i = p / mdim,
  // j = p % mdim; for p >= vdim*mdim, with q = p - vdim*mdim, it is
  // m_j box e_i with j = q / vdim, i = q % vdim.
  std::vector<int> generator_index;    // chosen generators, increasing
  std::vector<SparseMatrix> basis_ops; // mdim x vdim matrices
  std::vector<SparseVec> basis_flat;
  std::vector<SparseVec> relation_kernel;  // over the 2*vdim*mdim generators
  SparseMatrix natural_matrix;
  CheckReport sharp_check;  // relation-swap consistency result
};

int m0_generator_count(const M0Basis& m0);
SparseMatrix m0_generator_op(const TripleModule& M, int p);

// Span of all u box m and m box v; verifies the relation-swap implication
// on every kernel relation and records the result in sharp_check.
M0Basis compute_M0(const JordanTriple& V, const TripleModule& M);

std::optional<DenseVec> coords_in_M0(const M0Basis& m0, const SparseMatrix& phi);

// phi |-> phi^natural: conjugates coordinates, swaps generators.
DenseVec natural_on_M0(const M0Basis& m0, const DenseVec& phicoords);

// [h, phi] for h in V0 (coords in v0) and phi in M0 (coords in m0),
// computed as the operator commutator (h acting on M) phi - phi (h acting
// on V) and re-expressed in the M0 basis.
DenseVec bracket_V0_M0(const JordanTriple& V, const TripleModule& M,
                       const V0Basis& v0, const M0Basis& m0,
                       const DenseVec& hcoords, const DenseVec& phicoords);

}  // namespace jtk
