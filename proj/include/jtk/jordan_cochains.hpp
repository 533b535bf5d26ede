#pragma once

// The Jordan layer over the TKK envelope: moving alternating cochains
// between a triple system V with module M and the Lie pair
// (L(V), L(M)).
//  - extendability of omega: V^k -> M and its Lie extension,
//  - the Jordan restriction J^k back from the envelope,
//  - Jordan cohomology dimensions computed through the Lie complex,
//  - triple derivations, inner derivations and H^1_theta(V, M),
//  - structural transformation pairs (S, S*) and the Lie derivations
//    they induce,
//  - the three-condition characterization of extendable degree-3
//    cochains whose extension is a cocycle on the fixed subalgebra.

#include "jtk/cohomology.hpp"
#include "jtk/jordan_triple.hpp"
#include "jtk/linalg.hpp"
#include "jtk/tkk.hpp"
#include "jtk/triple_module.hpp"

#include <vector>

namespace jtk {

// Alternating k-linear maps V^k -> M reuse the Cochain layout with
// ldim = dim V and xdim = dim M; degree 1 is then a full mdim x vdim
// coefficient matrix stored column-by-column (entry (r, c) at c*mdim + r).
using JordanCochain = Cochain;

// A pair of maps V -> M subject to the two polarized structural
// identities
//   S{xyz} + {x, S*y, z} = {z, y, Sx} + {x, y, Sz}
//   S*{xyz} + {x, Sy, z} = {z, y, S*x} + {x, y, S*z}.
// The flags mark conjugate-linear maps; restricted-scalar (rational)
// inputs never need them.
struct StructuralPair {
  SparseMatrix s;       // mdim x vdim
  SparseMatrix s_star;  // mdim x vdim
  bool s_conjugate = false;
  bool s_star_conjugate = false;

  DenseVec apply_s(const DenseVec& x) const;
  DenseVec apply_s_star(const DenseVec& x) const;
};

struct DerivationSpaces {
  // Flattened mdim x vdim maps in the degree-1 JordanCochain layout.
  std::vector<DenseVec> derivation_basis;
  std::vector<DenseVec> inner_basis;
  long long h1_theta_dim = 0;
};

// J^k: restrict a Lie cochain on L(V) valued in L(M) to left-block
// arguments and project the value to the left block; degree 0 projects
// the module element itself. Throws std::invalid_argument when the
// cochain does not live over (L, X).
JordanCochain jordan_restriction(const LieAlgebraWithInvolution& L,
                                 const LieModuleWithInvolution& X,
                                 const Cochain& psi);

// omega{abc} = {omega a, b, c} + {a, omega b, c} + {a, b, omega c} on all
// basis triples (w in the mdim x vdim matrix form).
bool is_triple_derivation(const JordanTriple& V, const TripleModule& M,
                          const SparseMatrix& w);

// Whether every basis relation sum_p lambda_p e_i box e_j = 0 of V0
// forces
//   sum_p lambda_p ( omega(e_i, a_2..a_k) box (e_j + b_2 + .. + b_k)
//                  + (e_i + a_2 + .. + a_k) box omega(e_j, b_2..b_k) ) = 0
// against all basis tuples a, b (k = 1 drops the tuples). The witness
// names the first failing relation and tuple. Degree 0 is always
// extendable.
CheckReport is_extendable(const JordanTriple& V, const TripleModule& M,
                          const JordanCochain& omega);

// Basis, as coefficient vectors, of the subspace of extendable cochains
// inside the alternating maps V^k -> M.
std::vector<DenseVec> extendable_subspace(const JordanTriple& V,
                                          const TripleModule& M, int k);

// The Lie extension of an extendable omega: on pure basis tuples,
// all-left tuples map to (omega(x_1..x_k), 0, 0), all-V0 tuples with
// generators a_j box b_j to the middle value
// sum_j omega(a_1..a_k) box b_j + sum_j a_j box omega(b_1..b_k),
// all-right tuples to (0, 0, omega(y_1..y_k)), and mixed pure tuples
// to 0. Degree 0 embeds the module element into the left block.
// Throws std::invalid_argument when omega is not extendable.
Cochain lie_extension(const LieAlgebraWithInvolution& L,
                      const LieModuleWithInvolution& X,
                      const JordanCochain& omega);

// Exact solution space of the triple-derivation identity, the span of
// the inner derivations m box v - v box m, and their dimension
// difference. Requires rational scalars (restrict scalars first);
// verifies that the inner span sits inside the derivation space and
// that every inner basis element is ^natural-antisymmetric.
DerivationSpaces triple_derivation_space(const JordanTriple& V,
                                         const TripleModule& M);

// Jordan restrictions of a basis of the theta-invariant Lie 1-cocycles
// (z_restricted) and of the coboundaries of theta-fixed module elements
// (b_restricted), both as degree-1 coefficient vectors.
struct ThetaOneCocycles {
  std::vector<DenseVec> z_restricted;
  std::vector<DenseVec> b_restricted;
};
ThetaOneCocycles theta_one_cocycle_restrictions(
    const LieAlgebraWithInvolution& L, const LieModuleWithInvolution& X);

// dim H^1_theta(V, M) computed through the Lie pipeline; asserts
// agreement with the direct triple_derivation_space count. Requires
// rational scalars.
long long h1_theta_via_lie(const JordanTriple& V, const TripleModule& M);

// Both polarized identities on all basis triples; over Q(i) each slot is
// additionally scaled by i so that conjugate-linear pairs are tested
// faithfully.
bool is_structural(const JordanTriple& V, const TripleModule& M,
                   const StructuralPair& P);

// Basis of the space of structural pairs (S, S*) with both maps linear,
// solved as a rational linear system (real and imaginary parts split
// over Q(i); the space is only Q-linear because S* enters the identities
// through a conjugate-linear slot).
std::vector<StructuralPair> structural_pair_space(const JordanTriple& V,
                                                  const TripleModule& M);

// Rational linear combination of structural pairs.
StructuralPair combine_structural_pairs(
    const std::vector<StructuralPair>& basis,
    const std::vector<mpq_class>& coeffs, int mdim, int vdim);

// The Lie derivation D of a structural pair: blockwise
//   D(x, a box b, y) = (w(x), w(a) box b + a box w(b), w(y))
// with w = (S - S*) / 2. Asserts d_1 D = 0. Requires linear maps and a
// structural pair.
Cochain derivation_from_structural(const LieAlgebraWithInvolution& L,
                                   const LieModuleWithInvolution& X,
                                   const StructuralPair& P);

// From a Lie derivation psi (degree 1, d_1 psi = 0) build the pair
// (J psi, -J psi') with psi' = theta~ psi theta, assert it is
// structural, and, when psi is theta-invariant, assert J psi is a
// triple derivation.
StructuralPair restriction_is_structural(const LieAlgebraWithInvolution& L,
                                         const LieModuleWithInvolution& X,
                                         const Cochain& psi);

// S = S1 + S0 with S1 = 1 box S*(1) inner structural and S0 expressed
// exactly in the M0 basis (the matrix-triple decomposition; requires a
// unit). Throws std::logic_error if S0 escapes M0.
struct StructuralDecomposition {
  DenseVec unit_image;  // S*(1)
  SparseMatrix s1;      // 1 box S*(1)
  DenseVec s0_coords;   // S - S1 in the M0 basis
};
StructuralDecomposition decompose_structural_matrix(const JordanTriple& V,
                                                    const TripleModule& M,
                                                    const StructuralPair& P);

// (dim Z^k, dim B^k, dim H^k) of the Jordan pair (V, M): images under
// J^k of the Lie kernel and image bases. Degree 0 solves
// {m : m box v = 0 for all v} directly. The involutive variant runs the
// theta-invariant complex and requires rational scalars for k >= 1.
CohomologyDims jordan_cohomology_dims(const JordanTriple& V,
                                      const TripleModule& M, int k,
                                      bool involutive = false);

// The joint exact system {omega in A^2 : omega extendable,
// d_2 L_2(omega) = 0} has only the zero solution.
CheckReport extendable_two_cocycles_vanish(const JordanTriple& V,
                                           const TripleModule& M);

// The three conditions on a degree-3 omega over a rational triple, with
// [a,b] = a box b - b box a and [m,a] = m box a - a box m:
//   (i)   [a,b] omega(x,y,z) = omega([a,b]x,y,z) + omega(x,[a,b]y,z)
//                              + omega(x,y,[a,b]z),
//   (ii)  [omega(a,b,c),d] = [omega(d,b,c),a] = [omega(a,b,d),c]
//                          = [omega(a,d,c),b],
//   (iii) [omega(x,y,[a,b]z),c] = 0,
// each on all basis tuples.
bool check_three_conditions(const JordanTriple& V, const TripleModule& M,
                            const JordanCochain& omega);

// Basis of the solution space of the three conditions inside the full
// degree-3 cochain space, as coefficient vectors. Rational triples only.
std::vector<DenseVec> three_condition_solution_space(const JordanTriple& V,
                                                     const TripleModule& M);

// For each extendable omega in the test set, compares
// check_three_conditions with the direct vanishing of d_3 L_3(omega) on
// all increasing 4-tuples of the fixed subalgebra k(V); the check fails
// on the first disagreement.
struct EquivalenceReport {
  int tested = 0;
  int agreements = 0;
  CheckReport check;
};
EquivalenceReport three_cocycle_equivalence_test(
    const JordanTriple& V, const TripleModule& M,
    const std::vector<JordanCochain>& test_set);

}  // namespace jtk
