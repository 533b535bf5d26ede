#pragma once

// The TKK construction. For a Jordan triple V, the Lie algebra
// L(V) = V + V0 + V carries the bracket
//   [(x,h,y), (u,k,v)] = (hu - kx, [h,k] + x box v - u box y,
//                         k^nat y - h^nat v)
// and the involution theta(x,h,y) = (y, -h^nat, x). The triple product is
// recovered as {a,b,c} = [[a, theta(b)], c] on the left block.
//
// For a V-module M, the space L(M) = M + M0 + M is a Lie module under
//   (a,h,b).(m,phi,n) = (hm - phi a, [h,phi] + a box n - m box b,
//                        phi^nat b - h^nat n)
// with involution theta~(m,phi,n) = (n, -phi^nat, m). The module law used
// throughout is [l,l'].x = l.(l'.x) - l'.(l.x).
//
// k(V) and k(M) are the 1-eigenspaces of theta and theta~, computed over Q
// only. The M2(A) embedding sends (x, a box b, y) of the TKK algebra of an
// associative triple to the 2x2 block matrix [[a sigma(b), x],
// [sigma(y), -sigma(b) a]].

#include "jtk/jordan_triple.hpp"
#include "jtk/triple_module.hpp"

#include <string>
#include <vector>

namespace jtk {

struct LieAlgebraWithInvolution {
  std::string label;
  Field field = Field::Q;
  int dim = 0;   // 2 * vdim + v0dim
  int vdim = 0;
  int v0dim = 0;
  // f[a * dim + b] = [e_a, e_b]
  std::vector<DenseVec> f;
  SparseMatrix theta;
  // Basis layout: [0, vdim) left copy of V, [vdim, vdim + v0dim) V0,
  // [vdim + v0dim, dim) right copy of V.
  JordanTriple V;
  V0Basis v0;

  int left_begin() const { return 0; }
  int mid_begin() const { return vdim; }
  int right_begin() const { return vdim + v0dim; }

  const DenseVec& bracket_basis(int a, int b) const {
    return f[(size_t)a * dim + b];
  }
  DenseVec bracket(const DenseVec& x, const DenseVec& y) const;
  DenseVec theta_apply(const DenseVec& x) const;
  DenseVec embed_left(const DenseVec& v) const;   // iota
  DenseVec project_left(const DenseVec& x) const; // iota_p
};

// Requires verify_natural_well_defined to hold; throws std::invalid_argument
// otherwise.
LieAlgebraWithInvolution build_tkk(const JordanTriple& V);

// Antisymmetry, Jacobi on all basis triples, theta^2 = id, theta an
// automorphism, and the triple-product recovery law.
CheckReport verify_tkk(const LieAlgebraWithInvolution& L);

struct LieModuleWithInvolution {
  std::string label;
  int xdim = 0;  // 2 * mdim + m0dim
  int mdim = 0;
  int m0dim = 0;
  std::vector<SparseMatrix> rho;  // rho[a] = matrix of e_a acting
  SparseMatrix theta_tilde;
  TripleModule M;
  M0Basis m0;

  int left_begin() const { return 0; }
  int mid_begin() const { return mdim; }
  int right_begin() const { return mdim + m0dim; }

  DenseVec act_basis(int a, const DenseVec& x) const { return rho[a].apply(x); }
  DenseVec act(const DenseVec& l, const DenseVec& x) const;
  DenseVec theta_apply(const DenseVec& x) const;
  DenseVec embed_left(const DenseVec& m) const;
  DenseVec project_left(const DenseVec& x) const;
};

// Requires the module identity and the M0 relation-swap consistency;
// throws std::invalid_argument otherwise.
LieModuleWithInvolution build_lie_module(const LieAlgebraWithInvolution& L,
                                         const TripleModule& M);

// The module law [l,l'].x = l.(l'.x) - l'.(l.x) on all basis pairs, plus
// theta~(l.mu) = theta(l).theta~(mu).
CheckReport verify_lie_module(const LieAlgebraWithInvolution& L,
                              const LieModuleWithInvolution& X);

// Scalar restriction Q(i) -> Q. Basis order: e_0..e_{n-1}, then
// i e_0..i e_{n-1}. Triples over Q are returned unchanged.
JordanTriple restrict_scalars(const JordanTriple& V);
TripleModule restrict_scalars_module(const JordanTriple& V, const TripleModule& M);

struct EigenSubspace {
  int ambient_dim = 0;
  int dim = 0;
  std::vector<SparseVec> basis;  // ambient coordinates
  // Subalgebra case: f[i * dim + j] = [b_i, b_j] in this basis.
  std::vector<DenseVec> f;
  // Module case: rho[i] = action of the i-th k(V) basis vector.
  std::vector<SparseMatrix> rho;
};

// 1-eigenspace of theta; induced bracket verified closed. Ground field Q.
EigenSubspace k_subalgebra(const LieAlgebraWithInvolution& L);

// 1-eigenspace of theta~, as a module over k_subalgebra's basis.
EigenSubspace k_module(const LieAlgebraWithInvolution& L,
                       const LieModuleWithInvolution& X,
                       const EigenSubspace& kL);

// Z(A) intersect [A,A] = {0}, decided by exact ranks on the associative
// realization (which must be multiplicatively closed).
bool check_center_commutator_condition(const JordanTriple& A);

struct EmbedResult {
  int nmat = 0;  // target matrices are 2*nmat x 2*nmat
  std::vector<DenseMat> images;  // image of each L basis vector
  CheckReport well_defined;      // vanishing on all V0 relations
  CheckReport homomorphism;      // bracket preservation on basis pairs
  int image_rank = 0;
  bool injective = false;
  bool trace_zero = false;
};

// Requires an unnormalized associative realization.
EmbedResult embed_m2(const LieAlgebraWithInvolution& L);

}  // namespace jtk
