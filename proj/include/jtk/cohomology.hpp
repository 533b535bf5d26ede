#pragma once

// Chevalley-Eilenberg cohomology from structure constants.
//
// A degree-k cochain on a Lie algebra L with module X is an alternating
// k-linear map L^k -> X, stored as one coefficient vector: strictly
// increasing basis tuples in colexicographic order, module coordinate
// fastest. The coboundary
//   d psi(x_0..x_k) = sum_i (-1)^i x_i . psi(.. x^_i ..)
//                   + sum_{i<j} (-1)^{i+j} psi([x_i,x_j], .. x^_i .. x^_j ..)
// is realized as an explicit sparse matrix per degree, cached on the
// complex. H^k dimensions come from exact ranks; the theta-invariant
// subcomplex is the kernel of (pullback - pushforward) and its restricted
// kernels give the involutive H^k_theta.

#include "jtk/linalg.hpp"
#include "jtk/tkk.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace jtk {

long long binom(int n, int k);

// Rank of a strictly increasing tuple in colex order: sum C(t_i, i+1).
long long colex_rank(const std::vector<int>& t);
std::vector<int> colex_tuple(long long rank, int k);

// Advance to the next increasing k-tuple out of {0..n-1} in colex order;
// false when exhausted.
bool next_increasing_tuple(std::vector<int>& t, int n);

// Sort a tuple into increasing order. Returns the permutation sign, or
// nullopt if two entries coincide.
std::optional<int> sort_tuple(std::vector<int>& t);

// A Lie algebra with a module, reduced to plain tables. Built from the TKK
// objects or from a fixed-point subalgebra; theta data is carried along
// when available.
struct LieModulePair {
  int ldim = 0;
  int xdim = 0;
  Field field = Field::Q;
  std::vector<DenseVec> f;        // f[a*ldim + b] = [e_a, e_b]
  std::vector<SparseMatrix> rho;  // rho[a]: xdim x xdim
  bool has_theta = false;
  SparseMatrix theta;
  SparseMatrix theta_tilde;

  const DenseVec& bracket_basis(int a, int b) const {
    return f[(size_t)a * ldim + b];
  }
};

LieModulePair tkk_pair(const LieAlgebraWithInvolution& L,
                       const LieModuleWithInvolution& X);
// theta = id on the fixed-point side.
LieModulePair subalgebra_pair(const EigenSubspace& kL, const EigenSubspace& kX);

struct Cochain {
  int degree = 0;
  int ldim = 0;
  int xdim = 0;
  DenseVec coeffs;  // size C(ldim, degree) * xdim

  Cochain() = default;
  Cochain(int k, int ld, int xd)
      : degree(k), ldim(ld), xdim(xd),
        coeffs((size_t)(binom(ld, k) * xd), Scalar(0)) {}

  // Value on a strictly increasing basis tuple.
  DenseVec value(const std::vector<int>& tuple) const;
  void set_value(const std::vector<int>& tuple, const DenseVec& v);

  // Alternating multilinear evaluation on arbitrary vectors.
  DenseVec evaluate(const std::vector<DenseVec>& args) const;
};

class CochainComplex {
 public:
  explicit CochainComplex(LieModulePair base) : base_(std::move(base)) {}

  const LieModulePair& base() const { return base_; }
  long long space_dim(int k) const {
    return binom(base_.ldim, k) * base_.xdim;
  }

  // The matrix of d_k : A^k -> A^{k+1}, built on first use and cached.
  const SparseMatrix& d_matrix(int k, bool parallel = true);

  Cochain coboundary(const Cochain& psi, bool parallel = true);

 private:
  LieModulePair base_;
  std::map<int, SparseMatrix> cache_;
};

// Assembles d_k without touching the cache (serial/parallel comparison).
SparseMatrix coboundary_matrix(const LieModulePair& base, int k,
                               bool parallel = true);

// Basis of the theta-invariant cochains A^k_theta, as coefficient vectors:
// kernel of (theta-pullback - theta~-pushforward). Ground field Q.
std::vector<SparseVec> theta_invariant_basis(const LieModulePair& base, int k);

struct CohomologyDims {
  long long z = 0;  // dim Z^k
  long long b = 0;  // dim B^k
  long long h = 0;  // dim H^k
};

// Ordinary cohomology by exact rank; asserts B^k inside Z^k via d d = 0.
CohomologyDims cohomology_dims(CochainComplex& cc, int k);

// Restricted complex dimensions (Z^k_theta, B^k_theta, H^k_theta).
CohomologyDims involutive_cohomology_dims(CochainComplex& cc, int k);

// d_k d_{k-1} = 0 for k = 1..k_max, as exact sparse products.
CheckReport verify_d_squared_zero(CochainComplex& cc, int k_max);

}  // namespace jtk
