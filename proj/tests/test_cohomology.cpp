#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jtk/catalog.hpp"
#include "jtk/cohomology.hpp"
#include "jtk/rng.hpp"
#include "jtk/tkk.hpp"

using namespace jtk;

namespace {

DenseVec unit_vec(int n, int i) {
  DenseVec v(n, Scalar(0));
  v[i] = Scalar(1);
  return v;
}

LieModulePair adjoint_pair(const std::string& name) {
  JordanTriple V = builtin_triple(name);
  LieAlgebraWithInvolution L = build_tkk(V);
  LieModuleWithInvolution X = build_lie_module(L, self_module(V));
  return tkk_pair(L, X);
}

Cochain random_cochain(const LieModulePair& base, int k, SplitMix64& rng) {
  Cochain psi(k, base.ldim, base.xdim);
  for (auto& c : psi.coeffs) c = rng.small_scalar(base.field);
  return psi;
}

DenseVec random_vec(int n, Field field, SplitMix64& rng) {
  DenseVec v(n);
  for (auto& c : v) c = rng.small_scalar(field);
  return v;
}

DenseVec pair_bracket(const LieModulePair& base, const DenseVec& x,
                      const DenseVec& y) {
  DenseVec out(base.ldim, Scalar(0));
  for (int a = 0; a < base.ldim; ++a) {
    if (x[a].is_zero()) continue;
    for (int b = 0; b < base.ldim; ++b) {
      if (y[b].is_zero()) continue;
      dense_axpy(out, x[a] * y[b], base.bracket_basis(a, b));
    }
  }
  return out;
}

DenseVec pair_act(const LieModulePair& base, const DenseVec& x,
                  const DenseVec& m) {
  DenseVec out(base.xdim, Scalar(0));
  for (int a = 0; a < base.ldim; ++a) {
    if (x[a].is_zero()) continue;
    dense_axpy(out, x[a], base.rho[a].apply(m));
  }
  return out;
}

// The cochain involution psi -> theta~ o psi o (theta x ... x theta),
// computed through multilinear evaluation: an independent path from the
// determinant-expansion used inside theta_invariant_basis.
Cochain involution_by_evaluation(const LieModulePair& base,
                                 const Cochain& psi) {
  Cochain out(psi.degree, psi.ldim, psi.xdim);
  std::vector<int> t(psi.degree);
  for (int i = 0; i < psi.degree; ++i) t[i] = i;
  if (psi.degree == 0) {
    out.coeffs = base.theta_tilde.apply(psi.coeffs);
    return out;
  }
  do {
    std::vector<DenseVec> args;
    for (int i : t) {
      args.push_back(base.theta.apply(unit_vec(base.ldim, i)));
    }
    out.set_value(t, base.theta_tilde.apply(psi.evaluate(args)));
  } while (next_increasing_tuple(t, base.ldim));
  return out;
}

}  // namespace

TEST_CASE("colex rank and unrank round-trip in enumeration order") {
  for (int n : {5, 8}) {
    for (int k : {0, 1, 2, 3}) {
      std::vector<int> t(k);
      for (int i = 0; i < k; ++i) t[i] = i;
      long long r = 0;
      do {
        CHECK(colex_rank(t) == r);
        CHECK(colex_tuple(r, k) == t);
        ++r;
      } while (k > 0 && next_increasing_tuple(t, n));
      CHECK(r == binom(n, k));
    }
  }
  CHECK(binom(15, 3) == 455);
  CHECK(binom(30, 4) == 27405);
}

TEST_CASE("sort_tuple reports permutation sign and rejects repeats") {
  std::vector<int> t = {3, 1, 2};
  auto s = sort_tuple(t);
  REQUIRE(s.has_value());
  CHECK(*s == 1);  // (3,1,2) -> (1,2,3) is an even permutation
  CHECK(t == std::vector<int>{1, 2, 3});

  std::vector<int> u = {2, 1};
  CHECK(*sort_tuple(u) == -1);

  std::vector<int> d = {1, 4, 1};
  CHECK_FALSE(sort_tuple(d).has_value());
}

TEST_CASE("one-dimensional abelian algebra with trivial module has H1 = 1") {
  // A^0 = A^1 = Q and both differentials vanish, so Z1 = 1, B1 = 0.
  LieModulePair base;
  base.ldim = 1;
  base.xdim = 1;
  base.f.assign(1, DenseVec(1, Scalar(0)));
  base.rho.assign(1, SparseMatrix(1, 1));
  CochainComplex cc(base);
  CohomologyDims d1 = cohomology_dims(cc, 1);
  CHECK(d1.z == 1);
  CHECK(d1.b == 0);
  CHECK(d1.h == 1);
}

TEST_CASE("cochain space dimensions are C(dim L, k) * dim X") {
  LieModulePair base = adjoint_pair("mat:1,1");
  REQUIRE(base.ldim == 3);
  REQUIRE(base.xdim == 3);
  CochainComplex cc(base);
  CHECK(cc.space_dim(0) == 3);
  CHECK(cc.space_dim(1) == 9);
  CHECK(cc.space_dim(2) == 9);
  CHECK(cc.space_dim(3) == 3);
  CHECK(cc.space_dim(4) == 0);
  for (int k = 0; k <= 3; ++k) {
    const SparseMatrix& d = cc.d_matrix(k);
    CHECK(d.ncols == cc.space_dim(k));
    CHECK(d.nrows == cc.space_dim(k + 1));
  }
}

TEST_CASE("evaluation is alternating and matches stored tuple values") {
  LieModulePair base = adjoint_pair("diag:2");
  SplitMix64 rng(20260822u);
  Cochain psi = random_cochain(base, 2, rng);

  std::vector<int> t = {1, 4};
  DenseVec on_basis = psi.evaluate(
      {unit_vec(base.ldim, 1), unit_vec(base.ldim, 4)});
  CHECK(on_basis == psi.value(t));

  DenseVec x = random_vec(base.ldim, base.field, rng);
  DenseVec y = random_vec(base.ldim, base.field, rng);
  CHECK(dense_is_zero(psi.evaluate({x, x})));
  DenseVec xy = psi.evaluate({x, y});
  DenseVec yx = psi.evaluate({y, x});
  dense_scale(yx, Scalar(-1));
  CHECK(xy == yx);
}

TEST_CASE("degree-0 coboundary columns are the module action on basis") {
  LieModulePair base = adjoint_pair("diag:2");
  CochainComplex cc(base);
  const SparseMatrix& d0 = cc.d_matrix(0);
  // (d m)(x) = x.m: the column of basis module vector m_c lists rho[a] m_c
  // in the block of each singleton tuple (a).
  for (int c = 0; c < base.xdim; ++c) {
    for (int a = 0; a < base.ldim; ++a) {
      DenseVec acted = base.rho[a].apply(unit_vec(base.xdim, c));
      for (int r = 0; r < base.xdim; ++r) {
        CHECK(d0.get(a * base.xdim + r, c) == acted[r]);
      }
    }
  }
}

TEST_CASE("coboundary matrix agrees with the direct formula on vectors") {
  for (const char* name : {"diag:2", "mat:1,1", "sym:2"}) {
    CAPTURE(name);
    LieModulePair base = adjoint_pair(name);
    CochainComplex cc(base);
    SplitMix64 rng(7u);

    // Degree 1: (d psi)(x, y) = x.psi(y) - y.psi(x) - psi([x, y]).
    Cochain psi = random_cochain(base, 1, rng);
    Cochain dpsi = cc.coboundary(psi);
    for (int trial = 0; trial < 3; ++trial) {
      DenseVec x = random_vec(base.ldim, base.field, rng);
      DenseVec y = random_vec(base.ldim, base.field, rng);
      DenseVec lhs = dpsi.evaluate({x, y});
      DenseVec rhs = pair_act(base, x, psi.evaluate({y}));
      DenseVec t2 = pair_act(base, y, psi.evaluate({x}));
      dense_axpy(rhs, Scalar(-1), t2);
      dense_axpy(rhs, Scalar(-1), psi.evaluate({pair_bracket(base, x, y)}));
      CHECK(lhs == rhs);
    }

    // Degree 2 against the full alternating-sum formula.
    Cochain om = random_cochain(base, 2, rng);
    Cochain dom = cc.coboundary(om);
    for (int trial = 0; trial < 2; ++trial) {
      std::vector<DenseVec> v;
      for (int i = 0; i < 3; ++i) {
        v.push_back(random_vec(base.ldim, base.field, rng));
      }
      DenseVec lhs = dom.evaluate(v);
      DenseVec rhs(base.xdim, Scalar(0));
      for (int i = 0; i < 3; ++i) {
        std::vector<DenseVec> rest;
        for (int p = 0; p < 3; ++p) {
          if (p != i) rest.push_back(v[p]);
        }
        DenseVec term = pair_act(base, v[i], om.evaluate(rest));
        dense_axpy(rhs, Scalar(i % 2 ? -1 : 1), term);
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          std::vector<DenseVec> args = {pair_bracket(base, v[i], v[j])};
          for (int p = 0; p < 3; ++p) {
            if (p != i && p != j) args.push_back(v[p]);
          }
          dense_axpy(rhs, Scalar((i + j) % 2 ? -1 : 1), om.evaluate(args));
        }
      }
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("d squared is zero on TKK adjoint complexes") {
  for (const char* name : {"line", "diag:2", "mat:1,1"}) {
    CAPTURE(name);
    LieModulePair base = adjoint_pair(name);
    CochainComplex cc(base);
    CheckReport rep = verify_d_squared_zero(cc, 3);
    CHECK(rep.pass);
  }
}

TEST_CASE("serial and parallel assembly produce the identical matrix") {
  LieModulePair base = adjoint_pair("mat:1,1");
  for (int k : {0, 1, 2}) {
    SparseMatrix serial = coboundary_matrix(base, k, false);
    SparseMatrix parallel = coboundary_matrix(base, k, true);
    REQUIRE(serial.nrows == parallel.nrows);
    for (int r = 0; r < serial.nrows; ++r) {
      CHECK(serial.rows[r] == parallel.rows[r]);
    }
  }
}

TEST_CASE("sl2 adjoint cohomology vanishes in degrees 0 and 1") {
  // The TKK algebra of the one-dimensional complex matrix triple is sl2,
  // and its module here is the adjoint one, so Whitehead applies.
  LieModulePair base = adjoint_pair("mat:1,1");
  CochainComplex cc(base);
  CohomologyDims h0 = cohomology_dims(cc, 0);
  CHECK(h0.z == 0);
  CHECK(h0.h == 0);
  CohomologyDims h1 = cohomology_dims(cc, 1);
  CHECK(h1.h == 0);
}

TEST_CASE("theta-invariant cochains require the rational field") {
  LieModulePair base = adjoint_pair("mat:1,1");
  REQUIRE(base.field == Field::Qi);
  CHECK_THROWS_AS(theta_invariant_basis(base, 1), std::invalid_argument);
}

TEST_CASE("coboundary maps invariant cochains to invariant cochains") {
  LieModulePair base = adjoint_pair("line");
  CochainComplex cc(base);
  for (int k : {0, 1, 2}) {
    CAPTURE(k);
    std::vector<SparseVec> inv_k = theta_invariant_basis(base, k);
    std::vector<SparseVec> inv_k1 = theta_invariant_basis(base, k + 1);
    int ambient = (int)cc.space_dim(k + 1);
    const SparseMatrix& d = cc.d_matrix(k);
    for (const auto& v : inv_k) {
      SparseVec image = d.apply_sparse(v);
      CHECK(solve_in_span(inv_k1, image, ambient).has_value());
    }
  }
}

TEST_CASE("invariant basis agrees with the averaging projector") {
  LieModulePair base = adjoint_pair("sym-real:2");
  REQUIRE(base.field == Field::Q);
  int n = (int)CochainComplex(base).space_dim(1);

  // Column c of the projector (psi + theta~ psi theta)/2, built through
  // alternating evaluation rather than the kernel construction.
  std::vector<SparseVec> proj_cols;
  for (int c = 0; c < n; ++c) {
    Cochain e(1, base.ldim, base.xdim);
    e.coeffs[c] = Scalar(1);
    Cochain te = involution_by_evaluation(base, e);
    DenseVec col = e.coeffs;
    for (int r = 0; r < n; ++r) {
      col[r] += te.coeffs[r];
      col[r] *= Scalar(1, 2);
    }
    proj_cols.push_back(to_sparse(col));
  }
  int projector_rank = rank_of_vectors(proj_cols, n);
  std::vector<SparseVec> inv = theta_invariant_basis(base, 1);
  CHECK((int)inv.size() == projector_rank);

  // Every kernel vector is fixed by the involution.
  for (const auto& v : inv) {
    Cochain psi(1, base.ldim, base.xdim);
    psi.coeffs = to_dense(v, n);
    Cochain tpsi = involution_by_evaluation(base, psi);
    CHECK(tpsi.coeffs == psi.coeffs);
  }
}

TEST_CASE("involutive dimensions are bounded by the ordinary ones") {
  for (const char* name : {"line", "diag:2", "sym-real:2"}) {
    CAPTURE(name);
    LieModulePair base = adjoint_pair(name);
    CochainComplex cc(base);
    for (int k : {0, 1, 2}) {
      CAPTURE(k);
      CohomologyDims full = cohomology_dims(cc, k);
      CohomologyDims inv = involutive_cohomology_dims(cc, k);
      CHECK(inv.z <= full.z);
      CHECK(inv.b <= full.b);
      CHECK(inv.h <= full.h);
    }
  }
}

TEST_CASE("trivial involution makes the restricted complex the full one") {
  // On the fixed-point subalgebra theta restricts to the identity, so the
  // invariant cochains are all cochains and the dimensions coincide.
  JordanTriple V = builtin_triple("diag:2");
  LieAlgebraWithInvolution L = build_tkk(V);
  LieModuleWithInvolution X = build_lie_module(L, self_module(V));
  EigenSubspace kL = k_subalgebra(L);
  EigenSubspace kX = k_module(L, X, kL);
  LieModulePair base = subalgebra_pair(kL, kX);
  CochainComplex cc(base);
  for (int k : {0, 1, 2}) {
    CAPTURE(k);
    std::vector<SparseVec> inv = theta_invariant_basis(base, k);
    CHECK((long long)inv.size() == cc.space_dim(k));
    CohomologyDims full = cohomology_dims(cc, k);
    CohomologyDims restricted = involutive_cohomology_dims(cc, k);
    CHECK(full.z == restricted.z);
    CHECK(full.b == restricted.b);
    CHECK(full.h == restricted.h);
  }
}

TEST_CASE("degree-0 cohomology of nondegenerate self pairs vanishes") {
  // H^0 is the space of module vectors killed by every algebra element.
  for (const char* name : {"line", "mat:1,1", "diag:2", "sym:2"}) {
    CAPTURE(name);
    LieModulePair base = adjoint_pair(name);
    CochainComplex cc(base);
    CHECK(cohomology_dims(cc, 0).h == 0);
  }
}
