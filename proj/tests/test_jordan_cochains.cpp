#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jtk/catalog.hpp"
#include "jtk/cohomology.hpp"
#include "jtk/jordan_cochains.hpp"
#include "jtk/rng.hpp"
#include "jtk/tkk.hpp"

#include <stdexcept>

using namespace jtk;

namespace {

DenseVec unit_vec(int n, int i) {
  DenseVec v(n, Scalar(0));
  v[i] = Scalar(1);
  return v;
}

SparseMatrix identity_matrix(int n) {
  SparseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, Scalar(1));
  return m;
}

SparseMatrix scalar_matrix(int n, const Scalar& c) {
  SparseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, c);
  return m;
}

struct JordanSetup {
  JordanTriple V;
  TripleModule M;
  LieAlgebraWithInvolution L;
  LieModuleWithInvolution X;
};

JordanSetup setup(const std::string& name) {
  JordanSetup s;
  s.V = builtin_triple(name);
  s.M = self_module(s.V);
  s.L = build_tkk(s.V);
  s.X = build_lie_module(s.L, s.M);
  return s;
}

struct RestrictedSetup {
  JordanTriple V;
  TripleModule M;
};

RestrictedSetup restricted(const std::string& name) {
  JordanTriple V = builtin_triple(name);
  return {restrict_scalars(V), restrict_scalars_module(V, self_module(V))};
}

// Degree-1 cochain from a matrix, in the c*mdim + r layout.
JordanCochain cochain_of_matrix(const SparseMatrix& w, int vd, int md) {
  JordanCochain omega(1, vd, md);
  for (int c = 0; c < vd; ++c) {
    DenseVec col = w.apply(unit_vec(vd, c));
    for (int r = 0; r < md; ++r) omega.coeffs[(size_t)(c * md + r)] = col[(size_t)r];
  }
  return omega;
}

JordanCochain random_combination(const std::vector<DenseVec>& basis, int k,
                                 int vd, int md, SplitMix64& rng) {
  JordanCochain omega(k, vd, md);
  for (const DenseVec& b : basis) {
    Scalar c = rng.small_scalar(Field::Q);
    for (size_t i = 0; i < b.size(); ++i) omega.coeffs[i] += c * b[i];
  }
  return omega;
}

DenseVec apply_dense(const DenseMat& a, const DenseVec& x) {
  DenseVec out(a.size(), Scalar(0));
  for (size_t r = 0; r < a.size(); ++r)
    for (size_t c = 0; c < a[r].size(); ++c) out[r] += a[r][c] * x[c];
  return out;
}

// theta~ psi theta == psi for a degree-1 cochain over a rational pair.
bool theta_invariant_degree1(const LieAlgebraWithInvolution& L,
                             const LieModuleWithInvolution& X,
                             const Cochain& psi) {
  for (int c = 0; c < L.dim; ++c) {
    DenseVec tc = L.theta_apply(unit_vec(L.dim, c));
    DenseVec img(X.xdim, Scalar(0));
    for (int a = 0; a < L.dim; ++a)
      if (!tc[(size_t)a].is_zero()) dense_axpy(img, tc[(size_t)a], psi.value({a}));
    img = X.theta_apply(img);
    dense_axpy(img, Scalar(-1), psi.value({c}));
    if (!dense_is_zero(img)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("jordan restriction reads the left blocks") {
  JordanSetup s = setup("diag:3");
  LieModulePair pair = tkk_pair(s.L, s.X);
  SplitMix64 rng(41);

  // Degree 0: the module element itself, projected to the left copy.
  Cochain psi0(0, s.L.dim, s.X.xdim);
  for (auto& c : psi0.coeffs) c = rng.small_scalar(Field::Q);
  JordanCochain r0 = jordan_restriction(s.L, s.X, psi0);
  REQUIRE(r0.degree == 0);
  REQUIRE((int)r0.coeffs.size() == s.M.mdim);
  for (int r = 0; r < s.M.mdim; ++r) CHECK(r0.coeffs[(size_t)r] == psi0.coeffs[(size_t)r]);

  for (int k = 1; k <= 2; ++k) {
    Cochain psi(k, s.L.dim, s.X.xdim);
    for (auto& c : psi.coeffs) c = rng.small_scalar(Field::Q);
    JordanCochain rk = jordan_restriction(s.L, s.X, psi);
    // On left-block tuples the value is the left block of psi's value.
    std::vector<int> t(k);
    for (int i = 0; i < k; ++i) t[i] = i;
    DenseVec got = rk.value(t);
    DenseVec full = psi.value(t);
    for (int r = 0; r < s.M.mdim; ++r) CHECK(got[(size_t)r] == full[(size_t)r]);
  }

  JordanCochain rz = jordan_restriction(s.L, s.X, Cochain(2, s.L.dim, s.X.xdim));
  CHECK(dense_is_zero(rz.coeffs));

  CHECK_THROWS_AS(jordan_restriction(s.L, s.X, Cochain(1, 5, s.X.xdim)),
                  std::invalid_argument);
}

TEST_CASE("triple derivation predicate") {
  // Conjugation by the rotation generator derives the symmetric 2x2 triple:
  // w(b0) = -b1, w(b1) = 2 b0 - 2 b2, w(b2) = b1 in the basis
  // b0 = E11, b1 = E12 + E21, b2 = E22.
  JordanTriple V = builtin_triple("sym-real:2");
  TripleModule M = self_module(V);
  SparseMatrix w(3, 3);
  w.set(1, 0, Scalar(-1));
  w.set(0, 1, Scalar(2));
  w.set(2, 1, Scalar(-2));
  w.set(1, 2, Scalar(1));
  CHECK(is_triple_derivation(V, M, w));
  // The identity is not: it scales {xxx} by 1 on the left and 3 on the right.
  CHECK_FALSE(is_triple_derivation(V, M, identity_matrix(3)));
  CHECK(is_triple_derivation(V, M, SparseMatrix(3, 3)));

  // Multiplication by i derives the 1x1 complex matrix triple: the middle
  // slot conjugates, so the three slot contributions sum to i.
  JordanTriple Vc = builtin_triple("mat:1,1");
  TripleModule Mc = self_module(Vc);
  CHECK(is_triple_derivation(Vc, Mc, scalar_matrix(1, Scalar::i())));
  CHECK_FALSE(is_triple_derivation(Vc, Mc, identity_matrix(1)));

  // Same map after restricting scalars: [[0,-1],[1,0]] in the basis (1, i).
  RestrictedSetup rs = restricted("mat:1,1");
  SparseMatrix wi(2, 2);
  wi.set(0, 1, Scalar(-1));
  wi.set(1, 0, Scalar(1));
  CHECK(is_triple_derivation(rs.V, rs.M, wi));
}

TEST_CASE("extendability of low-degree cochains") {
  JordanTriple V = builtin_triple("sym-real:2");
  TripleModule M = self_module(V);

  // Degree 0 and the zero cochain are always extendable.
  CHECK(is_extendable(V, M, JordanCochain(0, 3, 3)).pass);
  for (int k = 1; k <= 3; ++k) CHECK(is_extendable(V, M, JordanCochain(k, 3, 3)).pass);

  // The identity map is extendable on every triple: its defect for a
  // relation sum lambda e_i box e_j = 0 is twice the relation itself.
  for (const char* name : {"line", "diag:2", "diag:3", "sym-real:2", "ut:2"}) {
    JordanTriple W = builtin_triple(name);
    TripleModule WM = self_module(W);
    CHECK(is_extendable(W, WM, cochain_of_matrix(identity_matrix(W.dim), W.dim, W.dim)).pass);
  }
  // Over Q(i) multiplication by i is extendable as well: the two defect
  // terms pick up i and conj(i) and cancel against the relation.
  for (const char* name : {"sym:2", "mat:2,2"}) {
    JordanTriple W = builtin_triple(name);
    TripleModule WM = self_module(W);
    CHECK(is_extendable(W, WM, cochain_of_matrix(identity_matrix(W.dim), W.dim, W.dim)).pass);
    CHECK(is_extendable(W, WM,
                        cochain_of_matrix(scalar_matrix(W.dim, Scalar::i()), W.dim, W.dim))
              .pass);
  }

  // A triple derivation is extendable.
  SparseMatrix w(3, 3);
  w.set(1, 0, Scalar(-1));
  w.set(0, 1, Scalar(2));
  w.set(2, 1, Scalar(-2));
  w.set(1, 2, Scalar(1));
  CHECK(is_extendable(V, M, cochain_of_matrix(w, 3, 3)).pass);
}

TEST_CASE("extendable subspace dimensions") {
  struct Row {
    const char* name;
    int ext1, ext2, ext3;
  };
  // ext1 oracles: diag:N admits exactly the diagonal maps (the relation
  // e_r box e_s = 0 for r != s with companions forces off-diagonal entries
  // out); sym-real:2 carries the rotation derivation plus the identity;
  // the rational dimension over Q(i) counts i-multiples separately, e.g.
  // mat:1,1 has no relations so everything (id and i id) extends. Degrees
  // 2 and 3 collapse to zero for every builtin.
  const Row rows[] = {
      {"line", 1, -1, -1},      {"diag:2", 2, 0, -1},    {"diag:3", 3, 0, 0},
      {"diag:4", 4, 0, 0},      {"sym-real:2", 2, 0, 0}, {"ut:2", 3, 0, 0},
      {"heis3", 8, 0, 0},       {"mat:1,1", 2, 0, 0},    {"sym:2", 5, 0, 0},
      {"mat:2,2", 8, 0, 0},
  };
  for (const Row& row : rows) {
    CAPTURE(row.name);
    JordanTriple V = builtin_triple(row.name);
    TripleModule M = self_module(V);
    auto e1 = extendable_subspace(V, M, 1);
    CHECK((int)e1.size() == row.ext1);
    for (const DenseVec& b : e1) {
      JordanCochain omega(1, V.dim, M.mdim);
      omega.coeffs = b;
      CHECK(is_extendable(V, M, omega).pass);
    }
    if (row.ext2 >= 0) CHECK((int)extendable_subspace(V, M, 2).size() == row.ext2);
    if (row.ext3 >= 0) CHECK((int)extendable_subspace(V, M, 3).size() == row.ext3);
  }

  // diag:2 at degree 2 by hand: the relation e0 box e1 = 0 with companions
  // a = b = e0 forces omega(e0,e1) box e0 terms to vanish, and a = b = e1
  // kills the rest, so only the zero cochain extends.
  JordanTriple D2 = builtin_triple("diag:2");
  TripleModule D2M = self_module(D2);
  JordanCochain nz(2, 2, 2);
  nz.coeffs[0] = Scalar(1);
  CHECK_FALSE(is_extendable(D2, D2M, nz).pass);

  // A unit cochain outside the extendable span fails with a witness.
  JordanTriple S = builtin_triple("sym-real:2");
  TripleModule SM = self_module(S);
  bool found_nonextendable = false;
  for (int u = 0; u < 9 && !found_nonextendable; ++u) {
    JordanCochain omega(1, 3, 3);
    omega.coeffs[(size_t)u] = Scalar(1);
    CheckReport rep = is_extendable(S, SM, omega);
    if (!rep.pass) {
      found_nonextendable = true;
      CHECK(!rep.witness.empty());
    }
  }
  CHECK(found_nonextendable);
}

TEST_CASE("lie extension blocks and left inverse") {
  SplitMix64 rng(7);

  // Degree 0 embeds into the left block and restricts back.
  JordanSetup s0 = setup("mat:1,1");
  JordanCochain m0(0, 1, 1);
  m0.coeffs[0] = Scalar(1, 2) + Scalar::i();
  Cochain e0 = lie_extension(s0.L, s0.X, m0);
  CHECK(e0.coeffs == s0.X.embed_left(m0.coeffs));
  CHECK(jordan_restriction(s0.L, s0.X, e0).coeffs == m0.coeffs);

  for (const char* name : {"diag:3", "sym-real:2", "mat:2,2"}) {
    CAPTURE(name);
    JordanSetup s = setup(name);
    auto ext1 = extendable_subspace(s.V, s.M, 1);
    REQUIRE(!ext1.empty());
    for (int trial = 0; trial < 4; ++trial) {
      JordanCochain omega = random_combination(ext1, 1, s.V.dim, s.M.mdim, rng);
      Cochain psi = lie_extension(s.L, s.X, omega);
      // Left inverse law.
      CHECK(jordan_restriction(s.L, s.X, psi).coeffs == omega.coeffs);
      // Left block carries omega, right block its conjugate, and the
      // middle block the box-operator values on each generator pair.
      for (int c = 0; c < s.V.dim; ++c) {
        DenseVec wc(s.M.mdim, Scalar(0));
        for (int r = 0; r < s.M.mdim; ++r) wc[(size_t)r] = omega.coeffs[(size_t)(c * s.M.mdim + r)];
        DenseVec left = psi.value({c});
        DenseVec right = psi.value({s.L.right_begin() + c});
        for (int r = 0; r < s.M.mdim; ++r) {
          CHECK(left[(size_t)r] == wc[(size_t)r]);
          CHECK(right[(size_t)(s.X.right_begin() + r)] == wc[(size_t)r].conj());
        }
      }
      for (int p = 0; p < s.L.v0dim; ++p) {
        auto [ga, gb] = s.L.v0.generator_index[(size_t)p];
        DenseVec wa(s.M.mdim, Scalar(0)), wb(s.M.mdim, Scalar(0));
        for (int r = 0; r < s.M.mdim; ++r) {
          wa[(size_t)r] = omega.coeffs[(size_t)(ga * s.M.mdim + r)];
          wb[(size_t)r] = omega.coeffs[(size_t)(gb * s.M.mdim + r)];
        }
        SparseMatrix op1 = box_mu(s.M, wa, unit_vec(s.V.dim, gb));
        SparseMatrix op2 = box_um(s.M, unit_vec(s.V.dim, ga), wb);
        DenseMat opsum = dense_mat(s.M.mdim, s.V.dim);
        for (int r = 0; r < s.M.mdim; ++r) {
          for (auto& [c2, val] : op1.rows[(size_t)r]) opsum[(size_t)r][(size_t)c2] += val;
          for (auto& [c2, val] : op2.rows[(size_t)r]) opsum[(size_t)r][(size_t)c2] += val;
        }
        SparseMatrix ops(s.M.mdim, s.V.dim);
        for (int r = 0; r < s.M.mdim; ++r)
          for (int c2 = 0; c2 < s.V.dim; ++c2)
            if (!opsum[(size_t)r][(size_t)c2].is_zero())
              ops.set(r, c2, opsum[(size_t)r][(size_t)c2]);
        auto coords = coords_in_M0(s.X.m0, ops);
        REQUIRE(coords);
        DenseVec mid = psi.value({s.L.mid_begin() + p});
        for (int i = 0; i < s.X.m0dim; ++i)
          CHECK(mid[(size_t)(s.X.mid_begin() + i)] == (*coords)[(size_t)i]);
      }
    }
    // Degrees 2 and 3 have no nonzero extendable cochains on the builtin
    // triples, so the left-inverse law there reduces to the zero cochain.
    CHECK(extendable_subspace(s.V, s.M, 2).empty());
    Cochain z2 = lie_extension(s.L, s.X, JordanCochain(2, s.V.dim, s.M.mdim));
    CHECK(dense_is_zero(z2.coeffs));
  }

  // A non-extendable cochain is rejected with the witness in the message.
  JordanSetup sr = setup("sym-real:2");
  JordanCochain bad(1, 3, 3);
  bad.coeffs[1] = Scalar(1);
  if (!is_extendable(sr.V, sr.M, bad).pass)
    CHECK_THROWS_AS(lie_extension(sr.L, sr.X, bad), std::invalid_argument);
}

TEST_CASE("extensions of derivations are cocycles") {
  // Real case: the rotation derivation of the symmetric 2x2 triple.
  JordanSetup s = setup("sym-real:2");
  SparseMatrix w(3, 3);
  w.set(1, 0, Scalar(-1));
  w.set(0, 1, Scalar(2));
  w.set(2, 1, Scalar(-2));
  w.set(1, 2, Scalar(1));
  Cochain psi = lie_extension(s.L, s.X, cochain_of_matrix(w, 3, 3));
  LieModulePair pair = tkk_pair(s.L, s.X);
  CHECK(dense_is_zero(coboundary_matrix(pair, 1).apply(psi.coeffs)));
  // Degree-1 extensions are theta-invariant (odd degree).
  CHECK(theta_invariant_degree1(s.L, s.X, psi));

  // Complex case: multiplication by i on the 1x1 matrix triple. The right
  // block of the extension is conjugated, which is exactly what makes the
  // coboundary vanish.
  JordanSetup sc = setup("mat:1,1");
  JordanCochain wi = cochain_of_matrix(scalar_matrix(1, Scalar::i()), 1, 1);
  Cochain psic = lie_extension(sc.L, sc.X, wi);
  CHECK(psic.value({0})[0] == Scalar::i());
  CHECK(dense_is_zero(psic.value({1})));
  CHECK(psic.value({2})[2] == -Scalar::i());
  LieModulePair pairc = tkk_pair(sc.L, sc.X);
  CHECK(dense_is_zero(coboundary_matrix(pairc, 1).apply(psic.coeffs)));
}

TEST_CASE("worked rectangular example") {
  JordanSetup s = setup("mat:2,2");
  int vd = 4;
  // v = E11, u = E22, m = [[1,-1],[-1,1]], b = v, s = E12 + E21.
  DenseVec m(vd, Scalar(0));
  m[0] = Scalar(1);
  m[1] = Scalar(-1);
  m[2] = Scalar(-1);
  m[3] = Scalar(1);
  DenseVec v = unit_vec(vd, 0), u = unit_vec(vd, 3);
  DenseVec sv(vd, Scalar(0));
  sv[1] = Scalar(1);
  sv[2] = Scalar(1);

  // phi = m box v - v box m is an inner structural transformation.
  DenseMat phi = dense_mat(vd, vd);
  {
    SparseMatrix p1 = box_mu(s.M, m, v), p2 = box_um(s.M, v, m);
    for (int r = 0; r < vd; ++r) {
      for (auto& [c, val] : p1.rows[(size_t)r]) phi[(size_t)r][(size_t)c] += val;
      for (auto& [c, val] : p2.rows[(size_t)r]) phi[(size_t)r][(size_t)c] -= val;
    }
  }
  // Under the half-normalized product phi(u) = s/2 and phi(v) = -s/2.
  DenseVec phiu = apply_dense(phi, u), phiv = apply_dense(phi, v);
  for (int r = 0; r < vd; ++r) {
    CHECK(phiu[(size_t)r] == Scalar(1, 2) * sv[(size_t)r]);
    CHECK(phiv[(size_t)r] == -(Scalar(1, 2) * sv[(size_t)r]));
  }

  // psi = coboundary-style cochain psi(z) = -l_b . (z . mu_phi) where
  // mu_phi is phi embedded in the middle block and l_b the right copy
  // of b.
  SparseMatrix phis(vd, vd);
  for (int r = 0; r < vd; ++r)
    for (int c = 0; c < vd; ++c)
      if (!phi[(size_t)r][(size_t)c].is_zero()) phis.set(r, c, phi[(size_t)r][(size_t)c]);
  auto pc = coords_in_M0(s.X.m0, phis);
  REQUIRE(pc);
  DenseVec mu_phi(s.X.xdim, Scalar(0));
  for (int i = 0; i < s.X.m0dim; ++i) mu_phi[(size_t)(s.X.mid_begin() + i)] = (*pc)[(size_t)i];
  DenseVec l_b(s.L.dim, Scalar(0));
  l_b[(size_t)s.L.right_begin()] = Scalar(1);
  Cochain psi(1, s.L.dim, s.X.xdim);
  for (int a = 0; a < s.L.dim; ++a) {
    DenseVec val = s.X.act(l_b, s.X.act(unit_vec(s.L.dim, a), mu_phi));
    for (int r = 0; r < s.X.xdim; ++r)
      psi.coeffs[(size_t)((size_t)a * s.X.xdim + r)] = -val[(size_t)r];
  }

  // psi on the left copy lands in the middle block as -phi(y) box b.
  for (int c = 0; c < vd; ++c) {
    DenseVec val = psi.value({c});
    auto oc = coords_in_M0(s.X.m0, box_mu(s.M, apply_dense(phi, unit_vec(vd, c)), v));
    REQUIRE(oc);
    DenseVec expect(s.X.xdim, Scalar(0));
    for (int i = 0; i < s.X.m0dim; ++i)
      expect[(size_t)(s.X.mid_begin() + i)] = -(*oc)[(size_t)i];
    CHECK(val == expect);
  }
  // psi vanishes on the right copy.
  for (int c = 0; c < vd; ++c) CHECK(dense_is_zero(psi.value({s.L.right_begin() + c})));
  // The involution sends psi's left values to b box phi(x).
  for (int c = 0; c < vd; ++c) {
    DenseVec val = s.X.theta_apply(psi.value({c}));
    auto oc = coords_in_M0(s.X.m0, box_um(s.M, v, apply_dense(phi, unit_vec(vd, c))));
    REQUIRE(oc);
    DenseVec expect(s.X.xdim, Scalar(0));
    for (int i = 0; i < s.X.m0dim; ++i) expect[(size_t)(s.X.mid_begin() + i)] = (*oc)[(size_t)i];
    CHECK(val == expect);
  }

  // omega2 = J^2 d1 psi is a nonzero Jordan 2-coboundary, witnessing
  // dim B^2 >= 1 for this pair.
  LieModulePair pair = tkk_pair(s.L, s.X);
  CochainComplex cx(pair);
  Cochain dpsi = cx.coboundary(psi);
  JordanCochain w2 = jordan_restriction(s.L, s.X, dpsi);
  CHECK(!dense_is_zero(w2.coeffs));

  // Closed form omega2(x,y) = {phi(y),b,x} - {phi(x),b,y} on basis pairs.
  for (int i = 0; i < vd; ++i)
    for (int j = i + 1; j < vd; ++j) {
      DenseVec expect = act1(s.M, apply_dense(phi, unit_vec(vd, j)), v, unit_vec(vd, i));
      dense_axpy(expect, Scalar(-1),
                 act1(s.M, apply_dense(phi, unit_vec(vd, i)), v, unit_vec(vd, j)));
      CHECK(w2.value({i, j}) == expect);
    }

  // The golden value omega2(v, u) = s/4.
  DenseVec w2vu = w2.value({0, 3});
  for (int r = 0; r < vd; ++r) CHECK(w2vu[(size_t)r] == Scalar(1, 4) * sv[(size_t)r]);

  // omega2 is not extendable; the witness is the vanishing box pair
  // E11 box E22 (both box orders are the zero operator).
  CheckReport rep = is_extendable(s.V, s.M, w2);
  CHECK_FALSE(rep.pass);
  CHECK(rep.witness == "relation 1*(e0 box e3) = 0 with a=(0) b=(0)");
  CHECK(box_um(s.M, v, u).is_zero());
  CHECK(box_um(s.M, u, v).is_zero());
}

TEST_CASE("triple derivation spaces with frozen dimensions") {
  // line: w{xxx} = 3w{xxx} forces w = 0.
  {
    JordanTriple V = builtin_triple("line");
    DerivationSpaces d = triple_derivation_space(V, self_module(V));
    CHECK(d.derivation_basis.empty());
    CHECK(d.inner_basis.empty());
    CHECK(d.h1_theta_dim == 0);
  }
  // sym-real:2: derivations = the rotation conjugation, and it is inner.
  {
    JordanTriple V = builtin_triple("sym-real:2");
    TripleModule M = self_module(V);
    DerivationSpaces d = triple_derivation_space(V, M);
    CHECK(d.derivation_basis.size() == 1);
    CHECK(d.inner_basis.size() == 1);
    CHECK(d.h1_theta_dim == 0);
    SparseMatrix w(3, 3);
    w.set(1, 0, Scalar(-1));
    w.set(0, 1, Scalar(2));
    w.set(2, 1, Scalar(-2));
    w.set(1, 2, Scalar(1));
    CHECK(solve_in_span(d.derivation_basis, cochain_of_matrix(w, 3, 3).coeffs, 9));
    // The identity is not a derivation, so it cannot be in the span.
    CHECK_FALSE(
        solve_in_span(d.derivation_basis, cochain_of_matrix(identity_matrix(3), 3, 3).coeffs, 9));
  }
  // Restricted 1x1 complex matrices: multiplications by purely imaginary
  // scalars, all inner.
  {
    RestrictedSetup rs = restricted("mat:1,1");
    DerivationSpaces d = triple_derivation_space(rs.V, rs.M);
    CHECK(d.derivation_basis.size() == 1);
    CHECK(d.inner_basis.size() == 1);
    CHECK(d.h1_theta_dim == 0);
    SparseMatrix wi(2, 2);
    wi.set(0, 1, Scalar(-1));
    wi.set(1, 0, Scalar(1));
    CHECK(solve_in_span(d.derivation_basis, cochain_of_matrix(wi, 2, 2).coeffs, 4));
  }
  // Restricted 2x2 complex matrices: x -> ax - xb with a, b skew-hermitian,
  // modulo the joint center; real dimension 4 + 4 - 1 = 7, all inner.
  {
    RestrictedSetup rs = restricted("mat:2,2");
    DerivationSpaces d = triple_derivation_space(rs.V, rs.M);
    CHECK(d.derivation_basis.size() == 7);
    CHECK(d.inner_basis.size() == 7);
    CHECK(d.h1_theta_dim == 0);
  }
  CHECK_THROWS_AS(triple_derivation_space(builtin_triple("mat:2,2"),
                                          self_module(builtin_triple("mat:2,2"))),
                  std::invalid_argument);
}

TEST_CASE("theta cocycles restrict to derivations") {
  for (const char* name : {"line", "mat:1,1", "sym-real:2"}) {
    CAPTURE(name);
    RestrictedSetup rs = restricted(name);
    LieAlgebraWithInvolution L = build_tkk(rs.V);
    LieModuleWithInvolution X = build_lie_module(L, rs.M);
    ThetaOneCocycles tc = theta_one_cocycle_restrictions(L, X);
    DerivationSpaces d = triple_derivation_space(rs.V, rs.M);
    int n = rs.V.dim * rs.M.mdim;
    // Restricted invariant cocycles and triple derivations agree as
    // subspaces, and likewise coboundaries and inner derivations.
    CHECK(rank_of_vectors(tc.z_restricted, n) == (int)d.derivation_basis.size());
    CHECK(rank_of_vectors(tc.b_restricted, n) == (int)d.inner_basis.size());
    for (const DenseVec& zv : tc.z_restricted)
      CHECK(solve_in_span(d.derivation_basis, zv, n));
    for (const DenseVec& dv : d.derivation_basis)
      CHECK(solve_in_span(tc.z_restricted, dv, n));
    for (const DenseVec& bv : tc.b_restricted) CHECK(solve_in_span(d.inner_basis, bv, n));
    for (const DenseVec& iv : d.inner_basis) CHECK(solve_in_span(tc.b_restricted, iv, n));
  }
  // h1_theta_via_lie cross-checks the Lie pipeline against the direct
  // solve internally; every builtin self-pair has vanishing H^1_theta.
  for (const char* name : {"line", "mat:1,1", "sym-real:2", "mat:2,2"}) {
    CAPTURE(name);
    RestrictedSetup rs = restricted(name);
    CHECK(h1_theta_via_lie(rs.V, rs.M) == 0);
  }
}

TEST_CASE("structural pairs") {
  // 1x1 complex matrices: S(x) = s x with S*(x) = conj(s) x; the space of
  // linear structural pairs is spanned by (1,1) and (i,-i).
  JordanTriple Vc = builtin_triple("mat:1,1");
  TripleModule Mc = self_module(Vc);
  CHECK(is_structural(Vc, Mc, {identity_matrix(1), identity_matrix(1)}));
  CHECK(is_structural(Vc, Mc,
                      {scalar_matrix(1, Scalar::i()), scalar_matrix(1, -Scalar::i())}));
  CHECK_FALSE(is_structural(Vc, Mc,
                            {scalar_matrix(1, Scalar::i()), scalar_matrix(1, Scalar::i())}));
  auto sp1 = structural_pair_space(Vc, Mc);
  CHECK(sp1.size() == 2);

  // sym-real:2: S_b(x) = bx + x b^T for b in gl_2, S* = S_{b^T}; the
  // correspondence is injective, dimension 4.
  JordanTriple Vs = builtin_triple("sym-real:2");
  TripleModule Ms = self_module(Vs);
  auto sps = structural_pair_space(Vs, Ms);
  CHECK(sps.size() == 4);
  for (const StructuralPair& P : sps) CHECK(is_structural(Vs, Ms, P));
  CHECK(is_structural(Vs, Ms, {identity_matrix(3), identity_matrix(3)}));

  // mat:2,2: S(x) = ax + xb over C in real dimension 16, minus the
  // 2-dimensional kernel (a, b) = (lambda, -lambda): 14.
  JordanTriple Vm = builtin_triple("mat:2,2");
  TripleModule Mm = self_module(Vm);
  auto spm = structural_pair_space(Vm, Mm);
  CHECK(spm.size() == 14);

  // Box pairs are structural in both orientations.
  SplitMix64 rng(91);
  DenseVec bu(4), bm(4);
  for (auto& c : bu) c = rng.small_scalar(Field::Qi);
  for (auto& c : bm) c = rng.small_scalar(Field::Qi);
  CHECK(is_structural(Vm, Mm, {box_um(Mm, bu, bm), box_mu(Mm, bm, bu)}));
  CHECK(is_structural(Vm, Mm, {box_mu(Mm, bm, bu), box_um(Mm, bu, bm)}));

  // Rational combinations stay structural.
  std::vector<mpq_class> coeffs;
  for (size_t i = 0; i < spm.size(); ++i) coeffs.push_back(mpq_class((long)(i % 3) - 1, 2));
  CHECK(is_structural(Vm, Mm, combine_structural_pairs(spm, coeffs, 4, 4)));

  // A triple derivation pairs with its negative.
  SparseMatrix w(3, 3);
  w.set(1, 0, Scalar(-1));
  w.set(0, 1, Scalar(2));
  w.set(2, 1, Scalar(-2));
  w.set(1, 2, Scalar(1));
  SparseMatrix mw(3, 3);
  mw.set(1, 0, Scalar(1));
  mw.set(0, 1, Scalar(-2));
  mw.set(2, 1, Scalar(2));
  mw.set(1, 2, Scalar(-1));
  CHECK(is_structural(Vs, Ms, {w, mw}));
}

TEST_CASE("derivations induced by structural pairs") {
  // S = S* gives w = 0 and the zero derivation.
  JordanSetup s1 = setup("mat:1,1");
  Cochain D0 =
      derivation_from_structural(s1.L, s1.X, {identity_matrix(1), identity_matrix(1)});
  CHECK(dense_is_zero(D0.coeffs));

  // (i, -i) gives w = i id; the construction asserts d1 D = 0 internally
  // and the result coincides with the Lie extension of w.
  Cochain Di = derivation_from_structural(
      s1.L, s1.X, {scalar_matrix(1, Scalar::i()), scalar_matrix(1, -Scalar::i())});
  CHECK(!dense_is_zero(Di.coeffs));
  Cochain Li = lie_extension(s1.L, s1.X, cochain_of_matrix(scalar_matrix(1, Scalar::i()), 1, 1));
  CHECK(Di.coeffs == Li.coeffs);

  // A derivation pair (w, -w) reproduces the Lie extension of w and is
  // theta-invariant.
  JordanSetup ss = setup("sym-real:2");
  SparseMatrix w(3, 3);
  w.set(1, 0, Scalar(-1));
  w.set(0, 1, Scalar(2));
  w.set(2, 1, Scalar(-2));
  w.set(1, 2, Scalar(1));
  SparseMatrix mw(3, 3);
  mw.set(1, 0, Scalar(1));
  mw.set(0, 1, Scalar(-2));
  mw.set(2, 1, Scalar(2));
  mw.set(1, 2, Scalar(-1));
  Cochain Dw = derivation_from_structural(ss.L, ss.X, {w, mw});
  Cochain Lw = lie_extension(ss.L, ss.X, cochain_of_matrix(w, 3, 3));
  CHECK(Dw.coeffs == Lw.coeffs);
  CHECK(theta_invariant_degree1(ss.L, ss.X, Dw));

  // An inner structural pair induces an inner Lie derivation: D lies in
  // the image of d0, the adjoint coboundaries.
  JordanSetup sm = setup("mat:2,2");
  StructuralPair boxp{box_um(sm.M, unit_vec(4, 0), unit_vec(4, 1)),
                      box_mu(sm.M, unit_vec(4, 1), unit_vec(4, 0))};
  Cochain D = derivation_from_structural(sm.L, sm.X, boxp);
  CHECK(!dense_is_zero(D.coeffs));
  LieModulePair pair = tkk_pair(sm.L, sm.X);
  std::vector<DenseVec> ad_cols;
  for (const SparseVec& c : image_basis(coboundary_matrix(pair, 0)))
    ad_cols.push_back(to_dense(c, (int)D.coeffs.size()));
  CHECK(solve_in_span(ad_cols, D.coeffs, (int)D.coeffs.size()));

  // Non-structural input is rejected.
  CHECK_THROWS_AS(derivation_from_structural(
                      s1.L, s1.X, {scalar_matrix(1, Scalar::i()), scalar_matrix(1, Scalar::i())}),
                  std::invalid_argument);
}

TEST_CASE("restrictions of lie derivations are structural") {
  // psi = 0 restricts to the zero pair.
  JordanSetup s0 = setup("diag:2");
  StructuralPair Z = restriction_is_structural(s0.L, s0.X, Cochain(1, s0.L.dim, s0.X.xdim));
  CHECK(Z.s.is_zero());
  CHECK(Z.s_star.is_zero());

  // Roundtrip through the extension of a derivation: returns (w, -w).
  JordanSetup ss = setup("sym-real:2");
  SparseMatrix w(3, 3);
  w.set(1, 0, Scalar(-1));
  w.set(0, 1, Scalar(2));
  w.set(2, 1, Scalar(-2));
  w.set(1, 2, Scalar(1));
  Cochain psi = lie_extension(ss.L, ss.X, cochain_of_matrix(w, 3, 3));
  StructuralPair P = restriction_is_structural(ss.L, ss.X, psi);
  for (int c = 0; c < 3; ++c) {
    DenseVec wc = w.apply(unit_vec(3, c));
    DenseVec sc = P.s.apply(unit_vec(3, c));
    DenseVec ssc = P.s_star.apply(unit_vec(3, c));
    for (int r = 0; r < 3; ++r) {
      CHECK(sc[(size_t)r] == wc[(size_t)r]);
      CHECK(ssc[(size_t)r] == -wc[(size_t)r]);
    }
  }

  // Complex roundtrip: the (i, -i) derivation comes back exactly; the
  // theta-invariance branch asserts the restriction is a triple
  // derivation along the way.
  JordanSetup s1 = setup("mat:1,1");
  Cochain Di = derivation_from_structural(
      s1.L, s1.X, {scalar_matrix(1, Scalar::i()), scalar_matrix(1, -Scalar::i())});
  StructuralPair Pi = restriction_is_structural(s1.L, s1.X, Di);
  CHECK(Pi.s.get(0, 0) == Scalar::i());
  CHECK(Pi.s_star.get(0, 0) == -Scalar::i());

  // The restriction of the degree-0 coboundary of a middle-block element
  // is the negated inner structural transformation.
  JordanSetup sm = setup("mat:2,2");
  DenseVec m(4, Scalar(0));
  m[0] = Scalar(1);
  m[1] = Scalar(-1);
  m[2] = Scalar(-1);
  m[3] = Scalar(1);
  DenseVec v = unit_vec(4, 0);
  DenseMat phi = dense_mat(4, 4);
  {
    SparseMatrix p1 = box_mu(sm.M, m, v), p2 = box_um(sm.M, v, m);
    for (int r = 0; r < 4; ++r) {
      for (auto& [c, val] : p1.rows[(size_t)r]) phi[(size_t)r][(size_t)c] += val;
      for (auto& [c, val] : p2.rows[(size_t)r]) phi[(size_t)r][(size_t)c] -= val;
    }
  }
  SparseMatrix phis(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (!phi[(size_t)r][(size_t)c].is_zero()) phis.set(r, c, phi[(size_t)r][(size_t)c]);
  auto pc = coords_in_M0(sm.X.m0, phis);
  REQUIRE(pc);
  DenseVec mu_phi(sm.X.xdim, Scalar(0));
  for (int i = 0; i < sm.X.m0dim; ++i)
    mu_phi[(size_t)(sm.X.mid_begin() + i)] = (*pc)[(size_t)i];
  Cochain ad_mu(1, sm.L.dim, sm.X.xdim);
  for (int a = 0; a < sm.L.dim; ++a) {
    DenseVec val = sm.X.act_basis(a, mu_phi);
    for (int r = 0; r < sm.X.xdim; ++r)
      ad_mu.coeffs[(size_t)((size_t)a * sm.X.xdim + r)] = val[(size_t)r];
  }
  StructuralPair Pad = restriction_is_structural(sm.L, sm.X, ad_mu);
  for (int c = 0; c < 4; ++c) {
    DenseVec got = Pad.s.apply(unit_vec(4, c));
    for (int r = 0; r < 4; ++r) CHECK(got[(size_t)r] == -phi[(size_t)r][(size_t)c]);
  }

  // Non-cocycles are rejected.
  SplitMix64 rng(17);
  Cochain junk(1, sm.L.dim, sm.X.xdim);
  for (auto& c : junk.coeffs) c = rng.small_scalar(Field::Qi);
  LieModulePair pair = tkk_pair(sm.L, sm.X);
  if (!dense_is_zero(coboundary_matrix(pair, 1).apply(junk.coeffs)))
    CHECK_THROWS_AS(restriction_is_structural(sm.L, sm.X, junk), std::invalid_argument);
}

TEST_CASE("structural decomposition on matrix triples") {
  // S already inner: 1 box S*(1) recovers it and the remainder is zero.
  JordanTriple Vc = builtin_triple("mat:1,1");
  TripleModule Mc = self_module(Vc);
  StructuralDecomposition dc =
      decompose_structural_matrix(Vc, Mc, {identity_matrix(1), identity_matrix(1)});
  CHECK(dc.unit_image[0] == Scalar(1));
  CHECK(dense_is_zero(dc.s0_coords));

  // Box pairs and random structural combinations on 2x2 decompose with
  // zero residual (the function rechecks S = S1 + S0 internally).
  JordanTriple Vm = builtin_triple("mat:2,2");
  TripleModule Mm = self_module(Vm);
  StructuralPair boxp{box_um(Mm, unit_vec(4, 0), unit_vec(4, 1)),
                      box_mu(Mm, unit_vec(4, 1), unit_vec(4, 0))};
  StructuralDecomposition db = decompose_structural_matrix(Vm, Mm, boxp);
  M0Basis m0 = compute_M0(Vm, Mm);
  // Recompose S from the certificate and compare entrywise.
  DenseMat recomposed = dense_mat(4, 4);
  for (int r = 0; r < 4; ++r)
    for (auto& [c, val] : db.s1.rows[(size_t)r]) recomposed[(size_t)r][(size_t)c] += val;
  for (size_t p = 0; p < m0.basis_ops.size(); ++p)
    if (!db.s0_coords[p].is_zero())
      for (int r = 0; r < 4; ++r)
        for (auto& [c, val] : m0.basis_ops[p].rows[(size_t)r])
          recomposed[(size_t)r][(size_t)c] += db.s0_coords[p] * val;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) CHECK(recomposed[(size_t)r][(size_t)c] == boxp.s.get(r, c));

  auto spm = structural_pair_space(Vm, Mm);
  SplitMix64 rng(23);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<mpq_class> coeffs;
    for (size_t i = 0; i < spm.size(); ++i)
      coeffs.push_back(rng.small_scalar(Field::Q).re);
    StructuralPair P = combine_structural_pairs(spm, coeffs, 4, 4);
    decompose_structural_matrix(Vm, Mm, P);  // throws on any residual
  }

  // Rectangular matrix triples have no unit, so the decomposition is
  // undefined there.
  JordanTriple Va = builtin_triple("mat:1,2");
  TripleModule Ma = self_module(Va);
  CHECK_THROWS_AS(
      decompose_structural_matrix(
          Va, Ma, StructuralPair{SparseMatrix(Ma.mdim, Va.dim), SparseMatrix(Ma.mdim, Va.dim)}),
      std::invalid_argument);
}

TEST_CASE("jordan cohomology dimensions") {
  // H^0 = {m : m box v = 0 for all v} vanishes for every builtin
  // nondegenerate self-pair.
  for (const std::string& name : builtin_names()) {
    CAPTURE(name);
    JordanTriple V = builtin_triple(name);
    TripleModule M = self_module(V);
    CHECK(check_module_nondegenerate(V, M));
    CohomologyDims h0 = jordan_cohomology_dims(V, M, 0);
    CHECK(h0.h == 0);
  }

  // line: the TKK algebra is sl_2 and the extension of the identity spans
  // both the restricted cocycles and coboundaries.
  JordanTriple Vl = builtin_triple("line");
  TripleModule Ml = self_module(Vl);
  CohomologyDims l1 = jordan_cohomology_dims(Vl, Ml, 1);
  CHECK(l1.z == 1);
  CHECK(l1.b == 1);
  CHECK(l1.h == 0);

  CohomologyDims s1 = jordan_cohomology_dims(builtin_triple("sym-real:2"),
                                             self_module(builtin_triple("sym-real:2")), 1);
  CHECK(s1.z == 4);
  CHECK(s1.b == 4);
  CHECK(s1.h == 0);
  CohomologyDims s1i = jordan_cohomology_dims(builtin_triple("sym-real:2"),
                                              self_module(builtin_triple("sym-real:2")), 1, true);
  CHECK(s1i.z == 1);
  CHECK(s1i.b == 1);
  CHECK(s1i.h == 0);

  // Restricted 1x1 complex matrices: H^1 = H^2 = 0.
  RestrictedSetup rs = restricted("mat:1,1");
  CohomologyDims m1 = jordan_cohomology_dims(rs.V, rs.M, 1);
  CHECK(m1.z == m1.b);
  CHECK(m1.h == 0);
  CohomologyDims m1i = jordan_cohomology_dims(rs.V, rs.M, 1, true);
  CHECK(m1i.h == 0);
  CohomologyDims m2 = jordan_cohomology_dims(rs.V, rs.M, 2);
  CHECK(m2.h == 0);

  CHECK_THROWS_AS(jordan_cohomology_dims(Vl, Ml, -1), std::invalid_argument);
}

TEST_CASE("extendable two-cocycles vanish") {
  for (const char* name : {"line", "sym-real:2", "diag:3"}) {
    CAPTURE(name);
    JordanTriple V = builtin_triple(name);
    CHECK(extendable_two_cocycles_vanish(V, self_module(V)).pass);
  }
  RestrictedSetup rs = restricted("mat:1,1");
  CHECK(extendable_two_cocycles_vanish(rs.V, rs.M).pass);
}

TEST_CASE("three conditions on degree-3 cochains") {
  JordanTriple Vs = builtin_triple("sym-real:2");
  TripleModule Ms = self_module(Vs);
  CHECK(check_three_conditions(Vs, Ms, JordanCochain(3, 3, 3)));

  // Commutative diagonal triples: every bracket [a,b] vanishes and the
  // commutator conditions hold for any cochain.
  JordanTriple Vd = builtin_triple("diag:3");
  TripleModule Md = self_module(Vd);
  for (int u = 0; u < 3; ++u) {
    JordanCochain omega(3, 3, 3);
    omega.coeffs[(size_t)u] = Scalar(1);
    CHECK(check_three_conditions(Vd, Md, omega));
  }

  // Upper-triangular 2x2: the unit cochain at coordinate 0 violates the
  // four-slot commutator equalities (witnessed by a = E11, b = E12,
  // c = E22, d = E12 against the repeated-argument value).
  JordanTriple Vu = builtin_triple("ut:2");
  TripleModule Mu = self_module(Vu);
  JordanCochain viol(3, 3, 3);
  viol.coeffs[0] = Scalar(1);
  CHECK_FALSE(check_three_conditions(Vu, Mu, viol));

  // Frozen solution-space dimensions over the full degree-3 space, every
  // basis element passing the checker.
  struct Row {
    const char* name;
    int dim;
  };
  const Row rows[] = {{"sym-real:2", 1}, {"ut:2", 1}, {"heis3", 16}, {"diag:3", 3}};
  for (const Row& row : rows) {
    CAPTURE(row.name);
    JordanTriple V = builtin_triple(row.name);
    TripleModule M = self_module(V);
    auto sol = three_condition_solution_space(V, M);
    CHECK((int)sol.size() == row.dim);
    for (const DenseVec& b : sol) {
      JordanCochain omega(3, V.dim, M.mdim);
      omega.coeffs = b;
      CHECK(check_three_conditions(V, M, omega));
    }
  }

  // Rational triples only, degree exactly 3.
  JordanTriple Vq = builtin_triple("mat:2,2");
  CHECK_THROWS_AS(check_three_conditions(Vq, self_module(Vq), JordanCochain(3, 4, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_three_conditions(Vs, Ms, JordanCochain(2, 3, 3)),
                  std::invalid_argument);
}

TEST_CASE("three-cocycle equivalence on the fixed subalgebra") {
  // The extendable degree-3 subspace is zero for the builtin triples, so
  // the exhaustive run over its basis is empty and the zero cochain is
  // the only extendable representative; both paths agree on it.
  for (const char* name : {"diag:2", "diag:3", "sym-real:2"}) {
    CAPTURE(name);
    JordanTriple V = builtin_triple(name);
    TripleModule M = self_module(V);
    auto ext3 = extendable_subspace(V, M, 3);
    std::vector<JordanCochain> tests;
    for (const DenseVec& b : ext3) {
      JordanCochain omega(3, V.dim, M.mdim);
      omega.coeffs = b;
      tests.push_back(omega);
    }
    EquivalenceReport rep = three_cocycle_equivalence_test(V, M, tests);
    CHECK(rep.tested == (int)tests.size());
    CHECK(rep.agreements == rep.tested);
    CHECK(rep.check.pass);
  }
  {
    JordanTriple V = builtin_triple("sym-real:2");
    TripleModule M = self_module(V);
    EquivalenceReport rep =
        three_cocycle_equivalence_test(V, M, {JordanCochain(3, 3, 3)});
    CHECK(rep.tested == 1);
    CHECK(rep.agreements == 1);
    CHECK(rep.check.pass);

    // Non-extendable inputs are rejected: the three-condition solution
    // element of this triple is not extendable.
    auto sol = three_condition_solution_space(V, M);
    REQUIRE(sol.size() == 1);
    JordanCochain omega(3, 3, 3);
    omega.coeffs = sol[0];
    CHECK_FALSE(is_extendable(V, M, omega).pass);
    CHECK_THROWS_AS(three_cocycle_equivalence_test(V, M, {omega}),
                    std::invalid_argument);
  }
}
