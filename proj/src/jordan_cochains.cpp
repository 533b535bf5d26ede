#include "jtk/jordan_cochains.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jtk {

namespace {

DenseVec unit_vec(int n, int i) {
  DenseVec v((size_t)n);
  v[(size_t)i] = Scalar(1);
  return v;
}

// omega at an arbitrarily ordered basis tuple: sort, pick up the sign of
// the permutation, zero on repeated entries.
DenseVec omega_value_at(const JordanCochain& w, std::vector<int> t) {
  DenseVec out((size_t)w.xdim);
  auto sign = sort_tuple(t);
  if (!sign) return out;
  out = w.value(t);
  if (*sign < 0)
    for (auto& v : out) v = -v;
  return out;
}

// acc += c * m for an mdim x vdim sparse operator.
void acc_op(DenseMat& acc, const Scalar& c, const SparseMatrix& m) {
  for (int r = 0; r < m.nrows; ++r)
    for (const auto& [col, val] : m.rows[r]) acc[(size_t)r][(size_t)col] += c * val;
}

SparseMatrix mat_to_sparse_op(const DenseMat& a, int nrows, int ncols) {
  SparseMatrix m(nrows, ncols);
  for (int r = 0; r < nrows; ++r)
    for (int c = 0; c < ncols; ++c)
      if (!a[(size_t)r][(size_t)c].is_zero()) m.set(r, c, a[(size_t)r][(size_t)c]);
  return m;
}

// Odometer over [0, base)^len; returns false after the last tuple.
bool advance_grid(std::vector<int>& g, int base) {
  for (size_t i = 0; i < g.size(); ++i) {
    if (++g[i] < base) return true;
    g[i] = 0;
  }
  return false;
}

std::string tuple_str(const std::vector<int>& t) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ")";
  return os.str();
}

std::string relation_str(const SparseVec& rel, int vd) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, lam] : rel) {
    if (!first) os << " + ";
    first = false;
    os << lam.str() << "*(e" << p / vd << " box e" << p % vd << ")";
  }
  return os.str();
}

// The defect of omega for one V0 relation and fixed companion tuples
// a, b (both empty in degree 1):
//   sum_p lam_p ( omega(e_i, a) box (e_j + sum b)
//               + (e_i + sum a) box omega(e_j, b) ),
// with both boxes taken as actual operators V -> M. Since u box m is
// conjugate-linear in m, the defect is additive and rational-homogeneous
// in omega but not i-homogeneous: over Q(i) the extendable cochains form
// a rational-linear subspace only.
DenseMat extendability_defect(const TripleModule& M, const JordanCochain& omega,
                              const SparseVec& rel, const std::vector<int>& a,
                              const std::vector<int>& b) {
  int vd = omega.ldim;
  int md = omega.xdim;
  DenseMat acc = dense_mat(md, vd);
  for (const auto& [p, lam] : rel) {
    int i = p / vd, j = p % vd;
    std::vector<int> ta{i}, tb{j};
    ta.insert(ta.end(), a.begin(), a.end());
    tb.insert(tb.end(), b.begin(), b.end());
    DenseVec wa = omega_value_at(omega, ta);
    DenseVec wb = omega_value_at(omega, tb);
    if (!dense_is_zero(wa)) {
      DenseVec right((size_t)vd);
      right[(size_t)j] += Scalar(1);
      for (int l : b) right[(size_t)l] += Scalar(1);
      acc_op(acc, lam, box_mu(M, wa, right));
    }
    if (!dense_is_zero(wb)) {
      DenseVec left((size_t)vd);
      left[(size_t)i] += Scalar(1);
      for (int l : a) left[(size_t)l] += Scalar(1);
      acc_op(acc, lam, box_um(M, left, wb));
    }
  }
  return acc;
}

void check_jordan_base(const JordanTriple& V, const TripleModule& M,
                       const JordanCochain& omega, const char* who) {
  if (omega.ldim != V.dim || omega.xdim != M.mdim)
    throw std::invalid_argument(std::string(who) +
                                ": cochain does not live over the given triple and module");
}

DenseVec half_difference(const StructuralPair& P, const DenseVec& x) {
  DenseVec w = P.apply_s(x);
  dense_axpy(w, Scalar(-1), P.apply_s_star(x));
  dense_scale(w, Scalar(1, 2));
  return w;
}

}  // namespace

DenseVec StructuralPair::apply_s(const DenseVec& x) const {
  return s.apply(s_conjugate ? dense_conj(x) : x);
}

DenseVec StructuralPair::apply_s_star(const DenseVec& x) const {
  return s_star.apply(s_star_conjugate ? dense_conj(x) : x);
}

JordanCochain jordan_restriction(const LieAlgebraWithInvolution& L,
                                 const LieModuleWithInvolution& X,
                                 const Cochain& psi) {
  if (psi.ldim != L.dim || psi.xdim != X.xdim)
    throw std::invalid_argument(
        "jordan_restriction: cochain does not live over the given algebra and module");
  int k = psi.degree;
  int vd = L.vdim, md = X.mdim;
  JordanCochain out(k, vd, md);
  if (k == 0) {
    for (int r = 0; r < md; ++r) out.coeffs[(size_t)r] = psi.coeffs[(size_t)r];
    return out;
  }
  long long nt = binom(vd, k);
  if (nt == 0) return out;
  // Left-block tuples keep their indices and their colexicographic rank
  // in the ambient enumeration, so coefficients copy over rank by rank.
  for (long long t = 0; t < nt; ++t)
    for (int r = 0; r < md; ++r)
      out.coeffs[(size_t)(t * md + r)] = psi.coeffs[(size_t)(t * X.xdim + r)];
  return out;
}

bool is_triple_derivation(const JordanTriple& V, const TripleModule& M,
                          const SparseMatrix& w) {
  int vd = V.dim;
  std::vector<DenseVec> wcol((size_t)vd);
  for (int c = 0; c < vd; ++c) wcol[(size_t)c] = w.apply(unit_vec(vd, c));
  for (int i = 0; i < vd; ++i)
    for (int j = 0; j < vd; ++j)
      for (int k = 0; k < vd; ++k) {
        DenseVec lhs = w.apply(V.basis_triple(i, j, k));
        DenseVec rhs = act1(M, wcol[(size_t)i], unit_vec(vd, j), unit_vec(vd, k));
        dense_axpy(rhs, Scalar(1),
                   act2(M, unit_vec(vd, i), wcol[(size_t)j], unit_vec(vd, k)));
        dense_axpy(rhs, Scalar(1),
                   act3(M, unit_vec(vd, i), unit_vec(vd, j), wcol[(size_t)k]));
        dense_axpy(lhs, Scalar(-1), rhs);
        if (!dense_is_zero(lhs)) return false;
      }
  return true;
}

CheckReport is_extendable(const JordanTriple& V, const TripleModule& M,
                          const JordanCochain& omega) {
  check_jordan_base(V, M, omega, "is_extendable");
  CheckReport rep;
  int k = omega.degree;
  if (k == 0) return rep;
  int vd = V.dim;
  V0Basis v0 = compute_V0(V);
  for (size_t ri = 0; ri < v0.relation_kernel.size() && rep.pass; ++ri) {
    const SparseVec& rel = v0.relation_kernel[ri];
    std::vector<int> grid((size_t)(2 * (k - 1)), 0);
    do {
      std::vector<int> a(grid.begin(), grid.begin() + (k - 1));
      std::vector<int> b(grid.begin() + (k - 1), grid.end());
      DenseMat defect = extendability_defect(M, omega, rel, a, b);
      if (!mat_is_zero(defect)) {
        rep.fail("relation " + relation_str(rel, vd) + " = 0 with a=" +
                 tuple_str(a) + " b=" + tuple_str(b));
        break;
      }
    } while (advance_grid(grid, vd));
  }
  return rep;
}

std::vector<DenseVec> extendable_subspace(const JordanTriple& V,
                                          const TripleModule& M, int k) {
  long long ntup = binom(V.dim, k);
  long long nun = ntup * M.mdim;
  if (nun == 0) return {};
  int vd = V.dim, md = M.mdim;
  V0Basis v0 = compute_V0(V);
  long long nrel = (long long)v0.relation_kernel.size();
  // The defect is additive and rational-homogeneous in omega, but over
  // Q(i) it is not i-homogeneous (u box m is conjugate-linear in m), so
  // the extendable cochains form a rational-linear space. Over Q(i) the
  // returned basis is a rational basis: unknowns split into unit cochains
  // and their i-multiples and the system is solved over Q.
  bool cx = V.field == Field::Qi;
  if (nrel == 0 || k == 0) {
    std::vector<DenseVec> full;
    for (long long u = 0; u < (cx ? 2 * nun : nun); ++u) {
      DenseVec e((size_t)nun);
      e[(size_t)(u % nun)] = u < nun ? Scalar(1) : Scalar::i();
      full.push_back(std::move(e));
    }
    return full;
  }
  long long grid_size = 1;
  for (int i = 0; i < 2 * (k - 1); ++i) grid_size *= vd;
  int stride = cx ? 2 : 1;
  long long ncols = stride * nun;
  long long nrows = nrel * grid_size * md * vd * stride;
  SparseMatrix sys((int)nrows, (int)ncols);
  for (long long u = 0; u < ncols; ++u) {
    JordanCochain w(k, vd, md);
    w.coeffs[(size_t)(u % nun)] = u < nun ? Scalar(1) : Scalar::i();
    long long row0 = 0;
    for (long long ri = 0; ri < nrel; ++ri) {
      std::vector<int> grid((size_t)(2 * (k - 1)), 0);
      do {
        std::vector<int> a(grid.begin(), grid.begin() + (k - 1));
        std::vector<int> b(grid.begin() + (k - 1), grid.end());
        DenseMat defect =
            extendability_defect(M, w, v0.relation_kernel[(size_t)ri], a, b);
        for (int r = 0; r < md; ++r)
          for (int c = 0; c < vd; ++c) {
            const Scalar& dv = defect[(size_t)r][(size_t)c];
            if (dv.is_zero()) continue;
            long long row = row0 + ((long long)r * vd + c) * stride;
            if (cx) {
              if (dv.re != 0) sys.add_to((int)row, (int)u, Scalar(dv.re));
              if (dv.im != 0) sys.add_to((int)(row + 1), (int)u, Scalar(dv.im));
            } else {
              sys.add_to((int)row, (int)u, dv);
            }
          }
        row0 += (long long)md * vd * stride;
      } while (advance_grid(grid, vd));
    }
  }
  std::vector<DenseVec> basis;
  for (const SparseVec& kv : rank_kernel(sys).kernel) {
    DenseVec dv = to_dense(kv, (int)ncols);
    DenseVec w((size_t)nun);
    for (long long u = 0; u < ncols; ++u)
      if (!dv[(size_t)u].is_zero())
        w[(size_t)(u % nun)] += u < nun ? dv[(size_t)u] : Scalar::i() * dv[(size_t)u];
    basis.push_back(std::move(w));
  }
  return basis;
}

Cochain lie_extension(const LieAlgebraWithInvolution& L,
                      const LieModuleWithInvolution& X,
                      const JordanCochain& omega) {
  check_jordan_base(L.V, X.M, omega, "lie_extension");
  CheckReport ext = is_extendable(L.V, X.M, omega);
  if (!ext.pass)
    throw std::invalid_argument("lie_extension: cochain is not extendable: " +
                                ext.witness);
  int k = omega.degree;
  int vd = L.vdim, md = X.mdim;
  Cochain out(k, L.dim, X.xdim);
  if (k == 0) {
    out.coeffs = X.embed_left(omega.coeffs);
    return out;
  }
  long long ntup = binom(L.dim, k);
  if (ntup == 0) return out;
  std::vector<int> t((size_t)k);
  for (int i = 0; i < k; ++i) t[(size_t)i] = i;
  long long rt = 0;
  do {
    int nleft = 0, nmid = 0, nright = 0;
    for (int idx : t) {
      if (idx < L.mid_begin())
        ++nleft;
      else if (idx < L.right_begin())
        ++nmid;
      else
        ++nright;
    }
    if (nleft == k) {
      // Same indices, same rank: the left copy of V starts at 0 in L.
      for (int r = 0; r < md; ++r)
        out.coeffs[(size_t)(rt * X.xdim + r)] = omega.coeffs[(size_t)(rt * md + r)];
    } else if (nright == k) {
      std::vector<int> ts(t);
      for (auto& idx : ts) idx -= L.right_begin();
      // The right copies of V and M carry conjugated coordinates, so the
      // bilinear structure constants reproduce the conjugate-linear boxes.
      // Values landing there are stored conjugated for the same reason.
      DenseVec val = dense_conj(omega.value(ts));
      for (int r = 0; r < md; ++r)
        out.coeffs[(size_t)(rt * X.xdim + X.right_begin() + r)] = val[(size_t)r];
    } else if (nmid == k) {
      std::vector<int> ta((size_t)k), tb((size_t)k);
      for (int i = 0; i < k; ++i) {
        auto [ga, gb] = L.v0.generator_index[(size_t)(t[(size_t)i] - L.mid_begin())];
        ta[(size_t)i] = ga;
        tb[(size_t)i] = gb;
      }
      DenseVec ma = omega_value_at(omega, ta);
      DenseVec mb = omega_value_at(omega, tb);
      DenseMat op = dense_mat(md, vd);
      if (!dense_is_zero(ma))
        for (int i = 0; i < k; ++i)
          acc_op(op, Scalar(1), box_mu(X.M, ma, unit_vec(vd, tb[(size_t)i])));
      if (!dense_is_zero(mb))
        for (int i = 0; i < k; ++i)
          acc_op(op, Scalar(1), box_um(X.M, unit_vec(vd, ta[(size_t)i]), mb));
      auto coords = coords_in_M0(X.m0, mat_to_sparse_op(op, md, vd));
      if (!coords)
        throw std::logic_error("lie_extension: middle value escaped M0");
      for (int i = 0; i < X.m0dim; ++i)
        out.coeffs[(size_t)(rt * X.xdim + X.mid_begin() + i)] = (*coords)[(size_t)i];
    }
    // Mixed pure tuples get the value 0: each term of the extension
    // formula contains a zero factor.
    ++rt;
  } while (next_increasing_tuple(t, L.dim));
  return out;
}

DerivationSpaces triple_derivation_space(const JordanTriple& V,
                                         const TripleModule& M) {
  if (V.field != Field::Q)
    throw std::invalid_argument(
        "triple_derivation_space: requires rational scalars; restrict scalars first");
  int vd = V.dim, md = M.mdim;
  int ncols = vd * md;
  SparseMatrix sys(vd * vd * vd * md, ncols);
  for (int i = 0; i < vd; ++i)
    for (int j = 0; j < vd; ++j)
      for (int k = 0; k < vd; ++k) {
        long long base = (((long long)i * vd + j) * vd + k) * md;
        const DenseVec& t = V.basis_triple(i, j, k);
        for (int c = 0; c < vd; ++c)
          if (!t[(size_t)c].is_zero())
            for (int r = 0; r < md; ++r)
              sys.add_to((int)(base + r), c * md + r, t[(size_t)c]);
        for (int rp = 0; rp < md; ++rp) {
          const DenseVec& a1v = M.basis_a1(rp, j, k);
          const DenseVec& a2v = M.basis_a2(i, rp, k);
          const DenseVec& a3v = M.basis_a1(rp, j, i);  // {a,b,m}_3 = {m,b,a}_1
          for (int r = 0; r < md; ++r) {
            if (!a1v[(size_t)r].is_zero())
              sys.add_to((int)(base + r), i * md + rp, -a1v[(size_t)r]);
            if (!a2v[(size_t)r].is_zero())
              sys.add_to((int)(base + r), j * md + rp, -a2v[(size_t)r]);
            if (!a3v[(size_t)r].is_zero())
              sys.add_to((int)(base + r), k * md + rp, -a3v[(size_t)r]);
          }
        }
      }
  DerivationSpaces out;
  for (const SparseVec& kv : rank_kernel(sys).kernel)
    out.derivation_basis.push_back(to_dense(kv, ncols));
  // Inner derivations m box v - v box m, reduced to a canonical basis.
  SparseMatrix gens(md * vd, ncols);
  for (int jm = 0; jm < md; ++jm)
    for (int iv = 0; iv < vd; ++iv) {
      DenseMat op = dense_mat(md, vd);
      acc_op(op, Scalar(1), box_mu(M, unit_vec(md, jm), unit_vec(vd, iv)));
      acc_op(op, Scalar(-1), box_um(M, unit_vec(vd, iv), unit_vec(md, jm)));
      for (int r = 0; r < md; ++r)
        for (int c = 0; c < vd; ++c)
          if (!op[(size_t)r][(size_t)c].is_zero())
            gens.add_to(jm * vd + iv, c * md + r, op[(size_t)r][(size_t)c]);
    }
  RrefResult rr = rref(gens);
  for (int r = 0; r < rr.rank; ++r)
    out.inner_basis.push_back(to_dense(rr.rows[(size_t)r], ncols));
  out.h1_theta_dim =
      (long long)out.derivation_basis.size() - (long long)out.inner_basis.size();
  // Every inner derivation is a derivation, and is ^natural-antisymmetric
  // as an element of M0.
  M0Basis m0 = compute_M0(V, M);
  for (const DenseVec& w : out.inner_basis) {
    if (!solve_in_span(out.derivation_basis, w, ncols))
      throw std::logic_error(
          "triple_derivation_space: inner derivation escaped the derivation space");
    SparseMatrix op(md, vd);
    for (int c = 0; c < vd; ++c)
      for (int r = 0; r < md; ++r)
        if (!w[(size_t)(c * md + r)].is_zero()) op.set(r, c, w[(size_t)(c * md + r)]);
    auto coords = coords_in_M0(m0, op);
    if (!coords)
      throw std::logic_error("triple_derivation_space: inner derivation escaped M0");
    DenseVec swapped = natural_on_M0(m0, *coords);
    dense_axpy(swapped, Scalar(1), *coords);
    if (!dense_is_zero(swapped))
      throw std::logic_error(
          "triple_derivation_space: inner derivation is not natural-antisymmetric");
  }
  return out;
}

ThetaOneCocycles theta_one_cocycle_restrictions(
    const LieAlgebraWithInvolution& L, const LieModuleWithInvolution& X) {
  LieModulePair pair = tkk_pair(L, X);
  CochainComplex cx(pair);
  ThetaOneCocycles out;
  std::vector<SparseVec> inv1 = theta_invariant_basis(pair, 1);
  if (!inv1.empty()) {
    const SparseMatrix& d1 = cx.d_matrix(1);
    SparseMatrix cols((int)cx.space_dim(2), (int)inv1.size());
    for (size_t i = 0; i < inv1.size(); ++i)
      for (const auto& [row, val] : d1.apply_sparse(inv1[i]))
        cols.add_to(row, (int)i, val);
    for (const SparseVec& kv : rank_kernel(cols).kernel) {
      Cochain psi(1, pair.ldim, pair.xdim);
      for (const auto& [i, c] : kv)
        dense_axpy(psi.coeffs, c, to_dense(inv1[(size_t)i], (int)cx.space_dim(1)));
      out.z_restricted.push_back(jordan_restriction(L, X, psi).coeffs);
    }
  }
  const SparseMatrix& d0 = cx.d_matrix(0);
  for (const SparseVec& w : theta_invariant_basis(pair, 0)) {
    Cochain psi(1, pair.ldim, pair.xdim);
    psi.coeffs = to_dense(d0.apply_sparse(w), (int)cx.space_dim(1));
    out.b_restricted.push_back(jordan_restriction(L, X, psi).coeffs);
  }
  return out;
}

long long h1_theta_via_lie(const JordanTriple& V, const TripleModule& M) {
  if (V.field != Field::Q)
    throw std::invalid_argument(
        "h1_theta_via_lie: requires rational scalars; restrict scalars first");
  LieAlgebraWithInvolution L = build_tkk(V);
  LieModuleWithInvolution X = build_lie_module(L, M);
  ThetaOneCocycles tc = theta_one_cocycle_restrictions(L, X);
  int nj = V.dim * M.mdim;
  long long z = rank_of_vectors(tc.z_restricted, nj);
  long long b = rank_of_vectors(tc.b_restricted, nj);
  long long h = z - b;
  DerivationSpaces ds = triple_derivation_space(V, M);
  if (h != ds.h1_theta_dim)
    throw std::logic_error(
        "h1_theta_via_lie: Lie pipeline disagrees with the direct derivation count");
  return h;
}

bool is_structural(const JordanTriple& V, const TripleModule& M,
                   const StructuralPair& P) {
  int vd = V.dim;
  int nscale = V.field == Field::Qi ? 4 : 1;
  for (int i = 0; i < vd; ++i)
    for (int j = 0; j < vd; ++j)
      for (int k = 0; k < vd; ++k)
        for (int sc = 0; sc < nscale; ++sc) {
          DenseVec x = unit_vec(vd, i), y = unit_vec(vd, j), z = unit_vec(vd, k);
          if (sc == 1) dense_scale(x, Scalar::i());
          if (sc == 2) dense_scale(y, Scalar::i());
          if (sc == 3) dense_scale(z, Scalar::i());
          DenseVec txyz = V.triple(x, y, z);
          DenseVec lhs = P.apply_s(txyz);
          dense_axpy(lhs, Scalar(1), act2(M, x, P.apply_s_star(y), z));
          dense_axpy(lhs, Scalar(-1), act3(M, z, y, P.apply_s(x)));
          dense_axpy(lhs, Scalar(-1), act3(M, x, y, P.apply_s(z)));
          if (!dense_is_zero(lhs)) return false;
          DenseVec lhs2 = P.apply_s_star(txyz);
          dense_axpy(lhs2, Scalar(1), act2(M, x, P.apply_s(y), z));
          dense_axpy(lhs2, Scalar(-1), act3(M, z, y, P.apply_s_star(x)));
          dense_axpy(lhs2, Scalar(-1), act3(M, x, y, P.apply_s_star(z)));
          if (!dense_is_zero(lhs2)) return false;
        }
  return true;
}

std::vector<StructuralPair> structural_pair_space(const JordanTriple& V,
                                                  const TripleModule& M) {
  int vd = V.dim, md = M.mdim;
  bool qi = V.field == Field::Qi;
  int per = md * vd;
  int nun = (qi ? 4 : 2) * per;
  int nval = vd * vd * vd * 2 * md;  // basis triples x two identities x coords
  int nrows = nval * (qi ? 2 : 1);
  // Residual of one candidate pair on all basis triples, in a fixed order.
  auto residual = [&](const StructuralPair& P) {
    DenseVec res((size_t)nval);
    size_t at = 0;
    for (int i = 0; i < vd; ++i)
      for (int j = 0; j < vd; ++j)
        for (int k = 0; k < vd; ++k) {
          DenseVec x = unit_vec(vd, i), y = unit_vec(vd, j), z = unit_vec(vd, k);
          const DenseVec& txyz = V.basis_triple(i, j, k);
          DenseVec r1 = P.apply_s(txyz);
          dense_axpy(r1, Scalar(1), act2(M, x, P.apply_s_star(y), z));
          dense_axpy(r1, Scalar(-1), act3(M, z, y, P.apply_s(x)));
          dense_axpy(r1, Scalar(-1), act3(M, x, y, P.apply_s(z)));
          DenseVec r2 = P.apply_s_star(txyz);
          dense_axpy(r2, Scalar(1), act2(M, x, P.apply_s(y), z));
          dense_axpy(r2, Scalar(-1), act3(M, z, y, P.apply_s_star(x)));
          dense_axpy(r2, Scalar(-1), act3(M, x, y, P.apply_s_star(z)));
          for (int r = 0; r < md; ++r) res[at++] = r1[(size_t)r];
          for (int r = 0; r < md; ++r) res[at++] = r2[(size_t)r];
        }
    return res;
  };
  SparseMatrix sys(nrows, nun);
  for (int u = 0; u < nun; ++u) {
    // Unknown order: Re S, [Im S,] Re S*, [Im S*], each block row-major.
    int block = u / per, e = u % per;
    int r = e / vd, c = e % vd;
    Scalar val = (qi && (block & 1)) ? Scalar::i() : Scalar(1);
    StructuralPair P;
    P.s = SparseMatrix(md, vd);
    P.s_star = SparseMatrix(md, vd);
    bool star = qi ? block >= 2 : block == 1;
    (star ? P.s_star : P.s).set(r, c, val);
    DenseVec res = residual(P);
    for (int idx = 0; idx < nval; ++idx) {
      if (qi) {
        if (res[(size_t)idx].re != 0)
          sys.add_to(2 * idx, u, Scalar(res[(size_t)idx].re));
        if (res[(size_t)idx].im != 0)
          sys.add_to(2 * idx + 1, u, Scalar(res[(size_t)idx].im));
      } else if (!res[(size_t)idx].is_zero()) {
        sys.add_to(idx, u, res[(size_t)idx]);
      }
    }
  }
  std::vector<StructuralPair> basis;
  for (const SparseVec& kv : rank_kernel(sys).kernel) {
    DenseVec kd = to_dense(kv, nun);
    StructuralPair P;
    P.s = SparseMatrix(md, vd);
    P.s_star = SparseMatrix(md, vd);
    for (int e = 0; e < per; ++e) {
      int r = e / vd, c = e % vd;
      Scalar sv, tv;
      if (qi) {
        sv = Scalar(kd[(size_t)e].re, kd[(size_t)(per + e)].re);
        tv = Scalar(kd[(size_t)(2 * per + e)].re, kd[(size_t)(3 * per + e)].re);
      } else {
        sv = kd[(size_t)e];
        tv = kd[(size_t)(per + e)];
      }
      if (!sv.is_zero()) P.s.set(r, c, sv);
      if (!tv.is_zero()) P.s_star.set(r, c, tv);
    }
    basis.push_back(std::move(P));
  }
  return basis;
}

StructuralPair combine_structural_pairs(
    const std::vector<StructuralPair>& basis,
    const std::vector<mpq_class>& coeffs, int mdim, int vdim) {
  DenseMat s = dense_mat(mdim, vdim), ss = dense_mat(mdim, vdim);
  for (size_t i = 0; i < basis.size(); ++i) {
    Scalar c(coeffs[i]);
    acc_op(s, c, basis[i].s);
    acc_op(ss, c, basis[i].s_star);
  }
  StructuralPair out;
  out.s = mat_to_sparse_op(s, mdim, vdim);
  out.s_star = mat_to_sparse_op(ss, mdim, vdim);
  return out;
}

Cochain derivation_from_structural(const LieAlgebraWithInvolution& L,
                                   const LieModuleWithInvolution& X,
                                   const StructuralPair& P) {
  if (P.s_conjugate || P.s_star_conjugate)
    throw std::invalid_argument("derivation_from_structural: linear maps required");
  if (!is_structural(L.V, X.M, P))
    throw std::invalid_argument("derivation_from_structural: pair is not structural");
  int vd = L.vdim, md = X.mdim;
  Cochain D(1, L.dim, X.xdim);
  for (int c = 0; c < vd; ++c) {
    DenseVec w = half_difference(P, unit_vec(vd, c));
    // Right copies carry conjugated coordinates, so the value w(y) placed
    // in the right block of the module is stored conjugated.
    DenseVec wc = dense_conj(w);
    for (int r = 0; r < md; ++r) {
      D.coeffs[(size_t)(c * X.xdim + r)] = w[(size_t)r];
      D.coeffs[(size_t)((L.right_begin() + c) * X.xdim + X.right_begin() + r)] =
          wc[(size_t)r];
    }
  }
  for (int p = 0; p < L.v0dim; ++p) {
    auto [a, b] = L.v0.generator_index[(size_t)p];
    DenseVec wa = half_difference(P, unit_vec(vd, a));
    DenseVec wb = half_difference(P, unit_vec(vd, b));
    DenseMat op = dense_mat(md, vd);
    if (!dense_is_zero(wa)) acc_op(op, Scalar(1), box_mu(X.M, wa, unit_vec(vd, b)));
    if (!dense_is_zero(wb))
      acc_op(op, Scalar(1), box_um(X.M, unit_vec(vd, a), wb));
    auto coords = coords_in_M0(X.m0, mat_to_sparse_op(op, md, vd));
    if (!coords)
      throw std::logic_error("derivation_from_structural: middle value escaped M0");
    for (int i = 0; i < X.m0dim; ++i)
      D.coeffs[(size_t)((L.mid_begin() + p) * X.xdim + X.mid_begin() + i)] =
          (*coords)[(size_t)i];
  }
  LieModulePair pair = tkk_pair(L, X);
  if (!dense_is_zero(coboundary_matrix(pair, 1).apply(D.coeffs)))
    throw std::logic_error("derivation_from_structural: d1 D != 0");
  return D;
}

StructuralPair restriction_is_structural(const LieAlgebraWithInvolution& L,
                                         const LieModuleWithInvolution& X,
                                         const Cochain& psi) {
  if (psi.degree != 1 || psi.ldim != L.dim || psi.xdim != X.xdim)
    throw std::invalid_argument(
        "restriction_is_structural: expected a degree-1 cochain over the pair");
  LieModulePair pair = tkk_pair(L, X);
  if (!dense_is_zero(coboundary_matrix(pair, 1).apply(psi.coeffs)))
    throw std::invalid_argument("restriction_is_structural: psi is not a Lie derivation");
  int vd = L.vdim, md = X.mdim;
  StructuralPair P;
  P.s = SparseMatrix(md, vd);
  P.s_star = SparseMatrix(md, vd);
  for (int c = 0; c < vd; ++c) {
    DenseVec val = psi.value({c});
    for (int r = 0; r < md; ++r)
      if (!val[(size_t)r].is_zero()) P.s.set(r, c, val[(size_t)r]);
    // psi' = theta~ psi theta sends e_c to theta~ psi(0,0,e_c); its left
    // block is the right block of psi at the right copy of e_c. Both
    // involutions are conjugate-linear on coordinates (the right copies
    // carry conjugated coordinates), which contributes the conjugation.
    DenseVec valr = psi.value({L.right_begin() + c});
    for (int r = 0; r < md; ++r) {
      const Scalar& v = valr[(size_t)(X.right_begin() + r)];
      if (!v.is_zero()) P.s_star.set(r, c, -v.conj());
    }
  }
  if (!is_structural(L.V, X.M, P))
    throw std::logic_error(
        "restriction_is_structural: restriction failed the structural identities");
  bool invariant = true;
  for (int c = 0; c < L.dim && invariant; ++c) {
    // theta and theta~ act conjugate-linearly on coordinates; on the real
    // basis vector e_c only the outer conjugation survives.
    DenseVec tc = L.theta_apply(unit_vec(L.dim, c));
    DenseVec img((size_t)X.xdim);
    for (int a = 0; a < L.dim; ++a)
      if (!tc[(size_t)a].is_zero()) dense_axpy(img, tc[(size_t)a], psi.value({a}));
    img = X.theta_apply(dense_conj(img));
    dense_axpy(img, Scalar(-1), psi.value({c}));
    if (!dense_is_zero(img)) invariant = false;
  }
  if (invariant && !is_triple_derivation(L.V, X.M, P.s))
    throw std::logic_error(
        "restriction_is_structural: theta-invariant restriction is not a triple derivation");
  return P;
}

StructuralDecomposition decompose_structural_matrix(const JordanTriple& V,
                                                    const TripleModule& M,
                                                    const StructuralPair& P) {
  if (!V.unit)
    throw std::invalid_argument("decompose_structural_matrix: triple has no unit");
  if (P.s_conjugate || P.s_star_conjugate)
    throw std::invalid_argument("decompose_structural_matrix: linear maps required");
  int vd = V.dim, md = M.mdim;
  StructuralDecomposition out;
  out.unit_image = P.apply_s_star(*V.unit);
  out.s1 = box_um(M, *V.unit, out.unit_image);
  DenseMat rem = dense_mat(md, vd);
  acc_op(rem, Scalar(1), P.s);
  acc_op(rem, Scalar(-1), out.s1);
  M0Basis m0 = compute_M0(V, M);
  auto coords = coords_in_M0(m0, mat_to_sparse_op(rem, md, vd));
  if (!coords)
    throw std::logic_error("decompose_structural_matrix: S - S1 escaped M0");
  out.s0_coords = *coords;
  DenseMat chk = dense_mat(md, vd);
  for (int p = 0; p < m0.dim; ++p)
    if (!out.s0_coords[(size_t)p].is_zero())
      acc_op(chk, out.s0_coords[(size_t)p], m0.basis_ops[(size_t)p]);
  mat_axpy(chk, Scalar(-1), rem);
  if (!mat_is_zero(chk))
    throw std::logic_error("decompose_structural_matrix: nonzero residual");
  return out;
}

CohomologyDims jordan_cohomology_dims(const JordanTriple& V,
                                      const TripleModule& M, int k,
                                      bool involutive) {
  if (k < 0) throw std::invalid_argument("jordan_cohomology_dims: negative degree");
  int vd = V.dim, md = M.mdim;
  if (k == 0) {
    // {m in M : m box v = 0 for all v}, solved directly.
    SparseMatrix sys(vd * md * vd, md);
    for (int rm = 0; rm < md; ++rm)
      for (int c = 0; c < vd; ++c) {
        SparseMatrix op = box_mu(M, unit_vec(md, rm), unit_vec(vd, c));
        for (int r = 0; r < op.nrows; ++r)
          for (const auto& [cc, val] : op.rows[(size_t)r])
            sys.add_to((c * md + r) * vd + cc, rm, val);
      }
    long long z = md - rank_of(sys);
    return {z, 0, z};
  }
  LieAlgebraWithInvolution L = build_tkk(V);
  LieModuleWithInvolution X = build_lie_module(L, M);
  LieModulePair pair = tkk_pair(L, X);
  CochainComplex cx(pair);
  int nj = (int)(binom(vd, k) * md);
  std::vector<DenseVec> zvecs, bvecs;
  auto restrict_vec = [&](const DenseVec& coeffs) {
    Cochain psi(k, pair.ldim, pair.xdim);
    psi.coeffs = coeffs;
    return jordan_restriction(L, X, psi).coeffs;
  };
  if (!involutive) {
    for (const SparseVec& kv : rank_kernel(cx.d_matrix(k)).kernel)
      zvecs.push_back(restrict_vec(to_dense(kv, (int)cx.space_dim(k))));
    for (const SparseVec& col : image_basis(cx.d_matrix(k - 1)))
      bvecs.push_back(restrict_vec(to_dense(col, (int)cx.space_dim(k))));
  } else {
    std::vector<SparseVec> invK = theta_invariant_basis(pair, k);
    if (!invK.empty()) {
      const SparseMatrix& dk = cx.d_matrix(k);
      SparseMatrix cols((int)cx.space_dim(k + 1), (int)invK.size());
      for (size_t i = 0; i < invK.size(); ++i)
        for (const auto& [row, val] : dk.apply_sparse(invK[i]))
          cols.add_to(row, (int)i, val);
      for (const SparseVec& kv : rank_kernel(cols).kernel) {
        DenseVec lift((size_t)cx.space_dim(k));
        for (const auto& [i, c] : kv)
          dense_axpy(lift, c, to_dense(invK[(size_t)i], (int)cx.space_dim(k)));
        zvecs.push_back(restrict_vec(lift));
      }
    }
    const SparseMatrix& dp = cx.d_matrix(k - 1);
    for (const SparseVec& w : theta_invariant_basis(pair, k - 1))
      bvecs.push_back(restrict_vec(to_dense(dp.apply_sparse(w), (int)cx.space_dim(k))));
  }
  long long z = rank_of_vectors(zvecs, nj);
  long long b = rank_of_vectors(bvecs, nj);
  return {z, b, z - b};
}

CheckReport extendable_two_cocycles_vanish(const JordanTriple& V,
                                           const TripleModule& M) {
  CheckReport rep;
  std::vector<DenseVec> ext = extendable_subspace(V, M, 2);
  if (ext.empty()) return rep;
  LieAlgebraWithInvolution L = build_tkk(V);
  LieModuleWithInvolution X = build_lie_module(L, M);
  LieModulePair pair = tkk_pair(L, X);
  CochainComplex cx(pair);
  std::vector<DenseVec> cols;
  for (const DenseVec& vec : ext) {
    JordanCochain w(2, V.dim, M.mdim);
    w.coeffs = vec;
    cols.push_back(cx.coboundary(lie_extension(L, X, w)).coeffs);
  }
  long long nullity =
      (long long)ext.size() - rank_of_vectors(cols, (int)cx.space_dim(3));
  if (nullity != 0)
    rep.fail("joint solution space has dimension " + std::to_string(nullity));
  return rep;
}

namespace {

// Residual of the three conditions on a degree-3 cochain, in a fixed row
// order, so that the checker and the linear solver agree by construction.
// The conditions are linear in omega.
DenseVec three_condition_residual(const JordanTriple& V, const TripleModule& M,
                                  const JordanCochain& omega) {
  int vd = V.dim, md = M.mdim;
  std::vector<DenseVec> uv((size_t)vd);
  for (int i = 0; i < vd; ++i) uv[(size_t)i] = unit_vec(vd, i);
  // [a,b] acting on V, on M, and [m,c] as an operator V -> M.
  auto bracket_v = [&](int a, int b, const DenseVec& x) {
    DenseVec r = V.triple(uv[(size_t)a], uv[(size_t)b], x);
    dense_axpy(r, Scalar(-1), V.triple(uv[(size_t)b], uv[(size_t)a], x));
    return r;
  };
  auto bracket_m = [&](int a, int b, const DenseVec& m) {
    DenseVec r = act3(M, uv[(size_t)a], uv[(size_t)b], m);
    dense_axpy(r, Scalar(-1), act3(M, uv[(size_t)b], uv[(size_t)a], m));
    return r;
  };
  auto bracket_op = [&](const DenseVec& m, int c) {
    DenseMat op = dense_mat(md, vd);
    acc_op(op, Scalar(1), box_mu(M, m, uv[(size_t)c]));
    acc_op(op, Scalar(-1), box_um(M, uv[(size_t)c], m));
    return op;
  };
  std::vector<Scalar> res;
  auto push_vec = [&](const DenseVec& v) {
    res.insert(res.end(), v.begin(), v.end());
  };
  auto push_mat = [&](const DenseMat& m) {
    for (const auto& row : m) res.insert(res.end(), row.begin(), row.end());
  };
  // (i): [a,b] is a derivation of omega. Both sides are antisymmetric in
  // (a,b), so a < b covers every pair.
  for (int a = 0; a < vd; ++a)
    for (int b = a + 1; b < vd; ++b)
      for (int x = 0; x < vd; ++x)
        for (int y = 0; y < vd; ++y)
          for (int z = 0; z < vd; ++z) {
            DenseVec lhs = bracket_m(a, b, omega_value_at(omega, {x, y, z}));
            dense_axpy(lhs, Scalar(-1),
                       omega.evaluate({bracket_v(a, b, uv[(size_t)x]), uv[(size_t)y],
                                       uv[(size_t)z]}));
            dense_axpy(lhs, Scalar(-1),
                       omega.evaluate({uv[(size_t)x], bracket_v(a, b, uv[(size_t)y]),
                                       uv[(size_t)z]}));
            dense_axpy(lhs, Scalar(-1),
                       omega.evaluate({uv[(size_t)x], uv[(size_t)y],
                                       bracket_v(a, b, uv[(size_t)z])}));
            push_vec(lhs);
          }
  // (ii): the four slot commutators agree.
  for (int a = 0; a < vd; ++a)
    for (int b = 0; b < vd; ++b)
      for (int c = 0; c < vd; ++c)
        for (int d = 0; d < vd; ++d) {
          DenseMat op1 = bracket_op(omega_value_at(omega, {a, b, c}), d);
          DenseMat op2 = bracket_op(omega_value_at(omega, {d, b, c}), a);
          DenseMat op3 = bracket_op(omega_value_at(omega, {a, b, d}), c);
          DenseMat op4 = bracket_op(omega_value_at(omega, {a, d, c}), b);
          mat_axpy(op2, Scalar(-1), op1);
          mat_axpy(op3, Scalar(-1), op1);
          mat_axpy(op4, Scalar(-1), op1);
          push_mat(op2);
          push_mat(op3);
          push_mat(op4);
        }
  // (iii): [omega(x, y, [a,b]z), c] = 0; antisymmetry again allows a < b.
  for (int a = 0; a < vd; ++a)
    for (int b = a + 1; b < vd; ++b)
      for (int z = 0; z < vd; ++z) {
        DenseVec bz = bracket_v(a, b, uv[(size_t)z]);
        for (int x = 0; x < vd; ++x)
          for (int y = 0; y < vd; ++y) {
            DenseVec m = omega.evaluate({uv[(size_t)x], uv[(size_t)y], bz});
            for (int c = 0; c < vd; ++c) push_mat(bracket_op(m, c));
          }
      }
  return res;
}

void check_three_condition_args(const JordanTriple& V, const TripleModule& M,
                                const JordanCochain& omega, const char* who) {
  if (V.field != Field::Q)
    throw std::invalid_argument(std::string(who) + ": requires a rational triple");
  if (omega.degree != 3)
    throw std::invalid_argument(std::string(who) + ": expected a degree-3 cochain");
  check_jordan_base(V, M, omega, who);
}

}  // namespace

bool check_three_conditions(const JordanTriple& V, const TripleModule& M,
                            const JordanCochain& omega) {
  check_three_condition_args(V, M, omega, "check_three_conditions");
  return dense_is_zero(three_condition_residual(V, M, omega));
}

std::vector<DenseVec> three_condition_solution_space(const JordanTriple& V,
                                                     const TripleModule& M) {
  if (V.field != Field::Q)
    throw std::invalid_argument(
        "three_condition_solution_space: requires a rational triple");
  int nun = (int)(binom(V.dim, 3) * M.mdim);
  if (nun == 0) return {};
  std::vector<DenseVec> cols;
  for (int u = 0; u < nun; ++u) {
    JordanCochain w(3, V.dim, M.mdim);
    w.coeffs[(size_t)u] = Scalar(1);
    cols.push_back(three_condition_residual(V, M, w));
  }
  SparseMatrix sys((int)cols[0].size(), nun);
  for (int u = 0; u < nun; ++u)
    for (size_t r = 0; r < cols[(size_t)u].size(); ++r)
      if (!cols[(size_t)u][r].is_zero()) sys.add_to((int)r, u, cols[(size_t)u][r]);
  std::vector<DenseVec> basis;
  for (const SparseVec& kv : rank_kernel(sys).kernel)
    basis.push_back(to_dense(kv, nun));
  return basis;
}

EquivalenceReport three_cocycle_equivalence_test(
    const JordanTriple& V, const TripleModule& M,
    const std::vector<JordanCochain>& test_set) {
  if (V.field != Field::Q)
    throw std::invalid_argument(
        "three_cocycle_equivalence_test: requires a rational triple");
  EquivalenceReport out;
  LieAlgebraWithInvolution L = build_tkk(V);
  LieModuleWithInvolution X = build_lie_module(L, M);
  LieModulePair pair = tkk_pair(L, X);
  CochainComplex cx(pair);
  EigenSubspace kL = k_subalgebra(L);
  std::vector<DenseVec> kb;
  for (const SparseVec& v : kL.basis) kb.push_back(to_dense(v, L.dim));
  for (size_t n = 0; n < test_set.size(); ++n) {
    const JordanCochain& omega = test_set[n];
    CheckReport ext = is_extendable(V, M, omega);
    if (!ext.pass)
      throw std::invalid_argument(
          "three_cocycle_equivalence_test: test cochain is not extendable: " +
          ext.witness);
    bool conds = check_three_conditions(V, M, omega);
    Cochain chi = cx.coboundary(lie_extension(L, X, omega));
    bool vanish = true;
    if (kL.dim >= 4) {
      std::vector<int> t{0, 1, 2, 3};
      do {
        std::vector<DenseVec> args;
        for (int idx : t) args.push_back(kb[(size_t)idx]);
        if (!dense_is_zero(chi.evaluate(args))) {
          vanish = false;
          break;
        }
      } while (next_increasing_tuple(t, kL.dim));
    }
    ++out.tested;
    if (conds == vanish) {
      ++out.agreements;
    } else {
      std::ostringstream os;
      os << "cochain " << n << ": three conditions " << (conds ? "hold" : "fail")
         << " but the restricted coboundary "
         << (vanish ? "vanishes" : "does not vanish");
      out.check.fail(os.str());
    }
  }
  return out;
}

}  // namespace jtk
