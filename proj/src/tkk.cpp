#include "jtk/tkk.hpp"

#include <sstream>
#include <stdexcept>

namespace jtk {

namespace {

std::string basis_name(const LieAlgebraWithInvolution& L, int a) {
  std::ostringstream os;
  if (a < L.vdim) {
    os << "l" << a;
  } else if (a < L.vdim + L.v0dim) {
    os << "h" << (a - L.vdim);
  } else {
    os << "r" << (a - L.vdim - L.v0dim);
  }
  return os.str();
}

}  // namespace

DenseVec LieAlgebraWithInvolution::bracket(const DenseVec& x,
                                           const DenseVec& y) const {
  DenseVec out(dim, Scalar(0));
  for (int a = 0; a < dim; ++a) {
    if (x[a].is_zero()) continue;
    for (int b = 0; b < dim; ++b) {
      if (y[b].is_zero()) continue;
      dense_axpy(out, x[a] * y[b], bracket_basis(a, b));
    }
  }
  return out;
}

DenseVec LieAlgebraWithInvolution::theta_apply(const DenseVec& x) const {
  return theta.apply(x);
}

DenseVec LieAlgebraWithInvolution::embed_left(const DenseVec& v) const {
  DenseVec out(dim, Scalar(0));
  for (int a = 0; a < vdim; ++a) out[a] = v[a];
  return out;
}

DenseVec LieAlgebraWithInvolution::project_left(const DenseVec& x) const {
  return DenseVec(x.begin(), x.begin() + vdim);
}

LieAlgebraWithInvolution build_tkk(const JordanTriple& V) {
  auto v0 = compute_V0(V);
  auto wd = verify_natural_well_defined(V, v0);
  if (!wd.pass) {
    throw std::invalid_argument("nat map not well defined on V0 for " +
                                V.label + ": " + wd.witness);
  }

  LieAlgebraWithInvolution L;
  L.label = "L(" + V.label + ")";
  L.field = V.field;
  L.vdim = V.dim;
  L.v0dim = v0.dim;
  L.dim = 2 * V.dim + v0.dim;
  L.V = V;
  L.v0 = v0;

  const int vd = V.dim;
  const int md = v0.dim;
  const int dim = L.dim;
  const int mid = vd;
  const int right = vd + md;

  // Coordinates of e_a box e_b in the V0 basis.
  std::vector<DenseVec> pair_coords((size_t)vd * vd);
  for (int a = 0; a < vd; ++a) {
    for (int b = 0; b < vd; ++b) {
      auto c = coords_in_V0(v0, V.box_basis(a, b));
      if (!c) {
        throw std::invalid_argument("box operator outside V0 span");
      }
      pair_coords[(size_t)a * vd + b] = std::move(*c);
    }
  }

  L.f.assign((size_t)dim * dim, DenseVec(dim, Scalar(0)));
  auto put = [&](int a, int b, const DenseVec& val) {
    L.f[(size_t)a * dim + b] = val;
    DenseVec neg(dim, Scalar(0));
    dense_axpy(neg, Scalar(-1), val);
    L.f[(size_t)b * dim + a] = std::move(neg);
  };

  // [l_a, r_b] = (0, e_a box e_b, 0)
  for (int a = 0; a < vd; ++a) {
    for (int b = 0; b < vd; ++b) {
      DenseVec val(dim, Scalar(0));
      const auto& pc = pair_coords[(size_t)a * vd + b];
      for (int t = 0; t < md; ++t) val[mid + t] = pc[t];
      put(a, right + b, val);
    }
  }
  // [h_p, l_u] = (h_p e_u, 0, 0) and [h_p, r_v] = (0, 0, -h_p^nat e_v)
  for (int p = 0; p < md; ++p) {
    const auto& op = v0.basis_ops[p];
    DenseVec nat_p(md, Scalar(0));
    nat_p[p] = Scalar(1);
    DenseVec nat_coords = natural_on_V0(v0, nat_p);
    for (int u = 0; u < vd; ++u) {
      DenseVec val(dim, Scalar(0));
      for (const auto& [r, s] : op.rows_of_col(u)) val[r] = s;
      put(mid + p, u, val);

      DenseVec val2(dim, Scalar(0));
      for (int t = 0; t < md; ++t) {
        if (nat_coords[t].is_zero()) continue;
        for (const auto& [r, s] : v0.basis_ops[t].rows_of_col(u)) {
          val2[right + r] -= nat_coords[t] * s;
        }
      }
      put(mid + p, right + u, val2);
    }
  }
  // [h_p, h_q] = (0, [op_p, op_q], 0)
  for (int p = 0; p < md; ++p) {
    for (int q = p + 1; q < md; ++q) {
      SparseMatrix comm = sparse_mul(v0.basis_ops[p], v0.basis_ops[q]);
      SparseMatrix qp = sparse_mul(v0.basis_ops[q], v0.basis_ops[p]);
      for (int r = 0; r < vd; ++r) {
        for (const auto& [cc, s] : qp.rows[r]) comm.add_to(r, cc, -s);
      }
      auto c = coords_in_V0(v0, comm);
      if (!c) throw std::invalid_argument("V0 not closed under commutator");
      DenseVec val(dim, Scalar(0));
      for (int t = 0; t < md; ++t) val[mid + t] = (*c)[t];
      put(mid + p, mid + q, val);
    }
  }

  // theta: swaps the outer blocks, negates-and-swaps pairs in the middle.
  L.theta = SparseMatrix(dim, dim);
  for (int a = 0; a < vd; ++a) {
    L.theta.set(right + a, a, Scalar(1));
    L.theta.set(a, right + a, Scalar(1));
  }
  {
    DenseVec e(md, Scalar(0));
    for (int p = 0; p < md; ++p) {
      e.assign(md, Scalar(0));
      e[p] = Scalar(1);
      DenseVec nat = natural_on_V0(v0, e);
      for (int t = 0; t < md; ++t) {
        if (!nat[t].is_zero()) L.theta.set(mid + t, mid + p, -nat[t]);
      }
    }
  }
  return L;
}

CheckReport verify_tkk(const LieAlgebraWithInvolution& L) {
  CheckReport rep;
  const int dim = L.dim;
  // Antisymmetry.
  for (int a = 0; a < dim && rep.pass; ++a) {
    for (int b = a; b < dim; ++b) {
      DenseVec s = L.bracket_basis(a, b);
      dense_axpy(s, Scalar(1), L.bracket_basis(b, a));
      if (!dense_is_zero(s)) {
        rep.fail("[x,y] + [y,x] != 0 at (" + basis_name(L, a) + ", " +
                 basis_name(L, b) + ")");
        break;
      }
    }
  }
  // Jacobi on basis triples.
  for (int a = 0; a < dim && rep.pass; ++a) {
    DenseVec ea(dim, Scalar(0));
    ea[a] = Scalar(1);
    for (int b = a + 1; b < dim && rep.pass; ++b) {
      DenseVec eb(dim, Scalar(0));
      eb[b] = Scalar(1);
      for (int c = b + 1; c < dim; ++c) {
        DenseVec ec(dim, Scalar(0));
        ec[c] = Scalar(1);
        DenseVec s = L.bracket(L.bracket_basis(a, b), ec);
        dense_axpy(s, Scalar(1), L.bracket(L.bracket_basis(b, c), ea));
        dense_axpy(s, Scalar(1), L.bracket(L.bracket_basis(c, a), eb));
        if (!dense_is_zero(s)) {
          rep.fail("Jacobi fails at (" + basis_name(L, a) + ", " +
                   basis_name(L, b) + ", " + basis_name(L, c) + ")");
          break;
        }
      }
    }
  }
  // theta^2 = id and theta an automorphism.
  for (int a = 0; a < dim && rep.pass; ++a) {
    DenseVec ea(dim, Scalar(0));
    ea[a] = Scalar(1);
    DenseVec tt = L.theta_apply(L.theta_apply(ea));
    tt[a] -= Scalar(1);
    if (!dense_is_zero(tt)) {
      rep.fail("theta^2 != id at " + basis_name(L, a));
    }
  }
  for (int a = 0; a < dim && rep.pass; ++a) {
    for (int b = 0; b < dim; ++b) {
      DenseVec ea(dim, Scalar(0)), eb(dim, Scalar(0));
      ea[a] = Scalar(1);
      eb[b] = Scalar(1);
      DenseVec lhs = L.theta_apply(L.bracket_basis(a, b));
      DenseVec rhs = L.bracket(L.theta_apply(ea), L.theta_apply(eb));
      dense_axpy(lhs, Scalar(-1), rhs);
      if (!dense_is_zero(lhs)) {
        rep.fail("theta[x,y] != [theta x, theta y] at (" + basis_name(L, a) +
                 ", " + basis_name(L, b) + ")");
        break;
      }
    }
  }
  // {a,b,c} = [[a, theta b], c] on the left block.
  const int vd = L.vdim;
  for (int a = 0; a < vd && rep.pass; ++a) {
    for (int b = 0; b < vd && rep.pass; ++b) {
      for (int c = 0; c < vd; ++c) {
        DenseVec ea(vd, Scalar(0)), eb(vd, Scalar(0)), ec(vd, Scalar(0));
        ea[a] = Scalar(1);
        eb[b] = Scalar(1);
        ec[c] = Scalar(1);
        DenseVec inner =
            L.bracket(L.embed_left(ea), L.theta_apply(L.embed_left(eb)));
        DenseVec rhs = L.bracket(inner, L.embed_left(ec));
        DenseVec lhs = L.embed_left(L.V.basis_triple(a, b, c));
        dense_axpy(lhs, Scalar(-1), rhs);
        if (!dense_is_zero(lhs)) {
          rep.fail("triple recovery fails at (e" + std::to_string(a) + ", e" +
                   std::to_string(b) + ", e" + std::to_string(c) + ")");
          break;
        }
      }
    }
  }
  return rep;
}

DenseVec LieModuleWithInvolution::act(const DenseVec& l,
                                      const DenseVec& x) const {
  const int ldim = (int)rho.size();
  DenseVec out(xdim, Scalar(0));
  for (int a = 0; a < ldim; ++a) {
    if (l[a].is_zero()) continue;
    DenseVec part = rho[a].apply(x);
    dense_axpy(out, l[a], part);
  }
  return out;
}

DenseVec LieModuleWithInvolution::theta_apply(const DenseVec& x) const {
  return theta_tilde.apply(x);
}

DenseVec LieModuleWithInvolution::embed_left(const DenseVec& m) const {
  DenseVec out(xdim, Scalar(0));
  for (int c = 0; c < mdim; ++c) out[c] = m[c];
  return out;
}

DenseVec LieModuleWithInvolution::project_left(const DenseVec& x) const {
  return DenseVec(x.begin(), x.begin() + mdim);
}

LieModuleWithInvolution build_lie_module(const LieAlgebraWithInvolution& L,
                                         const TripleModule& M) {
  if (M.vdim != L.vdim) {
    throw std::invalid_argument("module is over a different triple");
  }
  auto m0 = compute_M0(L.V, M);
  if (!m0.sharp_check.pass) {
    throw std::invalid_argument("nat map not well defined on M0 for " +
                                M.label + ": " + m0.sharp_check.witness);
  }

  LieModuleWithInvolution X;
  X.label = "L(" + M.label + ")";
  X.mdim = M.mdim;
  X.m0dim = m0.dim;
  X.xdim = 2 * M.mdim + m0.dim;
  X.M = M;
  X.m0 = m0;

  const int vd = L.vdim;
  const int md = M.mdim;
  const int zd = m0.dim;
  const int xdim = X.xdim;
  const int mid = md;
  const int right = md + zd;

  // Coordinates of every u box m / m box u generator in the M0 basis.
  const int gcount = m0_generator_count(m0);
  std::vector<DenseVec> gen_coords(gcount);
  for (int g = 0; g < gcount; ++g) {
    auto c = coords_in_M0(m0, m0_generator_op(M, g));
    if (!c) throw std::invalid_argument("box generator outside M0 span");
    gen_coords[g] = std::move(*c);
  }
  // nat of each M0 basis element, in M0 coordinates.
  std::vector<DenseVec> nat_coords(zd);
  for (int t = 0; t < zd; ++t) {
    DenseVec e(zd, Scalar(0));
    e[t] = Scalar(1);
    nat_coords[t] = natural_on_M0(m0, e);
  }

  X.rho.assign(L.dim, SparseMatrix(xdim, xdim));
  auto add_col = [&](SparseMatrix& r, int col, int row_off,
                     const DenseVec& val) {
    for (int i = 0; i < (int)val.size(); ++i) {
      if (!val[i].is_zero()) r.add_to(row_off + i, col, val[i]);
    }
  };

  // Left block of L: l_a sends phi_t to (-phi_t e_a, 0, 0) and
  // n_c to (0, e_a box n_c, 0).
  for (int a = 0; a < vd; ++a) {
    SparseMatrix& r = X.rho[a];
    for (int t = 0; t < zd; ++t) {
      for (const auto& [row, s] : m0.basis_ops[t].rows_of_col(a)) {
        r.add_to(row, mid + t, -s);
      }
    }
    for (int c = 0; c < md; ++c) {
      add_col(r, right + c, mid, gen_coords[a * md + c]);
    }
  }
  // Middle block: h_p = e_i box e_j sends m_c to ({e_i,e_j,m_c}, 0, 0),
  // phi_t to (0, [h_p, phi_t], 0), n_c to (0, 0, -{e_j,e_i,n_c}).
  for (int p = 0; p < L.v0dim; ++p) {
    SparseMatrix& r = X.rho[vd + p];
    auto [gi, gj] = L.v0.generator_index[p];
    for (int c = 0; c < md; ++c) {
      add_col(r, c, 0, M.basis_a1(c, gj, gi));
      DenseVec down = M.basis_a1(c, gi, gj);
      for (int i = 0; i < md; ++i) {
        if (!down[i].is_zero()) r.add_to(right + i, right + c, -down[i]);
      }
    }
    DenseVec hcoords(L.v0dim, Scalar(0));
    hcoords[p] = Scalar(1);
    for (int t = 0; t < zd; ++t) {
      DenseVec phit(zd, Scalar(0));
      phit[t] = Scalar(1);
      DenseVec br = bracket_V0_M0(L.V, M, L.v0, m0, hcoords, phit);
      add_col(r, mid + t, mid, br);
    }
  }
  // Right block: r_b sends m_c to (0, -(m_c box e_b), 0) and
  // phi_t to (0, 0, phi_t^nat e_b).
  for (int b = 0; b < vd; ++b) {
    SparseMatrix& r = X.rho[vd + L.v0dim + b];
    for (int c = 0; c < md; ++c) {
      DenseVec g = gen_coords[(size_t)vd * md + (size_t)c * vd + b];
      for (int t = 0; t < zd; ++t) {
        if (!g[t].is_zero()) r.add_to(mid + t, c, -g[t]);
      }
    }
    for (int t = 0; t < zd; ++t) {
      for (int u = 0; u < zd; ++u) {
        if (nat_coords[t][u].is_zero()) continue;
        for (const auto& [row, s] : m0.basis_ops[u].rows_of_col(b)) {
          r.add_to(right + row, mid + t, nat_coords[t][u] * s);
        }
      }
    }
  }

  // theta~(m, phi, n) = (n, -phi^nat, m).
  X.theta_tilde = SparseMatrix(xdim, xdim);
  for (int c = 0; c < md; ++c) {
    X.theta_tilde.set(right + c, c, Scalar(1));
    X.theta_tilde.set(c, right + c, Scalar(1));
  }
  for (int t = 0; t < zd; ++t) {
    for (int u = 0; u < zd; ++u) {
      if (!nat_coords[t][u].is_zero()) {
        X.theta_tilde.set(mid + u, mid + t, -nat_coords[t][u]);
      }
    }
  }
  return X;
}

CheckReport verify_lie_module(const LieAlgebraWithInvolution& L,
                              const LieModuleWithInvolution& X) {
  CheckReport rep;
  const int dim = L.dim;
  const int xdim = X.xdim;
  for (int a = 0; a < dim && rep.pass; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      // rho([e_a, e_b]) vs rho_a rho_b - rho_b rho_a, column by column.
      const DenseVec& fab = L.bracket_basis(a, b);
      bool bad = false;
      for (int col = 0; col < xdim && !bad; ++col) {
        DenseVec x(xdim, Scalar(0));
        x[col] = Scalar(1);
        DenseVec lhs(xdim, Scalar(0));
        for (int g = 0; g < dim; ++g) {
          if (fab[g].is_zero()) continue;
          DenseVec part = X.rho[g].apply(x);
          dense_axpy(lhs, fab[g], part);
        }
        DenseVec rhs = X.rho[a].apply(X.rho[b].apply(x));
        dense_axpy(rhs, Scalar(-1), X.rho[b].apply(X.rho[a].apply(x)));
        dense_axpy(lhs, Scalar(-1), rhs);
        if (!dense_is_zero(lhs)) bad = true;
      }
      if (bad) {
        rep.fail("module law fails at (" + basis_name(L, a) + ", " +
                 basis_name(L, b) + ")");
        break;
      }
    }
  }
  // theta~(l.mu) = theta(l).theta~(mu).
  for (int a = 0; a < dim && rep.pass; ++a) {
    DenseVec ta(dim, Scalar(0));
    ta[a] = Scalar(1);
    DenseVec th = L.theta_apply(ta);
    for (int col = 0; col < xdim; ++col) {
      DenseVec x(xdim, Scalar(0));
      x[col] = Scalar(1);
      DenseVec lhs = X.theta_apply(X.rho[a].apply(x));
      DenseVec rhs = X.act(th, X.theta_apply(x));
      dense_axpy(lhs, Scalar(-1), rhs);
      if (!dense_is_zero(lhs)) {
        rep.fail("involution compatibility fails at " + basis_name(L, a) +
                 ", column " + std::to_string(col));
        break;
      }
    }
  }
  return rep;
}

namespace {

// Real coordinates of a complex vector: re parts then im parts.
DenseVec realify(const DenseVec& v) {
  const int n = (int)v.size();
  DenseVec out(2 * n, Scalar(0));
  for (int i = 0; i < n; ++i) {
    out[i] = Scalar(v[i].re);
    out[n + i] = Scalar(v[i].im);
  }
  return out;
}

Scalar unit_mult(int s) { return s == 0 ? Scalar(1) : Scalar::i(); }

}  // namespace

JordanTriple restrict_scalars(const JordanTriple& V) {
  if (V.field == Field::Q) return V;
  const int n = V.dim;
  JordanTriple R;
  R.label = V.label + ":real";
  R.field = Field::Q;
  R.dim = 2 * n;
  R.c.assign((size_t)R.dim * R.dim * R.dim, DenseVec());
  for (int i = 0; i < n; ++i) {
    for (int si = 0; si < 2; ++si) {
      for (int j = 0; j < n; ++j) {
        for (int sj = 0; sj < 2; ++sj) {
          for (int k = 0; k < n; ++k) {
            for (int sk = 0; sk < 2; ++sk) {
              Scalar coef =
                  unit_mult(si) * unit_mult(sj).conj() * unit_mult(sk);
              DenseVec val(n, Scalar(0));
              dense_axpy(val, coef, V.basis_triple(i, j, k));
              int a = i + si * n, b = j + sj * n, cc = k + sk * n;
              R.c[((size_t)a * R.dim + b) * R.dim + cc] = realify(val);
            }
          }
        }
      }
    }
  }
  if (V.unit) R.unit = realify(*V.unit);
  return R;
}

TripleModule restrict_scalars_module(const JordanTriple& V,
                                     const TripleModule& M) {
  if (V.field == Field::Q) return M;
  const int vd = V.dim;
  const int md = M.mdim;
  TripleModule R;
  R.label = M.label + ":real";
  R.vdim = 2 * vd;
  R.mdim = 2 * md;
  R.pattern = M.pattern;
  R.is_self = M.is_self;
  R.a1.assign((size_t)R.mdim * R.vdim * R.vdim, DenseVec());
  R.a2.assign((size_t)R.vdim * R.mdim * R.vdim, DenseVec());
  auto slot_val = [&](int product, int s0, int s1, int s2) {
    Scalar coef(1);
    for (int slot = 0; slot < 3; ++slot) {
      int s = slot == 0 ? s0 : (slot == 1 ? s1 : s2);
      Scalar u = unit_mult(s);
      coef = coef * (module_slot_conjugates(M.pattern, product, slot)
                         ? u.conj()
                         : u);
    }
    return coef;
  };
  for (int i = 0; i < md; ++i) {
    for (int si = 0; si < 2; ++si) {
      for (int j = 0; j < vd; ++j) {
        for (int sj = 0; sj < 2; ++sj) {
          for (int k = 0; k < vd; ++k) {
            for (int sk = 0; sk < 2; ++sk) {
              DenseVec val(md, Scalar(0));
              dense_axpy(val, slot_val(1, si, sj, sk), M.basis_a1(i, j, k));
              int a = i + si * md, b = j + sj * vd, cc = k + sk * vd;
              R.a1[((size_t)a * R.vdim + b) * R.vdim + cc] = realify(val);
            }
          }
        }
      }
    }
  }
  for (int i = 0; i < vd; ++i) {
    for (int si = 0; si < 2; ++si) {
      for (int j = 0; j < md; ++j) {
        for (int sj = 0; sj < 2; ++sj) {
          for (int k = 0; k < vd; ++k) {
            for (int sk = 0; sk < 2; ++sk) {
              DenseVec val(md, Scalar(0));
              dense_axpy(val, slot_val(2, si, sj, sk), M.basis_a2(i, j, k));
              int a = i + si * vd, b = j + sj * md, cc = k + sk * vd;
              R.a2[((size_t)a * R.mdim + b) * R.vdim + cc] = realify(val);
            }
          }
        }
      }
    }
  }
  return R;
}

namespace {

std::vector<SparseVec> one_eigenspace(const SparseMatrix& theta) {
  const int n = theta.nrows;
  SparseMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    m.rows[r] = theta.rows[r];
    m.add_to(r, r, Scalar(-1));
  }
  auto rk = rank_kernel(m);
  return rk.kernel;
}

}  // namespace

EigenSubspace k_subalgebra(const LieAlgebraWithInvolution& L) {
  if (L.field != Field::Q) {
    throw std::invalid_argument("k(V) is only computed over Q");
  }
  EigenSubspace k;
  k.ambient_dim = L.dim;
  k.basis = one_eigenspace(L.theta);
  k.dim = (int)k.basis.size();
  std::vector<DenseVec> dense_basis;
  for (const auto& b : k.basis) dense_basis.push_back(to_dense(b, L.dim));
  k.f.assign((size_t)k.dim * k.dim, DenseVec());
  for (int i = 0; i < k.dim; ++i) {
    for (int j = 0; j < k.dim; ++j) {
      DenseVec br = L.bracket(dense_basis[i], dense_basis[j]);
      auto c = solve_in_span(dense_basis, br, L.dim);
      if (!c) throw std::logic_error("k(V) is not closed under the bracket");
      k.f[(size_t)i * k.dim + j] = std::move(*c);
    }
  }
  return k;
}

EigenSubspace k_module(const LieAlgebraWithInvolution& L,
                       const LieModuleWithInvolution& X,
                       const EigenSubspace& kL) {
  if (L.field != Field::Q) {
    throw std::invalid_argument("k(M) is only computed over Q");
  }
  EigenSubspace k;
  k.ambient_dim = X.xdim;
  k.basis = one_eigenspace(X.theta_tilde);
  k.dim = (int)k.basis.size();
  std::vector<DenseVec> dense_basis;
  for (const auto& b : k.basis) dense_basis.push_back(to_dense(b, X.xdim));
  k.rho.assign(kL.dim, SparseMatrix(k.dim, k.dim));
  for (int i = 0; i < kL.dim; ++i) {
    DenseVec l = to_dense(kL.basis[i], L.dim);
    for (int j = 0; j < k.dim; ++j) {
      DenseVec act = X.act(l, dense_basis[j]);
      auto c = solve_in_span(dense_basis, act, X.xdim);
      if (!c) throw std::logic_error("k(M) is not closed under the action");
      for (int r = 0; r < k.dim; ++r) {
        if (!(*c)[r].is_zero()) k.rho[i].set(r, j, (*c)[r]);
      }
    }
  }
  return k;
}

bool check_center_commutator_condition(const JordanTriple& A) {
  if (!A.assoc) {
    throw std::invalid_argument("no associative realization attached");
  }
  const auto& basis = A.assoc->basis_mats;
  const int d = (int)basis.size();
  const int nm = A.assoc->nmat;
  // Closure under multiplication (so the span really is an algebra).
  std::vector<DenseVec> flat;
  for (const auto& b : basis) flat.push_back(mat_flatten(b));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      DenseMat pr = mat_mul(basis[i], basis[j]);
      if (!solve_in_span(flat, mat_flatten(pr), nm * nm)) {
        throw std::invalid_argument("realization is not closed under products");
      }
    }
  }
  // Center: alpha with sum_j alpha_j (B_i B_j - B_j B_i) = 0 for all i.
  SparseMatrix sys(d * nm * nm, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      DenseMat comm = mat_mul(basis[i], basis[j]);
      mat_axpy(comm, Scalar(-1), mat_mul(basis[j], basis[i]));
      DenseVec fc = mat_flatten(comm);
      for (int e = 0; e < nm * nm; ++e) {
        if (!fc[e].is_zero()) sys.set(i * nm * nm + e, j, fc[e]);
      }
    }
  }
  auto center = rank_kernel(sys);
  std::vector<DenseVec> center_flat;
  for (const auto& z : center.kernel) {
    DenseVec zc = to_dense(z, d);
    DenseMat zm = dense_mat(nm, nm);
    for (int j = 0; j < d; ++j) mat_axpy(zm, zc[j], basis[j]);
    center_flat.push_back(mat_flatten(zm));
  }
  std::vector<DenseVec> comm_flat;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      DenseMat comm = mat_mul(basis[i], basis[j]);
      mat_axpy(comm, Scalar(-1), mat_mul(basis[j], basis[i]));
      comm_flat.push_back(mat_flatten(comm));
    }
  }
  int cz = rank_of_vectors(center_flat, nm * nm);
  int cm = rank_of_vectors(comm_flat, nm * nm);
  std::vector<DenseVec> both = center_flat;
  both.insert(both.end(), comm_flat.begin(), comm_flat.end());
  int cu = rank_of_vectors(both, nm * nm);
  return cz + cm - cu == 0;
}

EmbedResult embed_m2(const LieAlgebraWithInvolution& L) {
  if (!L.V.assoc || !L.V.assoc->unnormalized) {
    throw std::invalid_argument(
        "M2 embedding needs an unnormalized associative realization");
  }
  const auto& A = *L.V.assoc;
  const int nm = A.nmat;
  const int big = 2 * nm;
  const int vd = L.vdim;
  auto sigma = [&](const DenseMat& m) {
    return A.star ? mat_conj_transpose(m) : m;
  };

  EmbedResult res;
  res.nmat = nm;
  res.images.assign(L.dim, dense_mat(big, big));

  // Left x: upper-right block x. Right y: lower-left block sigma(y).
  for (int a = 0; a < vd; ++a) {
    const DenseMat& B = A.basis_mats[a];
    DenseMat& img = res.images[a];
    for (int r = 0; r < nm; ++r) {
      for (int c = 0; c < nm; ++c) img[r][nm + c] = B[r][c];
    }
    DenseMat sb = sigma(B);
    DenseMat& img2 = res.images[vd + L.v0dim + a];
    for (int r = 0; r < nm; ++r) {
      for (int c = 0; c < nm; ++c) img2[nm + r][c] = sb[r][c];
    }
  }
  // Middle a box b: diag(a sigma(b), -sigma(b) a).
  auto mid_image = [&](int i, int j) {
    DenseMat out = dense_mat(big, big);
    DenseMat ab = mat_mul(A.basis_mats[i], sigma(A.basis_mats[j]));
    DenseMat ba = mat_mul(sigma(A.basis_mats[j]), A.basis_mats[i]);
    for (int r = 0; r < nm; ++r) {
      for (int c = 0; c < nm; ++c) {
        out[r][c] = ab[r][c];
        out[nm + r][nm + c] = -ba[r][c];
      }
    }
    return out;
  };
  for (int p = 0; p < L.v0dim; ++p) {
    auto [gi, gj] = L.v0.generator_index[p];
    res.images[vd + p] = mid_image(gi, gj);
  }

  // Well-definedness: every V0 relation maps to zero.
  for (size_t rel = 0; rel < L.v0.relation_kernel.size(); ++rel) {
    DenseVec lam = to_dense(L.v0.relation_kernel[rel], vd * vd);
    DenseMat acc = dense_mat(big, big);
    for (int i = 0; i < vd; ++i) {
      for (int j = 0; j < vd; ++j) {
        const Scalar& l = lam[(size_t)i * vd + j];
        if (!l.is_zero()) mat_axpy(acc, l, mid_image(i, j));
      }
    }
    if (!mat_is_zero(acc)) {
      res.well_defined.fail("relation " + std::to_string(rel) +
                             " has a nonzero image");
      break;
    }
  }

  // Homomorphism on all basis pairs.
  for (int a = 0; a < L.dim && res.homomorphism.pass; ++a) {
    for (int b = a + 1; b < L.dim; ++b) {
      const DenseVec& fab = L.bracket_basis(a, b);
      DenseMat lhs = dense_mat(big, big);
      for (int g = 0; g < L.dim; ++g) {
        if (!fab[g].is_zero()) mat_axpy(lhs, fab[g], res.images[g]);
      }
      DenseMat rhs = mat_mul(res.images[a], res.images[b]);
      mat_axpy(rhs, Scalar(-1), mat_mul(res.images[b], res.images[a]));
      mat_axpy(lhs, Scalar(-1), rhs);
      if (!mat_is_zero(lhs)) {
        res.homomorphism.fail("bracket not preserved at (" +
                              basis_name(L, a) + ", " + basis_name(L, b) +
                              ")");
        break;
      }
    }
  }

  std::vector<DenseVec> flat;
  for (const auto& img : res.images) flat.push_back(mat_flatten(img));
  res.image_rank = rank_of_vectors(flat, big * big);
  res.injective = res.image_rank == L.dim;
  res.trace_zero = true;
  for (const auto& img : res.images) {
    Scalar tr(0);
    for (int r = 0; r < big; ++r) tr += img[r][r];
    if (!tr.is_zero()) {
      res.trace_zero = false;
      break;
    }
  }
  return res;
}

}  // namespace jtk
