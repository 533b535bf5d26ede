#include "jtk/triple_module.hpp"

#include <sstream>
#include <stdexcept>

namespace jtk {

namespace {

struct ConjFlags {
  bool s1, s2, s3;
};

// Conjugation pattern per product. Self: middle slot conjugated in every
// product. Dual: product 1 conjugates the last slot, product 2 all slots.
ConjFlags flags1(ModulePattern p) {
  return p == ModulePattern::Self ? ConjFlags{false, true, false}
                                  : ConjFlags{false, false, true};
}
ConjFlags flags2(ModulePattern p) {
  return p == ModulePattern::Self ? ConjFlags{false, true, false}
                                  : ConjFlags{true, true, true};
}

Scalar slot(const Scalar& s, bool conj) { return conj ? s.conj() : s; }

}  // namespace

bool module_slot_conjugates(ModulePattern p, int product, int slot_index) {
  ConjFlags f = product == 1 ? flags1(p) : flags2(p);
  if (product != 1 && product != 2)
    throw std::invalid_argument("module_slot_conjugates: product must be 1 or 2");
  switch (slot_index) {
    case 0: return f.s1;
    case 1: return f.s2;
    case 2: return f.s3;
    default:
      throw std::invalid_argument("module_slot_conjugates: slot out of range");
  }
}

DenseVec act1(const TripleModule& M, const DenseVec& m, const DenseVec& x,
              const DenseVec& y) {
  if ((int)m.size() != M.mdim || (int)x.size() != M.vdim || (int)y.size() != M.vdim)
    throw std::invalid_argument("act1: dimension mismatch");
  ConjFlags f = flags1(M.pattern);
  DenseVec out(M.mdim, Scalar());
  for (int i = 0; i < M.mdim; ++i) {
    if (m[i].is_zero()) continue;
    Scalar mi = slot(m[i], f.s1);
    for (int j = 0; j < M.vdim; ++j) {
      if (x[j].is_zero()) continue;
      Scalar mx = mi * slot(x[j], f.s2);
      for (int k = 0; k < M.vdim; ++k) {
        if (y[k].is_zero()) continue;
        dense_axpy(out, mx * slot(y[k], f.s3), M.basis_a1(i, j, k));
      }
    }
  }
  return out;
}

DenseVec act2(const TripleModule& M, const DenseVec& x, const DenseVec& m,
              const DenseVec& y) {
  if ((int)x.size() != M.vdim || (int)m.size() != M.mdim || (int)y.size() != M.vdim)
    throw std::invalid_argument("act2: dimension mismatch");
  ConjFlags f = flags2(M.pattern);
  DenseVec out(M.mdim, Scalar());
  for (int i = 0; i < M.vdim; ++i) {
    if (x[i].is_zero()) continue;
    Scalar xi = slot(x[i], f.s1);
    for (int j = 0; j < M.mdim; ++j) {
      if (m[j].is_zero()) continue;
      Scalar xm = xi * slot(m[j], f.s2);
      for (int k = 0; k < M.vdim; ++k) {
        if (y[k].is_zero()) continue;
        dense_axpy(out, xm * slot(y[k], f.s3), M.basis_a2(i, j, k));
      }
    }
  }
  return out;
}

DenseVec act3(const TripleModule& M, const DenseVec& x, const DenseVec& y,
              const DenseVec& m) {
  // {a,b,c}_1 = {c,b,a}_3, so product 3 reads product 1 with reversed
  // outer arguments; act1 applies the pattern's conjugations itself.
  return act1(M, m, y, x);
}

namespace {

SparseMatrix cols_to_matrix(const std::vector<DenseVec>& cols, int nrows) {
  SparseMatrix m(nrows, (int)cols.size());
  for (int k = 0; k < (int)cols.size(); ++k)
    for (int r = 0; r < nrows; ++r)
      if (!cols[k][r].is_zero()) m.rows[r].emplace_back(k, cols[k][r]);
  for (auto& row : m.rows)
    std::sort(row.begin(), row.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
  return m;
}

DenseVec unit_vec(int n, int i) {
  DenseVec v(n, Scalar());
  v[i] = Scalar(1);
  return v;
}

}  // namespace

SparseMatrix box_um(const TripleModule& M, const DenseVec& u, const DenseVec& m) {
  std::vector<DenseVec> cols(M.vdim);
  for (int k = 0; k < M.vdim; ++k) cols[k] = act2(M, u, m, unit_vec(M.vdim, k));
  return cols_to_matrix(cols, M.mdim);
}

SparseMatrix box_mu(const TripleModule& M, const DenseVec& m, const DenseVec& u) {
  std::vector<DenseVec> cols(M.vdim);
  for (int k = 0; k < M.vdim; ++k) cols[k] = act1(M, m, u, unit_vec(M.vdim, k));
  return cols_to_matrix(cols, M.mdim);
}

SparseMatrix box_on_module(const TripleModule& M, const DenseVec& a,
                           const DenseVec& b) {
  std::vector<DenseVec> cols(M.mdim);
  for (int k = 0; k < M.mdim; ++k) cols[k] = act3(M, a, b, unit_vec(M.mdim, k));
  return cols_to_matrix(cols, M.mdim);
}

CheckReport check_module_axioms(const JordanTriple& V, const TripleModule& M) {
  CheckReport rep;
  if (M.vdim != V.dim) {
    rep.fail("module vdim does not match triple dim");
    return rep;
  }
  int vd = V.dim, md = M.mdim;

  struct Tagged {
    bool in_m;
    DenseVec v;
  };
  auto mixed = [&](const Tagged& a, const Tagged& b, const Tagged& c) -> Tagged {
    int count = (a.in_m ? 1 : 0) + (b.in_m ? 1 : 0) + (c.in_m ? 1 : 0);
    if (count == 0) return {false, V.triple(a.v, b.v, c.v)};
    if (count != 1) throw std::logic_error("mixed: more than one module slot");
    if (a.in_m) return {true, act1(M, a.v, b.v, c.v)};
    if (b.in_m) return {true, act2(M, a.v, b.v, c.v)};
    return {true, act3(M, a.v, b.v, c.v)};
  };

  // Identity {a,b,{c,d,e}} = {{a,b,c},d,e} - {c,{b,a,d},e} + {c,d,{a,b,e}}
  // with the module element in position pos.
  auto run_tuple = [&](int pos, const int idx[5], bool iscale) -> bool {
    Tagged arg[5];
    for (int t = 0; t < 5; ++t) {
      bool in_m = t == pos;
      arg[t] = {in_m, unit_vec(in_m ? md : vd, idx[t])};
    }
    if (iscale) {
      // Middle slots of the outer and inner products.
      dense_scale(arg[1].v, Scalar::i());
      dense_scale(arg[3].v, Scalar::i());
    }
    const Tagged &a = arg[0], &b = arg[1], &c = arg[2], &d = arg[3], &e = arg[4];
    Tagged lhs = mixed(a, b, mixed(c, d, e));
    Tagged r1 = mixed(mixed(a, b, c), d, e);
    Tagged r2 = mixed(c, mixed(b, a, d), e);
    Tagged r3 = mixed(c, d, mixed(a, b, e));
    DenseVec rhs = r1.v;
    dense_axpy(rhs, Scalar(-1), r2.v);
    dense_axpy(rhs, Scalar(1), r3.v);
    dense_axpy(rhs, Scalar(-1), lhs.v);
    return dense_is_zero(rhs);
  };

  int sweeps = V.field == Field::Qi ? 2 : 1;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    bool iscale = sweep == 1;
    for (int pos = 0; pos < 5; ++pos) {
      int dims[5];
      bool empty = false;
      for (int t = 0; t < 5; ++t) {
        dims[t] = t == pos ? md : vd;
        if (dims[t] == 0) empty = true;
      }
      if (empty) continue;
      int idx[5] = {0, 0, 0, 0, 0};
      while (true) {
        if (!run_tuple(pos, idx, iscale)) {
          std::ostringstream os;
          os << (iscale ? "i-scaled " : "") << "module slot " << pos + 1
             << ", tuple (" << idx[0] << "," << idx[1] << "," << idx[2] << ","
             << idx[3] << "," << idx[4] << ")";
          rep.fail(os.str());
          return rep;
        }
        int t = 4;
        while (t >= 0 && ++idx[t] == dims[t]) idx[t--] = 0;
        if (t < 0) break;
      }
    }
  }
  return rep;
}

bool check_module_nondegenerate(const JordanTriple& V, const TripleModule& M) {
  int vd = V.dim, md = M.mdim;
  // {m, e_j, e_k} = 0 for all j,k forces m = 0: the stacked matrix of
  // m |-> coefficients must have full column rank. Same for {e_j, m, e_k};
  // conjugate-linearity does not change the kernel's triviality.
  SparseMatrix a1(vd * vd * md, md), a2(vd * vd * md, md);
  for (int t = 0; t < md; ++t) {
    for (int j = 0; j < vd; ++j)
      for (int k = 0; k < vd; ++k) {
        const DenseVec& v1 = M.basis_a1(t, j, k);
        const DenseVec& v2 = M.basis_a2(j, t, k);
        for (int r = 0; r < md; ++r) {
          int row = (j * vd + k) * md + r;
          if (!v1[r].is_zero()) a1.rows[row].emplace_back(t, v1[r]);
          if (!v2[r].is_zero()) a2.rows[row].emplace_back(t, v2[r]);
        }
      }
  }
  for (auto* m : {&a1, &a2})
    for (auto& row : m->rows)
      std::sort(row.begin(), row.end(),
                [](const Entry& a, const Entry& b) { return a.first < b.first; });
  return rank_of(a1) == md && rank_of(a2) == md;
}

int m0_generator_count(const M0Basis& m0) { return 2 * m0.vdim * m0.mdim; }

SparseMatrix m0_generator_op(const TripleModule& M, int p) {
  int vd = M.vdim, md = M.mdim;
  std::vector<DenseVec> cols(vd);
  if (p < vd * md) {
    int i = p / md, j = p % md;  // e_i box m_j
    for (int k = 0; k < vd; ++k) cols[k] = M.basis_a2(i, j, k);
  } else {
    int q = p - vd * md;
    int j = q / vd, i = q % vd;  // m_j box e_i
    for (int k = 0; k < vd; ++k) cols[k] = M.basis_a1(j, i, k);
  }
  return cols_to_matrix(cols, md);
}

namespace {

// Swapped generator id: u box m <-> m box u.
int m0_swap_gen(int p, int vdim, int mdim) {
  if (p < vdim * mdim) {
    int i = p / mdim, j = p % mdim;
    return vdim * mdim + j * vdim + i;
  }
  int q = p - vdim * mdim;
  int j = q / vdim, i = q % vdim;
  return i * mdim + j;
}

}  // namespace

M0Basis compute_M0(const JordanTriple& V, const TripleModule& M) {
  int vd = M.vdim, md = M.mdim;
  M0Basis m0;
  m0.vdim = vd;
  m0.mdim = md;
  int ngen = 2 * vd * md;
  std::vector<SparseMatrix> ops(ngen);
  SparseMatrix a(md * vd, ngen);
  for (int p = 0; p < ngen; ++p) {
    ops[p] = m0_generator_op(M, p);
    for (const auto& [idx, val] : flatten_op(ops[p])) a.rows[idx].emplace_back(p, val);
  }
  for (auto& row : a.rows)
    std::sort(row.begin(), row.end(),
              [](const Entry& x, const Entry& y) { return x.first < y.first; });
  RankKernel rk = rank_kernel(a);
  m0.dim = rk.rank;
  m0.relation_kernel = rk.kernel;
  for (int p : rk.pivot_cols) {
    m0.generator_index.push_back(p);
    m0.basis_ops.push_back(ops[p]);
    m0.basis_flat.push_back(flatten_op(ops[p]));
  }
  // Relation-swap consistency: each kernel relation, with conjugated
  // coefficients and swapped generators, must still vanish.
  for (size_t r = 0; r < m0.relation_kernel.size(); ++r) {
    SparseVec acc;
    for (const auto& [p, lam] : m0.relation_kernel[r])
      sparse_axpy(acc, lam.conj(), flatten_op(ops[m0_swap_gen(p, vd, md)]));
    if (!sparse_is_zero(acc)) {
      std::ostringstream os;
      os << "relation " << r << ": swapped conjugated sum is nonzero";
      m0.sharp_check.fail(os.str());
      return m0;
    }
  }
  m0.natural_matrix = SparseMatrix(m0.dim, m0.dim);
  for (int p = 0; p < m0.dim; ++p) {
    auto coords = solve_in_span(
        m0.basis_flat, flatten_op(ops[m0_swap_gen(m0.generator_index[p], vd, md)]),
        md * vd);
    if (!coords) throw std::logic_error("compute_M0: swapped generator outside span");
    for (int r = 0; r < m0.dim; ++r)
      if (!(*coords)[r].is_zero()) m0.natural_matrix.rows[r].emplace_back(p, (*coords)[r]);
  }
  for (auto& row : m0.natural_matrix.rows)
    std::sort(row.begin(), row.end(),
              [](const Entry& x, const Entry& y) { return x.first < y.first; });
  (void)V;
  return m0;
}

std::optional<DenseVec> coords_in_M0(const M0Basis& m0, const SparseMatrix& phi) {
  return solve_in_span(m0.basis_flat, flatten_op(phi), m0.mdim * m0.vdim);
}

DenseVec natural_on_M0(const M0Basis& m0, const DenseVec& phicoords) {
  return m0.natural_matrix.apply(dense_conj(phicoords));
}

DenseVec bracket_V0_M0(const JordanTriple& V, const TripleModule& M,
                       const V0Basis& v0, const M0Basis& m0,
                       const DenseVec& hcoords, const DenseVec& phicoords) {
  int vd = M.vdim, md = M.mdim;
  // h as an operator on M (through product 3) and on V.
  SparseMatrix h_on_m(md, md), h_on_v(vd, vd);
  for (int p = 0; p < v0.dim; ++p) {
    if (hcoords[p].is_zero()) continue;
    auto [i, j] = v0.generator_index[p];
    SparseMatrix bm = box_on_module(M, unit_vec(vd, i), unit_vec(vd, j));
    for (int r = 0; r < md; ++r) sparse_axpy(h_on_m.rows[r], hcoords[p], bm.rows[r]);
    for (int r = 0; r < vd; ++r)
      sparse_axpy(h_on_v.rows[r], hcoords[p], v0.basis_ops[p].rows[r]);
  }
  SparseMatrix phi(md, vd);
  for (int q = 0; q < m0.dim; ++q) {
    if (phicoords[q].is_zero()) continue;
    for (int r = 0; r < md; ++r)
      sparse_axpy(phi.rows[r], phicoords[q], m0.basis_ops[q].rows[r]);
  }
  SparseMatrix lhs = sparse_mul(h_on_m, phi), rhs = sparse_mul(phi, h_on_v);
  SparseMatrix comm(md, vd);
  for (int r = 0; r < md; ++r) comm.rows[r] = sparse_sub(lhs.rows[r], rhs.rows[r]);
  auto coords = coords_in_M0(m0, comm);
  if (!coords) throw std::logic_error("bracket_V0_M0: commutator escapes M0");
  (void)V;
  return *coords;
}

}  // namespace jtk
