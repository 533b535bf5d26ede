#include "jtk/jordan_triple.hpp"

#include <sstream>
#include <stdexcept>

namespace jtk {

DenseVec JordanTriple::triple(const DenseVec& x, const DenseVec& y,
                              const DenseVec& z) const {
  if ((int)x.size() != dim || (int)y.size() != dim || (int)z.size() != dim)
    throw std::invalid_argument("triple: dimension mismatch");
  DenseVec out(dim, Scalar());
  for (int i = 0; i < dim; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < dim; ++j) {
      if (y[j].is_zero()) continue;
      Scalar xij = x[i] * y[j].conj();
      for (int k = 0; k < dim; ++k) {
        if (z[k].is_zero()) continue;
        dense_axpy(out, xij * z[k], basis_triple(i, j, k));
      }
    }
  }
  return out;
}

SparseMatrix JordanTriple::box(const DenseVec& a, const DenseVec& b) const {
  if ((int)a.size() != dim || (int)b.size() != dim)
    throw std::invalid_argument("box: dimension mismatch");
  // Column k = {a, b, e_k}.
  std::vector<DenseVec> cols(dim, DenseVec(dim, Scalar()));
  for (int i = 0; i < dim; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < dim; ++j) {
      if (b[j].is_zero()) continue;
      Scalar w = a[i] * b[j].conj();
      for (int k = 0; k < dim; ++k) dense_axpy(cols[k], w, basis_triple(i, j, k));
    }
  }
  SparseMatrix m(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int r = 0; r < dim; ++r)
      if (!cols[k][r].is_zero()) m.rows[r].emplace_back(k, cols[k][r]);
  return m;
}

SparseMatrix JordanTriple::box_basis(int i, int j) const {
  SparseMatrix m(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const DenseVec& v = basis_triple(i, j, k);
    for (int r = 0; r < dim; ++r)
      if (!v[r].is_zero()) m.rows[r].emplace_back(k, v[r]);
  }
  return m;
}

CheckReport check_outer_symmetry(const JordanTriple& V) {
  CheckReport rep;
  for (int i = 0; i < V.dim && rep.pass; ++i)
    for (int j = 0; j < V.dim && rep.pass; ++j)
      for (int k = i; k < V.dim && rep.pass; ++k)
        if (V.basis_triple(i, j, k) != V.basis_triple(k, j, i)) {
          std::ostringstream os;
          os << "c[" << i << "][" << j << "][" << k << "] != c[" << k << "]["
             << j << "][" << i << "]";
          rep.fail(os.str());
        }
  return rep;
}

namespace {

bool mats_equal(const SparseMatrix& a, const SparseMatrix& b, int* first_col) {
  for (int r = 0; r < a.nrows; ++r) {
    size_t i = 0, j = 0;
    const auto &ra = a.rows[r], &rb = b.rows[r];
    while (i < ra.size() || j < rb.size()) {
      int ca = i < ra.size() ? ra[i].first : a.ncols;
      int cb = j < rb.size() ? rb[j].first : b.ncols;
      if (ca < cb) {
        *first_col = ca;
        return false;
      }
      if (cb < ca) {
        *first_col = cb;
        return false;
      }
      if (ra[i].second != rb[j].second) {
        *first_col = ca;
        return false;
      }
      ++i;
      ++j;
    }
  }
  return true;
}

SparseMatrix mat_sub(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.nrows, a.ncols);
  for (int r = 0; r < a.nrows; ++r) out.rows[r] = sparse_sub(a.rows[r], b.rows[r]);
  return out;
}

DenseVec unit_vec(int n, int i) {
  DenseVec v(n, Scalar());
  v[i] = Scalar(1);
  return v;
}

}  // namespace

CheckReport check_jordan_identity(const JordanTriple& V) {
  CheckReport rep;
  int n = V.dim;
  std::vector<SparseMatrix> B((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B[(size_t)i * n + j] = V.box_basis(i, j);

  // Restated with box operators, the identity on (x,y,a,b,.) says
  // [x box y, a box b] = {x,y,a} box b - a box {y,x,b}.
  auto check_tuple = [&](const SparseMatrix& Bxy, const SparseMatrix& Bab,
                         const DenseVec& u, const DenseVec& w, int p, int q,
                         int i, int j, const char* tag) {
    SparseMatrix lhs = mat_sub(sparse_mul(Bxy, Bab), sparse_mul(Bab, Bxy));
    // rhs = sum_t u_t B[t][j] - sum_t conj(w_t) B[i][t].
    SparseMatrix rhs(n, n);
    for (int r = 0; r < n; ++r) {
      SparseVec acc;
      for (int t = 0; t < n; ++t) {
        if (!u[t].is_zero()) sparse_axpy(acc, u[t], B[(size_t)t * n + j].rows[r]);
        Scalar wc = w[t].conj();
        if (!wc.is_zero()) sparse_axpy(acc, -wc, B[(size_t)i * n + t].rows[r]);
      }
      rhs.rows[r] = std::move(acc);
    }
    int col = -1;
    if (!mats_equal(lhs, rhs, &col)) {
      std::ostringstream os;
      os << tag << " 5-tuple (x,y,a,b,c) = (e" << p << ", e" << q << ", e" << i
         << ", e" << j << ", e" << col << ")";
      rep.fail(os.str());
      return false;
    }
    return true;
  };

  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const SparseMatrix& Bpq = B[(size_t)p * n + q];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (!check_tuple(Bpq, B[(size_t)i * n + j], V.basis_triple(p, q, i),
                           V.basis_triple(q, p, j), p, q, i, j, ""))
            return rep;
        }
    }

  if (V.field == Field::Qi) {
    // Same sweep with the middle arguments y, b scaled by i, run through
    // the generic evaluators so the conjugation path itself is tested.
    Scalar ii = Scalar::i();
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        DenseVec yq = unit_vec(n, q);
        dense_scale(yq, ii);
        DenseVec ep = unit_vec(n, p);
        SparseMatrix Bxy = V.box(ep, yq);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            DenseVec bj = unit_vec(n, j);
            dense_scale(bj, ii);
            DenseVec ei = unit_vec(n, i);
            SparseMatrix Bab = V.box(ei, bj);
            SparseMatrix lhs = mat_sub(sparse_mul(Bxy, Bab), sparse_mul(Bab, Bxy));
            DenseVec u = V.triple(ep, yq, ei);
            DenseVec w = V.triple(yq, ep, bj);
            SparseMatrix rhs = mat_sub(V.box(u, bj), V.box(ei, w));
            int col = -1;
            if (!mats_equal(lhs, rhs, &col)) {
              std::ostringstream os;
              os << "i-scaled 5-tuple (x,y,a,b,c) = (e" << p << ", i*e" << q
                 << ", e" << i << ", i*e" << j << ", e" << col << ")";
              rep.fail(os.str());
              return rep;
            }
          }
      }
  }
  return rep;
}

SparseVec flatten_op(const SparseMatrix& m) {
  SparseVec out;
  for (int r = 0; r < m.nrows; ++r)
    for (const auto& [c, v] : m.rows[r]) out.emplace_back(r * m.ncols + c, v);
  return out;
}

V0Basis compute_V0(const JordanTriple& V) {
  int n = V.dim;
  V0Basis v0;
  v0.vdim = n;
  // Columns of A are the vectorized pair operators in lexicographic pair
  // order; pivot columns give the greedy basis, the kernel the relations.
  SparseMatrix a(n * n, n * n);
  std::vector<SparseMatrix> ops((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int p = i * n + j;
      ops[p] = V.box_basis(i, j);
      for (const auto& [idx, val] : flatten_op(ops[p])) a.rows[idx].emplace_back(p, val);
    }
  for (auto& row : a.rows)
    std::sort(row.begin(), row.end(),
              [](const Entry& x, const Entry& y) { return x.first < y.first; });
  RankKernel rk = rank_kernel(a);
  v0.dim = rk.rank;
  v0.relation_kernel = rk.kernel;
  for (int p : rk.pivot_cols) {
    v0.generator_index.emplace_back(p / n, p % n);
    v0.basis_ops.push_back(ops[p]);
    v0.basis_flat.push_back(flatten_op(ops[p]));
  }
  // natural on generators reverses the pair: (e_i box e_j)^nat = e_j box e_i.
  v0.natural_matrix = SparseMatrix(v0.dim, v0.dim);
  for (int p = 0; p < v0.dim; ++p) {
    auto [i, j] = v0.generator_index[p];
    auto coords = solve_in_span(v0.basis_flat, flatten_op(ops[(size_t)j * n + i]),
                                n * n);
    if (!coords)
      throw std::logic_error("compute_V0: swapped generator outside V0 span");
    for (int r = 0; r < v0.dim; ++r)
      if (!(*coords)[r].is_zero()) v0.natural_matrix.rows[r].emplace_back(p, (*coords)[r]);
  }
  for (auto& row : v0.natural_matrix.rows)
    std::sort(row.begin(), row.end(),
              [](const Entry& x, const Entry& y) { return x.first < y.first; });
  return v0;
}

std::optional<DenseVec> coords_in_V0(const V0Basis& v0, const SparseMatrix& h) {
  return solve_in_span(v0.basis_flat, flatten_op(h), v0.vdim * v0.vdim);
}

CheckReport verify_natural_well_defined(const JordanTriple& V, const V0Basis& v0) {
  CheckReport rep;
  int n = V.dim;
  for (size_t r = 0; r < v0.relation_kernel.size(); ++r) {
    // Relation sum lambda_{ij} e_i box e_j = 0; the swapped conjugated sum
    // must vanish too.
    SparseVec acc;
    for (const auto& [p, lam] : v0.relation_kernel[r]) {
      int i = p / n, j = p % n;
      sparse_axpy(acc, lam.conj(), flatten_op(V.box_basis(j, i)));
    }
    if (!sparse_is_zero(acc)) {
      std::ostringstream os;
      os << "relation " << r << ": swapped conjugated sum is nonzero";
      rep.fail(os.str());
      return rep;
    }
  }
  return rep;
}

DenseVec natural_on_V0(const V0Basis& v0, const DenseVec& hcoords) {
  return v0.natural_matrix.apply(dense_conj(hcoords));
}

}  // namespace jtk
