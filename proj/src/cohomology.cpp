#include "jtk/cohomology.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace jtk {

long long binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

long long colex_rank(const std::vector<int>& t) {
  long long r = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    r += binom(t[i], (int)i + 1);
  }
  return r;
}

std::vector<int> colex_tuple(long long rank, int k) {
  std::vector<int> t(k);
  for (int i = k; i >= 1; --i) {
    // Largest v with C(v, i) <= rank.
    int v = i - 1;
    while (binom(v + 1, i) <= rank) ++v;
    t[i - 1] = v;
    rank -= binom(v, i);
  }
  return t;
}

bool next_increasing_tuple(std::vector<int>& t, int n) {
  int k = (int)t.size();
  for (int i = 0; i < k; ++i) {
    int cap = (i + 1 < k) ? t[i + 1] : n;
    if (t[i] + 1 < cap) {
      ++t[i];
      for (int j = 0; j < i; ++j) t[j] = j;
      return true;
    }
  }
  return false;
}

std::optional<int> sort_tuple(std::vector<int>& t) {
  int sign = 1;
  for (size_t i = 1; i < t.size(); ++i) {
    size_t j = i;
    while (j > 0 && t[j - 1] > t[j]) {
      std::swap(t[j - 1], t[j]);
      sign = -sign;
      --j;
    }
    if (j > 0 && t[j - 1] == t[j]) return std::nullopt;
  }
  return sign;
}

LieModulePair tkk_pair(const LieAlgebraWithInvolution& L,
                       const LieModuleWithInvolution& X) {
  LieModulePair p;
  p.ldim = L.dim;
  p.xdim = X.xdim;
  p.field = L.field;
  p.f = L.f;
  p.rho = X.rho;
  p.has_theta = true;
  p.theta = L.theta;
  p.theta_tilde = X.theta_tilde;
  return p;
}

static SparseMatrix identity_matrix(int n) {
  SparseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, Scalar(1));
  return m;
}

LieModulePair subalgebra_pair(const EigenSubspace& kL,
                              const EigenSubspace& kX) {
  LieModulePair p;
  p.ldim = kL.dim;
  p.xdim = kX.dim;
  p.field = Field::Q;
  p.f = kL.f;
  p.rho = kX.rho;
  p.has_theta = true;  // theta restricts to the identity on the fixed space
  p.theta = identity_matrix(kL.dim);
  p.theta_tilde = identity_matrix(kX.dim);
  return p;
}

DenseVec Cochain::value(const std::vector<int>& tuple) const {
  size_t off = (size_t)colex_rank(tuple) * xdim;
  return DenseVec(coeffs.begin() + off, coeffs.begin() + off + xdim);
}

void Cochain::set_value(const std::vector<int>& tuple, const DenseVec& v) {
  size_t off = (size_t)colex_rank(tuple) * xdim;
  for (int c = 0; c < xdim; ++c) coeffs[off + c] = v[c];
}

// Determinant of the k x k minor picking rows `tuple` of the argument
// coordinates: M[i][j] = args[j][tuple[i]]. Laplace expansion; k is tiny.
static Scalar arg_minor_det(const std::vector<DenseVec>& args,
                            const std::vector<int>& tuple,
                            std::vector<int>& cols, int row) {
  int k = (int)tuple.size();
  if (row == k) return Scalar(1);
  Scalar det(0);
  int sign = 1;
  for (size_t p = 0; p < cols.size(); ++p) {
    int j = cols[p];
    Scalar a = args[j][tuple[row]];
    if (!a.is_zero()) {
      cols.erase(cols.begin() + p);
      Scalar sub = arg_minor_det(args, tuple, cols, row + 1);
      cols.insert(cols.begin() + p, j);
      if (sign < 0) a = -a;
      det += a * sub;
    }
    sign = -sign;
  }
  return det;
}

DenseVec Cochain::evaluate(const std::vector<DenseVec>& args) const {
  if ((int)args.size() != degree) {
    throw std::invalid_argument("cochain evaluate: argument count mismatch");
  }
  DenseVec out(xdim, Scalar(0));
  if (degree == 0) {
    for (int c = 0; c < xdim; ++c) out[c] = coeffs[c];
    return out;
  }
  // No increasing tuples above the dimension: the form is zero.
  if (degree > ldim) return out;
  std::vector<int> t(degree);
  for (int i = 0; i < degree; ++i) t[i] = i;
  std::vector<int> cols(degree);
  do {
    for (int i = 0; i < degree; ++i) cols[i] = i;
    Scalar det = arg_minor_det(args, t, cols, 0);
    if (!det.is_zero()) {
      size_t off = (size_t)colex_rank(t) * xdim;
      for (int c = 0; c < xdim; ++c) out[c] += det * coeffs[off + c];
    }
  } while (next_increasing_tuple(t, ldim));
  return out;
}

// One row block of d_k: all contributions for the (k+1)-tuple s.
static void assemble_block(const LieModulePair& base, const std::vector<int>& s,
                           std::vector<std::vector<Entry>>& local) {
  int xd = base.xdim;
  int k1 = (int)s.size();  // k + 1 arguments
  for (auto& row : local) row.clear();

  // Action terms: (-1)^i  x_{s_i} . psi(s minus position i).
  std::vector<int> sub(k1 - 1);
  for (int i = 0; i < k1; ++i) {
    for (int p = 0, q = 0; p < k1; ++p) {
      if (p != i) sub[q++] = s[p];
    }
    long long rt = colex_rank(sub);
    bool neg = (i % 2) != 0;
    const SparseMatrix& act = base.rho[s[i]];
    for (int r = 0; r < xd; ++r) {
      for (const auto& e : act.rows[r]) {
        Scalar v = e.second;
        if (neg) v = -v;
        local[r].emplace_back((int)(rt * xd) + e.first, v);
      }
    }
  }

  // Bracket terms: (-1)^{i+j} psi([x_{s_i}, x_{s_j}], rest).
  if (k1 < 2) return;
  std::vector<int> rest(k1 - 2);
  std::vector<int> merged(k1 - 1);
  for (int i = 0; i < k1; ++i) {
    for (int j = i + 1; j < k1; ++j) {
      const DenseVec& br = base.bracket_basis(s[i], s[j]);
      for (int p = 0, q = 0; p < k1; ++p) {
        if (p != i && p != j) rest[q++] = s[p];
      }
      bool neg_ij = ((i + j) % 2) != 0;
      for (int g = 0; g < base.ldim; ++g) {
        if (br[g].is_zero()) continue;
        // Insert g into the increasing rest; a repeat kills the term.
        int pos = 0;
        bool dup = false;
        for (int x : rest) {
          if (x == g) {
            dup = true;
            break;
          }
          if (x < g) ++pos;
        }
        if (dup) continue;
        for (int p = 0, q = 0; p < (int)merged.size(); ++p) {
          if (p == pos) {
            merged[p] = g;
          } else {
            merged[p] = rest[q++];
          }
        }
        Scalar v = br[g];
        if (neg_ij != (pos % 2 != 0)) v = -v;
        long long ru = colex_rank(merged);
        for (int r = 0; r < xd; ++r) {
          local[r].emplace_back((int)(ru * xd) + r, v);
        }
      }
    }
  }
}

static SparseVec combine_entries(std::vector<Entry>& es) {
  std::sort(es.begin(), es.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SparseVec out;
  for (size_t p = 0; p < es.size();) {
    Scalar v = es[p].second;
    size_t q = p + 1;
    while (q < es.size() && es[q].first == es[p].first) {
      v += es[q].second;
      ++q;
    }
    if (!v.is_zero()) out.emplace_back(es[p].first, v);
    p = q;
  }
  return out;
}

SparseMatrix coboundary_matrix(const LieModulePair& base, int k,
                               bool parallel) {
  int n = base.ldim;
  int xd = base.xdim;
  long long nrows_t = binom(n, k + 1);
  long long ncols_t = binom(n, k);
  SparseMatrix d((int)(nrows_t * xd), (int)(ncols_t * xd));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
#endif
  for (long long rs = 0; rs < nrows_t; ++rs) {
    std::vector<int> s = colex_tuple(rs, k + 1);
    std::vector<std::vector<Entry>> local(xd);
    assemble_block(base, s, local);
    for (int r = 0; r < xd; ++r) {
      d.rows[(size_t)rs * xd + r] = combine_entries(local[r]);
    }
  }
  (void)parallel;
  return d;
}

const SparseMatrix& CochainComplex::d_matrix(int k, bool parallel) {
  auto it = cache_.find(k);
  if (it != cache_.end()) return it->second;
  auto ins = cache_.emplace(k, coboundary_matrix(base_, k, parallel));
  return ins.first->second;
}

Cochain CochainComplex::coboundary(const Cochain& psi, bool parallel) {
  if (psi.ldim != base_.ldim || psi.xdim != base_.xdim) {
    throw std::invalid_argument("coboundary: cochain shape mismatch");
  }
  const SparseMatrix& d = d_matrix(psi.degree, parallel);
  Cochain out(psi.degree + 1, psi.ldim, psi.xdim);
  out.coeffs = d.apply(psi.coeffs);
  return out;
}

// Accumulates det(theta[t, s]) over increasing tuples t, by expanding the
// product of the sparse theta-columns at s over injective row picks.
static void pullback_dets(const SparseMatrix& theta, const std::vector<int>& s,
                          std::map<long long, Scalar>& dets) {
  dets.clear();
  int k = (int)s.size();
  if (k == 0) {
    dets[0] = Scalar(1);
    return;
  }
  std::vector<std::vector<Entry>> cols(k);
  for (int j = 0; j < k; ++j) {
    cols[j] = theta.rows_of_col(s[j]);
    if (cols[j].empty()) return;
  }
  std::vector<int> pick(k, 0);
  std::vector<int> tup(k);
  for (;;) {
    for (int j = 0; j < k; ++j) tup[j] = cols[j][pick[j]].first;
    std::vector<int> sorted = tup;
    auto sign = sort_tuple(sorted);
    if (sign) {
      Scalar v = Scalar(*sign);
      for (int j = 0; j < k; ++j) v *= cols[j][pick[j]].second;
      if (!v.is_zero()) {
        auto it = dets.find(colex_rank(sorted));
        if (it == dets.end()) {
          dets.emplace(colex_rank(sorted), v);
        } else {
          it->second += v;
        }
      }
    }
    int j = k - 1;
    while (j >= 0 && pick[j] + 1 == (int)cols[j].size()) {
      pick[j] = 0;
      --j;
    }
    if (j < 0) break;
    ++pick[j];
  }
  for (auto it = dets.begin(); it != dets.end();) {
    it = it->second.is_zero() ? dets.erase(it) : std::next(it);
  }
}

std::vector<SparseVec> theta_invariant_basis(const LieModulePair& base,
                                             int k) {
  if (!base.has_theta) {
    throw std::invalid_argument("theta_invariant_basis: no involution data");
  }
  if (base.field != Field::Q) {
    throw std::invalid_argument(
        "theta_invariant_basis: requires ground field Q");
  }
  int n = base.ldim;
  int xd = base.xdim;
  long long ntup = binom(n, k);
  if (ntup == 0) return {};
  SparseMatrix m((int)(ntup * xd), (int)(ntup * xd));
  std::map<long long, Scalar> dets;
  std::vector<int> s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  long long rs = 0;
  do {
    pullback_dets(base.theta, s, dets);
    for (int r = 0; r < xd; ++r) {
      std::vector<Entry> es;
      for (const auto& dv : dets) {
        es.emplace_back((int)(dv.first * xd) + r, dv.second);
      }
      for (const auto& e : base.theta_tilde.rows[r]) {
        Scalar v = e.second;
        v = -v;
        es.emplace_back((int)(rs * xd) + e.first, v);
      }
      m.rows[(size_t)rs * xd + r] = combine_entries(es);
    }
    ++rs;
  } while (k > 0 && next_increasing_tuple(s, n));
  return rank_kernel(m).kernel;
}

CohomologyDims cohomology_dims(CochainComplex& cc, int k) {
  CohomologyDims out;
  const SparseMatrix& dk = cc.d_matrix(k);
  out.z = cc.space_dim(k) - rank_of(dk);
  if (k > 0) {
    const SparseMatrix& dprev = cc.d_matrix(k - 1);
    out.b = rank_of(dprev);
    if (!sparse_mul(dk, dprev).is_zero()) {
      throw std::logic_error("cohomology_dims: boundaries not cocycles");
    }
  }
  out.h = out.z - out.b;
  return out;
}

CohomologyDims involutive_cohomology_dims(CochainComplex& cc, int k) {
  CohomologyDims out;
  const SparseMatrix& dk = cc.d_matrix(k);
  std::vector<SparseVec> ak = theta_invariant_basis(cc.base(), k);
  std::vector<SparseVec> images;
  images.reserve(ak.size());
  for (const auto& v : ak) images.push_back(dk.apply_sparse(v));
  out.z = (long long)ak.size() - rank_of_vectors(images, dk.nrows);
  if (k > 0) {
    const SparseMatrix& dprev = cc.d_matrix(k - 1);
    std::vector<SparseVec> prev = theta_invariant_basis(cc.base(), k - 1);
    std::vector<SparseVec> bd;
    bd.reserve(prev.size());
    for (const auto& v : prev) bd.push_back(dprev.apply_sparse(v));
    out.b = rank_of_vectors(bd, dprev.nrows);
  }
  out.h = out.z - out.b;
  return out;
}

CheckReport verify_d_squared_zero(CochainComplex& cc, int k_max) {
  CheckReport rep;
  for (int k = 1; k <= k_max; ++k) {
    SparseMatrix prod = sparse_mul(cc.d_matrix(k), cc.d_matrix(k - 1));
    if (!prod.is_zero()) {
      std::ostringstream os;
      os << "d_" << k << " d_" << (k - 1) << " != 0";
      rep.fail(os.str());
      return rep;
    }
  }
  return rep;
}

}  // namespace jtk
