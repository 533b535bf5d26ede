// Timing comparison of the serial reference kernels against the OpenMP
// paths, on the two hot spots: coboundary matrix assembly and exact
// RREF. Also asserts that both paths produce identical results, which
// is the determinism contract the parallel code must keep.

#include "jtk/catalog.hpp"
#include "jtk/cohomology.hpp"
#include "jtk/tkk.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

using namespace jtk;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_matrix(const SparseMatrix& a, const SparseMatrix& b) {
  return a.nrows == b.nrows && a.ncols == b.ncols && a.rows == b.rows;
}

void bench_pair(const std::string& name, const LieModulePair& pair, int k) {
  auto t0 = std::chrono::steady_clock::now();
  SparseMatrix serial = coboundary_matrix(pair, k, false);
  double ts = seconds(t0);

  t0 = std::chrono::steady_clock::now();
  SparseMatrix parallel = coboundary_matrix(pair, k, true);
  double tp = seconds(t0);

  bool same = same_matrix(serial, parallel);
  std::printf("%-24s d_%d assembly %5d x %5d  serial %7.3fs  parallel %7.3fs  %.2fx  %s\n",
              name.c_str(), k, serial.nrows, serial.ncols, ts, tp,
              tp > 0 ? ts / tp : 0.0, same ? "identical" : "MISMATCH");

  t0 = std::chrono::steady_clock::now();
  RrefResult rs = rref(serial, false);
  double rts = seconds(t0);

  t0 = std::chrono::steady_clock::now();
  RrefResult rp = rref(parallel, true);
  double rtp = seconds(t0);

  bool rsame = rs.rank == rp.rank && rs.pivot_cols == rp.pivot_cols && rs.rows == rp.rows;
  std::printf("%-24s rref rank %5d            serial %7.3fs  parallel %7.3fs  %.2fx  %s\n",
              name.c_str(), rs.rank, rts, rtp, rtp > 0 ? rts / rtp : 0.0,
              rsame ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  if (const char* jt = std::getenv("JTK_THREADS")) {
    int n = std::atoi(jt);
    if (n > 0) omp_set_num_threads(n);
  }
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    JordanTriple V = builtin_triple("mat:2,2");
    LieAlgebraWithInvolution L = build_tkk(V);
    LieModuleWithInvolution X = build_lie_module(L, self_module(V));
    LieModulePair pair = tkk_pair(L, X);
    bench_pair("mat:2,2 (dim 15)", pair, 1);
    bench_pair("mat:2,2 (dim 15)", pair, 2);
  }
  {
    JordanTriple Vc = builtin_triple("mat:2,2");
    JordanTriple V = restrict_scalars(Vc);
    TripleModule M = restrict_scalars_module(Vc, self_module(Vc));
    LieAlgebraWithInvolution L = build_tkk(V);
    LieModuleWithInvolution X = build_lie_module(L, M);
    LieModulePair pair = tkk_pair(L, X);
    bench_pair("mat:2,2 real (dim 30)", pair, 1);
  }
  return 0;
}
