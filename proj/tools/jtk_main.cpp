// jtk: exact TKK construction, Chevalley-Eilenberg cohomology and Jordan
// triple cochains from the command line.
//
// Exit codes: 0 all checks pass, 1 a verification failed, 2 input error.
// Reports are deterministic: identical invocations (same inputs, same
// seed) produce byte-identical output, independent of JTK_THREADS.

#include "CLI11.hpp"

#include "jtk/catalog.hpp"
#include "jtk/cohomology.hpp"
#include "jtk/jordan_cochains.hpp"
#include "jtk/rng.hpp"
#include "jtk/tkk.hpp"

#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace jtk;

namespace {

// Cochain spaces larger than this are skipped with a warning instead of
// being fed to the exact elimination.
constexpr long long kDegreeCap = 100000;

struct Reporter {
  bool machine = false;

  void fact(const std::string& key, const std::string& value,
            const std::string& text) const {
    if (machine)
      std::cout << key << '=' << value << '\n';
    else
      std::cout << text << '\n';
  }
  void note(const std::string& text) const {
    if (machine)
      std::cout << "note=" << text << '\n';
    else
      std::cout << text << '\n';
  }
  void warn(const std::string& key, const std::string& text) const {
    if (machine)
      std::cout << key << '=' << text << '\n';
    else
      std::cout << "warning: " << text << '\n';
  }
};

struct SourceOpts {
  std::string builtin;
  std::string file;
  std::string module_file;
  bool self = false;
};

void add_triple_options(CLI::App* cmd, SourceOpts& src, bool with_module) {
  auto* b = cmd->add_option("--builtin", src.builtin, "builtin triple name");
  auto* f = cmd->add_option("--file", src.file, "triple file");
  b->excludes(f);
  if (with_module) {
    auto* s = cmd->add_flag("--self", src.self, "use the triple as its own module");
    auto* m = cmd->add_option("--module-file", src.module_file, "module file");
    s->excludes(m);
    m->excludes(b);
    m->excludes(f);
  }
}

void add_format_option(CLI::App* cmd, Reporter& rep) {
  cmd->add_option_function<std::string>(
         "--format",
         [&rep](const std::string& v) { rep.machine = (v == "machine"); },
         "output format: text (default) or machine, one key=value per fact")
      ->check(CLI::IsMember({"text", "machine"}));
}

struct LoadedPair {
  JordanTriple V;
  TripleModule M;
};

JordanTriple load_triple_source(const SourceOpts& src) {
  if (!src.builtin.empty()) return builtin_triple(src.builtin);
  if (!src.file.empty()) return load_triple(src.file);
  throw CatalogError("no triple given: pass --builtin or --file");
}

LoadedPair load_pair_source(const SourceOpts& src) {
  if (!src.module_file.empty()) {
    LoadedModule lm = load_module(src.module_file);
    return {lm.V, lm.M};
  }
  JordanTriple V = load_triple_source(src);
  if (!src.self)
    throw CatalogError("no module given: pass --self or --module-file");
  TripleModule M = self_module(V);
  return {V, M};
}

std::string field_label(Field f) { return f == Field::Q ? "Q" : "Qi"; }

// Pretty form of a rational square matrix given by basis coordinates:
// a common factor num/den is pulled out so that the entries are coprime
// integers, e.g. (0, 1/4, 1/4, 0) -> "(1/4) * [[0, 1], [1, 0]]".
std::string factored_matrix_str(const DenseVec& coords, int n) {
  mpz_class g = 0, l = 1;
  for (const Scalar& c : coords) {
    mpq_class q = c.re;
    q.canonicalize();
    mpz_class num = q.get_num();
    if (num < 0) num = -num;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
    if (num != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  }
  std::ostringstream os;
  if (g == 0) {
    g = 1;
    l = 1;
  }
  mpq_class factor(g, l);
  factor.canonicalize();
  if (factor != 1) os << "(" << factor.get_str() << ") * ";
  os << "[[";
  for (int r = 0; r < n; ++r) {
    if (r) os << "], [";
    for (int c = 0; c < n; ++c) {
      if (c) os << ", ";
      mpq_class q = coords[(size_t)(r * n + c)].re / factor;
      q.canonicalize();
      os << q.get_str();
    }
  }
  os << "]]";
  return os.str();
}

int run_check(const SourceOpts& src, const Reporter& rep) {
  JordanTriple V = load_triple_source(src);
  rep.fact("triple", V.label,
           "triple " + V.label + " [field " + field_label(V.field) + ", dim " +
               std::to_string(V.dim) + "]");
  bool ok = true;
  auto emit = [&](const std::string& key, const std::string& label,
                  const CheckReport& r) {
    ok = ok && r.pass;
    std::string v = r.pass ? "pass" : "FAIL (" + r.witness + ")";
    rep.fact(key, r.pass ? "pass" : "fail", label + ": " + v);
    if (!r.pass && rep.machine) std::cout << "witness=" << r.witness << '\n';
  };
  emit("outer_symmetry", "outer symmetry", check_outer_symmetry(V));
  emit("jordan_identity", "jordan identity", check_jordan_identity(V));
  emit("natural_well_defined", "natural map well-defined",
       verify_natural_well_defined(V, compute_V0(V)));
  TripleModule M = self_module(V);
  emit("module_axioms", "module axioms (self)", check_module_axioms(V, M));
  bool nondeg = check_module_nondegenerate(V, M);
  ok = ok && nondeg;
  rep.fact("module_nondegenerate", nondeg ? "pass" : "fail",
           std::string("module nondegenerate: ") + (nondeg ? "pass" : "FAIL"));
  rep.fact("result", ok ? "pass" : "fail",
           ok ? "all checks passed" : "checks FAILED");
  return ok ? 0 : 1;
}

int run_tkk(const SourceOpts& src, bool verify, bool embed, const Reporter& rep) {
  JordanTriple V = load_triple_source(src);
  if (embed && !V.unnormalized_assoc())
    throw CatalogError(
        "--embed-m2 requires an unnormalized associative realization "
        "(use a builtin with the :unnorm suffix)");
  LieAlgebraWithInvolution L = build_tkk(V);
  rep.fact("triple", V.label,
           "triple " + V.label + " [field " + field_label(V.field) + "]");
  rep.fact("dim_v", std::to_string(L.vdim), "dim V = " + std::to_string(L.vdim));
  rep.fact("dim_v0", std::to_string(L.v0dim),
           "dim V0 = " + std::to_string(L.v0dim));
  rep.fact("dim_l", std::to_string(L.dim), "dim L = " + std::to_string(L.dim));
  int rc = 0;
  if (verify) {
    CheckReport r = verify_tkk(L);
    rep.fact("tkk_verified", r.pass ? "pass" : "fail",
             std::string("tkk verification: ") +
                 (r.pass ? "pass" : "FAIL (" + r.witness + ")"));
    if (!r.pass) rc = 1;
  }
  if (embed) {
    EmbedResult e = embed_m2(L);
    rep.fact("embed_target", std::to_string(2 * e.nmat),
             "embedding target: " + std::to_string(2 * e.nmat) + " x " +
                 std::to_string(2 * e.nmat) + " matrices");
    rep.fact("embed_well_defined", e.well_defined.pass ? "pass" : "fail",
             std::string("well-defined on relations: ") +
                 (e.well_defined.pass ? "pass" : "FAIL (" + e.well_defined.witness + ")"));
    rep.fact("embed_homomorphism", e.homomorphism.pass ? "pass" : "fail",
             std::string("bracket homomorphism: ") +
                 (e.homomorphism.pass ? "pass" : "FAIL (" + e.homomorphism.witness + ")"));
    rep.fact("embed_injective", e.injective ? "yes" : "no",
             std::string("injective: ") + (e.injective ? "yes" : "no"));
    rep.fact("embed_rank", std::to_string(e.image_rank),
             "image rank = " + std::to_string(e.image_rank));
    rep.fact("embed_traceless", e.trace_zero ? "yes" : "no",
             std::string("traceless image: ") + (e.trace_zero ? "yes" : "no"));
    if (!e.well_defined.pass || !e.homomorphism.pass || !e.injective) rc = 1;
  }
  return rc;
}

long long binom_ll(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

int run_cohomology(const SourceOpts& src, std::vector<int> ks, bool involutive,
                   bool jordan, bool real, const Reporter& rep) {
  LoadedPair P = load_pair_source(src);
  std::string label = P.V.label;
  if (real && P.V.field == Field::Qi) {
    P.M = restrict_scalars_module(P.V, P.M);
    P.V = restrict_scalars(P.V);
    label += " restricted to rational scalars";
  }
  if (involutive && P.V.field == Field::Qi)
    throw CatalogError(
        "--involutive needs rational scalars: add --real for complex input");
  rep.fact("triple", label,
           "triple " + label + " [field " + field_label(P.V.field) + ", dim " +
               std::to_string(P.V.dim) + "]");
  LieAlgebraWithInvolution L = build_tkk(P.V);
  LieModuleWithInvolution X = build_lie_module(L, P.M);
  rep.fact("dim_l", std::to_string(L.dim),
           "lie pair: dim L = " + std::to_string(L.dim) +
               ", dim X = " + std::to_string(X.xdim));
  LieModulePair pair = tkk_pair(L, X);
  CochainComplex cc(pair);
  for (int k : ks) {
    if (k < 0) throw CatalogError("degree must be nonnegative");
    long long space = binom_ll(L.dim, k + 1) * X.xdim;
    if (space > kDegreeCap) {
      rep.warn("warning_k" + std::to_string(k),
               "degree " + std::to_string(k) + " skipped: cochain space " +
                   std::to_string(space) + " exceeds cap " +
                   std::to_string(kDegreeCap));
      continue;
    }
    CohomologyDims d =
        involutive ? involutive_cohomology_dims(cc, k) : cohomology_dims(cc, k);
    std::string ks_s = std::to_string(k);
    std::string row = "k=" + ks_s + (involutive ? " (involutive)" : "") +
                      ": dim Z = " + std::to_string(d.z) +
                      ", dim B = " + std::to_string(d.b) +
                      ", dim H = " + std::to_string(d.h);
    if (rep.machine) {
      std::cout << "z" << ks_s << '=' << d.z << '\n';
      std::cout << "b" << ks_s << '=' << d.b << '\n';
      std::cout << "h" << ks_s << '=' << d.h << '\n';
    } else {
      std::cout << row << '\n';
    }
    if (jordan) {
      CohomologyDims jd = jordan_cohomology_dims(P.V, P.M, k, involutive);
      if (rep.machine) {
        std::cout << "jordan_z" << ks_s << '=' << jd.z << '\n';
        std::cout << "jordan_b" << ks_s << '=' << jd.b << '\n';
        std::cout << "jordan_h" << ks_s << '=' << jd.h << '\n';
      } else {
        std::cout << "k=" << ks_s << " jordan" << (involutive ? " (involutive)" : "")
                  << ": dim Z = " << jd.z << ", dim B = " << jd.b
                  << ", dim H = " << jd.h << '\n';
      }
    }
  }
  return 0;
}

int run_derivations(const SourceOpts& src, const Reporter& rep) {
  LoadedPair P = load_pair_source(src);
  std::string label = P.V.label;
  if (P.V.field == Field::Qi) {
    P.M = restrict_scalars_module(P.V, P.M);
    P.V = restrict_scalars(P.V);
    rep.note("complex scalars restricted to rational for the derivation count");
    label += " restricted to rational scalars";
  }
  rep.fact("triple", label, "triple " + label);
  DerivationSpaces d = triple_derivation_space(P.V, P.M);
  rep.fact("derivations", std::to_string(d.derivation_basis.size()),
           "dim derivations = " + std::to_string(d.derivation_basis.size()));
  rep.fact("inner", std::to_string(d.inner_basis.size()),
           "dim inner derivations = " + std::to_string(d.inner_basis.size()));
  rep.fact("h1_theta", std::to_string(d.h1_theta_dim),
           "dim H1_theta = " + std::to_string(d.h1_theta_dim));
  long long via_lie = h1_theta_via_lie(P.V, P.M);
  bool agree = via_lie == d.h1_theta_dim;
  rep.fact("pipelines_agree", agree ? "1" : "0",
           std::string("pipelines agree: ") + (agree ? "yes" : "NO"));
  return agree ? 0 : 1;
}

int run_three_cocycle(const SourceOpts& src, bool solve, int nrandom,
                      unsigned long long seed, const Reporter& rep) {
  LoadedPair P = load_pair_source(src);
  if (P.V.field != Field::Q)
    throw CatalogError(
        "three-cocycle analysis needs rational scalars; pick a rational triple");
  rep.fact("triple", P.V.label,
           "triple " + P.V.label + " [dim " + std::to_string(P.V.dim) + "]");
  if (solve) {
    std::vector<DenseVec> sol = three_condition_solution_space(P.V, P.M);
    rep.fact("solution_dim", std::to_string(sol.size()),
             "three-condition solution space: dim " + std::to_string(sol.size()));
    std::vector<JordanCochain> tests;
    tests.emplace_back(3, P.V.dim, P.M.mdim);  // the zero cochain, always
    int idx = 0;
    for (const DenseVec& b : sol) {
      ++idx;
      JordanCochain omega(3, P.V.dim, P.M.mdim);
      omega.coeffs = b;
      bool cond = check_three_conditions(P.V, P.M, omega);
      bool ext = is_extendable(P.V, P.M, omega).pass;
      if (ext) tests.push_back(omega);
      std::string is = std::to_string(idx);
      rep.fact("solution_" + is,
               std::string(cond ? "conditions_pass" : "conditions_FAIL") +
                   (ext ? ",extendable" : ",not_extendable"),
               "solution " + is + ": conditions " + (cond ? "pass" : "FAIL") +
                   (ext ? "; extendable" : "; not extendable (direct comparison skipped)"));
    }
    EquivalenceReport er = three_cocycle_equivalence_test(P.V, P.M, tests);
    int disagreements = er.tested - er.agreements;
    rep.fact("compared", std::to_string(er.tested),
             "direct coboundary comparison: " + std::to_string(er.tested) +
                 " tested (zero cochain included)");
    rep.fact("disagreements", std::to_string(disagreements),
             "disagreements = " + std::to_string(disagreements));
    return er.check.pass && disagreements == 0 ? 0 : 1;
  }
  // Random mode: sample rational combinations of the extendable degree-3
  // subspace and compare the three conditions against the direct
  // k-restricted coboundary on every draw.
  std::vector<DenseVec> basis = extendable_subspace(P.V, P.M, 3);
  rep.fact("extendable_dim", std::to_string(basis.size()),
           "extendable degree-3 subspace: dim " + std::to_string(basis.size()) +
               (basis.empty() ? " (all samples are the zero cochain)" : ""));
  rep.fact("samples", std::to_string(nrandom),
           "random samples: " + std::to_string(nrandom) + " (seed " +
               std::to_string(seed) + ")");
  SplitMix64 rng(seed);
  std::vector<JordanCochain> tests;
  for (int t = 0; t < nrandom; ++t) {
    JordanCochain omega(3, P.V.dim, P.M.mdim);
    for (const DenseVec& b : basis) {
      Scalar c = rng.small_scalar(Field::Q);
      for (size_t i = 0; i < b.size(); ++i) omega.coeffs[i] += c * b[i];
    }
    tests.push_back(omega);
  }
  EquivalenceReport er = three_cocycle_equivalence_test(P.V, P.M, tests);
  rep.fact("agreement",
           std::to_string(er.agreements) + "/" + std::to_string(er.tested),
           "agreement " + std::to_string(er.agreements) + "/" +
               std::to_string(er.tested));
  return er.check.pass ? 0 : 1;
}

// The rectangular 2x2 worked example: phi = m box v - v box m, its
// middle-block potential mu_phi, the degree-1 cochain
// psi(z) = -l_v . (z . mu_phi), and the restricted coboundary
// omega2 = J^2(d1 psi), which is a nonzero Jordan 2-coboundary that is
// not extendable.
int run_paper_example(const Reporter& rep) {
  JordanTriple V = builtin_triple("mat:2,2");
  TripleModule M = self_module(V);
  LieAlgebraWithInvolution L = build_tkk(V);
  LieModuleWithInvolution X = build_lie_module(L, M);
  const int vd = 4;
  DenseVec m(vd, Scalar(0));
  m[0] = Scalar(1);
  m[1] = Scalar(-1);
  m[2] = Scalar(-1);
  m[3] = Scalar(1);
  DenseVec v(vd, Scalar(0)), u(vd, Scalar(0));
  v[0] = Scalar(1);
  u[3] = Scalar(1);
  rep.note("triple mat:2,2 with the half-normalized product {xyz} = (xy*z + zy*x)/2");
  rep.note("v = E11, u = E22, m = E11 - E12 - E21 + E22");

  DenseMat phi = dense_mat(vd, vd);
  {
    SparseMatrix p1 = box_mu(M, m, v), p2 = box_um(M, v, m);
    for (int r = 0; r < vd; ++r) {
      for (auto& [c, val] : p1.rows[(size_t)r]) phi[(size_t)r][(size_t)c] += val;
      for (auto& [c, val] : p2.rows[(size_t)r]) phi[(size_t)r][(size_t)c] -= val;
    }
  }
  DenseVec phiu(vd, Scalar(0));
  for (int r = 0; r < vd; ++r)
    for (int c = 0; c < vd; ++c) phiu[(size_t)r] += phi[(size_t)r][(size_t)c] * u[(size_t)c];
  rep.fact("phi_u", factored_matrix_str(phiu, 2),
           "phi(u) = " + factored_matrix_str(phiu, 2) +
               "   (half-normalized convention)");

  SparseMatrix phis(vd, vd);
  for (int r = 0; r < vd; ++r)
    for (int c = 0; c < vd; ++c)
      if (!phi[(size_t)r][(size_t)c].is_zero()) phis.set(r, c, phi[(size_t)r][(size_t)c]);
  auto pc = coords_in_M0(X.m0, phis);
  if (!pc) throw std::logic_error("phi escaped M0");
  DenseVec mu_phi(X.xdim, Scalar(0));
  for (int i = 0; i < X.m0dim; ++i) mu_phi[(size_t)(X.mid_begin() + i)] = (*pc)[(size_t)i];
  DenseVec l_v(L.dim, Scalar(0));
  l_v[(size_t)L.right_begin()] = Scalar(1);
  Cochain psi(1, L.dim, X.xdim);
  for (int a = 0; a < L.dim; ++a) {
    DenseVec za(L.dim, Scalar(0));
    za[(size_t)a] = Scalar(1);
    DenseVec val = X.act(l_v, X.act(za, mu_phi));
    for (int r = 0; r < X.xdim; ++r)
      psi.coeffs[(size_t)((size_t)a * X.xdim + r)] = -val[(size_t)r];
  }
  rep.note("psi(z) = -l_v . (z . mu_phi) with mu_phi the middle-block image of phi");

  LieModulePair pair = tkk_pair(L, X);
  CochainComplex cx(pair);
  Cochain dpsi = cx.coboundary(psi);
  JordanCochain w2 = jordan_restriction(L, X, dpsi);
  DenseVec w2vu = w2.value({0, 3});
  rep.fact("omega2_vu", factored_matrix_str(w2vu, 2),
           "omega2(v, u) = " + factored_matrix_str(w2vu, 2));

  CheckReport ext = is_extendable(V, M, w2);
  rep.fact("extendable", ext.pass ? "yes" : "no",
           std::string("omega2 extendable: ") + (ext.pass ? "yes" : "no"));
  bool ok = !ext.pass && !dense_is_zero(w2.coeffs);
  if (!ext.pass) rep.fact("witness", ext.witness, "witness: " + ext.witness);
  rep.fact("b2_nonzero", ok ? "yes" : "no",
           ok ? "omega2 is a nonzero non-extendable 2-coboundary" : "UNEXPECTED");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("JTK_THREADS")) {
    int n = std::atoi(t);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"exact TKK Lie algebras and Jordan triple cohomology"};
  app.require_subcommand(1);
  Reporter rep;

  SourceOpts check_src;
  auto* c_check = app.add_subcommand("check", "run the structure checks on a triple");
  add_triple_options(c_check, check_src, false);
  add_format_option(c_check, rep);

  SourceOpts tkk_src;
  bool tkk_verify = false, tkk_embed = false;
  auto* c_tkk = app.add_subcommand("tkk", "build the TKK Lie algebra");
  add_triple_options(c_tkk, tkk_src, false);
  add_format_option(c_tkk, rep);
  c_tkk->add_flag("--verify", tkk_verify, "verify brackets, Jacobi and involution");
  c_tkk->add_flag("--embed-m2", tkk_embed,
                  "run the embedding into 2n x 2n matrices (unnormalized triples)");

  SourceOpts coh_src;
  std::vector<int> coh_ks;
  bool coh_inv = false, coh_jordan = false, coh_real = false;
  auto* c_coh = app.add_subcommand("cohomology", "cohomology dimension tables");
  add_triple_options(c_coh, coh_src, true);
  add_format_option(c_coh, rep);
  c_coh->add_option("--k", coh_ks, "degrees to compute")->required()->expected(-1);
  c_coh->add_flag("--involutive", coh_inv, "theta-invariant subcomplex");
  c_coh->add_flag("--jordan", coh_jordan, "add the restricted Jordan dimensions");
  c_coh->add_flag("--real", coh_real, "restrict complex scalars to rational first");

  SourceOpts der_src;
  auto* c_der = app.add_subcommand("derivations",
                                   "triple derivations, inner derivations and H1_theta");
  add_triple_options(c_der, der_src, true);
  add_format_option(c_der, rep);

  SourceOpts three_src;
  bool three_solve = false;
  int three_random = 0;
  unsigned long long three_seed = 0;
  auto* c_three = app.add_subcommand("three-cocycle",
                                     "three-condition analysis of degree-3 cochains");
  add_triple_options(c_three, three_src, true);
  add_format_option(c_three, rep);
  auto* o_solve = c_three->add_flag("--solve", three_solve,
                                    "solve the three conditions over the full space");
  auto* o_rand = c_three->add_option("--random", three_random,
                                     "number of random extendable samples");
  c_three->add_option("--seed", three_seed, "random seed");
  o_solve->excludes(o_rand);

  auto* c_paper = app.add_subcommand("paper-example",
                                     "the rectangular 2x2 worked example");
  add_format_option(c_paper, rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_check->parsed()) return run_check(check_src, rep);
    if (c_tkk->parsed()) return run_tkk(tkk_src, tkk_verify, tkk_embed, rep);
    if (c_coh->parsed())
      return run_cohomology(coh_src, coh_ks, coh_inv, coh_jordan, coh_real, rep);
    if (c_der->parsed()) return run_derivations(der_src, rep);
    if (c_three->parsed()) {
      if (!three_solve && three_random <= 0)
        throw CatalogError("pass --solve or --random N");
      return run_three_cocycle(three_src, three_solve, three_random, three_seed, rep);
    }
    if (c_paper->parsed()) return run_paper_example(rep);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
