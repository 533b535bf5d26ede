#include "jtk/catalog.hpp"

#include <fstream>
#include <sstream>

namespace jtk {

namespace {

DenseMat unit_mat(int rows, int cols, int r, int c) {
  DenseMat m = dense_mat(rows, cols);
  m[r][c] = Scalar(1);
  return m;
}

struct Family {
  std::string label;
  Field field = Field::Q;
  int rows = 0, cols = 0;
  bool star = false;  // middle involution: conjugate transpose vs identity
  Scalar t;           // product normalization factor
  std::vector<DenseMat> basis;
};

JordanTriple from_family(const Family& f) {
  JordanTriple V;
  V.label = f.label;
  V.field = f.field;
  V.dim = (int)f.basis.size();
  int n = V.dim, fl = f.rows * f.cols;
  std::vector<SparseVec> basis_flat;
  basis_flat.reserve(n);
  for (const auto& b : f.basis) basis_flat.push_back(to_sparse(mat_flatten(b)));
  std::vector<DenseMat> sigma;
  sigma.reserve(n);
  for (const auto& b : f.basis)
    sigma.push_back(f.star ? mat_conj_transpose(b) : b);

  V.c.resize((size_t)n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      DenseMat left = mat_mul(f.basis[i], sigma[j]);
      for (int k = 0; k < n; ++k) {
        DenseMat p = mat_mul(left, f.basis[k]);
        mat_axpy(p, Scalar(1), mat_mul(mat_mul(f.basis[k], sigma[j]), f.basis[i]));
        for (auto& row : p) dense_scale(row, f.t);
        auto coords = solve_in_span(basis_flat, to_sparse(mat_flatten(p)), fl);
        if (!coords)
          throw CatalogError(f.label + ": basis not closed under the product");
        V.c[((size_t)i * n + j) * n + k] = *coords;
      }
    }

  if (f.rows == f.cols) {
    DenseMat id = dense_mat(f.rows, f.cols);
    for (int r = 0; r < f.rows; ++r) id[r][r] = Scalar(1);
    auto coords = solve_in_span(basis_flat, to_sparse(mat_flatten(id)), fl);
    if (coords) V.unit = *coords;
    V.assoc = AssocRealization{f.rows, f.star, f.t == Scalar(1), f.basis};
  }
  return V;
}

std::string norm_suffix(Normalization n) {
  return n == Normalization::Unnormalized ? ":unnorm" : "";
}

Scalar norm_factor(Normalization n) {
  return n == Normalization::Unnormalized ? Scalar(1) : Scalar(1, 2);
}

std::vector<DenseMat> symmetric_basis(int n) {
  // Diagonal units first, then E_rs + E_sr for r < s, lexicographically.
  std::vector<DenseMat> basis;
  for (int r = 0; r < n; ++r)
    for (int s = r; s < n; ++s) {
      DenseMat m = unit_mat(n, n, r, s);
      if (r != s) m[s][r] = Scalar(1);
      basis.push_back(std::move(m));
    }
  return basis;
}

}  // namespace

JordanTriple rect_matrix_triple(int p, int q, Normalization norm) {
  if (p < 1 || q < 1) throw CatalogError("mat: sizes must be >= 1");
  Family f;
  f.label = "mat:" + std::to_string(p) + "," + std::to_string(q) + norm_suffix(norm);
  f.field = Field::Qi;
  f.rows = p;
  f.cols = q;
  f.star = true;
  f.t = norm_factor(norm);
  for (int r = 0; r < p; ++r)
    for (int s = 0; s < q; ++s) f.basis.push_back(unit_mat(p, q, r, s));
  return from_family(f);
}

JordanTriple symmetric_matrix_triple(int n, Normalization norm) {
  if (n < 1) throw CatalogError("sym: size must be >= 1");
  Family f;
  f.label = "sym:" + std::to_string(n) + norm_suffix(norm);
  f.field = Field::Qi;
  f.rows = f.cols = n;
  f.star = true;
  f.t = norm_factor(norm);
  f.basis = symmetric_basis(n);
  return from_family(f);
}

JordanTriple symmetric_real_triple(int n, Normalization norm) {
  if (n < 1) throw CatalogError("sym-real: size must be >= 1");
  Family f;
  f.label = "sym-real:" + std::to_string(n) + norm_suffix(norm);
  f.field = Field::Q;
  f.rows = f.cols = n;
  f.star = false;  // transpose is the identity on symmetric matrices
  f.t = norm_factor(norm);
  f.basis = symmetric_basis(n);
  return from_family(f);
}

JordanTriple real_line_triple() {
  Family f;
  f.label = "line";
  f.field = Field::Q;
  f.rows = f.cols = 1;
  f.star = false;
  f.t = Scalar(1, 2);  // (xyz + zyx)/2 = xyz in dimension 1
  f.basis.push_back(unit_mat(1, 1, 0, 0));
  return from_family(f);
}

JordanTriple diagonal_triple(int n) {
  if (n < 1) throw CatalogError("diag: size must be >= 1");
  Family f;
  f.label = "diag:" + std::to_string(n);
  f.field = Field::Q;
  f.rows = f.cols = n;
  f.star = false;
  f.t = Scalar(1, 2);
  for (int r = 0; r < n; ++r) f.basis.push_back(unit_mat(n, n, r, r));
  return from_family(f);
}

JordanTriple assoc_matrix_triple(int n) {
  if (n < 1) throw CatalogError("amat: size must be >= 1");
  Family f;
  f.label = "amat:" + std::to_string(n);
  f.field = Field::Q;
  f.rows = f.cols = n;
  f.star = false;
  f.t = Scalar(1);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) f.basis.push_back(unit_mat(n, n, r, s));
  return from_family(f);
}

JordanTriple upper_triangular_triple(int n) {
  if (n < 1) throw CatalogError("ut: size must be >= 1");
  Family f;
  f.label = "ut:" + std::to_string(n);
  f.field = Field::Q;
  f.rows = f.cols = n;
  f.star = false;
  f.t = Scalar(1);
  for (int r = 0; r < n; ++r)
    for (int s = r; s < n; ++s) f.basis.push_back(unit_mat(n, n, r, s));
  return from_family(f);
}

JordanTriple heis3_triple() {
  Family f;
  f.label = "heis3";
  f.field = Field::Q;
  f.rows = f.cols = 3;
  f.star = false;
  f.t = Scalar(1);
  DenseMat id = dense_mat(3, 3);
  for (int r = 0; r < 3; ++r) id[r][r] = Scalar(1);
  f.basis.push_back(id);
  f.basis.push_back(unit_mat(3, 3, 0, 1));
  f.basis.push_back(unit_mat(3, 3, 0, 2));
  f.basis.push_back(unit_mat(3, 3, 1, 2));
  return from_family(f);
}

TripleModule self_module(const JordanTriple& V) {
  TripleModule M;
  M.label = V.label + ":self";
  M.vdim = M.mdim = V.dim;
  M.pattern = ModulePattern::Self;
  M.a1 = V.c;
  M.a2 = V.c;
  M.is_self = true;
  return M;
}

namespace {

int parse_count(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw CatalogError(std::string("bad ") + what + " parameter: " + s);
  }
}

}  // namespace

JordanTriple builtin_triple(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  const std::string& name = parts[0];
  Normalization norm = Normalization::Half;
  size_t argc = parts.size();
  if (argc >= 2 && parts.back() == "unnorm") {
    norm = Normalization::Unnormalized;
    --argc;
  }

  auto one_int = [&](const char* what) {
    if (argc != 2) throw CatalogError(spec + ": expected one size parameter");
    return parse_count(parts[1], what);
  };

  if (name == "line") {
    if (argc != 1 || norm != Normalization::Half)
      throw CatalogError(spec + ": line takes no parameters");
    return real_line_triple();
  }
  if (name == "diag") {
    if (norm != Normalization::Half)
      throw CatalogError(spec + ": diag has no unnormalized variant");
    return diagonal_triple(one_int("diag"));
  }
  if (name == "mat") {
    if (argc != 2) throw CatalogError(spec + ": expected mat:P,Q");
    auto comma = parts[1].find(',');
    if (comma == std::string::npos) throw CatalogError(spec + ": expected mat:P,Q");
    int p = parse_count(parts[1].substr(0, comma), "mat");
    int q = parse_count(parts[1].substr(comma + 1), "mat");
    return rect_matrix_triple(p, q, norm);
  }
  if (name == "sym") return symmetric_matrix_triple(one_int("sym"), norm);
  if (name == "sym-real") return symmetric_real_triple(one_int("sym-real"), norm);
  if (name == "amat") {
    if (norm != Normalization::Half)
      throw CatalogError(spec + ": amat is always unnormalized");
    return assoc_matrix_triple(one_int("amat"));
  }
  if (name == "ut") {
    if (norm != Normalization::Half)
      throw CatalogError(spec + ": ut is always unnormalized");
    return upper_triangular_triple(one_int("ut"));
  }
  if (name == "heis3") {
    if (argc != 1 || norm != Normalization::Half)
      throw CatalogError(spec + ": heis3 takes no parameters");
    return heis3_triple();
  }
  throw CatalogError("unknown builtin: " + spec);
}

std::vector<std::string> builtin_names() {
  return {"line",     "diag:2", "mat:1,1", "mat:2,2", "sym:2",
          "sym-real:2", "amat:2", "ut:2",    "heis3"};
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

namespace {

void append_entries(std::ostringstream& os, const char* tag,
                    const std::vector<DenseVec>& tensor, int d1, int d2, int d3) {
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d3; ++k) {
        const DenseVec& v = tensor[((size_t)i * d2 + j) * d3 + k];
        for (int l = 0; l < (int)v.size(); ++l)
          if (!v[l].is_zero())
            os << tag << ' ' << i << ' ' << j << ' ' << k << ' ' << l << ' '
               << v[l].pair_str() << '\n';
      }
}

struct LineReader {
  std::istringstream in;
  int lineno = 0;

  explicit LineReader(const std::string& text) : in(text) {}

  // Next meaningful line split into tokens; empty result at end of input.
  std::vector<std::string> next() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
      }
      if (!toks.empty()) return toks;
    }
    return {};
  }
};

int parse_index(const std::string& s, int bound, int lineno, const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size() || v < 0 || v >= bound) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(lineno, std::string("bad ") + what + " index: " + s);
  }
}

Scalar parse_scalar(const std::string& re, const std::string& im, int lineno) {
  try {
    return Scalar(parse_rational(re), parse_rational(im));
  } catch (const std::exception& e) {
    throw ParseError(lineno, std::string("bad scalar: ") + e.what());
  }
}

}  // namespace

std::string serialize_triple(const JordanTriple& V) {
  std::ostringstream os;
  os << "jtk-triple v1\n";
  os << "dim " << V.dim << '\n';
  os << "field " << field_name(V.field) << '\n';
  append_entries(os, "c", V.c, V.dim, V.dim, V.dim);
  return os.str();
}

JordanTriple load_triple_text(const std::string& text) {
  LineReader rd(text);
  auto toks = rd.next();
  if (toks.size() != 2 || toks[0] != "jtk-triple" || toks[1] != "v1")
    throw ParseError(rd.lineno, "expected header 'jtk-triple v1'");
  toks = rd.next();
  if (toks.size() != 2 || toks[0] != "dim")
    throw ParseError(rd.lineno, "expected 'dim <n>'");
  int n = parse_index(toks[1], 1 << 16, rd.lineno, "dim");
  if (n < 1) throw ParseError(rd.lineno, "dim must be >= 1");
  toks = rd.next();
  if (toks.size() != 2 || toks[0] != "field" || (toks[1] != "Q" && toks[1] != "Qi"))
    throw ParseError(rd.lineno, "expected 'field Q|Qi'");

  JordanTriple V;
  V.label = "file";
  V.dim = n;
  V.field = toks[1] == "Q" ? Field::Q : Field::Qi;
  V.c.assign((size_t)n * n * n, DenseVec(n, Scalar()));
  while (!(toks = rd.next()).empty()) {
    if (toks.size() != 7 || toks[0] != "c")
      throw ParseError(rd.lineno, "expected 'c i j k l re im'");
    int i = parse_index(toks[1], n, rd.lineno, "c");
    int j = parse_index(toks[2], n, rd.lineno, "c");
    int k = parse_index(toks[3], n, rd.lineno, "c");
    int l = parse_index(toks[4], n, rd.lineno, "c");
    Scalar v = parse_scalar(toks[5], toks[6], rd.lineno);
    if (V.field == Field::Q && !v.is_real())
      throw ParseError(rd.lineno, "imaginary entry in a field Q file");
    V.c[((size_t)i * n + j) * n + k][l] = v;
  }

  CheckReport sym = check_outer_symmetry(V);
  if (!sym.pass) throw CatalogError("outer symmetry violated: " + sym.witness);
  CheckReport jid = check_jordan_identity(V);
  if (!jid.pass) throw CatalogError("Jordan identity violated: " + jid.witness);
  return V;
}

JordanTriple load_triple(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  JordanTriple V = load_triple_text(ss.str());
  V.label = path;
  return V;
}

std::string serialize_module(const TripleModule& M, const std::string& over) {
  std::ostringstream os;
  os << "jtk-module v1\n";
  os << "mdim " << M.mdim << '\n';
  os << "over " << over << '\n';
  os << "pattern " << (M.pattern == ModulePattern::Self ? "self" : "dual") << '\n';
  append_entries(os, "a1", M.a1, M.mdim, M.vdim, M.vdim);
  append_entries(os, "a2", M.a2, M.vdim, M.mdim, M.vdim);
  return os.str();
}

LoadedModule load_module_text(const std::string& text, const std::string& base_dir) {
  LineReader rd(text);
  auto toks = rd.next();
  if (toks.size() != 2 || toks[0] != "jtk-module" || toks[1] != "v1")
    throw ParseError(rd.lineno, "expected header 'jtk-module v1'");
  toks = rd.next();
  if (toks.size() != 2 || toks[0] != "mdim")
    throw ParseError(rd.lineno, "expected 'mdim <n>'");
  int md = parse_index(toks[1], 1 << 16, rd.lineno, "mdim");
  if (md < 1) throw ParseError(rd.lineno, "mdim must be >= 1");
  toks = rd.next();
  if (toks.size() != 2 || toks[0] != "over")
    throw ParseError(rd.lineno, "expected 'over <builtin-or-file>'");

  LoadedModule out;
  try {
    out.V = builtin_triple(toks[1]);
  } catch (const CatalogError&) {
    std::string p = toks[1];
    if (!p.empty() && p[0] != '/' && !base_dir.empty()) p = base_dir + "/" + p;
    out.V = load_triple(p);
  }
  int vd = out.V.dim;

  TripleModule& M = out.M;
  M.label = "file-module";
  M.vdim = vd;
  M.mdim = md;
  M.a1.assign((size_t)md * vd * vd, DenseVec(md, Scalar()));
  M.a2.assign((size_t)vd * md * vd, DenseVec(md, Scalar()));

  toks = rd.next();
  if (!toks.empty() && toks[0] == "pattern") {
    if (toks.size() != 2 || (toks[1] != "self" && toks[1] != "dual"))
      throw ParseError(rd.lineno, "expected 'pattern self|dual'");
    M.pattern = toks[1] == "self" ? ModulePattern::Self : ModulePattern::Dual;
    toks = rd.next();
  }
  for (; !toks.empty(); toks = rd.next()) {
    if (toks.size() != 7 || (toks[0] != "a1" && toks[0] != "a2"))
      throw ParseError(rd.lineno, "expected 'a1|a2 i j k l re im'");
    bool first = toks[0] == "a1";
    int d1 = first ? md : vd, d2 = first ? vd : md;
    int i = parse_index(toks[1], d1, rd.lineno, toks[0].c_str());
    int j = parse_index(toks[2], d2, rd.lineno, toks[0].c_str());
    int k = parse_index(toks[3], vd, rd.lineno, toks[0].c_str());
    int l = parse_index(toks[4], md, rd.lineno, toks[0].c_str());
    Scalar v = parse_scalar(toks[5], toks[6], rd.lineno);
    if (out.V.field == Field::Q && !v.is_real())
      throw ParseError(rd.lineno, "imaginary entry in a field Q module");
    auto& tensor = first ? M.a1 : M.a2;
    tensor[((size_t)i * d2 + j) * vd + k][l] = v;
  }

  CheckReport ax = check_module_axioms(out.V, M);
  if (!ax.pass) throw CatalogError("module identity violated: " + ax.witness);
  return out;
}

LoadedModule load_module(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  auto slash = path.rfind('/');
  std::string dir = slash == std::string::npos ? "." : path.substr(0, slash);
  return load_module_text(ss.str(), dir);
}

}  // namespace jtk
