#pragma once

// Builtin example triples and the plain-text structure-constant format.
//
// Builtin registry (the --builtin argument):
//   line             1-dim triple over Q, {xyz} = xyz
//   diag:N           diagonal N-dim triple over Q, componentwise product
//   mat:P,Q          P x Q complex matrices, {xyz} = (x y* z + z y* x)/2
//   mat:P,Q:unnorm   same without the 1/2 factor
//   sym:N            symmetric N x N complex matrices, same product
//   sym:N:unnorm     same without the 1/2 factor
//   sym-real:N       symmetric N x N rational matrices, (xyz + zyx)/2
//   sym-real:N:unnorm  same without the 1/2 factor
//   amat:N           full N x N rational matrix algebra, {xyz} = xyz + zyx
//   ut:N             upper-triangular N x N rational matrices, xyz + zyx
//   heis3            span{I, E12, E13, E23} in M3(Q), xyz + zyx
// Star means conjugate transpose. amat, ut and heis3 are the associative
// test algebras for the M2(A) embedding and its center condition.

#include "jtk/jordan_triple.hpp"
#include "jtk/triple_module.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace jtk {

enum class Normalization { Half, Unnormalized };

JordanTriple rect_matrix_triple(int p, int q,
                                Normalization norm = Normalization::Half);
JordanTriple symmetric_matrix_triple(int n,
                                     Normalization norm = Normalization::Half);
JordanTriple symmetric_real_triple(int n,
                                   Normalization norm = Normalization::Half);
JordanTriple real_line_triple();
JordanTriple diagonal_triple(int n);
JordanTriple assoc_matrix_triple(int n);
JordanTriple upper_triangular_triple(int n);
JordanTriple heis3_triple();

TripleModule self_module(const JordanTriple& V);

// Parses a registry name like "mat:2,2:unnorm". Throws CatalogError on an
// unknown name or bad parameters.
JordanTriple builtin_triple(const std::string& spec);

// Concrete instances exercised by the test suites.
std::vector<std::string> builtin_names();

struct CatalogError : std::runtime_error {
  explicit CatalogError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the loaders: message carries the line number and reason.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what),
        line(line_) {}
};

std::string serialize_triple(const JordanTriple& V);
JordanTriple load_triple_text(const std::string& text);
JordanTriple load_triple(const std::string& path);

struct LoadedModule {
  JordanTriple V;
  TripleModule M;
};

std::string serialize_module(const TripleModule& M, const std::string& over);
// `base_dir` resolves a relative `over <file>` reference.
LoadedModule load_module_text(const std::string& text, const std::string& base_dir);
LoadedModule load_module(const std::string& path);

}  // namespace jtk
