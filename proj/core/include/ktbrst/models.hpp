#pragma once

#include <string>
#include <vector>

#include "ktbrst/brst.hpp"

namespace ktbrst {

// A finite-dimensional real Lie superalgebra with an invariant metric, given
// by structure constants c^r_{ij} on a homogeneous basis.
struct LieSuperAlgebraSpec {
  int dim = 0;
  std::vector<Parity> parities;                          // [r] per basis element
  std::vector<std::vector<std::vector<Rational>>> c;     // c[r][i][j]
  std::vector<std::vector<Rational>> h;                  // invariant metric h^{ij}

  static LieSuperAlgebraSpec su2();
  static LieSuperAlgebraSpec abelian(int dim, std::vector<Parity> parities = {});

  // Graded antisymmetry, parity selection, the graded Jacobi identity and
  // invertibility of h. Throws ValidationError on failure.
  void validate() const;
};

// Exterior-form degrees of a BF pair: p + q = n - 1, 1 <= p <= q.
struct BFSpec {
  int n = 0;
  int p = 0;
  int q = 0;
};

// Yang-Mills theory of the given superalgebra on R^n with a diagonal metric
// signature (defaults to (+,-,...,-)). Gauge fields, ghosts and antifields
// are component-expanded into scalars; the irreducible Noether identity
// generators and the quadratic ghost extension are installed.
Model build_yang_mills(const LieSuperAlgebraSpec& alg, int n, std::vector<int> signature = {});

// Topological BF theory: an Abelian reducible model with the full ghost
// towers for both form degrees and all higher-stage generators installed.
Model build_bf(const BFSpec& spec);

// General-covariance gauge structure on a metric + linear-connection
// configuration space. The Lagrangian is left zero (callers may install an
// invariant one); generators are derived from the functorial lift so that the
// gauge operator reproduces it exactly.
Model build_gravity(int n = 4);

// Built-in models addressable from the command line.
std::vector<std::string> builtin_model_names();
bool is_builtin_model(const std::string& name);
Model build_builtin(const std::string& name);

}  // namespace ktbrst
