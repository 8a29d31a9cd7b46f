#pragma once

#include <map>
#include <string>
#include <vector>

#include "ktbrst/poly.hpp"

namespace ktbrst {

// Total derivative d_lambda: shifts every jet variable one order up in the
// given coordinate. Polynomials carry no explicit x-dependence, so there is
// no partial_lambda term.
GradedPoly total_derivative(const GradedPoly& p, int coord);

// d_Lambda as iterated total derivatives; the iteration order is immaterial.
GradedPoly total_derivative_multi(const GradedPoly& p, const MultiIndex& idx);

// A linear differential operator as a finite family of coefficients
// f^{A,Lambda}, one graded polynomial per (variable, multi-index) slot.
class LinearDiffOp {
 public:
  struct Key {
    int field = -1;
    MultiIndex index;
    friend std::strong_ordering operator<=>(const Key&, const Key&) = default;
  };

  LinearDiffOp() = default;
  explicit LinearDiffOp(FieldSpacePtr space) : space_(std::move(space)) {}

  const FieldSpacePtr& space() const { return space_; }
  const std::map<Key, GradedPoly>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  void add(const Key& key, const GradedPoly& coeff);
  void add(std::string_view field_name, const MultiIndex& idx, const GradedPoly& coeff);
  const GradedPoly* coeff(const Key& key) const;

  int max_order() const;
  std::vector<int> fields() const;           // distinct row variables, ascending
  LinearDiffOp row(int field) const;         // the single-variable restriction

  // Sum_{Lambda} f^{A,Lambda} d_Lambda(target(A)); target keyed by ordinal.
  GradedPoly apply_rows(const std::map<int, GradedPoly>& target) const;

  bool operator==(const LinearDiffOp&) const = default;
  std::string str() const;

 private:
  FieldSpacePtr space_;
  std::map<Key, GradedPoly> coeffs_;
};

// Components E_A of the variational (Euler-Lagrange) operator. Zero
// components are omitted from the map.
struct EulerLagrange {
  FieldSpacePtr space;
  std::map<int, GradedPoly> components;

  bool all_zero() const { return components.empty(); }
  GradedPoly component(int field) const {
    auto it = components.find(field);
    return it == components.end() ? GradedPoly::zero(space) : it->second;
  }
};

// E_A = sum_Lambda (-1)^{|Lambda|} d_Lambda(partial^Lambda_A L), computed for
// every declared variable, antifields and ghosts included.
EulerLagrange euler_lagrange(const Density& L);
GradedPoly euler_lagrange_component(const Density& L, int field);

// The right variational derivative: like euler_lagrange but built from right
// partial derivatives. Coincides with the left one on even variables.
GradedPoly variational_derivative_right(const Density& L, int field);
GradedPoly variational_derivative_right(const Density& L, std::string_view field_name);

// Formal adjoint eta(f), defined constructively: expand
// sum_Lambda (-1)^{|Lambda|} d_Lambda(f^Lambda phi) against a fresh even test
// field phi and collect the coefficients of phi_Lambda. Applied row by row.
LinearDiffOp adjoint(const LinearDiffOp& op);

// Closed-form adjoint for cross-checking the constructive one. TotalDegree
// uses the factorial quotient (|S+L|)!/(|S|!|L|!); ComponentWise uses the
// product of per-coordinate binomials. For base dimension 1 they agree; for
// n >= 2 only the component-wise form matches the constructive adjoint (the
// total-degree quotient overcounts mixed-index terms).
enum class BinomialConvention { TotalDegree, ComponentWise };
LinearDiffOp adjoint_closed_form(const LinearDiffOp& op, BinomialConvention convention);

// d_H-exactness of a density, decided by delta-closedness: on the trivial
// bundles over R^n used throughout, a density is a total divergence exactly
// when all its Euler-Lagrange components vanish. The nonzero components are
// returned as the failure witness.
struct ExactnessCheck {
  bool exact = false;
  EulerLagrange residual;
};
ExactnessCheck is_dH_exact(const Density& density);

}  // namespace ktbrst
