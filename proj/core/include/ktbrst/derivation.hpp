#pragma once

#include <map>
#include <optional>
#include <string>

#include "ktbrst/jet_calculus.hpp"
#include "ktbrst/poly.hpp"

namespace ktbrst {

enum class Chirality { Left, Right };

// A vertical contact graded derivation, stored through its zero-jet
// components v^A; the jet prolongation is computed on demand and never
// materialized. A right derivation is evaluated by converting to the left one
// with v_l^A = (-1)^{[v][A]} v^A.
class Derivation {
 public:
  Derivation() = default;

  // Components keyed by field ordinal. Every nonzero component must be parity
  // and ghost homogeneous, and all components must shift parity and ghost
  // number uniformly; construction fails otherwise. The fallback gradings
  // apply when every component is zero.
  Derivation(FieldSpacePtr space, std::map<int, GradedPoly> components, Chirality chirality,
             Parity fallback_parity = Parity::Odd, int fallback_ghost_shift = 0);

  static Derivation zero(FieldSpacePtr space, Chirality chirality,
                         Parity parity = Parity::Odd, int ghost_shift = 0) {
    return Derivation(std::move(space), {}, chirality, parity, ghost_shift);
  }

  const FieldSpacePtr& space() const { return space_; }
  const std::map<int, GradedPoly>& components() const { return components_; }
  GradedPoly component(int field) const;
  bool is_zero() const { return components_.empty(); }
  Chirality chirality() const { return chirality_; }
  Parity parity() const { return parity_; }
  int ghost_shift() const { return ghost_shift_; }

  // The same derivation with left chirality (identity on left derivations).
  Derivation to_left() const;

  // Component-wise sum; chirality, parity and ghost shift must agree.
  friend Derivation operator+(const Derivation& a, const Derivation& b);

  bool operator==(const Derivation&) const = default;
  std::string str() const;

 private:
  FieldSpacePtr space_;
  std::map<int, GradedPoly> components_;
  Chirality chirality_ = Chirality::Left;
  Parity parity_ = Parity::Odd;
  int ghost_shift_ = 0;
};

// Applies the jet prolongation of the derivation: every occurrence of
// s^A_Lambda contributes d_Lambda(v^A) times the matching graded partial.
GradedPoly apply(const Derivation& d, const GradedPoly& p);

// The Lie derivative of a horizontal density along a vertical derivation acts
// on the coefficient.
Density apply(const Derivation& d, const Density& density);

// Variational-symmetry test: forms the contraction sum_A v^A E_A d^n x (with
// the chirality-appropriate component conversion) and decides d_H-exactness.
struct SymmetryCheck {
  bool ok = false;
  Density contraction;
  EulerLagrange residual;
};
SymmetryCheck is_variational_symmetry(const Derivation& d, const Density& L);

// Nilpotency: false outright for even parity; otherwise true iff the
// derivation kills each of its own components.
struct NilpotencyCheck {
  bool ok = false;
  std::string reason;
  std::map<int, GradedPoly> residuals;  // fields with nonzero d(v^A)
};
NilpotencyCheck is_nilpotent(const Derivation& d);

// The prolonged action of d1 on the components of d2, per field.
std::map<int, GradedPoly> compose_on_components(const Derivation& d1, const Derivation& d2);

}  // namespace ktbrst
