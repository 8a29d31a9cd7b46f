#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "ktbrst/field.hpp"
#include "ktbrst/multi_index.hpp"
#include "ktbrst/rational.hpp"

namespace ktbrst {

// One jet coordinate s^A_Lambda: a declared variable together with the
// symmetric multi-index of the formal derivative. Parity is the field's.
struct JetVar {
  int field = -1;
  MultiIndex index;

  friend std::strong_ordering operator<=>(const JetVar&, const JetVar&) = default;
};

struct Factor {
  JetVar var;
  int exp = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

// coeff * product of factors, factors strictly increasing in the canonical
// order; odd variables always carry exponent 1.
struct Monomial {
  Rational coeff;
  std::vector<Factor> factors;

  bool operator==(const Monomial& o) const {
    return factors == o.factors && coeff == o.coeff;
  }
};

// An unnormalized term as handed to normalize(): factors in any order, with
// any exponents. Exponent 0 factors are dropped.
struct RawTerm {
  Rational coeff;
  std::vector<Factor> factors;
};

// Canonical-form polynomial of the Grassmann-graded jet algebra. Terms are
// kept sorted, coefficients are exact rationals, zero is the empty term list.
// Values are immutable in practice: every operation returns a fresh poly.
class GradedPoly {
 public:
  GradedPoly() = default;

  static GradedPoly zero(FieldSpacePtr space = nullptr);
  static GradedPoly constant(Rational c, FieldSpacePtr space = nullptr);
  static GradedPoly var(const FieldSpacePtr& space, std::string_view name);
  static GradedPoly jet(const FieldSpacePtr& space, std::string_view name, const MultiIndex& idx);
  static GradedPoly jet(FieldSpacePtr space, JetVar v);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const FieldSpacePtr& space() const { return space_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int term_count() const { return static_cast<int>(terms_.size()); }

  // Grading queries; nullopt when the polynomial mixes values (or is zero,
  // for which any grading is admissible).
  std::optional<Parity> parity() const;
  std::optional<int> ghost_number() const;
  std::optional<int> antifield_number() const;

  GradedPoly parity_part(Parity p) const;

  GradedPoly operator-() const;
  friend GradedPoly operator+(const GradedPoly& a, const GradedPoly& b);
  friend GradedPoly operator-(const GradedPoly& a, const GradedPoly& b);
  friend GradedPoly operator*(const Rational& c, const GradedPoly& p);
  GradedPoly& operator+=(const GradedPoly& o);
  GradedPoly& operator-=(const GradedPoly& o);

  bool operator==(const GradedPoly& o) const;

  // Deterministic plain-text rendering: canonical term order, explicit signs,
  // jets as bracketed coordinate lists (y[x0,x0]).
  std::string str() const;

  // All distinct jet variables occurring in the polynomial, ascending.
  std::vector<JetVar> variables() const;
  int max_jet_order() const;

  // Internal: adopts pre-normalized data. Used by the algebra kernel.
  static GradedPoly adopt(FieldSpacePtr space, std::vector<Monomial> terms);

 private:
  FieldSpacePtr space_;  // may be null for constants
  std::vector<Monomial> terms_;
};

// Koszul-sign normal form: reordering two adjacent odd factors flips the
// sign, a repeated odd factor kills the term, like terms combine, zeros drop.
GradedPoly normalize(const FieldSpacePtr& space, const std::vector<RawTerm>& raw);
GradedPoly normalize(const FieldSpacePtr& space,
                     const std::vector<std::pair<Rational, std::vector<JetVar>>>& raw);

// Graded-commutative ring product.
GradedPoly mul(const GradedPoly& a, const GradedPoly& b);

// Left graded partial derivative with respect to one jet variable.
GradedPoly partial_left(const GradedPoly& p, const JetVar& v);

// Right graded partial derivative; equals (-1)^{[v]([p]+1)} partial_left per
// parity-homogeneous part.
GradedPoly partial_right(const GradedPoly& p, const JetVar& v);

// Parity of a monomial within a given space.
Parity monomial_parity(const FieldSpace& space, const Monomial& m);
int monomial_ghost_number(const FieldSpace& space, const Monomial& m);
int monomial_antifield_number(const FieldSpace& space, const Monomial& m);
// Number of antifield-role factors (counting exponents).
int monomial_antifield_factor_count(const FieldSpace& space, const Monomial& m);

// Re-homes a polynomial onto another space, mapping variables by name.
GradedPoly transfer(const GradedPoly& p, const FieldSpacePtr& target);

// A horizontal density: coefficient of the implicit volume element d^n x.
struct Density {
  GradedPoly coeff;

  Density() = default;
  explicit Density(GradedPoly c) : coeff(std::move(c)) {}

  bool is_zero() const { return coeff.is_zero(); }
  std::string str() const { return coeff.str(); }

  friend Density operator+(const Density& a, const Density& b) { return Density(a.coeff + b.coeff); }
  friend Density operator-(const Density& a, const Density& b) { return Density(a.coeff - b.coeff); }
  friend Density operator*(const Rational& c, const Density& d) { return Density(c * d.coeff); }
  bool operator==(const Density&) const = default;
};

inline Density mul(const GradedPoly& a, const Density& d) { return Density(mul(a, d.coeff)); }

}  // namespace ktbrst
