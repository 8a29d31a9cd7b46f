#pragma once

#include <random>
#include <vector>

#include "ktbrst/jet_calculus.hpp"
#include "ktbrst/poly.hpp"

namespace ktbrst::testing {

// A small mixed-parity space: one even field, two odd ghosts, plus duals.
inline FieldSpacePtr mixed_space(int n) {
  std::vector<std::string> coords;
  for (int i = 0; i < n; ++i) coords.push_back("x" + std::to_string(i));
  FieldDecl y = FieldDecl::field("y", Parity::Even);
  FieldDecl w = FieldDecl::field("w", Parity::Odd);
  FieldDecl c1 = FieldDecl::ghost("c1", Parity::Odd, 1);
  FieldDecl c2 = FieldDecl::ghost("c2", Parity::Odd, 1);
  return FieldSpace::make(coords, {y, w, c1, c2,
                                   FieldDecl::antifield_for(y, "ybar"),
                                   FieldDecl::antifield_for(w, "wbar"),
                                   FieldDecl::antifield_for(c1, "c1bar"),
                                   FieldDecl::antifield_for(c2, "c2bar")});
}

class PolyGen {
 public:
  PolyGen(FieldSpacePtr space, std::uint64_t seed) : space_(std::move(space)), rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  const FieldSpacePtr& space() const { return space_; }

  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  Rational coefficient() {
    int num = uniform(-4, 4);
    if (num == 0) num = 1;
    return rat(num, uniform(1, 3));
  }

  MultiIndex index(int max_order) {
    MultiIndex idx(space_->dim());
    int order = uniform(0, max_order);
    for (int i = 0; i < order; ++i) idx = idx.plus(uniform(0, space_->dim() - 1));
    return idx;
  }

  JetVar jet_var(int max_order, bool primals_only = false) {
    while (true) {
      int field = uniform(0, space_->size() - 1);
      if (primals_only && is_antifield_role(space_->decl(field).role)) continue;
      return JetVar{field, index(max_order)};
    }
  }

  GradedPoly poly(int max_terms, int max_factors, int max_order, bool primals_only = false) {
    std::vector<RawTerm> raw;
    int terms = uniform(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      RawTerm term{coefficient(), {}};
      int nf = uniform(0, max_factors);
      for (int f = 0; f < nf; ++f) {
        JetVar v = jet_var(max_order, primals_only);
        int exp = space_->is_odd(v.field) ? 1 : uniform(1, 2);
        term.factors.push_back(Factor{v, exp});
      }
      raw.push_back(std::move(term));
    }
    return normalize(space_, raw);
  }

  GradedPoly homogeneous(Parity p, int max_terms, int max_factors, int max_order) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      GradedPoly cand = poly(max_terms, max_factors, max_order).parity_part(p);
      if (!cand.is_zero()) return cand;
    }
    return GradedPoly::zero(space_);
  }

  // Homogeneous in parity, ghost number and antifield number at once, as
  // derivation components must be: keeps the terms sharing the gradings of
  // the first one.
  GradedPoly graded_homogeneous(int max_terms, int max_factors, int max_order) {
    GradedPoly cand = poly(max_terms, max_factors, max_order);
    if (cand.is_zero()) return cand;
    const Monomial& head = cand.terms().front();
    Parity p = monomial_parity(*space_, head);
    int gh = monomial_ghost_number(*space_, head);
    int ant = monomial_antifield_number(*space_, head);
    std::vector<Monomial> keep;
    for (const Monomial& m : cand.terms())
      if (monomial_parity(*space_, m) == p && monomial_ghost_number(*space_, m) == gh &&
          monomial_antifield_number(*space_, m) == ant)
        keep.push_back(m);
    return GradedPoly::adopt(space_, std::move(keep));
  }

  LinearDiffOp linear_op(int rows, int max_order, int coeff_terms) {
    LinearDiffOp op(space_);
    for (int r = 0; r < rows; ++r)
      op.add(LinearDiffOp::Key{uniform(0, space_->size() - 1), index(max_order)},
             poly(coeff_terms, 2, 1));
    return op;
  }

 private:
  FieldSpacePtr space_;
  std::mt19937_64 rng_;
};

}  // namespace ktbrst::testing
