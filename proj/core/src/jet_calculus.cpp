#include "ktbrst/jet_calculus.hpp"

#include <algorithm>
#include <sstream>

namespace ktbrst {

GradedPoly total_derivative(const GradedPoly& p, int coord) {
  if (p.is_zero() || p.is_constant()) return GradedPoly::zero(p.space());
  const FieldSpacePtr& space = p.space();
  if (coord < 0 || coord >= space->dim()) throw std::out_of_range("coordinate index out of range");
  std::vector<RawTerm> raw;
  for (const Monomial& m : p.terms()) {
    // d is an even derivation: expand across the ordered factor list with no
    // signs; the shifted factor keeps its position, normalize() re-sorts.
    for (size_t i = 0; i < m.factors.size(); ++i) {
      const Factor& f = m.factors[i];
      RawTerm t;
      t.coeff = m.coeff * f.exp;
      t.factors.reserve(m.factors.size() + 1);
      for (size_t j = 0; j < m.factors.size(); ++j) {
        if (j == i) {
          if (f.exp > 1) t.factors.push_back(Factor{f.var, f.exp - 1});
          t.factors.push_back(Factor{JetVar{f.var.field, f.var.index.plus(coord)}, 1});
        } else {
          t.factors.push_back(m.factors[j]);
        }
      }
      raw.push_back(std::move(t));
    }
  }
  return normalize(space, raw);
}

GradedPoly total_derivative_multi(const GradedPoly& p, const MultiIndex& idx) {
  GradedPoly out = p;
  idx.for_each_coord([&](int coord) { out = total_derivative(out, coord); });
  return out;
}

void LinearDiffOp::add(const Key& key, const GradedPoly& coeff) {
  if (coeff.is_zero()) return;
  if (!space_) space_ = coeff.space();
  if (key.field < 0 || key.field >= space_->size())
    throw ConfigError("operator row outside the field space");
  auto [it, inserted] = coeffs_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

void LinearDiffOp::add(std::string_view field_name, const MultiIndex& idx,
                       const GradedPoly& coeff) {
  FieldSpacePtr space = space_ ? space_ : coeff.space();
  if (!space) throw ConfigError("cannot resolve a field name without a space");
  if (!space_) space_ = space;
  add(Key{space->require(field_name), idx}, coeff);
}

const GradedPoly* LinearDiffOp::coeff(const Key& key) const {
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? nullptr : &it->second;
}

int LinearDiffOp::max_order() const {
  int order = 0;
  for (const auto& [key, value] : coeffs_) order = std::max(order, key.index.order());
  return order;
}

std::vector<int> LinearDiffOp::fields() const {
  std::vector<int> out;
  for (const auto& [key, value] : coeffs_)
    if (out.empty() || out.back() != key.field) out.push_back(key.field);
  return out;
}

LinearDiffOp LinearDiffOp::row(int field) const {
  LinearDiffOp out(space_);
  for (const auto& [key, value] : coeffs_)
    if (key.field == field) out.add(key, value);
  return out;
}

GradedPoly LinearDiffOp::apply_rows(const std::map<int, GradedPoly>& target) const {
  GradedPoly out = GradedPoly::zero(space_);
  for (const auto& [key, value] : coeffs_) {
    auto it = target.find(key.field);
    if (it == target.end() || it->second.is_zero()) continue;
    out += mul(value, total_derivative_multi(it->second, key.index));
  }
  return out;
}

std::string LinearDiffOp::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, value] : coeffs_) {
    if (!first) os << "; ";
    first = false;
    os << space_->decl(key.field).name << '[';
    bool fc = true;
    key.index.for_each_coord([&](int coord) {
      if (!fc) os << ',';
      fc = false;
      os << space_->coord(coord);
    });
    os << "] <- " << value.str();
  }
  return first ? "0" : os.str();
}

namespace {

// The (A, Lambda) slots actually occurring in a polynomial, grouped by field.
std::map<int, std::vector<MultiIndex>> jets_by_field(const GradedPoly& p) {
  std::map<int, std::vector<MultiIndex>> out;
  for (const JetVar& v : p.variables()) out[v.field].push_back(v.index);
  return out;
}

GradedPoly euler_lagrange_term(const GradedPoly& L, const JetVar& v, bool right) {
  GradedPoly part = right ? partial_right(L, v) : partial_left(L, v);
  if (part.is_zero()) return part;
  part = total_derivative_multi(part, v.index);
  return v.index.order() % 2 ? -part : part;
}

GradedPoly euler_lagrange_from(const GradedPoly& L, int field, bool right) {
  GradedPoly out = GradedPoly::zero(L.space());
  for (const JetVar& v : L.variables())
    if (v.field == field) out += euler_lagrange_term(L, v, right);
  return out;
}

}  // namespace

GradedPoly euler_lagrange_component(const Density& L, int field) {
  return euler_lagrange_from(L.coeff, field, /*right=*/false);
}

EulerLagrange euler_lagrange(const Density& L) {
  EulerLagrange out;
  out.space = L.coeff.space();
  for (const auto& [field, jets] : jets_by_field(L.coeff)) {
    GradedPoly e = GradedPoly::zero(out.space);
    for (const MultiIndex& idx : jets)
      e += euler_lagrange_term(L.coeff, JetVar{field, idx}, /*right=*/false);
    if (!e.is_zero()) out.components.emplace(field, std::move(e));
  }
  return out;
}

GradedPoly variational_derivative_right(const Density& L, int field) {
  return euler_lagrange_from(L.coeff, field, /*right=*/true);
}

GradedPoly variational_derivative_right(const Density& L, std::string_view field_name) {
  if (!L.coeff.space()) throw ConfigError("density has no field space");
  return variational_derivative_right(L, L.coeff.space()->require(field_name));
}

namespace {

// Fresh even field adjoined for expand-and-collect adjoints.
struct TestSpace {
  FieldSpacePtr space;
  int phi = -1;
};

TestSpace with_test_field(const FieldSpacePtr& base) {
  std::string name = "_test_phi";
  while (base->find(name)) name += '_';
  std::vector<FieldDecl> decls = base->decls();
  decls.push_back(FieldDecl::field(name, Parity::Even));
  TestSpace out;
  out.space = FieldSpace::make(base->coords(), std::move(decls));
  out.phi = out.space->require(name);
  return out;
}

}  // namespace

LinearDiffOp adjoint(const LinearDiffOp& op) {
  if (op.empty()) return op;
  const FieldSpacePtr& base = op.space();
  TestSpace ext = with_test_field(base);
  const int n = base->dim();

  LinearDiffOp out(base);
  for (int field : op.fields()) {
    // Expand sum_Lambda (-1)^{|Lambda|} d_Lambda(f^Lambda * phi).
    GradedPoly expanded = GradedPoly::zero(ext.space);
    GradedPoly phi = GradedPoly::jet(ext.space, JetVar{ext.phi, MultiIndex(n)});
    for (const auto& [key, value] : op.coeffs()) {
      if (key.field != field) continue;
      GradedPoly term = total_derivative_multi(mul(transfer(value, ext.space), phi), key.index);
      if (key.index.order() % 2)
        expanded -= term;
      else
        expanded += term;
    }
    // Collect the left coefficients of phi_Lambda. Each monomial is linear in
    // phi; phi is even, so stripping it needs no sign.
    for (const JetVar& v : expanded.variables()) {
      if (v.field != ext.phi) continue;
      GradedPoly coeff = partial_left(expanded, v);
      // The expansion is linear in phi, so the coefficient must be phi-free.
      for (const JetVar& w : coeff.variables())
        if (w.field == ext.phi)
          throw Error("adjoint expansion is not linear in the test field");
      out.add(LinearDiffOp::Key{field, v.index}, transfer(coeff, base));
    }
  }
  return out;
}

namespace {

Rational factorial(int k) {
  Rational out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

Rational binomial_coefficient(const MultiIndex& sum, const MultiIndex& part,
                              BinomialConvention convention) {
  if (convention == BinomialConvention::TotalDegree)
    return factorial(sum.order()) / (factorial(part.order()) * factorial(sum.order() - part.order()));
  Rational out = 1;
  for (int i = 0; i < sum.dim(); ++i)
    out *= factorial(sum.count(i)) /
           (factorial(part.count(i)) * factorial(sum.count(i) - part.count(i)));
  return out;
}

// All Sigma with Sigma <= bound component-wise.
void enumerate_subindices(const MultiIndex& bound, std::vector<MultiIndex>& out) {
  std::vector<int> counts(static_cast<size_t>(bound.dim()), 0);
  while (true) {
    MultiIndex m(bound.dim());
    for (int i = 0; i < bound.dim(); ++i)
      for (int k = 0; k < counts[static_cast<size_t>(i)]; ++k) m = m.plus(i);
    out.push_back(m);
    int i = 0;
    for (; i < bound.dim(); ++i) {
      if (counts[static_cast<size_t>(i)] < bound.count(i)) {
        ++counts[static_cast<size_t>(i)];
        break;
      }
      counts[static_cast<size_t>(i)] = 0;
    }
    if (i == bound.dim()) break;
  }
}

}  // namespace

LinearDiffOp adjoint_closed_form(const LinearDiffOp& op, BinomialConvention convention) {
  LinearDiffOp out(op.space());
  for (const auto& [key, value] : op.coeffs()) {
    // f^{Sigma+Lambda} contributes to eta^Lambda for every split of the key.
    std::vector<MultiIndex> parts;
    enumerate_subindices(key.index, parts);
    for (const MultiIndex& lambda : parts) {
      MultiIndex sigma(key.index.dim());
      for (int i = 0; i < key.index.dim(); ++i)
        for (int k = 0; k < key.index.count(i) - lambda.count(i); ++k) sigma = sigma.plus(i);
      Rational c = binomial_coefficient(key.index, lambda, convention);
      if (key.index.order() % 2) c = -c;
      out.add(LinearDiffOp::Key{key.field, lambda}, c * total_derivative_multi(value, sigma));
    }
  }
  return out;
}

ExactnessCheck is_dH_exact(const Density& density) {
  ExactnessCheck out;
  out.residual = euler_lagrange(density);
  out.exact = out.residual.all_zero();
  return out;
}

}  // namespace ktbrst
