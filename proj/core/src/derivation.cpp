#include "ktbrst/derivation.hpp"

#include <sstream>

namespace ktbrst {

Derivation::Derivation(FieldSpacePtr space, std::map<int, GradedPoly> components,
                       Chirality chirality, Parity fallback_parity, int fallback_ghost_shift)
    : space_(std::move(space)),
      chirality_(chirality),
      parity_(fallback_parity),
      ghost_shift_(fallback_ghost_shift) {
  if (!space_) throw ValidationError("derivation needs a field space");
  std::erase_if(components, [](const auto& kv) { return kv.second.is_zero(); });
  std::optional<int> parity_shift;
  std::optional<int> ghost_shift;
  for (const auto& [field, comp] : components) {
    if (field < 0 || field >= space_->size())
      throw ValidationError("derivation component outside the field space");
    if (!same_space(comp.space(), space_) && comp.space())
      throw ValidationError("derivation component lives in a different space");
    auto p = comp.parity();
    auto g = comp.ghost_number();
    if (!p || !g)
      throw ValidationError("derivation component on " + space_->decl(field).name +
                            " is not grading-homogeneous");
    int ps = (static_cast<int>(*p) - static_cast<int>(space_->parity(field)) + 2) % 2;
    int gs = *g - space_->ghost_number(field);
    if (parity_shift && *parity_shift != ps)
      throw ValidationError("derivation components have mixed parity shifts");
    if (ghost_shift && *ghost_shift != gs)
      throw ValidationError("derivation components have mixed ghost shifts");
    parity_shift = ps;
    ghost_shift = gs;
  }
  components_ = std::move(components);
  if (parity_shift) parity_ = *parity_shift ? Parity::Odd : Parity::Even;
  if (ghost_shift) ghost_shift_ = *ghost_shift;
}

GradedPoly Derivation::component(int field) const {
  auto it = components_.find(field);
  return it == components_.end() ? GradedPoly::zero(space_) : it->second;
}

Derivation Derivation::to_left() const {
  if (chirality_ == Chirality::Left) return *this;
  std::map<int, GradedPoly> comps;
  for (const auto& [field, comp] : components_) {
    bool flip = parity_ == Parity::Odd && space_->is_odd(field);
    comps.emplace(field, flip ? -comp : comp);
  }
  return Derivation(space_, std::move(comps), Chirality::Left, parity_, ghost_shift_);
}

Derivation operator+(const Derivation& a, const Derivation& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (!same_space(a.space_, b.space_)) throw ValidationError("derivation spaces differ");
  if (a.chirality_ != b.chirality_)
    throw ValidationError("cannot add derivations of different chirality");
  if (a.parity_ != b.parity_) throw ValidationError("cannot add derivations of mixed parity");
  std::map<int, GradedPoly> comps = a.components_;
  for (const auto& [field, comp] : b.components_) {
    auto [it, inserted] = comps.try_emplace(field, comp);
    if (!inserted) it->second += comp;
  }
  return Derivation(a.space_, std::move(comps), a.chirality_, a.parity_, a.ghost_shift_);
}

std::string Derivation::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [field, comp] : components_) {
    if (!first) os << "; ";
    first = false;
    os << space_->decl(field).name << " -> " << comp.str();
  }
  return first ? "0" : os.str();
}

namespace {

// sum_{A,Lambda} d_Lambda(v^A) partial^Lambda_A p, with left components.
GradedPoly eval_left(const FieldSpacePtr& space, const std::map<int, GradedPoly>& comps,
                     const GradedPoly& p) {
  GradedPoly out = GradedPoly::zero(space);
  std::map<JetVar, GradedPoly> prolonged;
  for (const JetVar& v : p.variables()) {
    auto it = comps.find(v.field);
    if (it == comps.end()) continue;
    auto cached = prolonged.find(v);
    if (cached == prolonged.end())
      cached = prolonged.emplace(v, total_derivative_multi(it->second, v.index)).first;
    if (cached->second.is_zero()) continue;
    GradedPoly part = partial_left(p, v);
    if (part.is_zero()) continue;
    out += mul(cached->second, part);
  }
  return out;
}

std::map<int, GradedPoly> left_components(const Derivation& d) {
  if (d.chirality() == Chirality::Left) return d.components();
  return d.to_left().components();
}

}  // namespace

GradedPoly apply(const Derivation& d, const GradedPoly& p) {
  if (d.is_zero() || p.is_zero()) return GradedPoly::zero(d.space());
  if (p.space() && !same_space(p.space(), d.space()))
    throw ValidationError("derivation applied across field spaces");
  if (d.chirality() == Chirality::Left) return eval_left(d.space(), d.components(), p);
  std::map<int, GradedPoly> conv = left_components(d);
  if (d.parity() == Parity::Even) return eval_left(d.space(), conv, p);
  // v(f) = (-1)^{[v][f]} v_l(f): the odd right action flips on odd arguments.
  GradedPoly even = eval_left(d.space(), conv, p.parity_part(Parity::Even));
  GradedPoly odd = eval_left(d.space(), conv, p.parity_part(Parity::Odd));
  return even - odd;
}

Density apply(const Derivation& d, const Density& density) {
  return Density(apply(d, density.coeff));
}

SymmetryCheck is_variational_symmetry(const Derivation& d, const Density& L) {
  SymmetryCheck out;
  EulerLagrange el = euler_lagrange(L);
  std::map<int, GradedPoly> comps = left_components(d);
  GradedPoly pairing = GradedPoly::zero(d.space());
  for (const auto& [field, comp] : comps) {
    auto it = el.components.find(field);
    if (it == el.components.end()) continue;
    pairing += mul(comp, it->second);
  }
  out.contraction = Density(pairing);
  ExactnessCheck ex = is_dH_exact(out.contraction);
  out.ok = ex.exact;
  out.residual = std::move(ex.residual);
  return out;
}

NilpotencyCheck is_nilpotent(const Derivation& d) {
  NilpotencyCheck out;
  if (d.parity() == Parity::Even) {
    out.ok = false;
    out.reason = "derivation is even; nilpotent derivations are odd";
    return out;
  }
  for (const auto& [field, comp] : d.components()) {
    GradedPoly r = apply(d, comp);
    if (!r.is_zero()) out.residuals.emplace(field, std::move(r));
  }
  out.ok = out.residuals.empty();
  if (!out.ok) out.reason = "derivation does not annihilate its own components";
  return out;
}

std::map<int, GradedPoly> compose_on_components(const Derivation& d1, const Derivation& d2) {
  std::map<int, GradedPoly> out;
  for (const auto& [field, comp] : d2.components()) out.emplace(field, apply(d1, comp));
  return out;
}

}  // namespace ktbrst
