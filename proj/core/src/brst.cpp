#include "ktbrst/brst.hpp"

#include <algorithm>
#include <sstream>

namespace ktbrst {

const NoetherStage* Model::stage(int k) const {
  for (const NoetherStage& s : stages)
    if (s.stage == k) return &s;
  return nullptr;
}

namespace {

bool has_complete_duals(const Model& m) {
  for (int i = 0; i < m.space->size(); ++i) {
    const FieldDecl& d = m.space->decl(i);
    if (!is_antifield_role(d.role) && !m.space->dual(i)) return false;
  }
  return true;
}

int require_dual(const FieldSpace& space, int ordinal) {
  if (auto dual = space.dual(ordinal)) return *dual;
  throw ConfigError("unpaired declaration: " + space.decl(ordinal).name);
}

GradedPoly monomial_poly(const FieldSpacePtr& space, const Monomial& m) {
  return GradedPoly::adopt(space, {m});
}

}  // namespace

void validate_model(const Model& m) {
  if (!m.space) throw ValidationError("model has no field space");
  const FieldSpace& space = *m.space;
  if (m.lagrangian.coeff.space() && !same_space(m.lagrangian.coeff.space(), m.space))
    throw ValidationError("lagrangian lives in a different space");

  if (m.lagrangian.coeff.parity() != Parity::Even)
    throw ValidationError("lagrangian must be even");
  for (const Monomial& mono : m.lagrangian.coeff.terms()) {
    if (monomial_ghost_number(space, mono) != 0 || monomial_antifield_number(space, mono) != 0)
      throw ValidationError("lagrangian must carry ghost number 0 and antifield number 0");
    for (const Factor& f : mono.factors)
      if (space.decl(f.var.field).role != FieldRole::Field)
        throw ValidationError("lagrangian may depend on original fields only");
  }

  for (size_t i = 0; i < m.stages.size(); ++i)
    if (m.stages[i].stage != static_cast<int>(i))
      throw ValidationError("stages must be contiguous starting at stage 0");

  if (!m.stages.empty() && !has_complete_duals(m))
    throw ValidationError("a model with Noether stages needs a complete antifield basis");

  for (const NoetherStage& st : m.stages) {
    if (st.generators.empty())
      throw ValidationError("stage " + std::to_string(st.stage) + " declares no generators");
    std::vector<std::string> seen;
    for (const NoetherGenerator& gen : st.generators) {
      if (std::find(seen.begin(), seen.end(), gen.ghost) != seen.end())
        throw ValidationError("stage ghost " + gen.ghost + " is paired twice");
      seen.push_back(gen.ghost);
      int g = space.require(gen.ghost);
      const FieldDecl& ghost = space.decl(g);
      if (ghost.role != FieldRole::Ghost || ghost.ghost_number != st.stage + 1)
        throw ValidationError(gen.ghost + " is not a stage-" + std::to_string(st.stage) +
                              " ghost");
      require_dual(space, g);
      const GradedPoly& delta = gen.density.coeff;
      if (delta.space() && !same_space(delta.space(), m.space))
        throw ValidationError("generator for " + gen.ghost + " lives in a different space");
      for (const Monomial& mono : delta.terms()) {
        if (monomial_antifield_number(space, mono) != st.stage + 1)
          throw ValidationError("generator for " + gen.ghost + " must have antifield number " +
                                std::to_string(st.stage + 1));
        if (monomial_ghost_number(space, mono) != -(st.stage + 1))
          throw ValidationError("generator for " + gen.ghost + " has inconsistent ghost number");
        if (monomial_parity(space, mono) != ghost.parity)
          throw ValidationError("generator parity clashes with the ghost pairing for " +
                                gen.ghost);
      }
      if (!delta.is_zero() && split_generator(m, gen, st.stage).linear.empty())
        throw ValidationError("generator for " + gen.ghost +
                              " has no part linear in the level antifields");
    }
    for (const auto& [target, alpha] : st.alphas) {
      space.require(target);
      if (alpha.coeff.space() && !same_space(alpha.coeff.space(), m.space))
        throw ValidationError("alpha witness for " + target + " lives in a different space");
    }
  }

  // Every declared ghost must belong to a declared stage generator.
  for (int i = 0; i < space.size(); ++i) {
    const FieldDecl& d = space.decl(i);
    if (d.role != FieldRole::Ghost) continue;
    const NoetherStage* st = m.stage(d.ghost_number - 1);
    bool found = false;
    if (st)
      for (const NoetherGenerator& gen : st->generators) found |= gen.ghost == d.name;
    if (!found)
      throw ValidationError("ghost " + d.name + " has no generator at stage " +
                            std::to_string(d.ghost_number - 1));
  }

  if (m.brst_xi) {
    const Derivation& xi = *m.brst_xi;
    if (!same_space(xi.space(), m.space)) throw ValidationError("xi lives in a different space");
    for (const auto& [field, comp] : xi.components()) {
      if (space.decl(field).role != FieldRole::Ghost)
        throw ValidationError("xi components must live on ghosts");
      if (comp.ghost_number() != space.ghost_number(field) + 1)
        throw ValidationError("xi component on " + space.decl(field).name +
                              " must raise ghost number by one");
      // Antifield-free terms of higher polynomial degree in ghosts.
      for (const Monomial& mono : comp.terms())
        if (monomial_antifield_number(space, mono) != 0)
          throw ValidationError("xi components must be antifield-free");
    }
  }
}

bool models_equal(const Model& a, const Model& b) {
  if (a.name != b.name) return false;
  if (!a.space || !b.space || !(*a.space == *b.space)) return false;
  auto poly_eq = [&](const GradedPoly& x, const GradedPoly& y) {
    return transfer(x, a.space) == transfer(y, a.space);
  };
  if (!poly_eq(a.lagrangian.coeff, b.lagrangian.coeff)) return false;
  if (a.stages.size() != b.stages.size()) return false;
  for (size_t i = 0; i < a.stages.size(); ++i) {
    const NoetherStage& sa = a.stages[i];
    const NoetherStage& sb = b.stages[i];
    if (sa.stage != sb.stage || sa.generators.size() != sb.generators.size()) return false;
    for (size_t j = 0; j < sa.generators.size(); ++j) {
      if (sa.generators[j].ghost != sb.generators[j].ghost) return false;
      if (!poly_eq(sa.generators[j].density.coeff, sb.generators[j].density.coeff)) return false;
    }
    if (sa.alphas.size() != sb.alphas.size()) return false;
    for (auto ia = sa.alphas.begin(), ib = sb.alphas.begin(); ia != sa.alphas.end(); ++ia, ++ib)
      if (ia->first != ib->first || !poly_eq(ia->second.coeff, ib->second.coeff)) return false;
  }
  if (a.brst_xi.has_value() != b.brst_xi.has_value()) return false;
  if (a.brst_xi) {
    if (a.brst_xi->components().size() != b.brst_xi->components().size()) return false;
    for (const auto& [field, comp] : a.brst_xi->components()) {
      const std::string& name = a.space->decl(field).name;
      auto other = b.brst_xi->components().find(b.space->require(name));
      if (other == b.brst_xi->components().end()) return false;
      if (!poly_eq(comp, other->second)) return false;
    }
  }
  return true;
}

GeneratorSplit split_generator(const Model& m, const NoetherGenerator& gen, int stage) {
  const FieldSpace& space = *m.space;
  GeneratorSplit out;
  out.linear = LinearDiffOp(m.space);
  out.h = Density(GradedPoly::zero(m.space));
  for (const Monomial& mono : gen.density.coeff.terms()) {
    const Factor* top = nullptr;
    bool linear = true;
    for (const Factor& f : mono.factors) {
      if (!is_antifield_role(space.decl(f.var.field).role)) continue;
      if (top || f.exp != 1 || space.antifield_number(f.var.field) != stage + 1) {
        linear = false;
        break;
      }
      top = &f;
    }
    if (linear && top) {
      GradedPoly coeff = partial_right(monomial_poly(m.space, mono), top->var);
      out.linear.add(LinearDiffOp::Key{require_dual(space, top->var.field), top->var.index},
                     coeff);
    } else {
      out.h = out.h + Density(monomial_poly(m.space, mono));
    }
  }
  return out;
}

CheckOutcome check_noether_identity(const Model& m, const LinearDiffOp& phi) {
  if (!phi.empty() && !same_space(phi.space(), m.space))
    throw ConfigError("operator lives in a different space");
  EulerLagrange el = euler_lagrange(m.lagrangian);
  GradedPoly residual = phi.apply_rows(el.components);
  CheckOutcome out;
  out.pass = residual.is_zero();
  if (!out.pass) out.witnesses.emplace_back("residual", render_witness(residual));
  return out;
}

CheckOutcome check_noether_identity(const Model& m, const NoetherGenerator& gen) {
  GeneratorSplit split = split_generator(m, gen, 0);
  CheckOutcome out = check_noether_identity(m, split.linear);
  if (!split.h.is_zero()) {
    out.pass = false;
    out.witnesses.emplace_back("nonlinear part", render_witness(split.h.coeff));
    out.note = "stage-0 generators must be linear in the antifields";
  }
  return out;
}

Derivation build_delta_bar(const Model& m) {
  EulerLagrange el = euler_lagrange(m.lagrangian);
  std::map<int, GradedPoly> comps;
  for (const auto& [field, component] : el.components)
    comps.emplace(require_dual(*m.space, field), component);
  return Derivation(m.space, std::move(comps), Chirality::Right, Parity::Odd, 1);
}

CheckOutcome check_stage_identity(const Model& m, int k) {
  if (k < 1) throw ConfigError("stage identities start at stage 1");
  const NoetherStage* cur = m.stage(k);
  const NoetherStage* prev = m.stage(k - 1);
  if (!cur || !prev) throw ConfigError("missing stage data for stage " + std::to_string(k));

  // Linear parts of the previous stage, keyed by the ghost-antifield's primal.
  std::map<int, GradedPoly> prev_linear;
  for (const NoetherGenerator& gen : prev->generators) {
    GeneratorSplit split = split_generator(m, gen, k - 1);
    prev_linear.emplace(m.space->require(gen.ghost), gen.density.coeff - split.h.coeff);
  }

  Derivation delta_bar = build_delta_bar(m);
  CheckOutcome out;
  out.pass = true;
  for (const NoetherGenerator& gen : cur->generators) {
    GeneratorSplit split = split_generator(m, gen, k);
    GradedPoly lhs = split.linear.apply_rows(prev_linear);
    GradedPoly residual = lhs + apply(delta_bar, split.h.coeff);
    if (!residual.is_zero()) {
      out.pass = false;
      out.witnesses.emplace_back(gen.ghost, render_witness(residual));
    }
  }
  return out;
}

Derivation build_kt_operator(const Model& m) {
  EulerLagrange el = euler_lagrange(m.lagrangian);
  std::map<int, GradedPoly> comps;
  for (const auto& [field, component] : el.components)
    comps.emplace(require_dual(*m.space, field), component);
  for (const NoetherStage& st : m.stages)
    for (const NoetherGenerator& gen : st.generators) {
      int ghost = m.space->require(gen.ghost);
      comps.emplace(require_dual(*m.space, ghost), gen.density.coeff);
    }
  return Derivation(m.space, std::move(comps), Chirality::Right, Parity::Odd, 1);
}

Derivation build_gauge_stage(const Model& m, int k) {
  const NoetherStage* st = m.stage(k);
  if (!st) throw ConfigError("no stage " + std::to_string(k) + " in this model");
  std::map<int, GradedPoly> comps;
  for (const NoetherGenerator& gen : st->generators) {
    int ghost = m.space->require(gen.ghost);
    GeneratorSplit split = split_generator(m, gen, k);
    LinearDiffOp eta = adjoint(split.linear);
    for (const auto& [key, coeff] : eta.coeffs()) {
      GradedPoly term = mul(GradedPoly::jet(m.space, JetVar{ghost, key.index}), coeff);
      auto [it, inserted] = comps.try_emplace(key.field, term);
      if (!inserted) it->second += term;
    }
  }
  std::erase_if(comps, [](const auto& kv) { return kv.second.is_zero(); });
  return Derivation(m.space, std::move(comps), Chirality::Left, Parity::Odd, 1);
}

Derivation build_gauge_operator(const Model& m) {
  Derivation u = Derivation::zero(m.space, Chirality::Left, Parity::Odd, 1);
  for (const NoetherStage& st : m.stages) u = u + build_gauge_stage(m, st.stage);
  return u;
}

Derivation build_brst_operator(const Model& m) {
  Derivation u = build_gauge_operator(m);
  if (m.brst_xi) u = u + m.brst_xi->to_left();
  return u;
}

namespace {

// The stage-k slice of an assembled gauge operator: components on the fields
// for k = 0, on the stage-(k-1) ghosts for k >= 1.
Derivation gauge_slice(const Model& m, const Derivation& u_total, int k) {
  std::map<int, GradedPoly> comps;
  for (const auto& [field, comp] : u_total.components()) {
    const FieldDecl& d = m.space->decl(field);
    bool match = k == 0 ? d.role == FieldRole::Field
                        : d.role == FieldRole::Ghost && d.ghost_number == k;
    if (match) comps.emplace(field, comp);
  }
  return Derivation(m.space, std::move(comps), u_total.chirality(), u_total.parity(),
                    u_total.ghost_shift());
}

}  // namespace

std::vector<CheckOutcome> check_gauge_symmetry_conditions(const Model& m,
                                                          const Derivation& u_total) {
  std::vector<CheckOutcome> out;
  int top = m.max_stage();
  for (int k = 0; k <= top; ++k) {
    CheckOutcome o;
    if (k == 0) {
      SymmetryCheck sym = is_variational_symmetry(gauge_slice(m, u_total, 0), m.lagrangian);
      o.pass = sym.ok;
      o.note = "stage 0: gauge symmetry of the Lagrangian";
      if (!sym.ok)
        for (const auto& [field, res] : sym.residual.components)
          o.witnesses.emplace_back(m.space->decl(field).name, render_witness(res));
    } else {
      Derivation uk = gauge_slice(m, u_total, k);
      Derivation uk1 = gauge_slice(m, u_total, k - 1);
      std::map<int, GradedPoly> comp = compose_on_components(uk, uk1);
      std::erase_if(comp, [](const auto& kv) { return kv.second.is_zero(); });
      if (comp.empty()) {
        o.pass = true;
        o.note = "stage " + std::to_string(k) + ": composition vanishes off-shell";
      } else {
        const NoetherStage* st = m.stage(k);
        Derivation delta_bar = build_delta_bar(m);
        o.pass = true;
        o.note = "stage " + std::to_string(k) + ": checked against delta-bar witnesses";
        for (const auto& [field, value] : comp) {
          const std::string& target = m.space->decl(field).name;
          const Density* alpha = nullptr;
          if (st) {
            auto it = st->alphas.find(target);
            if (it != st->alphas.end()) alpha = &it->second;
          }
          if (!alpha) {
            o.pass = false;
            o.witnesses.emplace_back(target, render_witness(value));
            o.note = "stage " + std::to_string(k) +
                     ": composition nonzero and no delta-bar witness supplied";
            continue;
          }
          GradedPoly residual = value - apply(delta_bar, alpha->coeff);
          if (!residual.is_zero()) {
            o.pass = false;
            o.witnesses.emplace_back(target, render_witness(residual));
          }
        }
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

Density build_extended_lagrangian(const Model& m) {
  Density out = m.lagrangian;
  for (const NoetherStage& st : m.stages)
    for (const NoetherGenerator& gen : st.generators)
      out = out + Density(mul(GradedPoly::var(m.space, gen.ghost), gen.density.coeff));
  for (const Monomial& mono : out.coeff.terms())
    if (monomial_ghost_number(*m.space, mono) != 0)
      throw ValidationError("extended Lagrangian is not ghost-number homogeneous");
  return out;
}

Density build_proper_solution(const Model& m) {
  Density out = build_extended_lagrangian(m);
  if (!m.brst_xi) return out;
  for (const auto& [ghost, comp] : m.brst_xi->components()) {
    int cbar = require_dual(*m.space, ghost);
    out = out + Density(mul(comp, GradedPoly::var(m.space, m.space->decl(cbar).name)));
  }
  return out;
}

Density antibracket(const Density& P, const Density& Q) {
  FieldSpacePtr space = P.coeff.space() ? P.coeff.space() : Q.coeff.space();
  if (!space) return Density(GradedPoly::zero(nullptr));

  std::vector<std::pair<int, int>> pairs;  // (primal, antifield)
  for (int i = 0; i < space->size(); ++i)
    if (!is_antifield_role(space->decl(i).role))
      pairs.emplace_back(i, require_dual(*space, i));

  auto half = [&](const Density& left, const EulerLagrange& right) {
    GradedPoly out = GradedPoly::zero(space);
    for (const auto& [primal, bar] : pairs) {
      auto it = right.components.find(primal);
      if (it == right.components.end()) continue;
      GradedPoly lhs = variational_derivative_right(left, bar);
      if (lhs.is_zero()) continue;
      out += mul(lhs, it->second);
    }
    return out;
  };

  EulerLagrange elP = euler_lagrange(P);
  if (&P == &Q) {
    // {P, P}: both summands coincide; the symmetrization factor
    // (-1)^{[P]([P]+1)} is +1 for either parity.
    return Density(rat(2) * half(P, elP));
  }
  EulerLagrange elQ = euler_lagrange(Q);
  GradedPoly bracket = half(P, elQ);
  for (Parity p : {Parity::Even, Parity::Odd}) {
    Density qh(Q.coeff.parity_part(p));
    if (qh.is_zero()) continue;
    int e = static_cast<int>(p) * (static_cast<int>(p) + 1);
    GradedPoly part = half(qh, elP);
    bracket += (e % 2) ? -part : part;
  }
  return Density(bracket);
}

CheckOutcome check_master_equation(const Model& m, const Density& P) {
  Density bracket = antibracket(P, P);
  ExactnessCheck ex = is_dH_exact(bracket);
  CheckOutcome out;
  out.pass = ex.exact;
  if (!out.pass)
    for (const auto& [field, res] : ex.residual.components)
      out.witnesses.emplace_back(m.space->decl(field).name, render_witness(res));
  return out;
}

Derivation build_upsilon(const Model& m, const Density& P) {
  std::map<int, GradedPoly> comps;
  for (int i = 0; i < m.space->size(); ++i) {
    if (is_antifield_role(m.space->decl(i).role)) continue;
    GradedPoly v = variational_derivative_right(P, require_dual(*m.space, i));
    if (!v.is_zero()) comps.emplace(i, std::move(v));
  }
  return Derivation(m.space, std::move(comps), Chirality::Left, Parity::Odd, 1);
}

Derivation build_upsilon_bar(const Model& m, const Density& P) {
  std::map<int, GradedPoly> comps;
  EulerLagrange el = euler_lagrange(P);
  for (int i = 0; i < m.space->size(); ++i) {
    if (is_antifield_role(m.space->decl(i).role)) continue;
    auto it = el.components.find(i);
    if (it == el.components.end()) continue;
    comps.emplace(require_dual(*m.space, i), it->second);
  }
  return Derivation(m.space, std::move(comps), Chirality::Right, Parity::Odd, 1);
}

Derivation build_theta(const Model& m, const Density& P) {
  return build_upsilon(m, P) + build_upsilon_bar(m, P).to_left();
}

MasterEquivalenceSuite build_master_equivalence_suite(const Model& m, const Density& P) {
  MasterEquivalenceSuite out;
  out.master = check_master_equation(m, P);

  Derivation upsilon = build_upsilon(m, P);
  Derivation upsilon_bar = build_upsilon_bar(m, P);
  auto symmetry = [&](const Derivation& d) {
    SymmetryCheck sym = is_variational_symmetry(d, P);
    CheckOutcome o;
    o.pass = sym.ok;
    if (!sym.ok)
      for (const auto& [field, res] : sym.residual.components)
        o.witnesses.emplace_back(m.space->decl(field).name, render_witness(res));
    return o;
  };
  out.upsilon_symmetry = symmetry(upsilon);
  out.upsilon_bar_symmetry = symmetry(upsilon_bar);

  NilpotencyCheck nil = is_nilpotent(upsilon + upsilon_bar.to_left());
  out.theta_nilpotent.pass = nil.ok;
  out.theta_nilpotent.note = nil.reason;
  for (const auto& [field, res] : nil.residuals)
    out.theta_nilpotent.witnesses.emplace_back(m.space->decl(field).name, render_witness(res));
  return out;
}

std::string render_witness(const GradedPoly& p, int max_terms) {
  if (p.term_count() <= max_terms) return p.str();
  std::vector<Monomial> head(p.terms().begin(), p.terms().begin() + max_terms);
  std::ostringstream os;
  os << GradedPoly::adopt(p.space(), std::move(head)).str() << " + ... ("
     << (p.term_count() - max_terms) << " more terms)";
  return os.str();
}

}  // namespace ktbrst
