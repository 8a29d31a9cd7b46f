#include <doctest.h>

#include "ktbrst/dsl.hpp"
#include "ktbrst/models.hpp"
#include "ktbrst/runner.hpp"

using namespace ktbrst;

namespace {

// sum over every primal pair z z-bar (fields and ghosts alike).
Density primal_pair_sum(const Model& m) {
  GradedPoly out = GradedPoly::zero(m.space);
  for (int i = 0; i < m.space->size(); ++i) {
    if (is_antifield_role(m.space->decl(i).role)) continue;
    int bar = *m.space->dual(i);
    out += mul(GradedPoly::jet(m.space, JetVar{i, MultiIndex(m.space->dim())}),
               GradedPoly::jet(m.space, JetVar{bar, MultiIndex(m.space->dim())}));
  }
  return Density(out);
}

Density drop_high_antifield_degree(const Model& m, const Density& d) {
  std::vector<Monomial> keep;
  for (const Monomial& mono : d.coeff.terms())
    if (monomial_antifield_number(*m.space, mono) < 2) keep.push_back(mono);
  return Density(GradedPoly::adopt(m.space, std::move(keep)));
}

}  // namespace

TEST_CASE("Yang-Mills su(2) component expansion") {
  Model m = build_builtin("yang-mills:su2:n3");
  int fields = 0, ghosts = 0, antifields = 0;
  for (const FieldDecl& d : m.space->decls()) {
    fields += d.role == FieldRole::Field;
    ghosts += d.role == FieldRole::Ghost;
    antifields += is_antifield_role(d.role);
  }
  CHECK(fields == 9);   // m * n gauge fields
  CHECK(ghosts == 3);   // one ghost per algebra direction
  CHECK(antifields == 12);
  CHECK(m.stages.size() == 1);
  CHECK(m.stages[0].generators.size() == 3);

  // Deterministic expansion: equal specs render identical text.
  CHECK(render_model(m) == render_model(build_builtin("yang-mills:su2:n3")));
}

TEST_CASE("Yang-Mills gauge operator matches the classical form") {
  Model m = build_builtin("yang-mills:su2:n3");
  Derivation u = build_gauge_operator(m);
  // u^{a^r_l} = -eps_{rji} c^j a^i_l + c^r_l; spot-check one component fully.
  auto a = [&](int r, int l) {
    return GradedPoly::var(m.space, "a" + std::to_string(r) + "_" + std::to_string(l));
  };
  auto c = [&](int r) { return GradedPoly::var(m.space, "c" + std::to_string(r)); };
  GradedPoly expect = mul(a(1, 0), c(2)) - mul(a(2, 0), c(1)) +
                      GradedPoly::jet(m.space, "c0", MultiIndex::unit(3, 0));
  CHECK(u.component(m.space->require("a0_0")) == expect);
  CHECK(u.ghost_shift() == 1);
  CHECK(u.parity() == Parity::Odd);

  // xi^r = -1/2 eps_{rij} c^i c^j.
  REQUIRE(m.brst_xi.has_value());
  CHECK(m.brst_xi->component(m.space->require("c0")) == -mul(c(1), c(2)));

  // The affine variational form of the gauge components: u^A equals the
  // right variational derivative of L_e by the matching antifield.
  Density le = build_extended_lagrangian(m);
  for (const auto& [field, comp] : u.components()) {
    int bar = *m.space->dual(field);
    CHECK(variational_derivative_right(le, bar) == comp);
  }
}

TEST_CASE("Yang-Mills Noether identity in its classical form") {
  // c^r_{ji} a^i_l E^l_r + d_l E^l_j = 0 for each j, assembled directly.
  Model m = build_builtin("yang-mills:su2:n3");
  int eps[3][3][3] = {};
  eps[0][1][2] = eps[1][2][0] = eps[2][0][1] = 1;
  eps[0][2][1] = eps[2][1][0] = eps[1][0][2] = -1;
  for (int j = 0; j < 3; ++j) {
    LinearDiffOp phi(m.space);
    for (int r = 0; r < 3; ++r)
      for (int i = 0; i < 3; ++i) {
        if (eps[r][j][i] == 0) continue;
        for (int l = 0; l < 3; ++l)
          phi.add("a" + std::to_string(r) + "_" + std::to_string(l), MultiIndex(3),
                  rat(eps[r][j][i]) *
                      GradedPoly::var(m.space, "a" + std::to_string(i) + "_" + std::to_string(l)));
      }
    for (int l = 0; l < 3; ++l)
      phi.add("a" + std::to_string(j) + "_" + std::to_string(l), MultiIndex::unit(3, l),
              GradedPoly::constant(rat(1), m.space));
    CHECK(check_noether_identity(m, phi).pass);
  }
}

TEST_CASE("Yang-Mills proper solution matches its affine form") {
  Model m = build_builtin("yang-mills:su2:n3");
  // L_E = L + u^A abar_A + xi^r cbar_r, modulo the total divergence moved
  // out of the ghost-jet pairing.
  Derivation u = build_gauge_operator(m);
  GradedPoly display = m.lagrangian.coeff;
  for (const auto& [field, comp] : u.components())
    display += mul(comp, GradedPoly::var(m.space, m.space->decl(*m.space->dual(field)).name));
  for (const auto& [ghost, comp] : m.brst_xi->components())
    display += mul(comp, GradedPoly::var(m.space, m.space->decl(*m.space->dual(ghost)).name));
  CHECK(is_dH_exact(Density(build_proper_solution(m).coeff - display)).exact);
}

TEST_CASE("Yang-Mills identities") {
  Model m = build_builtin("yang-mills:su2:n3");
  for (const NoetherGenerator& gen : m.stages[0].generators)
    CHECK(check_noether_identity(m, gen).pass);
  CHECK(is_nilpotent(build_kt_operator(m)).ok);
  CHECK(is_nilpotent(build_brst_operator(m)).ok);
  CHECK(is_variational_symmetry(build_gauge_operator(m), m.lagrangian).ok);

  // KT operator annihilates the extended Lagrangian outright.
  Density le = build_extended_lagrangian(m);
  CHECK(apply(build_kt_operator(m), le).is_zero());

  // The extended Lagrangian matches its integrated-by-parts affine form.
  Derivation u = build_gauge_operator(m);
  GradedPoly display = m.lagrangian.coeff;
  for (const auto& [field, comp] : u.components())
    display += mul(comp, GradedPoly::var(m.space, m.space->decl(*m.space->dual(field)).name));
  CHECK(is_dH_exact(Density(le.coeff - display)).exact);

  // Affinity in antifields and the gauge-pairing form of the proper solution.
  Density lE = build_proper_solution(m);
  Density residual = lE - m.lagrangian - apply(build_brst_operator(m), primal_pair_sum(m));
  CHECK(is_dH_exact(residual).exact);
  Density le_residual =
      drop_high_antifield_degree(m, le - m.lagrangian - apply(u, primal_pair_sum(m)));
  CHECK(is_dH_exact(le_residual).exact);
}

TEST_CASE("Abelian Yang-Mills degenerates to the free theory") {
  Model m = build_builtin("yang-mills:abelian2:n2");
  Derivation u = build_gauge_operator(m);
  // u = c^r_l d/da^r_l and no xi.
  CHECK(u.component(m.space->require("a0_0")) ==
        GradedPoly::jet(m.space, "c0", MultiIndex::unit(2, 0)));
  CHECK(!m.brst_xi.has_value());
  CHECK(is_nilpotent(u).ok);
  CheckReport report = run_checks(m);
  CHECK(report.all_passed());
}

TEST_CASE("odd gauge directions run through the whole stack") {
  LieSuperAlgebraSpec alg = LieSuperAlgebraSpec::abelian(2, {Parity::Odd, Parity::Odd});
  Model m = build_yang_mills(alg, 2);
  m.name = "abelian-super";
  // Odd gauge fields, even ghosts.
  CHECK(m.space->decl(m.space->require("a0_0")).parity == Parity::Odd);
  CHECK(m.space->decl(m.space->require("c0")).parity == Parity::Even);
  CheckReport report = run_checks(m);
  CHECK(report.all_passed());
}

TEST_CASE("superalgebra validation") {
  LieSuperAlgebraSpec ok = LieSuperAlgebraSpec::su2();
  ok.validate();

  // Antisymmetric constants that fail the Jacobi identity.
  LieSuperAlgebraSpec bad = LieSuperAlgebraSpec::abelian(3);
  bad.c[0][1][2] = 1;
  bad.c[0][2][1] = -1;
  bad.c[1][0][1] = 1;
  bad.c[1][1][0] = -1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(build_yang_mills(bad, 2), ValidationError);

  // Degenerate metric.
  LieSuperAlgebraSpec sing = LieSuperAlgebraSpec::abelian(2);
  sing.h[1][1] = 0;
  CHECK_THROWS_AS(sing.validate(), ValidationError);

  // Odd directions need a symplectic pairing.
  CHECK_THROWS_AS(LieSuperAlgebraSpec::abelian(1, {Parity::Odd}), ValidationError);
}

TEST_CASE("BF field content and counts") {
  Model m = build_builtin("bf:n4p1q2");
  int fields = 0, ghosts = 0;
  for (const FieldDecl& d : m.space->decls()) {
    fields += d.role == FieldRole::Field;
    ghosts += d.role == FieldRole::Ghost;
  }
  CHECK(fields == 4 + 6);   // C(4,1) + C(4,2)
  CHECK(ghosts == 1 + 4 + 1);  // eps, ksi_nu, ksi
  CHECK(m.space->size() == 32);
  CHECK(m.stages.size() == 2);
  CHECK(render_model(m) == render_model(build_builtin("bf:n4p1q2")));
}

TEST_CASE("BF gauge operator is the de Rham ascent") {
  Model m = build_builtin("bf:n4p1q2");
  Derivation u = build_gauge_operator(m);
  auto jet = [&](const char* name, int coord) {
    return GradedPoly::jet(m.space, name, MultiIndex::unit(4, coord));
  };
  CHECK(u.component(m.space->require("A2")) == jet("eps", 2));
  CHECK(u.component(m.space->require("B01")) == jet("ksi1", 0) - jet("ksi0", 1));
  CHECK(u.component(m.space->require("ksi3")) == jet("ksi", 3));
  CHECK(u.component(m.space->require("eps")).is_zero());
  CHECK(is_nilpotent(u).ok);

  // Abelian: the proper solution is the extended Lagrangian itself, and the
  // gauge-pairing form holds modulo a divergence.
  CHECK(build_proper_solution(m) == build_extended_lagrangian(m));
  Density residual =
      build_proper_solution(m) - m.lagrangian - apply(u, primal_pair_sum(m));
  CHECK(is_dH_exact(residual).exact);
}

TEST_CASE("the KT operator lowers antifield number by one") {
  for (const char* name : {"yang-mills:su2:n3", "bf:n4p1q2"}) {
    Model m = build_builtin(name);
    Derivation kt = build_kt_operator(m);
    CHECK(kt.parity() == Parity::Odd);
    CHECK(kt.ghost_shift() == 1);
    for (const auto& [field, comp] : kt.components()) {
      auto ant = comp.antifield_number();
      REQUIRE(ant.has_value());
      CHECK(*ant == m.space->antifield_number(field) - 1);
    }
  }
}

TEST_CASE("BF stage identities and KT nilpotency") {
  Model m = build_builtin("bf:n4p1q2");
  CHECK(check_stage_identity(m, 1).pass);
  CHECK(is_nilpotent(build_kt_operator(m)).ok);
  for (const NoetherGenerator& gen : m.stages[0].generators)
    CHECK(check_noether_identity(m, gen).pass);

  // Perturbing the stage-1 generator breaks the identity with a witness.
  Model bad = m;
  NoetherGenerator& gen = bad.stages[1].generators[0];
  gen.density =
      gen.density + Density(GradedPoly::jet(bad.space, "ksibar0", MultiIndex::unit(4, 1)));
  CheckOutcome broken = check_stage_identity(bad, 1);
  CHECK(!broken.pass);
  CHECK(!broken.witnesses.empty());
  CHECK(!is_nilpotent(build_kt_operator(bad)).ok);
}

TEST_CASE("golden rendering of the smallest BF Lagrangian") {
  Model m = build_builtin("bf:n3p1q1");
  CHECK(m.lagrangian.coeff.str() ==
        "-A0*B1[x2] + A0*B2[x1] + A1*B0[x2] - A1*B2[x0] - A2*B0[x1] + A2*B1[x0]");
}

TEST_CASE("a tampered ascent stage fails the gauge-symmetry condition") {
  Model m = build_builtin("bf:n4p1q2");
  // Replace the stage-1 generator with one that no longer composes to zero.
  m.stages[1].generators[0].density =
      Density(-GradedPoly::jet(m.space, "ksibar0", MultiIndex::unit(4, 1)));
  Derivation u = build_gauge_operator(m);
  std::vector<CheckOutcome> conditions = check_gauge_symmetry_conditions(m, u);
  REQUIRE(conditions.size() == 2);
  CHECK(conditions[0].pass);
  CHECK(!conditions[1].pass);
  CHECK(conditions[1].note.find("witness") != std::string::npos);
  CHECK(!conditions[1].witnesses.empty());
}

TEST_CASE("BF specs are validated and odd q is flagged") {
  CHECK_THROWS_AS(build_bf(BFSpec{4, 1, 1}), ValidationError);
  CHECK_THROWS_AS(build_bf(BFSpec{3, 2, 1}), ValidationError);
  Model odd_q = build_builtin("bf:n3p1q1");
  bool flagged = false;
  for (const std::string& note : odd_q.notes) flagged |= note.find("odd") != std::string::npos;
  CHECK(flagged);
  CHECK(run_checks(odd_q).all_passed());
}

TEST_CASE("two BF towers at p = 2") {
  Model m = build_builtin("bf:n5p2q2");
  Derivation u = build_gauge_operator(m);
  auto jet = [&](const char* name, int coord) {
    return GradedPoly::jet(m.space, name, MultiIndex::unit(5, coord));
  };
  // u^{A_{01}} = d_0 eps_1 - d_1 eps_0, and the tower continues on eps_mu.
  CHECK(u.component(m.space->require("A01")) == jet("eps1", 0) - jet("eps0", 1));
  CHECK(u.component(m.space->require("eps0")) == jet("eps", 0));
  CHECK(is_nilpotent(u).ok);
  CHECK(check_stage_identity(m, 1).pass);
}

TEST_CASE("gravity carries the functorial lift") {
  Model m = build_builtin("gravity:n4");
  Derivation u_E = build_brst_operator(m);
  CHECK(is_nilpotent(u_E).ok);

  // The sigma components of the lift.
  auto dc = [&](int l, int mu) {
    return GradedPoly::jet(m.space, "c" + std::to_string(l), MultiIndex::unit(4, mu));
  };
  GradedPoly expect = GradedPoly::zero(m.space);
  for (int nu = 0; nu < 4; ++nu) {
    std::string name = "sig" + std::to_string(std::min(nu, 1)) + "_" + std::to_string(std::max(nu, 1));
    expect += mul(GradedPoly::var(m.space, name), dc(0, nu));
  }
  for (int nu = 0; nu < 4; ++nu) {
    std::string name = "sig" + std::to_string(std::min(0, nu)) + "_" + std::to_string(std::max(0, nu));
    expect += mul(GradedPoly::var(m.space, name), dc(1, nu));
  }
  for (int l = 0; l < 4; ++l)
    expect -= mul(GradedPoly::var(m.space, "c" + std::to_string(l)),
                  GradedPoly::jet(m.space, "sig0_1", MultiIndex::unit(4, l)));
  CHECK(u_E.component(m.space->require("sig0_1")) == expect);

  // The ghost component c^l_mu c^mu.
  GradedPoly ghost_comp = GradedPoly::zero(m.space);
  for (int mu = 0; mu < 4; ++mu)
    ghost_comp += mul(dc(0, mu), GradedPoly::var(m.space, "c" + std::to_string(mu)));
  CHECK(u_E.component(m.space->require("c0")) == ghost_comp);

  // The proper solution pairs every lift component with its antifield.
  Density lE = build_proper_solution(m);
  CHECK(!lE.is_zero());
  Density residual = lE - m.lagrangian - apply(u_E, primal_pair_sum(m));
  CHECK(is_dH_exact(residual).exact);
}

TEST_CASE("gravity generators carry the second-order jet block") {
  // The ghost-jet term c^a_{mu b} of the lift must come back in the
  // generator as the antifield jet kbar^mu_a^b_{,mu b} with unit weight.
  Model m = build_builtin("gravity:n4");
  const GradedPoly& delta = m.stages[0].generators[0].density.coeff;  // ghost c0
  int hits = 0;
  for (const Monomial& mono : delta.terms()) {
    if (mono.factors.size() != 1) continue;
    const Factor& f = mono.factors[0];
    const FieldDecl& d = m.space->decl(f.var.field);
    if (f.var.index.order() != 2) continue;
    ++hits;
    CHECK(d.name.rfind("kbar", 0) == 0);
    CHECK((mono.coeff == 1 || mono.coeff == -1));
    // kbar{mu}_{0}_{b} differentiated along {mu, b}.
    int mu = d.name[4] - '0';
    CHECK(d.name[6] == '0');
    int b = d.name[8] - '0';
    MultiIndex expect = MultiIndex::of(4, {mu, b});
    CHECK(f.var.index == expect);
  }
  CHECK(hits == 16);  // all (mu, b) pairs
}

TEST_CASE("a zero higher stage leaves the full report green") {
  FieldDecl y = FieldDecl::field("y", Parity::Even);
  FieldDecl c = FieldDecl::ghost("c", Parity::Odd, 1);
  FieldDecl c1 = FieldDecl::ghost("c_up", Parity::Even, 2);
  auto space = FieldSpace::make(
      {"x0"}, {y, c, c1, FieldDecl::antifield_for(y, "ybar"), FieldDecl::antifield_for(c, "cbar"),
               FieldDecl::antifield_for(c1, "c_upbar")});
  Model m;
  m.name = "shift-reducible";
  m.space = space;
  m.lagrangian = Density(mul(GradedPoly::var(space, "y"),
                             GradedPoly::jet(space, "y", MultiIndex::unit(1, 0))));
  NoetherStage st0;
  st0.stage = 0;
  st0.generators.push_back(NoetherGenerator{"c", Density(GradedPoly::var(space, "ybar"))});
  NoetherStage st1;
  st1.stage = 1;
  st1.generators.push_back(NoetherGenerator{"c_up", Density(GradedPoly::zero(space))});
  m.stages = {st0, st1};
  CHECK(run_checks(m).all_passed());
}

TEST_CASE("gravity report skips Lagrangian-dependent checks") {
  CheckReport report = run_checks(build_builtin("gravity:n4"));
  int skipped = 0, failed = 0;
  for (const CheckRecord& r : report.records) {
    skipped += r.verdict == Verdict::Skipped;
    failed += r.verdict == Verdict::Fail || r.verdict == Verdict::Error;
  }
  CHECK(skipped == 5);  // four identities and the stage-0 symmetry
  CHECK(failed == 0);
}

TEST_CASE("the flagship models pass their full reports") {
  CHECK(run_checks(build_builtin("yang-mills:su2:n3")).all_passed());
  CHECK(run_checks(build_builtin("bf:n4p1q2")).all_passed());
}

TEST_CASE("deeper instances pass as well") {
  // Physical base dimension for the gauge model; a three-stage tower for BF.
  CHECK(run_checks(build_builtin("yang-mills:su2:n4")).all_passed());
  Model deep = build_builtin("bf:n6p2q3");
  CHECK(deep.stages.size() == 3);
  CHECK(run_checks(deep).all_passed());
}

TEST_CASE("a model stripped of its xi terms fails in the report") {
  Model m = build_builtin("yang-mills:su2:n3");
  m.brst_xi = std::nullopt;
  CheckReport report = run_checks(m);
  CHECK(!report.all_passed());
  bool master_failed = false, brst_failed = false;
  for (const CheckRecord& r : report.records) {
    if (r.id == "master-equation") master_failed = r.verdict == Verdict::Fail;
    if (r.id == "brst-nilpotency") brst_failed = r.verdict == Verdict::Fail;
  }
  CHECK(master_failed);
  CHECK(brst_failed);
}

TEST_CASE("built-in registry") {
  for (const std::string& name : builtin_model_names()) {
    CHECK(is_builtin_model(name));
    Model m = build_builtin(name);
    CHECK(m.name == name);
  }
  CHECK_THROWS_AS(build_builtin("bf:nope"), ConfigError);
  CHECK_THROWS_AS(build_builtin("yang-mills:e8:n3"), ConfigError);
  CHECK(!is_builtin_model("model.ktb"));
}
