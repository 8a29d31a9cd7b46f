#include <doctest.h>

#include "ktbrst/derivation.hpp"
#include "test_support.hpp"

using namespace ktbrst;
using testing::PolyGen;

namespace {

Derivation on(const FieldSpacePtr& s, const char* field, GradedPoly comp,
              Chirality ch = Chirality::Left) {
  std::map<int, GradedPoly> comps;
  comps.emplace(s->require(field), std::move(comp));
  return Derivation(s, std::move(comps), ch);
}

}  // namespace

TEST_CASE("application prolongs the components") {
  auto s = testing::mixed_space(1);
  // v^y = c1 applied to y'' gives c1''.
  Derivation d = on(s, "y", GradedPoly::var(s, "c1"));
  GradedPoly yxx = GradedPoly::jet(s, "y", MultiIndex::of(1, {0, 0}));
  CHECK(apply(d, yxx) == GradedPoly::jet(s, "c1", MultiIndex::of(1, {0, 0})));

  // v^y = y on y y': an even derivation scales the quadratic by two.
  Derivation e = on(s, "y", GradedPoly::var(s, "y"));
  CHECK(e.parity() == Parity::Even);
  GradedPoly yyx = mul(GradedPoly::var(s, "y"), GradedPoly::jet(s, "y", MultiIndex::unit(1, 0)));
  CHECK(apply(e, yyx) == rat(2) * yyx);

  CHECK(apply(d, GradedPoly::constant(rat(5), s)).is_zero());
}

TEST_CASE("construction validates grading homogeneity") {
  auto s = testing::mixed_space(1);
  std::map<int, GradedPoly> comps;
  comps.emplace(s->require("y"), GradedPoly::var(s, "y") + GradedPoly::var(s, "c1"));
  CHECK_THROWS_AS(Derivation(s, std::move(comps), Chirality::Left), ValidationError);

  // Mixed shifts across components are rejected too.
  std::map<int, GradedPoly> mixed;
  mixed.emplace(s->require("y"), GradedPoly::var(s, "y"));
  mixed.emplace(s->require("w"), GradedPoly::var(s, "y"));
  CHECK_THROWS_AS(Derivation(s, std::move(mixed), Chirality::Left), ValidationError);
}

TEST_CASE("graded Leibniz rule for application") {
  auto s = testing::mixed_space(2);
  PolyGen gen(s, 211);
  for (int i = 0; i < 100; ++i) {
    GradedPoly comp = gen.graded_homogeneous(3, 2, 1);
    if (comp.is_zero()) continue;
    int field = gen.uniform(0, 1) ? s->require("y") : s->require("w");
    std::map<int, GradedPoly> comps;
    comps.emplace(field, comp);
    Derivation d(s, std::move(comps), Chirality::Left);

    Parity pa = gen.uniform(0, 1) ? Parity::Odd : Parity::Even;
    GradedPoly a = gen.homogeneous(pa, 3, 2, 1);
    GradedPoly b = gen.poly(3, 2, 1);
    GradedPoly lhs = apply(d, mul(a, b));
    GradedPoly second = mul(a, apply(d, b));
    if (d.parity() == Parity::Odd && pa == Parity::Odd) second = -second;
    CHECK(lhs == mul(apply(d, a), b) + second);
  }
}

TEST_CASE("application commutes with total derivatives") {
  auto s = testing::mixed_space(2);
  PolyGen gen(s, 223);
  for (int i = 0; i < 100; ++i) {
    GradedPoly comp = gen.graded_homogeneous(3, 2, 1);
    if (comp.is_zero()) continue;
    std::map<int, GradedPoly> comps;
    comps.emplace(s->require("y"), comp);
    Derivation d(s, std::move(comps), Chirality::Left);
    GradedPoly p = gen.poly(4, 3, 2);
    for (int coord = 0; coord < 2; ++coord)
      CHECK(apply(d, total_derivative(p, coord)) == total_derivative(apply(d, p), coord));
  }
}

TEST_CASE("variational symmetry checks") {
  auto s = testing::mixed_space(1);
  GradedPoly y = GradedPoly::var(s, "y");

  // Shift symmetry fails for a mass term: the contraction is y d^n x.
  Density mass(rat(1, 2) * mul(y, y));
  Derivation shift = on(s, "y", GradedPoly::constant(rat(1), s));
  SymmetryCheck sym = is_variational_symmetry(shift, mass);
  CHECK(!sym.ok);
  CHECK(sym.contraction.coeff == y);

  // The zero derivation is always a symmetry.
  CHECK(is_variational_symmetry(Derivation::zero(s, Chirality::Left), mass).ok);

  // Shift symmetry holds for the free Lagrangian.
  GradedPoly yx = GradedPoly::jet(s, "y", MultiIndex::unit(1, 0));
  CHECK(is_variational_symmetry(shift, Density(rat(1, 2) * mul(yx, yx))).ok);
}

TEST_CASE("symmetry verdicts ignore total divergences in the Lagrangian") {
  auto s = testing::mixed_space(1);
  PolyGen gen(s, 227);
  GradedPoly yx = GradedPoly::jet(s, "y", MultiIndex::unit(1, 0));
  Density L(rat(1, 2) * mul(yx, yx));
  Density mass(rat(1, 2) * mul(GradedPoly::var(s, "y"), GradedPoly::var(s, "y")));
  Derivation shift = on(s, "y", GradedPoly::constant(rat(1), s));
  for (int i = 0; i < 50; ++i) {
    Density shifted_L = L + Density(total_derivative(gen.poly(3, 2, 1), 0));
    CHECK(is_variational_symmetry(shift, shifted_L).ok);
    Density shifted_mass = mass + Density(total_derivative(gen.poly(3, 2, 1), 0));
    CHECK(!is_variational_symmetry(shift, shifted_mass).ok);
  }
}

TEST_CASE("first variational formula on random data") {
  // The Lie derivative along a vertical derivation differs from the
  // contraction with the Euler-Lagrange components by a total divergence.
  auto s = testing::mixed_space(2);
  PolyGen gen(s, 241);
  for (int i = 0; i < 60; ++i) {
    GradedPoly comp = gen.graded_homogeneous(3, 2, 1);
    if (comp.is_zero()) continue;
    int field = gen.uniform(0, s->size() - 1);
    std::map<int, GradedPoly> comps;
    comps.emplace(field, comp);
    Derivation d(s, std::move(comps), Chirality::Left);

    Density L(gen.poly(4, 3, 2));
    EulerLagrange el = euler_lagrange(L);
    GradedPoly pairing = mul(d.component(field), el.component(field));
    CHECK(is_dH_exact(Density(apply(d, L.coeff) - pairing)).exact);
  }
}

TEST_CASE("nilpotency requires odd parity") {
  auto s = testing::mixed_space(1);
  Derivation even = on(s, "y", GradedPoly::var(s, "y"));
  NilpotencyCheck nil = is_nilpotent(even);
  CHECK(!nil.ok);
  CHECK(nil.reason.find("odd") != std::string::npos);
}

TEST_CASE("odd nilpotent derivations square to zero on random arguments") {
  auto s = testing::mixed_space(2);
  // v^y = c1, v^{c1} = 0 is nilpotent.
  Derivation d = on(s, "y", GradedPoly::var(s, "c1"));
  CHECK(is_nilpotent(d).ok);
  PolyGen gen(s, 229);
  for (int i = 0; i < 100; ++i) {
    GradedPoly p = gen.poly(4, 3, 2);
    CHECK(apply(d, apply(d, p)).is_zero());
  }

  // v^y = c1, v^{c1} = c1 c2 ... is not nilpotent.
  std::map<int, GradedPoly> comps;
  comps.emplace(s->require("y"), GradedPoly::var(s, "c1"));
  comps.emplace(s->require("c1"), mul(GradedPoly::var(s, "c1"), GradedPoly::var(s, "c2")));
  CHECK(!is_nilpotent(Derivation(s, std::move(comps), Chirality::Left)).ok);
}

TEST_CASE("right derivations convert to left ones") {
  auto s = testing::mixed_space(1);
  PolyGen gen(s, 233);
  std::map<int, GradedPoly> comps;
  GradedPoly comp = gen.graded_homogeneous(3, 2, 1);
  while (comp.is_zero() || comp.parity() != Parity::Even) comp = gen.graded_homogeneous(3, 2, 1);
  comps.emplace(s->require("ybar"), comp);
  Derivation right(s, std::move(comps), Chirality::Right);
  Derivation left = right.to_left();
  CHECK(left.chirality() == Chirality::Left);
  CHECK(left.parity() == right.parity());
  for (int i = 0; i < 50; ++i) {
    GradedPoly p = gen.poly(4, 3, 1);
    GradedPoly pe = p.parity_part(Parity::Even);
    GradedPoly po = p.parity_part(Parity::Odd);
    // v(f) = (-1)^{[v][f]} v_l(f) for the odd right derivation.
    CHECK(apply(right, pe) == apply(left, pe));
    CHECK(apply(right, po) == -apply(left, po));
  }
}

TEST_CASE("graded Leibniz rule for right derivations") {
  auto s = testing::mixed_space(1);
  PolyGen gen(s, 239);
  for (int i = 0; i < 60; ++i) {
    GradedPoly comp = gen.graded_homogeneous(3, 2, 1);
    if (comp.is_zero()) continue;
    std::map<int, GradedPoly> comps;
    comps.emplace(s->require("w"), comp);
    Derivation d(s, std::move(comps), Chirality::Right);

    Parity pb = gen.uniform(0, 1) ? Parity::Odd : Parity::Even;
    GradedPoly a = gen.poly(3, 2, 1);
    GradedPoly b = gen.homogeneous(pb, 3, 2, 1);
    // Right derivations satisfy v(ab) = a v(b) + (-1)^{[b][v]} v(a) b.
    GradedPoly lhs = apply(d, mul(a, b));
    GradedPoly first = apply(d, a);
    if (d.parity() == Parity::Odd && pb == Parity::Odd) first = -first;
    CHECK(lhs == mul(first, b) + mul(a, apply(d, b)));
  }
}

TEST_CASE("composition on components") {
  auto s = testing::mixed_space(1);
  Derivation d1 = on(s, "y", GradedPoly::var(s, "c1"));
  CHECK(compose_on_components(d1, Derivation::zero(s, Chirality::Left)).empty());

  // A nilpotent derivation composed on itself gives zero components.
  auto all_zero = [](const std::map<int, GradedPoly>& comps) {
    for (const auto& [field, comp] : comps)
      if (!comp.is_zero()) return false;
    return true;
  };
  CHECK(all_zero(compose_on_components(d1, d1)));

  // v1 = c1 d/dy on v2^y = y^2 gives 2 y c1.
  Derivation d2 = on(s, "y", mul(GradedPoly::var(s, "y"), GradedPoly::var(s, "y")));
  auto comps = compose_on_components(d1, d2);
  CHECK(comps.at(s->require("y")) ==
        rat(2) * mul(GradedPoly::var(s, "y"), GradedPoly::var(s, "c1")));
}

TEST_CASE("sums reject mixed parities") {
  auto s = testing::mixed_space(1);
  Derivation odd = on(s, "y", GradedPoly::var(s, "c1"));
  Derivation even = on(s, "y", GradedPoly::var(s, "y"));
  CHECK_THROWS_AS(odd + even, ValidationError);
  Derivation sum = odd + on(s, "c1", mul(GradedPoly::var(s, "c1"), GradedPoly::var(s, "c2")));
  CHECK(sum.components().size() == 2);
}
