#include "ktbrst/models.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ktbrst {

namespace {

int parity_sign(Parity p) { return p == Parity::Odd ? -1 : 1; }

std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
  const size_t n = a.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == n) throw ValidationError("metric is degenerate");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    Rational lead = a[col][col];
    for (size_t j = 0; j < n; ++j) {
      a[col][j] /= lead;
      inv[col][j] /= lead;
    }
    for (size_t row = 0; row < n; ++row) {
      if (row == col || sgn(a[row][col]) == 0) continue;
      Rational f = a[row][col];
      for (size_t j = 0; j < n; ++j) {
        a[row][j] -= f * a[col][j];
        inv[row][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

std::vector<std::string> coord_names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

}  // namespace

LieSuperAlgebraSpec LieSuperAlgebraSpec::su2() {
  LieSuperAlgebraSpec alg;
  alg.dim = 3;
  alg.parities.assign(3, Parity::Even);
  alg.c.assign(3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3, Rational(0))));
  // Structure constants eps_{rij}.
  int eps[3][3][3] = {};
  eps[0][1][2] = eps[1][2][0] = eps[2][0][1] = 1;
  eps[0][2][1] = eps[2][1][0] = eps[1][0][2] = -1;
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) alg.c[r][i][j] = eps[r][i][j];
  alg.h.assign(3, std::vector<Rational>(3, Rational(0)));
  for (int i = 0; i < 3; ++i) alg.h[i][i] = 1;
  return alg;
}

LieSuperAlgebraSpec LieSuperAlgebraSpec::abelian(int dim, std::vector<Parity> parities) {
  LieSuperAlgebraSpec alg;
  alg.dim = dim;
  alg.parities = parities.empty() ? std::vector<Parity>(static_cast<size_t>(dim), Parity::Even)
                                  : std::move(parities);
  alg.c.assign(static_cast<size_t>(dim),
               std::vector<std::vector<Rational>>(static_cast<size_t>(dim),
                                                  std::vector<Rational>(static_cast<size_t>(dim),
                                                                        Rational(0))));
  alg.h.assign(static_cast<size_t>(dim),
               std::vector<Rational>(static_cast<size_t>(dim), Rational(0)));
  // Even directions pair diagonally; odd directions pair symplectically.
  std::vector<int> odd;
  for (int i = 0; i < dim; ++i) {
    if (alg.parities[static_cast<size_t>(i)] == Parity::Even)
      alg.h[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    else
      odd.push_back(i);
  }
  if (odd.size() % 2)
    throw ValidationError("an invertible metric needs an even number of odd directions");
  for (size_t i = 0; i + 1 < odd.size(); i += 2) {
    alg.h[static_cast<size_t>(odd[i])][static_cast<size_t>(odd[i + 1])] = 1;
    alg.h[static_cast<size_t>(odd[i + 1])][static_cast<size_t>(odd[i])] = -1;
  }
  return alg;
}

void LieSuperAlgebraSpec::validate() const {
  const size_t m = static_cast<size_t>(dim);
  if (dim < 1 || parities.size() != m || c.size() != m || h.size() != m)
    throw ValidationError("malformed superalgebra data");
  auto par = [&](int i) { return static_cast<int>(parities[static_cast<size_t>(i)]); };
  for (int r = 0; r < dim; ++r) {
    if (c[static_cast<size_t>(r)].size() != m) throw ValidationError("malformed structure constants");
    for (int i = 0; i < dim; ++i) {
      if (c[static_cast<size_t>(r)][static_cast<size_t>(i)].size() != m)
        throw ValidationError("malformed structure constants");
      for (int j = 0; j < dim; ++j) {
        const Rational& crij = c[static_cast<size_t>(r)][static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (sgn(crij) != 0 && par(r) != (par(i) + par(j)) % 2)
          throw ValidationError("structure constants violate the parity selection rule");
        Rational graded = (par(i) * par(j)) % 2 ? Rational(1) : Rational(-1);
        if (crij != graded * c[static_cast<size_t>(r)][static_cast<size_t>(j)][static_cast<size_t>(i)])
          throw ValidationError("structure constants are not graded-antisymmetric");
      }
    }
  }
  for (int r = 0; r < dim; ++r)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          Rational sum = 0;
          for (int mm = 0; mm < dim; ++mm) {
            auto C = [&](int a, int b, int d2) {
              return c[static_cast<size_t>(a)][static_cast<size_t>(b)][static_cast<size_t>(d2)];
            };
            Rational s1 = (par(i) * par(k)) % 2 ? -1 : 1;
            Rational s2 = (par(j) * par(i)) % 2 ? -1 : 1;
            Rational s3 = (par(k) * par(j)) % 2 ? -1 : 1;
            sum += s1 * C(r, i, mm) * C(mm, j, k) + s2 * C(r, j, mm) * C(mm, k, i) +
                   s3 * C(r, k, mm) * C(mm, i, j);
          }
          if (sgn(sum) != 0) throw ValidationError("structure constants violate the Jacobi identity");
        }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const Rational& hij = h[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (sgn(hij) != 0 && par(i) != par(j))
        throw ValidationError("the metric must be parity-homogeneous");
      Rational graded = (par(i) * par(j)) % 2 ? Rational(-1) : Rational(1);
      if (hij != graded * h[static_cast<size_t>(j)][static_cast<size_t>(i)])
        throw ValidationError("the metric must be graded-symmetric");
    }
  invert(h);  // throws when degenerate
}

Model build_yang_mills(const LieSuperAlgebraSpec& alg, int n, std::vector<int> signature) {
  alg.validate();
  if (n < 2) throw ValidationError("Yang-Mills needs base dimension >= 2");
  if (signature.empty()) {
    signature.assign(static_cast<size_t>(n), -1);
    signature[0] = 1;
  }
  if (static_cast<int>(signature.size()) != n)
    throw ValidationError("signature length must equal the base dimension");
  for (int s : signature)
    if (s != 1 && s != -1) throw ValidationError("signature entries must be +1 or -1");

  const int m = alg.dim;
  auto gauge = [&](int r, int l) { return "a" + std::to_string(r) + "_" + std::to_string(l); };
  auto gauge_bar = [&](int r, int l) {
    return "abar" + std::to_string(r) + "_" + std::to_string(l);
  };
  auto ghost = [&](int r) { return "c" + std::to_string(r); };
  auto ghost_bar = [&](int r) { return "cbar" + std::to_string(r); };

  std::vector<FieldDecl> decls;
  for (int r = 0; r < m; ++r) {
    Parity pr = alg.parities[static_cast<size_t>(r)];
    for (int l = 0; l < n; ++l) {
      FieldDecl f = FieldDecl::field(gauge(r, l), pr);
      decls.push_back(f);
      decls.push_back(FieldDecl::antifield_for(f, gauge_bar(r, l)));
    }
    FieldDecl g = FieldDecl::ghost(ghost(r), flip(pr), 1);
    decls.push_back(g);
    decls.push_back(FieldDecl::antifield_for(g, ghost_bar(r)));
  }
  FieldSpacePtr space = FieldSpace::make(coord_names(n), std::move(decls));

  auto a = [&](int r, int l) { return GradedPoly::var(space, gauge(r, l)); };
  auto da = [&](int r, int l, int mu) {
    return GradedPoly::jet(space, gauge(r, l), MultiIndex::unit(n, mu));
  };

  // F^r_{lm} = d_l a^r_m - d_m a^r_l + c^r_{ij} a^i_l a^j_m.
  auto field_strength = [&](int r, int l, int mu) {
    GradedPoly F = da(r, mu, l) - da(r, l, mu);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Rational& crij = alg.c[static_cast<size_t>(r)][static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (sgn(crij) == 0) continue;
        F += crij * mul(a(i, l), a(j, mu));
      }
    return F;
  };

  std::vector<std::vector<Rational>> h_lower = invert(alg.h);
  GradedPoly L = GradedPoly::zero(space);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (sgn(h_lower[static_cast<size_t>(i)][static_cast<size_t>(j)]) == 0) continue;
      for (int l = 0; l < n; ++l)
        for (int b = 0; b < n; ++b) {
          if (l == b) continue;
          Rational weight = h_lower[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                            Rational(signature[static_cast<size_t>(l)] *
                                     signature[static_cast<size_t>(b)], 4);
          L += weight * mul(field_strength(i, l, b), field_strength(j, l, b));
        }
    }

  Model model;
  model.name = "yang-mills";
  model.space = space;
  model.lagrangian = Density(L);

  // Stage-0 generators, signed so the derived gauge operator comes out as
  // u^{a^r_l} = -c^r_{ji} c^j a^i_l + c^r_l.
  NoetherStage stage0;
  stage0.stage = 0;
  for (int j = 0; j < m; ++j) {
    GradedPoly delta = GradedPoly::zero(space);
    for (int r = 0; r < m; ++r)
      for (int i = 0; i < m; ++i) {
        const Rational& crji = alg.c[static_cast<size_t>(r)][static_cast<size_t>(j)][static_cast<size_t>(i)];
        if (sgn(crji) == 0) continue;
        for (int l = 0; l < n; ++l)
          delta -= crji * mul(a(i, l), GradedPoly::var(space, gauge_bar(r, l)));
      }
    for (int l = 0; l < n; ++l)
      delta -= GradedPoly::jet(space, gauge_bar(j, l), MultiIndex::unit(n, l));
    stage0.generators.push_back(NoetherGenerator{ghost(j), Density(delta)});
  }
  model.stages.push_back(std::move(stage0));

  // xi^r = -1/2 (-1)^{[i]} c^r_{ij} c^i c^j.
  std::map<int, GradedPoly> xi;
  for (int r = 0; r < m; ++r) {
    GradedPoly comp = GradedPoly::zero(space);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Rational& crij = alg.c[static_cast<size_t>(r)][static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (sgn(crij) == 0) continue;
        Rational w = Rational(-parity_sign(alg.parities[static_cast<size_t>(i)]), 2) * crij;
        comp += w * mul(GradedPoly::var(space, ghost(i)), GradedPoly::var(space, ghost(j)));
      }
    if (!comp.is_zero()) xi.emplace(space->require(ghost(r)), std::move(comp));
  }
  if (!xi.empty())
    model.brst_xi = Derivation(space, std::move(xi), Chirality::Left, Parity::Odd, 1);

  validate_model(model);
  return model;
}

namespace {

// Ordered index tuples of the given length over 0..n-1.
std::vector<std::vector<int>> ordered_tuples(int n, int len) {
  std::vector<std::vector<int>> out;
  if (len == 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> cur(static_cast<size_t>(len));
  std::iota(cur.begin(), cur.end(), 0);
  if (len > n) return out;
  while (true) {
    out.push_back(cur);
    int i = len - 1;
    while (i >= 0 && cur[static_cast<size_t>(i)] == n - len + i) --i;
    if (i < 0) break;
    ++cur[static_cast<size_t>(i)];
    for (int j = i + 1; j < len; ++j) cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

std::string tuple_name(const std::string& prefix, const std::vector<int>& tuple) {
  std::string out = prefix;
  for (int i : tuple) out += std::to_string(i);
  return out;
}

// Sign of sorting the tuple, 0 when an index repeats.
int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
      std::swap(idx[j], idx[j - 1]);
      sign = -sign;
    }
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

// The antisymmetric component T_{tuple} resolved onto the stored ordered
// component: (sign, name).
std::pair<int, std::string> resolve_component(const std::string& prefix, std::vector<int> tuple) {
  int sign = sort_sign(tuple);
  if (sign == 0) return {0, ""};
  return {sign, tuple_name(prefix, tuple)};
}

struct TowerLevel {
  std::string prefix;  // variable family at this form degree
  int degree = 0;
};

}  // namespace

Model build_bf(const BFSpec& spec) {
  const int n = spec.n;
  const int p = spec.p;
  const int q = spec.q;
  if (n < 2 || p < 1 || q < p || p + q != n - 1)
    throw ValidationError("BF spec needs 1 <= p <= q with p + q = n - 1");

  Model model;
  model.name = "bf";
  if (q % 2) model.notes.push_back("q is odd; no sign in the tower construction depends on the parity of q");

  // Ghost towers: at stage k the A-side carries (p-k-1)-forms named eps...,
  // the B-side (q-k-1)-forms named xi...; parity alternates starting odd.
  std::vector<FieldDecl> decls;
  auto declare_family = [&](const std::string& prefix, int degree, FieldRole role, Parity parity,
                            int ghost_number) {
    for (const auto& tuple : ordered_tuples(n, degree)) {
      FieldDecl d = role == FieldRole::Field
                        ? FieldDecl::field(tuple_name(prefix, tuple), parity)
                        : FieldDecl::ghost(tuple_name(prefix, tuple), parity, ghost_number);
      decls.push_back(d);
      decls.push_back(FieldDecl::antifield_for(d, tuple_name(prefix + "bar", tuple)));
    }
  };
  declare_family("A", p, FieldRole::Field, Parity::Even, 0);
  declare_family("B", q, FieldRole::Field, Parity::Even, 0);
  const int N = q - 1;
  for (int k = 0; k <= N; ++k) {
    Parity parity = k % 2 ? Parity::Even : Parity::Odd;
    if (p - k - 1 >= 0) declare_family("eps", p - k - 1, FieldRole::Ghost, parity, k + 1);
    declare_family("ksi", q - k - 1, FieldRole::Ghost, parity, k + 1);
  }
  FieldSpacePtr space = FieldSpace::make(coord_names(n), std::move(decls));
  model.space = space;

  // L = 1/(p! q!) eps^{mu... sigma nu...} A_{mu...} d_sigma B_{nu...}.
  Rational norm(1);
  for (int i = 2; i <= p; ++i) norm /= i;
  for (int i = 2; i <= q; ++i) norm /= i;
  GradedPoly L = GradedPoly::zero(space);
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> full = perm;
    int eps_sign = sort_sign(full);
    std::vector<int> a_tuple(perm.begin(), perm.begin() + p);
    int sigma = perm[static_cast<size_t>(p)];
    std::vector<int> b_tuple(perm.begin() + p + 1, perm.end());
    auto [sa, a_name] = resolve_component("A", a_tuple);
    auto [sb, b_name] = resolve_component("B", b_tuple);
    if (sa == 0 || sb == 0) continue;
    Rational w = norm * eps_sign * sa * sb;
    L += w * mul(GradedPoly::var(space, a_name),
                 GradedPoly::jet(space, b_name, MultiIndex::unit(n, sigma)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  model.lagrangian = Density(L);

  // Generator for a tower ghost g (a form one degree below the previous
  // level's duals, named by prev_prefix): Delta_g = -sum_mu d_mu Tbar^{mu g},
  // signed so the derived gauge operator carries the derivative on the first
  // antisymmetric slot.
  auto tower_generator = [&](const std::string& prev_prefix,
                             const std::vector<int>& ghost_tuple) {
    GradedPoly delta = GradedPoly::zero(space);
    for (int mu = 0; mu < n; ++mu) {
      std::vector<int> upper = {mu};
      upper.insert(upper.end(), ghost_tuple.begin(), ghost_tuple.end());
      auto [sg, name] = resolve_component(prev_prefix + "bar", upper);
      if (sg == 0) continue;
      delta -= Rational(sg) * GradedPoly::jet(space, name, MultiIndex::unit(n, mu));
    }
    return delta;
  };

  for (int k = 0; k <= N; ++k) {
    NoetherStage stage;
    stage.stage = k;
    if (p - k - 1 >= 0) {
      std::string prev = k == 0 ? "A" : "eps";
      for (const auto& tuple : ordered_tuples(n, p - k - 1))
        stage.generators.push_back(NoetherGenerator{
            tuple_name("eps", tuple), Density(tower_generator(prev, tuple))});
    }
    {
      std::string prev = k == 0 ? "B" : "ksi";
      for (const auto& tuple : ordered_tuples(n, q - k - 1))
        stage.generators.push_back(NoetherGenerator{
            tuple_name("ksi", tuple), Density(tower_generator(prev, tuple))});
    }
    model.stages.push_back(std::move(stage));
  }

  model.brst_xi = std::nullopt;  // Abelian: the gauge operator is already nilpotent
  validate_model(model);
  return model;
}

Model build_gravity(int n) {
  if (n != 4) throw ValidationError("the gravity model is built for n = 4");
  auto sig_name = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return "sig" + std::to_string(a) + "_" + std::to_string(b);
  };
  auto k_name = [&](int mu, int a, int b) {
    return "k" + std::to_string(mu) + "_" + std::to_string(a) + "_" + std::to_string(b);
  };
  auto ghost_name = [&](int l) { return "c" + std::to_string(l); };

  std::vector<FieldDecl> decls;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      FieldDecl f = FieldDecl::field(sig_name(a, b), Parity::Even);
      decls.push_back(f);
      decls.push_back(FieldDecl::antifield_for(f, "sigbar" + std::to_string(a) + "_" + std::to_string(b)));
    }
  for (int mu = 0; mu < n; ++mu)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        FieldDecl f = FieldDecl::field(k_name(mu, a, b), Parity::Even);
        decls.push_back(f);
        decls.push_back(FieldDecl::antifield_for(
            f, "kbar" + std::to_string(mu) + "_" + std::to_string(a) + "_" + std::to_string(b)));
      }
  for (int l = 0; l < n; ++l) {
    FieldDecl g = FieldDecl::ghost(ghost_name(l), Parity::Odd, 1);
    decls.push_back(g);
    decls.push_back(FieldDecl::antifield_for(g, "cbar" + std::to_string(l)));
  }
  FieldSpacePtr space = FieldSpace::make(coord_names(n), std::move(decls));

  auto sig = [&](int a, int b) { return GradedPoly::var(space, sig_name(a, b)); };
  auto kvar = [&](int mu, int a, int b) { return GradedPoly::var(space, k_name(mu, a, b)); };
  auto dc = [&](int l, int mu) {
    return GradedPoly::jet(space, ghost_name(l), MultiIndex::unit(n, mu));
  };
  auto cg = [&](int l) { return GradedPoly::var(space, ghost_name(l)); };

  // The vertical part of the functorial lift, ghosts in place of the vector
  // field components.
  std::map<int, GradedPoly> lift;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      GradedPoly u = GradedPoly::zero(space);
      for (int nu = 0; nu < n; ++nu)
        u += mul(sig(nu, b), dc(a, nu)) + mul(sig(a, nu), dc(b, nu));
      for (int l = 0; l < n; ++l)
        u -= mul(cg(l), GradedPoly::jet(space, sig_name(a, b), MultiIndex::unit(n, l)));
      lift.emplace(space->require(sig_name(a, b)), std::move(u));
    }
  for (int mu = 0; mu < n; ++mu)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        GradedPoly u = GradedPoly::zero(space);
        for (int nu = 0; nu < n; ++nu)
          u += mul(dc(a, nu), kvar(mu, nu, b)) - mul(dc(nu, b), kvar(mu, a, nu)) -
               mul(dc(nu, mu), kvar(nu, a, b));
        u += GradedPoly::jet(space, ghost_name(a), MultiIndex::of(n, {mu, b}));
        for (int l = 0; l < n; ++l)
          u -= mul(cg(l), GradedPoly::jet(space, k_name(mu, a, b), MultiIndex::unit(n, l)));
        lift.emplace(space->require(k_name(mu, a, b)), std::move(u));
      }

  Model model;
  model.name = "gravity";
  model.space = space;
  model.lagrangian = Density(GradedPoly::zero(space));
  model.notes.push_back("the invariant Lagrangian is left zero; identity checks on it are skipped");

  // Noether generators: the adjoint transpose of the lift rows, so that the
  // engine-built gauge operator reproduces the lift exactly.
  NoetherStage stage0;
  stage0.stage = 0;
  for (int l = 0; l < n; ++l) {
    GradedPoly delta = GradedPoly::zero(space);
    for (const auto& [target, component] : lift) {
      LinearDiffOp row(space);
      for (const JetVar& v : component.variables()) {
        if (v.field != space->require(ghost_name(l))) continue;
        row.add(LinearDiffOp::Key{target, v.index}, partial_left(component, v));
      }
      LinearDiffOp eta = adjoint(row);
      int bar = *space->dual(target);
      for (const auto& [key, coeff] : eta.coeffs())
        delta += mul(coeff, GradedPoly::jet(space, JetVar{bar, key.index}));
    }
    stage0.generators.push_back(NoetherGenerator{ghost_name(l), Density(delta)});
  }
  model.stages.push_back(std::move(stage0));

  std::map<int, GradedPoly> xi;
  for (int l = 0; l < n; ++l) {
    GradedPoly comp = GradedPoly::zero(space);
    for (int mu = 0; mu < n; ++mu) comp += mul(dc(l, mu), cg(mu));
    xi.emplace(space->require(ghost_name(l)), std::move(comp));
  }
  model.brst_xi = Derivation(space, std::move(xi), Chirality::Left, Parity::Odd, 1);

  validate_model(model);
  return model;
}

std::vector<std::string> builtin_model_names() {
  return {"yang-mills:su2:n3", "yang-mills:abelian2:n2", "bf:n3p1q1", "bf:n4p1q2",
          "gravity:n4"};
}

bool is_builtin_model(const std::string& name) {
  if (name.rfind("yang-mills:", 0) == 0 || name.rfind("bf:", 0) == 0 ||
      name.rfind("gravity:", 0) == 0)
    return true;
  return false;
}

namespace {

int parse_int(const std::string& s) {
  size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw ConfigError("malformed number in model name: " + s);
  return v;
}

}  // namespace

Model build_builtin(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw ConfigError("empty model name");

  if (parts[0] == "yang-mills" && parts.size() == 3 && parts[2].rfind('n', 0) == 0) {
    int n = parse_int(parts[2].substr(1));
    LieSuperAlgebraSpec alg;
    if (parts[1] == "su2")
      alg = LieSuperAlgebraSpec::su2();
    else if (parts[1].rfind("abelian", 0) == 0)
      alg = LieSuperAlgebraSpec::abelian(parse_int(parts[1].substr(7)));
    else
      throw ConfigError("unknown algebra in model name: " + parts[1]);
    Model m = build_yang_mills(alg, n);
    m.name = name;
    return m;
  }
  if (parts[0] == "bf" && parts.size() == 2) {
    // bf:n4p1q2
    const std::string& tail = parts[1];
    size_t ip = tail.find('p');
    size_t iq = tail.find('q');
    if (tail.rfind('n', 0) != 0 || ip == std::string::npos || iq == std::string::npos || iq < ip)
      throw ConfigError("malformed bf model name: " + name);
    BFSpec spec;
    spec.n = parse_int(tail.substr(1, ip - 1));
    spec.p = parse_int(tail.substr(ip + 1, iq - ip - 1));
    spec.q = parse_int(tail.substr(iq + 1));
    Model m = build_bf(spec);
    m.name = name;
    return m;
  }
  if (parts[0] == "gravity" && parts.size() == 2 && parts[1].rfind('n', 0) == 0) {
    Model m = build_gravity(parse_int(parts[1].substr(1)));
    m.name = name;
    return m;
  }
  throw ConfigError("unknown built-in model: " + name);
}

}  // namespace ktbrst
