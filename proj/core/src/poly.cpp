#include "ktbrst/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ktbrst {

namespace {

const FieldSpacePtr& unify(const FieldSpacePtr& a, const FieldSpacePtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (!same_space(a, b)) throw ValidationError("operands live in different field spaces");
  return a;
}

bool factors_less(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(), [](const Factor& x, const Factor& y) {
        if (x.var != y.var) return x.var < y.var;
        return x.exp < y.exp;
      });
}

// Sorts factors into canonical order tracking the Koszul sign; combines equal
// even factors. Returns 0 if the monomial vanishes (odd square), else +/-1.
int canonicalize_factors(const FieldSpace& space, std::vector<Factor>& fs) {
  std::erase_if(fs, [](const Factor& f) { return f.exp == 0; });
  for (const Factor& f : fs) {
    if (f.exp < 0) throw ValidationError("negative exponent in monomial");
    if (f.var.field < 0 || f.var.field >= space.size())
      throw ValidationError("jet variable outside this field space");
    if (f.var.index.dim() != space.dim())
      throw ValidationError("multi-index dimension does not match the base");
    if (f.exp > 1 && space.is_odd(f.var.field)) return 0;
  }
  int sign = 1;
  // Insertion sort; each adjacent swap of two odd factors flips the sign.
  for (size_t i = 1; i < fs.size(); ++i) {
    size_t j = i;
    while (j > 0 && fs[j].var < fs[j - 1].var) {
      if (space.is_odd(fs[j].var.field) && space.is_odd(fs[j - 1].var.field)) sign = -sign;
      std::swap(fs[j], fs[j - 1]);
      --j;
    }
  }
  std::vector<Factor> out;
  out.reserve(fs.size());
  for (const Factor& f : fs) {
    if (!out.empty() && out.back().var == f.var) {
      if (space.is_odd(f.var.field)) return 0;
      out.back().exp += f.exp;
    } else {
      out.push_back(f);
    }
  }
  fs = std::move(out);
  return sign;
}

// Sorts monomials, combines like terms, drops zero coefficients.
std::vector<Monomial> combine(std::vector<Monomial> ms) {
  std::sort(ms.begin(), ms.end(),
            [](const Monomial& a, const Monomial& b) { return factors_less(a.factors, b.factors); });
  std::vector<Monomial> out;
  for (Monomial& m : ms) {
    if (sgn(m.coeff) == 0) continue;
    if (!out.empty() && out.back().factors == m.factors) {
      out.back().coeff += m.coeff;
      if (sgn(out.back().coeff) == 0) out.pop_back();
    } else {
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace

GradedPoly GradedPoly::adopt(FieldSpacePtr space, std::vector<Monomial> terms) {
  GradedPoly p;
  p.space_ = std::move(space);
  p.terms_ = std::move(terms);
  return p;
}

GradedPoly GradedPoly::zero(FieldSpacePtr space) { return adopt(std::move(space), {}); }

GradedPoly GradedPoly::constant(Rational c, FieldSpacePtr space) {
  if (sgn(c) == 0) return zero(std::move(space));
  return adopt(std::move(space), {Monomial{std::move(c), {}}});
}

GradedPoly GradedPoly::jet(FieldSpacePtr space, JetVar v) {
  if (!space) throw ValidationError("jet variable needs a field space");
  if (v.field < 0 || v.field >= space->size())
    throw ValidationError("jet variable outside this field space");
  if (v.index.dim() != space->dim())
    throw ValidationError("multi-index dimension does not match the base");
  return adopt(std::move(space), {Monomial{rat(1), {Factor{v, 1}}}});
}

GradedPoly GradedPoly::jet(const FieldSpacePtr& space, std::string_view name,
                           const MultiIndex& idx) {
  if (!space) throw ValidationError("jet variable needs a field space");
  return jet(space, JetVar{space->require(name), idx});
}

GradedPoly GradedPoly::var(const FieldSpacePtr& space, std::string_view name) {
  if (!space) throw ValidationError("variable needs a field space");
  return jet(space, JetVar{space->require(name), MultiIndex(space->dim())});
}

bool GradedPoly::is_constant() const {
  for (const Monomial& m : terms_)
    if (!m.factors.empty()) return false;
  return true;
}

std::optional<Parity> GradedPoly::parity() const {
  std::optional<Parity> p;
  for (const Monomial& m : terms_) {
    Parity mp = monomial_parity(*space_, m);
    if (!p)
      p = mp;
    else if (*p != mp)
      return std::nullopt;
  }
  return terms_.empty() ? std::optional<Parity>(Parity::Even) : p;
}

std::optional<int> GradedPoly::ghost_number() const {
  std::optional<int> g;
  for (const Monomial& m : terms_) {
    int mg = monomial_ghost_number(*space_, m);
    if (!g)
      g = mg;
    else if (*g != mg)
      return std::nullopt;
  }
  return terms_.empty() ? std::optional<int>(0) : g;
}

std::optional<int> GradedPoly::antifield_number() const {
  std::optional<int> g;
  for (const Monomial& m : terms_) {
    int mg = monomial_antifield_number(*space_, m);
    if (!g)
      g = mg;
    else if (*g != mg)
      return std::nullopt;
  }
  return terms_.empty() ? std::optional<int>(0) : g;
}

GradedPoly GradedPoly::parity_part(Parity p) const {
  std::vector<Monomial> out;
  for (const Monomial& m : terms_)
    if (monomial_parity(*space_, m) == p) out.push_back(m);
  return adopt(space_, std::move(out));
}

GradedPoly GradedPoly::operator-() const {
  std::vector<Monomial> out = terms_;
  for (Monomial& m : out) m.coeff = -m.coeff;
  return adopt(space_, std::move(out));
}

GradedPoly operator+(const GradedPoly& a, const GradedPoly& b) {
  FieldSpacePtr space = unify(a.space_, b.space_);
  std::vector<Monomial> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  // Both inputs are sorted; merge.
  size_t i = 0, j = 0;
  while (i < a.terms_.size() && j < b.terms_.size()) {
    if (a.terms_[i].factors == b.terms_[j].factors) {
      Rational c = a.terms_[i].coeff + b.terms_[j].coeff;
      if (sgn(c) != 0) out.push_back(Monomial{std::move(c), a.terms_[i].factors});
      ++i;
      ++j;
    } else if (factors_less(a.terms_[i].factors, b.terms_[j].factors)) {
      out.push_back(a.terms_[i++]);
    } else {
      out.push_back(b.terms_[j++]);
    }
  }
  for (; i < a.terms_.size(); ++i) out.push_back(a.terms_[i]);
  for (; j < b.terms_.size(); ++j) out.push_back(b.terms_[j]);
  return GradedPoly::adopt(space, std::move(out));
}

GradedPoly operator-(const GradedPoly& a, const GradedPoly& b) { return a + (-b); }

GradedPoly operator*(const Rational& c, const GradedPoly& p) {
  if (sgn(c) == 0) return GradedPoly::zero(p.space_);
  std::vector<Monomial> out = p.terms_;
  for (Monomial& m : out) m.coeff *= c;
  return GradedPoly::adopt(p.space_, std::move(out));
}

GradedPoly& GradedPoly::operator+=(const GradedPoly& o) { return *this = *this + o; }
GradedPoly& GradedPoly::operator-=(const GradedPoly& o) { return *this = *this - o; }

bool GradedPoly::operator==(const GradedPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  if (terms_ != o.terms_) return false;
  // Factor ordinals are only meaningful relative to a space; constants
  // compare across spaces.
  return is_constant() || same_space(space_, o.space_);
}

std::vector<JetVar> GradedPoly::variables() const {
  std::vector<JetVar> vars;
  for (const Monomial& m : terms_)
    for (const Factor& f : m.factors) vars.push_back(f.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

int GradedPoly::max_jet_order() const {
  int order = 0;
  for (const Monomial& m : terms_)
    for (const Factor& f : m.factors) order = std::max(order, f.var.index.order());
  return order;
}

GradedPoly normalize(const FieldSpacePtr& space, const std::vector<RawTerm>& raw) {
  std::vector<Monomial> out;
  out.reserve(raw.size());
  for (const RawTerm& t : raw) {
    if (sgn(t.coeff) == 0) continue;
    std::vector<Factor> fs = t.factors;
    if (!fs.empty() && !space) throw ValidationError("non-constant term needs a field space");
    int sign = fs.empty() ? 1 : canonicalize_factors(*space, fs);
    if (sign == 0) continue;
    out.push_back(Monomial{sign < 0 ? Rational(-t.coeff) : t.coeff, std::move(fs)});
  }
  return GradedPoly::adopt(space, combine(std::move(out)));
}

GradedPoly normalize(const FieldSpacePtr& space,
                     const std::vector<std::pair<Rational, std::vector<JetVar>>>& raw) {
  std::vector<RawTerm> terms;
  terms.reserve(raw.size());
  for (const auto& [coeff, vars] : raw) {
    RawTerm t{coeff, {}};
    t.factors.reserve(vars.size());
    for (const JetVar& v : vars) t.factors.push_back(Factor{v, 1});
    terms.push_back(std::move(t));
  }
  return normalize(space, terms);
}

GradedPoly mul(const GradedPoly& a, const GradedPoly& b) {
  FieldSpacePtr space = unify(a.space(), b.space());
  if (a.is_zero() || b.is_zero()) return GradedPoly::zero(space);
  std::vector<Monomial> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const Monomial& ma : a.terms()) {
    for (const Monomial& mb : b.terms()) {
      std::vector<Factor> fs;
      fs.reserve(ma.factors.size() + mb.factors.size());
      fs.insert(fs.end(), ma.factors.begin(), ma.factors.end());
      fs.insert(fs.end(), mb.factors.begin(), mb.factors.end());
      int sign = fs.empty() ? 1 : canonicalize_factors(*space, fs);
      if (sign == 0) continue;
      Rational c = ma.coeff * mb.coeff;
      if (sign < 0) c = -c;
      out.push_back(Monomial{std::move(c), std::move(fs)});
    }
  }
  return GradedPoly::adopt(space, combine(std::move(out)));
}

GradedPoly partial_left(const GradedPoly& p, const JetVar& v) {
  if (p.is_zero()) return p;
  const FieldSpace& space = *p.space();
  const bool odd = space.is_odd(v.field);
  std::vector<Monomial> out;
  for (const Monomial& m : p.terms()) {
    int odd_before = 0;
    for (size_t i = 0; i < m.factors.size(); ++i) {
      const Factor& f = m.factors[i];
      if (f.var == v) {
        Monomial d;
        d.coeff = m.coeff * f.exp;
        if (odd && (odd_before % 2)) d.coeff = -d.coeff;
        d.factors.reserve(m.factors.size());
        for (size_t j = 0; j < m.factors.size(); ++j) {
          if (j == i) {
            if (f.exp > 1) d.factors.push_back(Factor{f.var, f.exp - 1});
          } else {
            d.factors.push_back(m.factors[j]);
          }
        }
        out.push_back(std::move(d));
        break;  // canonical form: each variable occurs in one factor
      }
      if (space.is_odd(f.var.field)) ++odd_before;
    }
  }
  return GradedPoly::adopt(p.space(), combine(std::move(out)));
}

GradedPoly partial_right(const GradedPoly& p, const JetVar& v) {
  if (p.is_zero()) return p;
  const FieldSpace& space = *p.space();
  if (space.parity(v.field) == Parity::Even) return partial_left(p, v);
  // Odd v: d_right = (-1)^{[p]+1} d_left on each parity-homogeneous part.
  GradedPoly even = partial_left(p.parity_part(Parity::Even), v);
  GradedPoly odd = partial_left(p.parity_part(Parity::Odd), v);
  return odd - even;
}

Parity monomial_parity(const FieldSpace& space, const Monomial& m) {
  int odd = 0;
  for (const Factor& f : m.factors)
    if (space.is_odd(f.var.field)) odd += f.exp;
  return odd % 2 ? Parity::Odd : Parity::Even;
}

int monomial_ghost_number(const FieldSpace& space, const Monomial& m) {
  int g = 0;
  for (const Factor& f : m.factors) g += f.exp * space.ghost_number(f.var.field);
  return g;
}

int monomial_antifield_number(const FieldSpace& space, const Monomial& m) {
  int g = 0;
  for (const Factor& f : m.factors) g += f.exp * space.antifield_number(f.var.field);
  return g;
}

int monomial_antifield_factor_count(const FieldSpace& space, const Monomial& m) {
  int g = 0;
  for (const Factor& f : m.factors)
    if (is_antifield_role(space.decl(f.var.field).role)) g += f.exp;
  return g;
}

GradedPoly transfer(const GradedPoly& p, const FieldSpacePtr& target) {
  if (p.is_zero() || !p.space()) return GradedPoly::adopt(target, p.terms());
  if (same_space(p.space(), target)) return GradedPoly::adopt(target, p.terms());
  const FieldSpace& from = *p.space();
  if (from.dim() != target->dim() || from.coords() != target->coords())
    throw ValidationError("cannot transfer between different base manifolds");
  std::vector<Monomial> out;
  out.reserve(p.terms().size());
  for (const Monomial& m : p.terms()) {
    Monomial t;
    t.coeff = m.coeff;
    t.factors.reserve(m.factors.size());
    for (const Factor& f : m.factors) {
      int ord = target->require(from.decl(f.var.field).name);
      if (target->decl(ord).parity != from.decl(f.var.field).parity)
        throw ValidationError("parity clash while transferring " + from.decl(f.var.field).name);
      t.factors.push_back(Factor{JetVar{ord, f.var.index}, f.exp});
    }
    out.push_back(std::move(t));
  }
  // Target ordering may differ; renormalize.
  std::vector<RawTerm> raw;
  raw.reserve(out.size());
  for (Monomial& m : out) raw.push_back(RawTerm{std::move(m.coeff), std::move(m.factors)});
  return normalize(target, raw);
}

std::string GradedPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Monomial& m : terms_) {
    Rational c = m.coeff;
    bool negative = sgn(c) < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << '-';
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    bool coeff_is_one = (c == 1);
    if (m.factors.empty()) {
      os << c.get_str();
      continue;
    }
    if (!coeff_is_one) os << c.get_str() << '*';
    bool first_factor = true;
    for (const Factor& f : m.factors) {
      if (!first_factor) os << '*';
      first_factor = false;
      os << space_->decl(f.var.field).name;
      if (f.var.index.order() > 0) {
        os << '[';
        bool first_coord = true;
        f.var.index.for_each_coord([&](int coord) {
          if (!first_coord) os << ',';
          first_coord = false;
          os << space_->coord(coord);
        });
        os << ']';
      }
      if (f.exp > 1) os << '^' << f.exp;
    }
  }
  return os.str();
}

}  // namespace ktbrst
