#include "ktbrst/field.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ktbrst/multi_index.hpp"

namespace ktbrst {

namespace {

const std::set<std::string, std::less<>>& reserved_words() {
  // Keywords of the model DSL; field names must stay clear of them so that a
  // rendered model always re-parses.
  static const std::set<std::string, std::less<>> words = {
      "model", "description", "dim",   "coords", "field", "ghost", "antifield",
      "of",    "let",         "lagrangian", "stage", "gen", "alpha", "xi",
      "even",  "odd",         "gh",    "d"};
  return words;
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::optional<int> FieldSpace::coord_index(std::string_view name) const {
  for (size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> FieldSpace::find(std::string_view name) const {
  for (size_t i = 0; i < decls_.size(); ++i)
    if (decls_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

int FieldSpace::require(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ConfigError("unknown field identifier: " + std::string(name));
}

FieldSpacePtr FieldSpace::make(std::vector<std::string> coords, std::vector<FieldDecl> decls) {
  if (coords.empty() || static_cast<int>(coords.size()) > MultiIndex::kMaxDim)
    throw ValidationError("base dimension must be between 1 and " +
                          std::to_string(MultiIndex::kMaxDim));

  std::set<std::string> names;
  for (const auto& c : coords) {
    if (!is_identifier(c) || reserved_words().count(c))
      throw ValidationError("bad coordinate name: " + c);
    if (!names.insert(c).second) throw ValidationError("duplicate coordinate name: " + c);
  }
  for (const auto& d : decls) {
    if (!is_identifier(d.name) || reserved_words().count(d.name))
      throw ValidationError("bad field name: " + d.name);
    if (!names.insert(d.name).second)
      throw ValidationError("duplicate declaration name: " + d.name);
  }

  // Canonical order groups antifields after the fields and ghosts they pair
  // with and fixes the monomial normal form.
  std::sort(decls.begin(), decls.end(), [](const FieldDecl& a, const FieldDecl& b) {
    if (a.antifield_number != b.antifield_number) return a.antifield_number < b.antifield_number;
    if (a.role != b.role) return static_cast<int>(a.role) < static_cast<int>(b.role);
    return a.name < b.name;
  });

  auto space = std::shared_ptr<FieldSpace>(new FieldSpace());
  space->coords_ = std::move(coords);
  space->decls_ = std::move(decls);
  space->duals_.assign(space->decls_.size(), -1);

  auto find_ordinal = [&](std::string_view n) -> int {
    for (size_t i = 0; i < space->decls_.size(); ++i)
      if (space->decls_[i].name == n) return static_cast<int>(i);
    return -1;
  };

  for (size_t i = 0; i < space->decls_.size(); ++i) {
    const FieldDecl& d = space->decls_[i];
    switch (d.role) {
      case FieldRole::Field:
        if (d.ghost_number != 0 || d.antifield_number != 0 || d.dual_of)
          throw ValidationError("field " + d.name + " must have gh = 0, Ant = 0 and no dual");
        break;
      case FieldRole::Ghost:
        if (d.ghost_number < 1)
          throw ValidationError("ghost " + d.name + " must have ghost number >= 1");
        if (d.antifield_number != 0 || d.dual_of)
          throw ValidationError("ghost " + d.name + " must have Ant = 0 and no dual link");
        break;
      case FieldRole::Antifield:
      case FieldRole::GhostAntifield: {
        if (!d.dual_of) throw ValidationError("antifield " + d.name + " lacks a dual link");
        int p = find_ordinal(*d.dual_of);
        if (p < 0) throw ValidationError("antifield " + d.name + " refers to unknown " + *d.dual_of);
        const FieldDecl& primal = space->decls_[static_cast<size_t>(p)];
        FieldDecl expect = FieldDecl::antifield_for(primal, d.name);
        if (expect.parity != d.parity || expect.ghost_number != d.ghost_number ||
            expect.antifield_number != d.antifield_number || expect.role != d.role)
          throw ValidationError("antifield " + d.name + " has gradings inconsistent with " +
                                primal.name);
        if (space->duals_[static_cast<size_t>(p)] >= 0)
          throw ValidationError(primal.name + " has more than one antifield");
        space->duals_[static_cast<size_t>(p)] = static_cast<int>(i);
        space->duals_[i] = p;
        break;
      }
    }
  }
  return space;
}

}  // namespace ktbrst
