#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ktbrst {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model/space construction problems: bad gradings, duplicate names, broken
// dual links.
struct ValidationError : Error {
  using Error::Error;
};

// A well-formed request that refers to things the model does not declare.
struct ConfigError : Error {
  using Error::Error;
};

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

inline Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }
inline const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

enum class FieldRole : std::uint8_t {
  Field = 0,          // s^A
  Antifield = 1,      // s-bar_A
  Ghost = 2,          // c^{r_k}
  GhostAntifield = 3  // c-bar_{r_k}
};

inline bool is_antifield_role(FieldRole r) {
  return r == FieldRole::Antifield || r == FieldRole::GhostAntifield;
}

// One scalar generator of the graded algebra. Indexed families (a^r_lambda,
// B_{nu rho}, ...) are component-expanded into scalar declarations before they
// reach this level.
struct FieldDecl {
  std::string name;
  Parity parity = Parity::Even;
  int ghost_number = 0;     // gh; duals carry -gh(primary)-1
  int antifield_number = 0; // Ant; 1 for s-bar, k+2 for the dual of a stage-k ghost
  FieldRole role = FieldRole::Field;
  std::optional<std::string> dual_of;

  static FieldDecl field(std::string name, Parity parity) {
    return FieldDecl{std::move(name), parity, 0, 0, FieldRole::Field, std::nullopt};
  }
  static FieldDecl ghost(std::string name, Parity parity, int ghost_number) {
    return FieldDecl{std::move(name), parity, ghost_number, 0, FieldRole::Ghost, std::nullopt};
  }
  // The antifield dual of a field or ghost: parity flips, gh(dual) = -gh-1,
  // Ant(dual) = gh+1 (so Ant = 1 for plain fields, k+2 for stage-k ghosts).
  static FieldDecl antifield_for(const FieldDecl& primary, std::string name) {
    FieldDecl d;
    d.name = std::move(name);
    d.parity = flip(primary.parity);
    d.ghost_number = -primary.ghost_number - 1;
    d.antifield_number = primary.ghost_number + 1;
    d.role = primary.role == FieldRole::Ghost ? FieldRole::GhostAntifield : FieldRole::Antifield;
    d.dual_of = primary.name;
    return d;
  }

  bool operator==(const FieldDecl&) const = default;
};

class FieldSpace;
using FieldSpacePtr = std::shared_ptr<const FieldSpace>;

// The full variable content of one model: base coordinates plus every scalar
// field, ghost and antifield, held in a fixed canonical order (antifield
// number, then role, then name). Immutable after construction; shared freely.
class FieldSpace {
 public:
  static FieldSpacePtr make(std::vector<std::string> coords, std::vector<FieldDecl> decls);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::string& coord(int i) const { return coords_.at(static_cast<size_t>(i)); }
  const std::vector<std::string>& coords() const { return coords_; }
  std::optional<int> coord_index(std::string_view name) const;

  int size() const { return static_cast<int>(decls_.size()); }
  const FieldDecl& decl(int ordinal) const { return decls_.at(static_cast<size_t>(ordinal)); }
  const std::vector<FieldDecl>& decls() const { return decls_; }
  std::optional<int> find(std::string_view name) const;
  int require(std::string_view name) const;

  // Antifield of a primal, or primal of an antifield.
  std::optional<int> dual(int ordinal) const {
    return duals_.at(static_cast<size_t>(ordinal)) < 0
               ? std::nullopt
               : std::optional<int>(duals_[static_cast<size_t>(ordinal)]);
  }

  Parity parity(int ordinal) const { return decl(ordinal).parity; }
  bool is_odd(int ordinal) const { return decl(ordinal).parity == Parity::Odd; }
  int ghost_number(int ordinal) const { return decl(ordinal).ghost_number; }
  int antifield_number(int ordinal) const { return decl(ordinal).antifield_number; }

  bool operator==(const FieldSpace& other) const {
    return coords_ == other.coords_ && decls_ == other.decls_;
  }

 private:
  FieldSpace() = default;

  std::vector<std::string> coords_;
  std::vector<FieldDecl> decls_;  // canonical order
  std::vector<int> duals_;        // -1 when absent
};

inline bool same_space(const FieldSpacePtr& a, const FieldSpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// Identifier syntax shared by the field declarations and the model DSL.
bool is_identifier(std::string_view s);

}  // namespace ktbrst
