#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ktbrst/derivation.hpp"
#include "ktbrst/jet_calculus.hpp"
#include "ktbrst/poly.hpp"

namespace ktbrst {

// One Noether-identity generator of stage k: a density of antifield number
// k+1, paired with the stage-k ghost it is named after.
struct NoetherGenerator {
  std::string ghost;
  Density density;

  bool operator==(const NoetherGenerator&) const = default;
};

struct NoetherStage {
  int stage = 0;  // 0 = the generating Noether identities, k >= 1 the higher stages
  std::vector<NoetherGenerator> generators;
  // Optional delta-bar witnesses for the k-stage gauge symmetry condition,
  // keyed by the target ghost name; only consulted when the composition of
  // consecutive gauge stages fails to vanish identically.
  std::map<std::string, Density> alphas;

  bool operator==(const NoetherStage&) const = default;
};

// A full field-antifield model: basis, Lagrangian, stage-wise generators and
// the optional ghost-polynomial extension terms xi of the BRST operator.
struct Model {
  std::string name;
  std::string description;
  FieldSpacePtr space;
  Density lagrangian;
  std::vector<NoetherStage> stages;
  std::optional<Derivation> brst_xi;
  std::vector<std::string> notes;  // advisory remarks surfaced in reports

  int max_stage() const { return stages.empty() ? -1 : stages.back().stage; }
  const NoetherStage* stage(int k) const;
};

// Enforces every structural invariant: grading of the Lagrangian, duality and
// completeness of the basis, per-stage generator gradings and ghost pairing.
void validate_model(const Model& m);

bool models_equal(const Model& a, const Model& b);

// The split of a stage-k generator into its part linear in the level-(k+1)
// antifields (as operator coefficients on the primal variables they pair
// with) and the higher remainder h.
struct GeneratorSplit {
  LinearDiffOp linear;  // rows keyed by the primal dual of the antifield
  Density h;
};
GeneratorSplit split_generator(const Model& m, const NoetherGenerator& gen, int stage);

// Shared verdict shape for the identity checks in this module.
struct CheckOutcome {
  bool pass = false;
  std::string note;
  std::vector<std::pair<std::string, std::string>> witnesses;  // label -> rendering
};

// The Noether identity sum_{A,Lambda} Phi^{A,Lambda} d_Lambda E_A = 0, checked
// as an exact polynomial identity. Phi is keyed by the fields themselves.
CheckOutcome check_noether_identity(const Model& m, const LinearDiffOp& phi);
// Convenience: run the identity encoded by a stage-0 generator.
CheckOutcome check_noether_identity(const Model& m, const NoetherGenerator& gen);

// The stage-k identity: the linear part of each stage-k generator applied to
// the linear parts of stage k-1 must equal -delta_bar(h_k).
CheckOutcome check_stage_identity(const Model& m, int k);

// delta-bar, the right derivation s-bar_A -> E_A.
Derivation build_delta_bar(const Model& m);

// The Koszul-Tate operator: s-bar_A -> E_A, c-bar_{r_k} -> Delta_{r_k};
// odd, right, ghost shift +1.
Derivation build_kt_operator(const Model& m);

// One ascent stage of the gauge operator: stage 0 gives u (components on the
// fields), stage k >= 1 gives u_(k) (components on the stage-(k-1) ghosts).
// Components are assembled from adjoints of the generator linear parts.
Derivation build_gauge_stage(const Model& m, int k);
// The full gauge operator u_e = u + u_(1) + ... + u_(N); odd, ghost number 1.
Derivation build_gauge_operator(const Model& m);
// u_E = u_e + xi, the BRST extension (equals u_e when no xi is installed).
Derivation build_brst_operator(const Model& m);

// Stage-by-stage gauge symmetry conditions: stage 0 is the variational
// symmetry of L; stage k checks the composition of consecutive ascent stages
// against zero or the supplied delta-bar witness.
std::vector<CheckOutcome> check_gauge_symmetry_conditions(const Model& m,
                                                          const Derivation& u_total);

// L_e = L + sum_k c^{r_k} Delta_{r_k}: every monomial carries total ghost
// number zero.
Density build_extended_lagrangian(const Model& m);

// L_E = L_e + sum xi^{r_{k-1}} c-bar_{r_{k-1}} d^n x.
Density build_proper_solution(const Model& m);

// The antibracket of two densities over the model's dual pairs.
Density antibracket(const Density& P, const Density& Q);

// {P, P} must be d_H-exact; the witness is the Euler-Lagrange residual of the
// bracket density.
CheckOutcome check_master_equation(const Model& m, const Density& P);

// The four equivalent conditions on a density P: master equation, the two
// associated variational symmetries, and nilpotency of the combined
// derivation. They must agree.
struct MasterEquivalenceSuite {
  CheckOutcome master;
  CheckOutcome upsilon_symmetry;
  CheckOutcome upsilon_bar_symmetry;
  CheckOutcome theta_nilpotent;

  bool uniform() const {
    return master.pass == upsilon_symmetry.pass && master.pass == upsilon_bar_symmetry.pass &&
           master.pass == theta_nilpotent.pass;
  }
  bool all_pass() const {
    return master.pass && upsilon_symmetry.pass && upsilon_bar_symmetry.pass &&
           theta_nilpotent.pass;
  }
};
MasterEquivalenceSuite build_master_equivalence_suite(const Model& m, const Density& P);

// The odd derivations attached to a density by its variational derivatives:
// upsilon (left, on primals), upsilon-bar (right, on antifields) and their
// sum theta = upsilon + upsilon-bar converted to the left.
Derivation build_upsilon(const Model& m, const Density& P);
Derivation build_upsilon_bar(const Model& m, const Density& P);
Derivation build_theta(const Model& m, const Density& P);

// Rendering helper shared by reports: truncates long polynomials.
std::string render_witness(const GradedPoly& p, int max_terms = 8);

}  // namespace ktbrst
