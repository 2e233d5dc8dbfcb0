#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topologic/formula.hpp"
#include "topologic/parallel.hpp"
#include "topologic/space.hpp"

namespace topologic {

// Literal recursive satisfaction (x,U) |= f. Throws InvalidInput when w is not
// a world of the model.
bool eval(const Model& model, const World& w, const Formula& f);

// Truth sets indexed by open: entry u holds the points x of opens()[u] with
// (x, opens()[u]) |= f.
using Extension = std::vector<PointSet>;

Extension extension(const Model& model, const Formula& f, Execution exec = Execution::serial);

// Extensions of every subformula of f, keyed by the desugared subformula.
std::map<Formula, Extension> extensions(const Model& model, const Formula& f,
                                        Execution exec = Execution::serial);

struct Validity {
  bool valid = true;
  std::optional<World> counterexample;  // least failing world
};

Validity valid_in_model(const Model& model, const Formula& f, Execution exec = Execution::serial);

// Same verdict computed world by world with `eval`.
Validity valid_in_model_reference(const Model& model, const Formula& f);

// ---------------------------------------------------------------------------
// Schemes

struct SchemeInstance {
  std::string scheme;  // axiom-1 .. axiom-12, lemma-damand, lemma-main(n), prop-boxdam, *-char
  std::map<std::string, Formula> substitution;
};

enum class SchemeStatus { valid, invalid, precondition_failed };

struct SchemeResult {
  SchemeStatus status = SchemeStatus::valid;
  Formula instance;
  std::optional<World> counterexample;
  std::string detail;  // reason for a precondition failure
};

std::vector<std::string> scheme_names();  // lemma-main listed as lemma-main(1..3)
bool is_scheme_name(const std::string& name);

// The scheme with metavariables written as atoms (phi, psi, chi, A, psi1..).
Formula scheme_template(const std::string& name);
std::vector<std::string> scheme_metavariables(const std::string& name);

// Throws InvalidInput when a metavariable is missing or the name is unknown.
Formula instantiate(const SchemeInstance& inst);

SchemeResult check_scheme(const Model& model, const SchemeInstance& inst,
                          Execution exec = Execution::serial);

// Propositional tautology check, treating modal subformulas as atoms.
bool is_tautology(const Formula& f);

// ---------------------------------------------------------------------------
// Topological characterizations of an atom's extension

struct Characterization {
  bool open = false, closed = false, dense = false, nowhere_dense = false;
  // Validity of A -> <>K A, []L A -> A, []L A and L<>K~A respectively.
  bool open_formula = false, closed_formula = false, dense_formula = false,
       nowhere_dense_formula = false;

  bool agrees() const {
    return open == open_formula && closed == closed_formula && dense == dense_formula &&
           nowhere_dense == nowhere_dense_formula;
  }
};

// Throws InvalidInput on non-topologies and VerificationFailure if the two
// computations disagree.
Characterization characterize(const Model& model, const std::string& atom);

}  // namespace topologic
