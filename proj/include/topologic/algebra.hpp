#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "topologic/formula.hpp"
#include "topologic/parallel.hpp"
#include "topologic/space.hpp"

namespace topologic {

// Element of the powerset algebra over atom_count atoms: bit i set iff atom i
// belongs to it.
using Element = std::uint32_t;

inline constexpr std::size_t kMaxAlgebraAtoms = 12;

// Boolean algebra with an interior operator and a universal quantifier, both
// given as total tables.
class MonadicAlgebra {
 public:
  // Throws InvalidInput on wrong table sizes, out-of-range entries, or more
  // than kMaxAlgebraAtoms atoms.
  MonadicAlgebra(std::size_t atom_count, std::vector<Element> interior, std::vector<Element> forall);

  std::size_t atom_count() const { return atoms_; }
  std::size_t size() const { return interior_.size(); }
  Element top() const { return static_cast<Element>(size() - 1); }
  Element complement(Element a) const { return top() & ~a; }

  Element interior(Element a) const { return interior_[a]; }
  Element closure(Element a) const { return complement(interior_[complement(a)]); }
  Element forall(Element a) const { return forall_[a]; }
  Element exists(Element a) const { return complement(forall_[complement(a)]); }

  // Fixed by both the interior and the closure.
  bool in_fixed_subalgebra(Element a) const { return interior(a) == a && closure(a) == a; }

  const std::vector<Element>& interior_table() const { return interior_; }
  const std::vector<Element>& forall_table() const { return forall_; }

  friend bool operator==(const MonadicAlgebra&, const MonadicAlgebra&) = default;

 private:
  std::size_t atoms_;
  std::vector<Element> interior_;
  std::vector<Element> forall_;
};

struct LawCheck {
  bool holds = true;
  std::string law;               // first violated law
  std::vector<Element> witness;  // its arguments
};

// Interior and quantifier laws, then forall(I a) <= I(forall a).
LawCheck check_fma_laws(const MonadicAlgebra& alg, Execution exec = Execution::parallel);
// FMA laws, C I a = I C a, and
//   C(forall a & b) & exists C(forall a & c) <= C(forall C a & C b & exists C c).
// The last law is checked with b and c ranging over atoms only: the left side
// is additive in b and c and the right side monotone, so this is exact.
LawCheck check_gma_laws(const MonadicAlgebra& alg, Execution exec = Execution::parallel);
// Only the last GMA law, by the atom reduction; exact when C and exists
// preserve joins (which the interior and quantifier laws guarantee).
LawCheck check_gma_inequality(const MonadicAlgebra& alg, Execution exec = Execution::parallel);
bool check_fma(const MonadicAlgebra& alg, Execution exec = Execution::parallel);
bool check_gma(const MonadicAlgebra& alg, Execution exec = Execution::parallel);

// Full (a, b, c) loop for the last GMA law; reference for small carriers
// (throws BudgetExceeded above `max_atoms`).
LawCheck check_gma_inequality_naive(const MonadicAlgebra& alg, std::size_t max_atoms = 8);

// Algebra of all world sets of a model: atom i is world i (in Model::worlds
// order), interior along effort, forall along knowledge.
struct ComplexAlgebra {
  MonadicAlgebra algebra;
  std::vector<World> worlds;
};

// Throws BudgetExceeded past kMaxAlgebraAtoms worlds.
ComplexAlgebra complex_algebra(const Model& model);

using AlgValuation = std::map<std::string, Element>;

// Each atom of the model's valuation mapped to the worlds at its points.
AlgValuation world_valuation(const ComplexAlgebra& c, const Model& model);

// Atoms missing from v denote 0. Throws InvalidInput when an atom's value is
// outside the fixed subalgebra or the carrier.
Element alg_eval(const MonadicAlgebra& alg, const AlgValuation& v, const Formula& f);

// Algebra file format: {"atoms": n, "interior": [...], "forall": [...]}.
nlohmann::json algebra_to_json(const MonadicAlgebra& alg);
MonadicAlgebra algebra_from_json(const nlohmann::json& j);  // throws InvalidInput
nlohmann::json law_check_to_json(const LawCheck& c);

}  // namespace topologic
