#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "topologic/formula.hpp"
#include "topologic/parallel.hpp"
#include "topologic/space.hpp"

namespace topologic {

enum class SpaceClass { topology, lattice, any_subset_space };

std::string to_string(SpaceClass c);
SpaceClass space_class_from_string(const std::string& s);  // throws InvalidInput

inline constexpr std::size_t kMaxSearchPoints = 6;

struct SearchBudget {
  std::size_t max_points = 4;  // 1 .. kMaxSearchPoints
  SpaceClass space_class = SpaceClass::topology;
  std::optional<double> max_seconds;
  bool prune_isomorphic = false;  // keep only the first space of each isomorphism class
  Execution exec = Execution::parallel;
};

// Reflexive-transitive relations on n points in ascending order of their
// row-major adjacency matrix (first entry most significant).
std::vector<std::vector<std::vector<bool>>> enumerate_preorders(std::size_t n);

// Open families (canonical order) on points p0..p{n-1}, each once:
//  topology          up-sets of each preorder, in preorder order;
//  lattice           each topology, followed by itself minus the empty set
//                    when that is still closed under intersection;
//  any_subset_space  every family containing X, by ascending family code
//                    (n <= 3 only).
std::vector<std::vector<PointSet>> enumerate_families(std::size_t n, SpaceClass c);
std::vector<SubsetSpace> enumerate_spaces(std::size_t n, SpaceClass c);

bool in_class(const SubsetSpace& s, SpaceClass c);

enum class VerdictStatus { satisfiable, unsat_up_to_bound, valid_up_to_bound, countermodel, budget_exhausted };

std::string to_string(VerdictStatus s);

struct Verdict {
  VerdictStatus status = VerdictStatus::unsat_up_to_bound;
  // Witness (satisfiable) or minimized countermodel.
  std::optional<Model> model;
  std::optional<World> world;
  // Countermodel as first found, before minimization.
  std::optional<Model> raw_model;
  std::optional<World> raw_world;
  std::size_t models_examined = 0;
  std::size_t bound = 0;  // largest point count fully searched
};

// Searches spaces with 1..max_points points, every valuation of the atoms of
// f, every world; returns the first witness in canonical order.
Verdict decide_sat(const Formula& f, const SearchBudget& budget = {});

// decide_sat on the negation; a countermodel is minimized (finitize on
// topologies, point quotient otherwise) and replayed before it is returned.
Verdict decide_valid(const Formula& f, const SearchBudget& budget = {});

}  // namespace topologic
