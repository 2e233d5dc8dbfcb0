#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topologic/formula.hpp"
#include "topologic/semantics.hpp"
#include "topologic/space.hpp"

namespace topologic {

// Indices into a host space's opens, ascending (hence canonical order).
using OpenIds = std::vector<std::size_t>;

// A finite family of host opens closed under pairwise intersection.
class Splitting {
 public:
  // Throws InvalidInput if an id is out of range or the family is not closed
  // under intersection.
  Splitting(SubsetSpace host, OpenIds family);

  const SubsetSpace& host() const { return host_; }
  const OpenIds& family() const { return family_; }
  bool contains_open(std::size_t id) const;

 private:
  SubsetSpace host_;
  OpenIds family_;
};

// Rem_F(U) = down(U) minus the down-sets of the members U is not below. Works
// for any family; `u` must be a member.
OpenIds remainder(const SubsetSpace& host, const OpenIds& family, std::size_t u);
OpenIds remainder(const Splitting& split, std::size_t u);

// Opens below some member.
OpenIds down_set(const SubsetSpace& host, const OpenIds& family);

// Least member containing the open, if any (the class representative).
std::optional<std::size_t> hull(const SubsetSpace& host, const OpenIds& family, std::size_t v);

struct EquivClass {
  std::size_t representative = 0;  // the maximum of the class
  OpenIds members;
};

// Remainder classes, one per member, in member order. Computed both from the
// remainder definition and from the relation "below the same members";
// throws VerificationFailure if the two disagree.
std::vector<EquivClass> equiv_classes(const Splitting& split);

// Pointwise constancy of f's truth value over the class.
bool is_stable_for(const Model& model, const OpenIds& cls, const Formula& f);
bool is_stable_for(const Model& model, const Extension& ext, const OpenIds& cls);

// Least superset closed under union and intersection (as open ids).
OpenIds lattice_closure(const SubsetSpace& host, OpenIds family);
OpenIds intersection_closure(const SubsetSpace& host, OpenIds family);

// Least family of point sets containing every atom's extension and closed
// under complement, intersection and interior. Being a finite Boolean algebra
// it is stored by its atoms (blocks); members are the unions of blocks.
struct GeneratedFamily {
  std::vector<PointSet> blocks;  // ascending

  bool contains(PointSet s) const;
  std::vector<PointSet> members() const;  // canonical order
};

// Requires a topology; throws BudgetExceeded beyond 20 blocks.
GeneratedFamily generated_family(const Model& model);

struct StableSplittings {
  Formula target;
  std::vector<Formula> subformulas;  // desugared, post-order
  std::vector<OpenIds> families;     // parallel to subformulas
  GeneratedFamily generated;
  bool used_fallback = false;        // some witness came from outside the generated family

  const OpenIds& family_of(const Formula& desugared) const;
  const OpenIds& top_family() const { return families.back(); }
};

// Requires a topology.
StableSplittings build_stable_splittings(const Model& model, const Formula& f);

struct PartitionTheoremCheck {
  bool families_generated = true;  // each family inside the generated opens and contains X
  bool truth_sets_generated = true;  // U^psi in the generated family for U in family(psi)
  bool monotone_and_stable = true;   // nested along subformulas, stable for all of them
  std::string detail;
  bool ok() const { return families_generated && truth_sets_generated && monotone_and_stable; }
};

PartitionTheoremCheck verify_partition_theorem(const Model& model, const StableSplittings& s);

// Collapses points lying in the same opens and the same atoms. Classes are
// named x1, x2, ... in order of their least member.
struct Quotient {
  Model model;
  std::vector<std::size_t> point_map;  // original point -> quotient point
  std::map<World, World> world_map;
};

Quotient quotient_points(const Model& model);

struct Finitized {
  Model model;
  OpenIds family;  // stable family of the input model
  std::map<World, World> world_map;  // every input world -> output world
};

// Stable family for f, opens replaced by class representatives, then
// quotient_points. Only atoms of f are kept. Requires a topology.
Finitized finitize(const Model& model, const Formula& f);

struct BasisReport {
  Model basis_model;
  bool worlds_agree = true;
  bool validity_agrees = true;
  std::string detail;
};

// `basis` lists host opens. Throws InvalidInput unless it is closed under
// union and generates every open by unions.
BasisReport restrict_to_basis(const Model& model, const std::vector<PointSet>& basis,
                              const std::vector<Formula>& test_formulas);

// For every V in the family and x in V, some basis member U with x in U, U
// inside V and U in Rem_F(V). Returns the first (V, x) without one.
std::optional<std::pair<std::size_t, std::size_t>> basis_remainder_witness(
    const SubsetSpace& host, const std::vector<PointSet>& basis, const OpenIds& family);

nlohmann::json splitting_report(const Model& model, const StableSplittings& s);

}  // namespace topologic
