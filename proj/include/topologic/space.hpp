#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace topologic {

// A set of points as a bitmask over the space's point indices.
using PointSet = std::uint64_t;

inline constexpr std::size_t kMaxPoints = 64;

inline bool contains(PointSet set, std::size_t point) { return (set >> point) & 1U; }
inline bool is_subset(PointSet a, PointSet b) { return (a & ~b) == 0; }
inline int cardinality(PointSet s) { return std::popcount(s); }
inline PointSet full_set(std::size_t n) {
  return n >= 64 ? ~PointSet{0} : (PointSet{1} << n) - 1;
}

// Canonical order on opens: by cardinality, then by mask value. Smaller
// opens come first and the full set last.
bool canonical_less(PointSet a, PointSet b);

// Sorts into canonical order and removes duplicates.
std::vector<PointSet> canonical_family(std::vector<PointSet> family);

// A finite subset space (X, O). Points are kept sorted by name; opens are
// distinct, in canonical order, and include the full point set.
class SubsetSpace {
 public:
  SubsetSpace() = default;
  // Points are sorted and opens remapped accordingly. Throws InvalidInput on
  // duplicate point names, > 64 points, opens outside X or X missing.
  SubsetSpace(std::vector<std::string> points, std::vector<PointSet> opens);

  // Points named p0..p{n-1}.
  static SubsetSpace numbered(std::size_t n, std::vector<PointSet> opens);

  std::size_t point_count() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::vector<PointSet>& opens() const { return opens_; }
  PointSet full() const { return full_set(points_.size()); }

  std::optional<std::size_t> point_index(const std::string& name) const;
  std::optional<std::size_t> open_index(PointSet open) const;

  // Opens V (by index) with V contained in opens()[u], canonical order.
  const std::vector<std::size_t>& opens_below(std::size_t u) const { return below_[u]; }

  bool has_empty() const { return !opens_.empty() && opens_.front() == 0; }

  std::string render(PointSet set) const;  // "{p0,p1}"

  friend bool operator==(const SubsetSpace&, const SubsetSpace&) = default;

 private:
  void index();

  std::vector<std::string> points_;
  std::vector<PointSet> opens_;
  std::vector<std::vector<std::size_t>> below_;
};

// A pointed-product element (x, U) with x in U. Ordered by point, then open.
struct World {
  std::size_t point = 0;
  std::size_t open = 0;
  friend auto operator<=>(const World&, const World&) = default;
};

// A model (X, O, i). Atoms missing from the valuation denote the empty set.
class Model {
 public:
  Model() = default;
  Model(SubsetSpace space, std::map<std::string, PointSet> valuation);

  const SubsetSpace& space() const { return space_; }
  const std::map<std::string, PointSet>& valuation() const { return valuation_; }
  PointSet value(const std::string& atom) const;

  bool is_world(const World& w) const;
  // Every world, ordered by point then open.
  std::vector<World> worlds() const;
  std::string render(const World& w) const;  // "(p0,{p0,p1})"

  friend bool operator==(const Model&, const Model&) = default;

 private:
  SubsetSpace space_;
  std::map<std::string, PointSet> valuation_;
};

bool closed_under_union(std::span<const PointSet> family);
bool closed_under_intersection(std::span<const PointSet> family);

enum class ClosureOps { Union = 1, Intersection = 2, Both = 3 };

// Least superset of the opens closed under the selected binary operations,
// optionally with the empty set adjoined.
SubsetSpace close_under(const SubsetSpace& space, ClosureOps ops, bool adjoin_empty = false);
std::vector<PointSet> close_family(std::vector<PointSet> family, ClosureOps ops);

bool is_topology(const SubsetSpace& space);
bool is_lattice(const SubsetSpace& space);  // closed under union and intersection

// Both reject spaces that are not topologies.
PointSet interior(const SubsetSpace& space, PointSet set);
PointSet closure(const SubsetSpace& space, PointSet set);

// Model file format: {"points": [...], "opens": [[...], ...], "valuation": {...}}.
Model model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const Model& m);
SubsetSpace space_from_json(const nlohmann::json& j);
nlohmann::json space_to_json(const SubsetSpace& s);
nlohmann::json set_to_json(const SubsetSpace& s, PointSet set);
PointSet set_from_json(const SubsetSpace& s, const nlohmann::json& j);

Model load_model(const std::string& path);
void save_model(const std::string& path, const Model& m);

}  // namespace topologic
