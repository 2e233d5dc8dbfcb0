#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <json.hpp>

#include "topologic/parallel.hpp"
#include "topologic/space.hpp"

namespace topologic {

// Adjacency rows: row[i][j] set iff i relates to j.
using Relation = std::vector<boost::dynamic_bitset<>>;

Relation empty_relation(std::size_t n);
Relation identity_relation(std::size_t n);
Relation compose(const Relation& first, const Relation& second);  // first, then second
Relation converse(const Relation& r);

// Worlds are named by strings; effort shrinks the view at a fixed point,
// knowledge moves between points of a fixed view.
struct BimodalFrame {
  std::vector<std::string> worlds;
  Relation r_effort;
  Relation r_knowledge;

  std::size_t size() const { return worlds.size(); }
  std::optional<std::size_t> world_index(const std::string& name) const;
  void validate() const;  // throws InvalidInput
  friend bool operator==(const BimodalFrame&, const BimodalFrame&) = default;
};

struct SubsetFrame {
  BimodalFrame frame;
  std::vector<World> worlds;  // frame world i is worlds[i]; opens index the family
};

// Frame of the pointed product of (points, family); the family need not
// contain the full set. Worlds are ordered by point, then by open.
SubsetFrame subset_frame(const std::vector<std::string>& points, const std::vector<PointSet>& family);
SubsetFrame subset_frame(const SubsetSpace& space);
SubsetFrame subset_frame(const Model& model);

enum class ConditionStatus { holds, fails, not_evaluated };

std::string to_string(ConditionStatus s);

struct ConditionResult {
  int id = 0;  // 1..8
  std::string name;
  ConditionStatus status = ConditionStatus::not_evaluated;
  std::vector<std::size_t> witness;  // world indices of the least failing tuple
  std::string detail;
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;  // ids 1..8 in order

  const ConditionResult& at(int id) const { return conditions.at(static_cast<std::size_t>(id - 1)); }
  bool holds(int id) const { return at(id).status == ConditionStatus::holds; }
  bool all_hold(int last = 8) const;  // conditions 1..last
};

// The intersection condition quantifies over sets of worlds; it is decided
// over sets of knowledge classes instead, so the cap is on the class count.
inline constexpr std::size_t kMaxIntersectionClasses = 22;

ConditionReport check_conditions(const BimodalFrame& frame, Execution exec = Execution::parallel);

// Literal subset enumeration for the intersection condition; reference for
// small frames (throws BudgetExceeded above `max_worlds`).
ConditionResult intersection_condition_naive(const BimodalFrame& frame, std::size_t max_worlds = 12);

struct RecoveredSpace {
  std::vector<std::string> points;     // q0.. ordered by their ending world
  std::vector<std::size_t> point_world;  // ending world behind each point
  std::vector<PointSet> family;        // one member per knowledge class, canonical order
  std::vector<World> world_map;        // frame world -> (point, family index)
  std::optional<SubsetSpace> space;    // when the family contains every point
};

// Rebuilds the subset space of a frame satisfying conditions 1-7 and checks
// that its subset frame is isomorphic to the input via world_map. Throws
// InvalidInput (with the failed conditions) when the precondition fails.
RecoveredSpace frame_to_space(const BimodalFrame& frame);

// True iff `map` is a bijection preserving and reflecting both relations.
bool is_isomorphism(const BimodalFrame& a, const BimodalFrame& b, const std::vector<std::size_t>& map);

nlohmann::json frame_to_json(const BimodalFrame& f);
BimodalFrame frame_from_json(const nlohmann::json& j);  // throws InvalidInput
nlohmann::json report_to_json(const BimodalFrame& f, const ConditionReport& r);

}  // namespace topologic
