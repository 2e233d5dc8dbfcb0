#include "topologic/frames.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>

#include "topologic/error.hpp"

namespace topologic {

Relation empty_relation(std::size_t n) { return Relation(n, boost::dynamic_bitset<>(n)); }

Relation identity_relation(std::size_t n) {
  Relation r = empty_relation(n);
  for (std::size_t i = 0; i < n; ++i) r[i].set(i);
  return r;
}

Relation compose(const Relation& first, const Relation& second) {
  Relation out = empty_relation(first.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t k = first[i].find_first(); k != boost::dynamic_bitset<>::npos; k = first[i].find_next(k))
      out[i] |= second[k];
  return out;
}

Relation converse(const Relation& r) {
  Relation out = empty_relation(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = r[i].find_first(); j != boost::dynamic_bitset<>::npos; j = r[i].find_next(j))
      out[j].set(i);
  return out;
}

std::optional<std::size_t> BimodalFrame::world_index(const std::string& name) const {
  auto it = std::find(worlds.begin(), worlds.end(), name);
  if (it == worlds.end()) return std::nullopt;
  return static_cast<std::size_t>(it - worlds.begin());
}

void BimodalFrame::validate() const {
  const std::size_t n = worlds.size();
  std::set<std::string> seen;
  for (const auto& w : worlds) {
    if (w.empty()) throw InvalidInput("world names must be nonempty");
    if (!seen.insert(w).second) throw InvalidInput("duplicate world '" + w + "'");
  }
  for (const Relation* r : {&r_effort, &r_knowledge}) {
    if (r->size() != n) throw InvalidInput("relation size does not match the world count");
    for (const auto& row : *r)
      if (row.size() != n) throw InvalidInput("relation row size does not match the world count");
  }
}

namespace {

std::string render_set(const std::vector<std::string>& points, PointSet s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (contains(s, i)) {
      if (!first) out += ",";
      out += points[i];
      first = false;
    }
  return out + "}";
}

std::string padded(const std::string& prefix, std::size_t i, std::size_t n) {
  std::string d = std::to_string(i);
  std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  return prefix + std::string(width - d.size(), '0') + d;
}

}  // namespace

SubsetFrame subset_frame(const std::vector<std::string>& points, const std::vector<PointSet>& family) {
  if (std::set<std::string>(points.begin(), points.end()).size() != points.size())
    throw InvalidInput("duplicate point name");
  if (std::set<PointSet>(family.begin(), family.end()).size() != family.size())
    throw InvalidInput("duplicate member in family");
  if (points.size() > 64) throw InvalidInput("at most 64 points are supported");
  for (PointSet u : family)
    if (!is_subset(u, full_set(points.size()))) throw InvalidInput("family member outside the points");
  SubsetFrame out;
  for (std::size_t x = 0; x < points.size(); ++x)
    for (std::size_t u = 0; u < family.size(); ++u)
      if (contains(family[u], x)) out.worlds.push_back(World{x, u});
  const std::size_t n = out.worlds.size();
  out.frame.r_effort = empty_relation(n);
  out.frame.r_knowledge = empty_relation(n);
  for (std::size_t i = 0; i < n; ++i) {
    const World& a = out.worlds[i];
    out.frame.worlds.push_back("(" + points[a.point] + "," + render_set(points, family[a.open]) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      const World& b = out.worlds[j];
      if (a.point == b.point && is_subset(family[b.open], family[a.open])) out.frame.r_effort[i].set(j);
      if (a.open == b.open) out.frame.r_knowledge[i].set(j);
    }
  }
  return out;
}

SubsetFrame subset_frame(const SubsetSpace& space) { return subset_frame(space.points(), space.opens()); }

SubsetFrame subset_frame(const Model& model) { return subset_frame(model.space()); }

std::string to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::holds: return "holds";
    case ConditionStatus::fails: return "fails";
    case ConditionStatus::not_evaluated: return "not-evaluated";
  }
  return "?";
}

bool ConditionReport::all_hold(int last) const {
  for (int id = 1; id <= last; ++id)
    if (!holds(id)) return false;
  return true;
}

namespace {

using Bits = boost::dynamic_bitset<>;
constexpr std::size_t npos = Bits::npos;

const std::array<const char*, 8> kConditionNames{
    "effort preorder", "knowledge equivalence", "commutation", "ending points",
    "extensionality",  "union",                 "intersection", "strongly generated"};

// Relations and derived tables shared by the checks.
struct Tables {
  std::size_t n;
  const Relation& r1;       // effort
  const Relation& r2;       // knowledge
  Relation pred1;           // t -> {s : s r1 t}
  Relation pred2;           // s -> {t : t r2 s}
  Relation r12;             // r1 then r2
  Relation r21;             // r2 then r1
  Relation pred12;          // s -> {t : t r12 s}
  Relation pred21;          // s -> {t : t r21 s}

  explicit Tables(const BimodalFrame& f)
      : n(f.size()),
        r1(f.r_effort),
        r2(f.r_knowledge),
        pred1(converse(f.r_effort)),
        pred2(converse(f.r_knowledge)),
        r12(compose(f.r_effort, f.r_knowledge)),
        r21(compose(f.r_knowledge, f.r_effort)),
        pred12(converse(r12)),
        pred21(converse(r21)) {}
};

ConditionResult fail(ConditionResult r, std::vector<std::size_t> witness, std::string detail) {
  r.status = ConditionStatus::fails;
  r.witness = std::move(witness);
  r.detail = std::move(detail);
  return r;
}

ConditionResult preorder_or_equivalence(ConditionResult r, const Relation& rel, bool symmetric) {
  const std::size_t n = rel.size();
  for (std::size_t a = 0; a < n; ++a)
    if (!rel[a][a]) return fail(r, {a}, "not reflexive");
  if (symmetric)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = rel[a].find_first(); b != npos; b = rel[a].find_next(b))
        if (!rel[b][a]) return fail(r, {a, b}, "not symmetric");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = rel[a].find_first(); b != npos; b = rel[a].find_next(b))
      if (!rel[b].is_subset_of(rel[a])) {
        Bits missing = rel[b] - rel[a];
        return fail(r, {a, b, missing.find_first()}, "not transitive");
      }
  r.status = ConditionStatus::holds;
  return r;
}

ConditionResult commutation(ConditionResult r, const Tables& t) {
  for (std::size_t s = 0; s < t.n; ++s)
    if (!t.r12[s].is_subset_of(t.r21[s])) {
      std::size_t target = (t.r12[s] - t.r21[s]).find_first();
      std::size_t mid = (t.r1[s] & t.pred2[target]).find_first();
      return fail(r, {s, mid, target}, "effort then knowledge reaches a world that knowledge then effort misses");
    }
  r.status = ConditionStatus::holds;
  return r;
}

Bits ending_candidates(const Tables& t, std::size_t s) {
  Bits common(t.n);
  common.set();
  for (std::size_t u = t.r1[s].find_first(); u != npos; u = t.r1[s].find_next(u)) common &= t.r1[u];
  return common;
}

ConditionResult ending_points(ConditionResult r, const Tables& t) {
  for (std::size_t s = 0; s < t.n; ++s)
    if (ending_candidates(t, s).none()) return fail(r, {s}, "no ending point above this world");
  r.status = ConditionStatus::holds;
  return r;
}

ConditionResult extensionality(ConditionResult r, const Tables& t) {
  // compatible[a] = worlds sharing an effort successor with a
  Relation compatible = compose(t.r1, t.pred1);
  auto covered = [&](std::size_t s, std::size_t s2) {
    for (std::size_t u = t.pred2[s].find_first(); u != npos; u = t.pred2[s].find_next(u))
      if (!compatible[u].intersects(t.pred2[s2])) return false;
    return true;
  };
  for (std::size_t s = 0; s < t.n; ++s)
    for (std::size_t s2 = s + 1; s2 < t.n; ++s2)
      if (compatible[s][s2] && covered(s, s2) && covered(s2, s))
        return fail(r, {s, s2}, "distinct worlds with the same point and view");
  r.status = ConditionStatus::holds;
  return r;
}

// The upper bound s' must itself reach s1 and s2; see the ledger.
ConditionResult union_condition(ConditionResult r, const Tables& t) {
  for (std::size_t s1 = 0; s1 < t.n; ++s1)
    for (std::size_t s2 = s1 + 1; s2 < t.n; ++s2) {
      Bits bounds = t.pred21[s1] & t.pred21[s2];
      if (bounds.none()) continue;
      Bits reach = t.pred12[s1] | t.pred12[s2];
      bool found = false;
      for (std::size_t b = bounds.find_first(); b != npos && !found; b = bounds.find_next(b))
        found = t.pred2[b].is_subset_of(reach);
      if (!found) return fail(r, {s1, s2}, "bounded pair without a union world");
    }
  r.status = ConditionStatus::holds;
  return r;
}

ConditionResult strongly_generated(ConditionResult r, const Tables& t) {
  for (std::size_t s = 0; s < t.n; ++s)
    if (t.r21[s].all()) {
      r.status = ConditionStatus::holds;
      return r;
    }
  return fail(r, {}, "no world reaches every world by knowledge then effort");
}

// Worlds s' whose whole class lies below: {s' : pred2(s') subset of v}.
bool some_world_covers(const Tables& t, const Bits& v) {
  for (std::size_t s = 0; s < t.n; ++s)
    if (v.is_subset_of(t.pred12[s])) return true;
  return false;
}

// A set of worlds matters only through the distinct knowledge-predecessor
// sets of its members, so quantify over sets of those.
ConditionResult intersection_condition(ConditionResult r, const Tables& t) {
  std::vector<Bits> classes;
  std::map<Bits, std::size_t> class_of;
  std::vector<std::size_t> member_class(t.n);
  for (std::size_t s = 0; s < t.n; ++s) {
    auto [it, fresh] = class_of.emplace(t.pred2[s], classes.size());
    if (fresh) classes.push_back(t.pred2[s]);
    member_class[s] = it->second;
  }
  const std::size_t k = classes.size();
  if (k > kMaxIntersectionClasses) {
    r.status = ConditionStatus::not_evaluated;
    r.detail = std::to_string(k) + " knowledge classes exceed the cap of " + std::to_string(kMaxIntersectionClasses);
    return r;
  }
  // hit[w]: classes with a member effort-below w; gen[w]: classes of worlds effort-below w
  std::vector<std::uint32_t> hit(t.n, 0), gen(t.n, 0);
  for (std::size_t w = 0; w < t.n; ++w) {
    for (std::size_t c = 0; c < k; ++c)
      if (classes[c].intersects(t.pred1[w])) hit[w] |= 1U << c;
    for (std::size_t s = t.pred1[w].find_first(); s != npos; s = t.pred1[w].find_next(s))
      gen[w] |= 1U << member_class[s];
  }
  for (std::uint32_t chosen = 1; chosen < (1U << k); ++chosen) {
    std::optional<std::size_t> base;
    for (std::size_t w = 0; w < t.n && !base; ++w)
      if ((chosen & ~gen[w]) == 0) base = w;
    if (!base) continue;
    Bits members(t.n), reached(t.n);
    for (std::size_t c = 0; c < k; ++c)
      if ((chosen >> c) & 1U) members |= classes[c];
    for (std::size_t w = 0; w < t.n; ++w)
      if ((chosen & ~hit[w]) == 0) reached |= t.pred1[w];
    reached &= members;
    if (!some_world_covers(t, reached)) {
      std::vector<std::size_t> witness;
      for (std::size_t s = t.pred1[*base].find_first(); s != npos; s = t.pred1[*base].find_next(s))
        if (((chosen >> member_class[s]) & 1U) &&
            std::none_of(witness.begin(), witness.end(),
                         [&](std::size_t x) { return member_class[x] == member_class[s]; }))
          witness.push_back(s);
      return fail(r, witness, "effort-bounded set of worlds without an intersection world");
    }
  }
  r.status = ConditionStatus::holds;
  return r;
}

ConditionResult blank(int id) {
  ConditionResult r;
  r.id = id;
  r.name = kConditionNames[static_cast<std::size_t>(id - 1)];
  return r;
}

}  // namespace

ConditionReport check_conditions(const BimodalFrame& frame, Execution exec) {
  frame.validate();
  const Tables t(frame);
  ConditionReport report;
  report.conditions.resize(8);
  for_each_index(
      8,
      [&](std::size_t i) {
        const int id = static_cast<int>(i) + 1;
        ConditionResult r = blank(id);
        switch (id) {
          case 1: r = preorder_or_equivalence(r, t.r1, false); break;
          case 2: r = preorder_or_equivalence(r, t.r2, true); break;
          case 3: r = commutation(r, t); break;
          case 4: r = ending_points(r, t); break;
          case 5: r = extensionality(r, t); break;
          case 6: r = union_condition(r, t); break;
          case 7: r = intersection_condition(r, t); break;
          default: r = strongly_generated(r, t); break;
        }
        report.conditions[i] = std::move(r);
      },
      exec);
  return report;
}

ConditionResult intersection_condition_naive(const BimodalFrame& frame, std::size_t max_worlds) {
  frame.validate();
  const std::size_t n = frame.size();
  if (n > max_worlds || n > 20)
    throw BudgetExceeded("naive intersection check limited to " + std::to_string(max_worlds) + " worlds");
  const Tables t(frame);
  ConditionResult r = blank(7);
  for (std::uint32_t sigma = 1; sigma < (1U << n); ++sigma) {
    Bits set(n);
    for (std::size_t i = 0; i < n; ++i)
      if ((sigma >> i) & 1U) set.set(i);
    bool bounded = false;
    for (std::size_t s = 0; s < n && !bounded; ++s) bounded = set.is_subset_of(t.pred1[s]);
    if (!bounded) continue;
    // every tuple t_i r2 s_i with a common effort successor w contributes
    // exactly the worlds pred2(s_i) & pred1(w), chosen independently per i
    Bits reached(n);
    for (std::size_t w = 0; w < n; ++w) {
      bool all_choices = true;
      Bits values(n);
      for (std::size_t i = set.find_first(); i != npos && all_choices; i = set.find_next(i)) {
        Bits choices = t.pred2[i] & t.pred1[w];
        all_choices = choices.any();
        values |= choices;
      }
      if (all_choices) reached |= values;
    }
    if (!some_world_covers(t, reached)) {
      std::vector<std::size_t> witness;
      for (std::size_t i = set.find_first(); i != npos; i = set.find_next(i)) witness.push_back(i);
      return fail(r, witness, "effort-bounded set of worlds without an intersection world");
    }
  }
  r.status = ConditionStatus::holds;
  return r;
}

bool is_isomorphism(const BimodalFrame& a, const BimodalFrame& b, const std::vector<std::size_t>& map) {
  const std::size_t n = a.size();
  if (b.size() != n || map.size() != n) return false;
  std::vector<bool> used(n, false);
  for (std::size_t m : map) {
    if (m >= n || used[m]) return false;
    used[m] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.r_effort[i][j] != b.r_effort[map[i]][map[j]] || a.r_knowledge[i][j] != b.r_knowledge[map[i]][map[j]])
        return false;
  return true;
}

RecoveredSpace frame_to_space(const BimodalFrame& frame) {
  ConditionReport report = check_conditions(frame);
  if (!report.all_hold(7)) {
    std::string failed;
    for (int id = 1; id <= 7; ++id)
      if (!report.holds(id)) failed += (failed.empty() ? "" : ", ") + std::to_string(id);
    throw InvalidInput("frame violates condition(s) " + failed);
  }
  const Tables t(frame);
  const std::size_t n = frame.size();
  RecoveredSpace out;
  if (n == 0) return out;

  std::vector<std::size_t> end(n);
  for (std::size_t s = 0; s < n; ++s) end[s] = ending_candidates(t, s).find_first();
  std::vector<std::size_t> ends(end.begin(), end.end());
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  if (ends.size() > 64) throw InvalidInput("recovered space would exceed 64 points");
  std::map<std::size_t, std::size_t> point_of;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    point_of[ends[i]] = i;
    out.points.push_back(padded("q", i, ends.size()));
  }
  out.point_world = ends;

  std::vector<PointSet> raw;
  std::vector<std::size_t> class_of(n);
  std::map<Bits, std::size_t> classes;
  for (std::size_t s = 0; s < n; ++s) {
    auto [it, fresh] = classes.emplace(t.r2[s], raw.size());
    if (fresh) {
      PointSet members = 0;
      for (std::size_t u = t.r2[s].find_first(); u != npos; u = t.r2[s].find_next(u))
        members |= PointSet{1} << point_of.at(end[u]);
      raw.push_back(members);
    }
    class_of[s] = it->second;
  }
  out.family = canonical_family(raw);
  if (out.family.size() != raw.size())
    throw VerificationFailure("two knowledge classes recover the same subset");
  std::vector<std::size_t> slot(raw.size());
  for (std::size_t c = 0; c < raw.size(); ++c)
    slot[c] = static_cast<std::size_t>(std::find(out.family.begin(), out.family.end(), raw[c]) - out.family.begin());

  SubsetFrame rebuilt = subset_frame(out.points, out.family);
  std::map<World, std::size_t> rebuilt_index;
  for (std::size_t i = 0; i < rebuilt.worlds.size(); ++i) rebuilt_index[rebuilt.worlds[i]] = i;
  std::vector<std::size_t> map(n);
  for (std::size_t s = 0; s < n; ++s) {
    World w{point_of.at(end[s]), slot[class_of[s]]};
    out.world_map.push_back(w);
    auto it = rebuilt_index.find(w);
    if (it == rebuilt_index.end()) throw VerificationFailure("world maps outside the recovered pointed product");
    map[s] = it->second;
  }
  if (!is_isomorphism(frame, rebuilt.frame, map))
    throw VerificationFailure("recovered subset frame is not isomorphic to the input");
  if (std::find(out.family.begin(), out.family.end(), full_set(out.points.size())) != out.family.end())
    out.space = SubsetSpace(out.points, out.family);
  return out;
}

namespace {

nlohmann::json pairs(const BimodalFrame& f, const Relation& r) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = r[i].find_first(); j != npos; j = r[i].find_next(j))
      out.push_back({f.worlds[i], f.worlds[j]});
  return out;
}

Relation pairs_from(const nlohmann::json& j, const BimodalFrame& f, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InvalidInput(std::string("frame needs an array '") + key + "'");
  Relation r = empty_relation(f.size());
  for (const auto& p : j.at(key)) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw InvalidInput(std::string("'") + key + "' entries must be pairs of world names");
    auto a = f.world_index(p[0].get<std::string>());
    auto b = f.world_index(p[1].get<std::string>());
    if (!a || !b) throw InvalidInput(std::string("'") + key + "' refers to an unknown world");
    r[*a].set(*b);
  }
  return r;
}

}  // namespace

nlohmann::json frame_to_json(const BimodalFrame& f) {
  return {{"worlds", f.worlds}, {"r_effort", pairs(f, f.r_effort)}, {"r_knowledge", pairs(f, f.r_knowledge)}};
}

BimodalFrame frame_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("worlds") || !j.at("worlds").is_array())
    throw InvalidInput("frame must be an object with a 'worlds' array");
  BimodalFrame f;
  for (const auto& w : j.at("worlds")) {
    if (!w.is_string()) throw InvalidInput("world names must be strings");
    f.worlds.push_back(w.get<std::string>());
  }
  f.r_effort = empty_relation(f.size());
  f.r_knowledge = empty_relation(f.size());
  f.validate();
  f.r_effort = pairs_from(j, f, "r_effort");
  f.r_knowledge = pairs_from(j, f, "r_knowledge");
  return f;
}

nlohmann::json report_to_json(const BimodalFrame& f, const ConditionReport& r) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : r.conditions) {
    nlohmann::json witness = nlohmann::json::array();
    for (std::size_t w : c.witness) witness.push_back(f.worlds[w]);
    conds.push_back({{"id", c.id}, {"name", c.name}, {"status", to_string(c.status)}, {"witness", witness},
                     {"detail", c.detail}});
  }
  return {{"conditions", conds}, {"all_hold", r.all_hold()}};
}

}  // namespace topologic
