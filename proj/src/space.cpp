#include "topologic/space.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "topologic/error.hpp"
#include "topologic/formula.hpp"

namespace topologic {

bool canonical_less(PointSet a, PointSet b) {
  int ca = cardinality(a), cb = cardinality(b);
  if (ca != cb) return ca < cb;
  return a < b;
}

std::vector<PointSet> canonical_family(std::vector<PointSet> family) {
  std::sort(family.begin(), family.end(), canonical_less);
  family.erase(std::unique(family.begin(), family.end()), family.end());
  return family;
}

SubsetSpace::SubsetSpace(std::vector<std::string> points, std::vector<PointSet> opens) {
  if (points.size() > kMaxPoints)
    throw InvalidInput("at most " + std::to_string(kMaxPoints) + " points are supported");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (points[order[i]] == points[order[i - 1]])
      throw InvalidInput("duplicate point id '" + points[order[i]] + "'");
  // old index -> new index
  std::vector<std::size_t> rank(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  const PointSet all = full_set(points.size());
  std::vector<PointSet> remapped;
  remapped.reserve(opens.size());
  for (PointSet u : opens) {
    if (!is_subset(u, all)) throw InvalidInput("open refers to a point outside X");
    PointSet v = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (contains(u, i)) v |= PointSet{1} << rank[i];
    remapped.push_back(v);
  }
  for (std::size_t i = 0; i < order.size(); ++i) points_.push_back(std::move(points[order[i]]));
  opens_ = canonical_family(std::move(remapped));
  if (opens_.empty() || opens_.back() != all)
    throw InvalidInput("the full point set must be one of the opens");
  index();
}

SubsetSpace SubsetSpace::numbered(std::size_t n, std::vector<PointSet> opens) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  if (n > 10) {
    // zero-pad so that name order agrees with index order
    std::size_t width = std::to_string(n - 1).size();
    for (std::size_t i = 0; i < n; ++i) {
      std::string d = std::to_string(i);
      names[i] = "p" + std::string(width - d.size(), '0') + d;
    }
  }
  return SubsetSpace(std::move(names), std::move(opens));
}

void SubsetSpace::index() {
  below_.assign(opens_.size(), {});
  for (std::size_t u = 0; u < opens_.size(); ++u)
    for (std::size_t v = 0; v <= u; ++v)
      if (is_subset(opens_[v], opens_[u])) below_[u].push_back(v);
}

std::optional<std::size_t> SubsetSpace::point_index(const std::string& name) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), name);
  if (it == points_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

std::optional<std::size_t> SubsetSpace::open_index(PointSet open) const {
  auto it = std::lower_bound(opens_.begin(), opens_.end(), open, canonical_less);
  if (it == opens_.end() || *it != open) return std::nullopt;
  return static_cast<std::size_t>(it - opens_.begin());
}

std::string SubsetSpace::render(PointSet set) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!contains(set, i)) continue;
    if (!first) out += ',';
    out += points_[i];
    first = false;
  }
  return out + "}";
}

Model::Model(SubsetSpace space, std::map<std::string, PointSet> valuation)
    : space_(std::move(space)), valuation_(std::move(valuation)) {
  for (const auto& [atom, set] : valuation_) {
    if (!is_valid_atom_name(atom)) throw InvalidInput("invalid atom name '" + atom + "' in valuation");
    if (!is_subset(set, space_.full())) throw InvalidInput("valuation of '" + atom + "' leaves X");
  }
}

PointSet Model::value(const std::string& atom) const {
  auto it = valuation_.find(atom);
  return it == valuation_.end() ? 0 : it->second;
}

bool Model::is_world(const World& w) const {
  return w.point < space_.point_count() && w.open < space_.opens().size() &&
         contains(space_.opens()[w.open], w.point);
}

std::vector<World> Model::worlds() const {
  std::vector<World> out;
  for (std::size_t x = 0; x < space_.point_count(); ++x)
    for (std::size_t u = 0; u < space_.opens().size(); ++u)
      if (contains(space_.opens()[u], x)) out.push_back({x, u});
  return out;
}

std::string Model::render(const World& w) const {
  return "(" + space_.points().at(w.point) + "," + space_.render(space_.opens().at(w.open)) + ")";
}

bool closed_under_union(std::span<const PointSet> family) {
  std::set<PointSet> s(family.begin(), family.end());
  for (PointSet a : family)
    for (PointSet b : family)
      if (!s.count(a | b)) return false;
  return true;
}

bool closed_under_intersection(std::span<const PointSet> family) {
  std::set<PointSet> s(family.begin(), family.end());
  for (PointSet a : family)
    for (PointSet b : family)
      if (!s.count(a & b)) return false;
  return true;
}

std::vector<PointSet> close_family(std::vector<PointSet> family, ClosureOps ops) {
  bool with_union = static_cast<int>(ops) & static_cast<int>(ClosureOps::Union);
  bool with_inter = static_cast<int>(ops) & static_cast<int>(ClosureOps::Intersection);
  std::set<PointSet> s(family.begin(), family.end());
  std::vector<PointSet> work(s.begin(), s.end());
  // worklist fixpoint: combine each new member with every member seen so far
  for (std::size_t i = 0; i < work.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      PointSet a = work[i], b = work[j];
      if (with_union && s.insert(a | b).second) work.push_back(a | b);
      if (with_inter && s.insert(a & b).second) work.push_back(a & b);
    }
  }
  return canonical_family(std::move(work));
}

SubsetSpace close_under(const SubsetSpace& space, ClosureOps ops, bool adjoin_empty) {
  std::vector<PointSet> family = space.opens();
  if (adjoin_empty) family.push_back(0);
  return SubsetSpace(space.points(), close_family(std::move(family), ops));
}

bool is_topology(const SubsetSpace& space) {
  return space.has_empty() && is_lattice(space);
}

bool is_lattice(const SubsetSpace& space) {
  return closed_under_union(space.opens()) && closed_under_intersection(space.opens());
}

namespace {

void require_topology(const SubsetSpace& space) {
  if (!is_topology(space)) throw InvalidInput("operation requires a topology");
}

}  // namespace

PointSet interior(const SubsetSpace& space, PointSet set) {
  require_topology(space);
  PointSet out = 0;
  for (PointSet u : space.opens())
    if (is_subset(u, set)) out |= u;
  return out;
}

PointSet closure(const SubsetSpace& space, PointSet set) {
  return space.full() & ~interior(space, space.full() & ~set);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

PointSet names_to_set(const std::vector<std::string>& all, const nlohmann::json& arr,
                      const char* what) {
  if (!arr.is_array()) throw InvalidInput(std::string(what) + " must be an array of point ids");
  PointSet s = 0;
  for (const auto& p : arr) {
    if (!p.is_string()) throw InvalidInput(std::string(what) + " must contain point id strings");
    auto it = std::find(all.begin(), all.end(), p.get<std::string>());
    if (it == all.end()) throw InvalidInput("unknown point id '" + p.get<std::string>() + "'");
    s |= PointSet{1} << (it - all.begin());
  }
  return s;
}

}  // namespace

nlohmann::json set_to_json(const SubsetSpace& s, PointSet set) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < s.point_count(); ++i)
    if (contains(set, i)) arr.push_back(s.points()[i]);
  return arr;
}

PointSet set_from_json(const SubsetSpace& s, const nlohmann::json& j) {
  return names_to_set(s.points(), j, "point set");
}

SubsetSpace space_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("space must be a JSON object");
  if (!j.contains("points") || !j.contains("opens"))
    throw InvalidInput("space needs 'points' and 'opens'");
  const auto& jp = j.at("points");
  if (!jp.is_array()) throw InvalidInput("'points' must be an array");
  std::vector<std::string> points;
  for (const auto& p : jp) {
    if (!p.is_string()) throw InvalidInput("point ids must be strings");
    points.push_back(p.get<std::string>());
  }
  std::set<std::string> unique(points.begin(), points.end());
  if (unique.size() != points.size()) throw InvalidInput("duplicate point id");
  if (points.size() > kMaxPoints) throw InvalidInput("too many points");
  const auto& jo = j.at("opens");
  if (!jo.is_array()) throw InvalidInput("'opens' must be an array");
  std::vector<PointSet> opens;
  for (const auto& o : jo) opens.push_back(names_to_set(points, o, "open"));
  return SubsetSpace(std::move(points), std::move(opens));
}

nlohmann::json space_to_json(const SubsetSpace& s) {
  nlohmann::json j;
  j["points"] = s.points();
  nlohmann::json opens = nlohmann::json::array();
  for (PointSet u : s.opens()) opens.push_back(set_to_json(s, u));
  j["opens"] = opens;
  return j;
}

Model model_from_json(const nlohmann::json& j) {
  SubsetSpace space = space_from_json(j);
  std::map<std::string, PointSet> valuation;
  if (j.contains("valuation")) {
    const auto& jv = j.at("valuation");
    if (!jv.is_object()) throw InvalidInput("'valuation' must be an object");
    for (const auto& [atom, pts] : jv.items()) {
      if (!is_valid_atom_name(atom)) throw InvalidInput("invalid atom name '" + atom + "'");
      valuation[atom] = names_to_set(space.points(), pts, "valuation");
    }
  }
  return Model(std::move(space), std::move(valuation));
}

nlohmann::json model_to_json(const Model& m) {
  nlohmann::json j = space_to_json(m.space());
  nlohmann::json v = nlohmann::json::object();
  for (const auto& [atom, set] : m.valuation()) v[atom] = set_to_json(m.space(), set);
  j["valuation"] = v;
  return j;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

void save_model(const std::string& path, const Model& m) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << model_to_json(m).dump(2) << '\n';
}

}  // namespace topologic
