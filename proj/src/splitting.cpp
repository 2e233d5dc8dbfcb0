#include "topologic/splitting.hpp"

#include <algorithm>
#include <set>

#include "topologic/error.hpp"

namespace topologic {

namespace {

std::size_t id_of(const SubsetSpace& host, PointSet s, const char* what) {
  auto id = host.open_index(s);
  if (!id) throw InvalidInput(std::string(what) + " " + host.render(s) + " is not an open of the host");
  return *id;
}

bool member(const OpenIds& family, std::size_t id) {
  return std::binary_search(family.begin(), family.end(), id);
}

OpenIds normalized(OpenIds ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

OpenIds close_ids(const SubsetSpace& host, const OpenIds& family, ClosureOps ops) {
  std::vector<PointSet> sets;
  for (std::size_t id : family) sets.push_back(host.opens().at(id));
  OpenIds out;
  for (PointSet s : close_family(std::move(sets), ops)) out.push_back(id_of(host, s, "closure member"));
  return normalized(std::move(out));
}

void require_topology(const Model& model, const char* what) {
  if (!is_topology(model.space())) throw InvalidInput(std::string(what) + " requires a topology");
}

std::vector<OpenIds> sorted_classes(std::vector<OpenIds> classes) {
  for (auto& c : classes) c = normalized(std::move(c));
  std::sort(classes.begin(), classes.end());
  return classes;
}

}  // namespace

Splitting::Splitting(SubsetSpace host, OpenIds family) : host_(std::move(host)) {
  for (std::size_t id : family)
    if (id >= host_.opens().size()) throw InvalidInput("family refers to an unknown open");
  family_ = normalized(std::move(family));
  std::set<PointSet> sets;
  for (std::size_t id : family_) sets.insert(host_.opens()[id]);
  for (PointSet a : sets)
    for (PointSet b : sets)
      if (!sets.count(a & b)) throw InvalidInput("splitting family must be closed under intersection");
}

bool Splitting::contains_open(std::size_t id) const { return member(family_, id); }

OpenIds remainder(const SubsetSpace& host, const OpenIds& family, std::size_t u) {
  if (!member(family, u)) throw InvalidInput("remainder of an open outside the family");
  const auto& opens = host.opens();
  PointSet top = opens[u];
  OpenIds out;
  for (std::size_t v = 0; v < opens.size(); ++v) {
    if (!is_subset(opens[v], top)) continue;
    bool excluded = false;
    for (std::size_t w : family)
      if (!is_subset(top, opens[w]) && is_subset(opens[v], opens[w])) {
        excluded = true;
        break;
      }
    if (!excluded) out.push_back(v);
  }
  return out;
}

OpenIds remainder(const Splitting& split, std::size_t u) {
  return remainder(split.host(), split.family(), u);
}

OpenIds down_set(const SubsetSpace& host, const OpenIds& family) {
  OpenIds out;
  for (std::size_t v = 0; v < host.opens().size(); ++v)
    for (std::size_t w : family)
      if (is_subset(host.opens()[v], host.opens()[w])) {
        out.push_back(v);
        break;
      }
  return out;
}

std::optional<std::size_t> hull(const SubsetSpace& host, const OpenIds& family, std::size_t v) {
  PointSet meet = host.full();
  bool any = false;
  for (std::size_t w : family)
    if (is_subset(host.opens()[v], host.opens()[w])) {
      meet &= host.opens()[w];
      any = true;
    }
  if (!any) return std::nullopt;
  auto id = host.open_index(meet);
  if (!id || !member(family, *id)) return std::nullopt;
  return id;
}

std::vector<EquivClass> equiv_classes(const Splitting& split) {
  const SubsetSpace& host = split.host();
  std::vector<EquivClass> out;
  std::vector<OpenIds> via_remainders;
  for (std::size_t u : split.family()) {
    out.push_back({u, remainder(split, u)});
    via_remainders.push_back(out.back().members);
  }
  // V1 ~' V2 iff they lie below exactly the same members
  std::map<std::vector<bool>, OpenIds> by_signature;
  for (std::size_t v : down_set(host, split.family())) {
    std::vector<bool> sig;
    for (std::size_t w : split.family()) sig.push_back(is_subset(host.opens()[v], host.opens()[w]));
    by_signature[sig].push_back(v);
  }
  std::vector<OpenIds> via_relation;
  for (auto& [sig, cls] : by_signature) via_relation.push_back(cls);
  if (sorted_classes(via_remainders) != sorted_classes(via_relation))
    throw VerificationFailure("remainder classes differ from the induced equivalence classes");
  return out;
}

bool is_stable_for(const Model& model, const Extension& ext, const OpenIds& cls) {
  const auto& opens = model.space().opens();
  PointSet seen_true = 0, seen_false = 0;
  for (std::size_t v : cls) {
    seen_true |= ext[v];
    seen_false |= opens[v] & ~ext[v];
  }
  return (seen_true & seen_false) == 0;
}

bool is_stable_for(const Model& model, const OpenIds& cls, const Formula& f) {
  return is_stable_for(model, extension(model, f), cls);
}

OpenIds lattice_closure(const SubsetSpace& host, OpenIds family) {
  return close_ids(host, family, ClosureOps::Both);
}

OpenIds intersection_closure(const SubsetSpace& host, OpenIds family) {
  return close_ids(host, family, ClosureOps::Intersection);
}

// ---------------------------------------------------------------------------
// Generated family

bool GeneratedFamily::contains(PointSet s) const {
  for (PointSet b : blocks)
    if ((b & s) != 0 && (b & ~s) != 0) return false;
  return true;
}

std::vector<PointSet> GeneratedFamily::members() const {
  std::vector<PointSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << blocks.size()); ++mask) {
    PointSet s = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if ((mask >> i) & 1U) s |= blocks[i];
    out.push_back(s);
  }
  return canonical_family(std::move(out));
}

GeneratedFamily generated_family(const Model& model) {
  require_topology(model, "the generated family");
  const SubsetSpace& s = model.space();
  const std::size_t n = s.point_count();
  // least open around each point; the interior of S collects points whose
  // least open lies inside S
  std::vector<PointSet> nbhd(n, s.full());
  for (PointSet u : s.opens())
    for (std::size_t x = 0; x < n; ++x)
      if (contains(u, x)) nbhd[x] &= u;
  auto interior_of = [&](PointSet set) {
    PointSet out = 0;
    for (std::size_t x = 0; x < n; ++x)
      if (is_subset(nbhd[x], set)) out |= PointSet{1} << x;
    return out;
  };

  std::vector<PointSet> blocks;
  if (s.full() != 0) blocks.push_back(s.full());
  auto refine = [&](PointSet by) {
    std::vector<PointSet> next;
    for (PointSet b : blocks) {
      if (b & by) next.push_back(b & by);
      if (b & ~by) next.push_back(b & ~by);
    }
    bool changed = next.size() != blocks.size();
    blocks = std::move(next);
    return changed;
  };
  for (const auto& [atom, set] : model.valuation()) refine(set);

  constexpr std::size_t kMaxBlocks = 20;
  bool changed = true;
  while (changed) {
    changed = false;
    if (blocks.size() > kMaxBlocks)
      throw BudgetExceeded("generated family exceeds 2^" + std::to_string(kMaxBlocks) + " members");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << blocks.size()) && !changed; ++mask) {
      PointSet u = 0;
      for (std::size_t i = 0; i < blocks.size(); ++i)
        if ((mask >> i) & 1U) u |= blocks[i];
      changed = refine(interior_of(u));
    }
  }
  std::sort(blocks.begin(), blocks.end());
  return {blocks};
}

// ---------------------------------------------------------------------------
// Stable splittings

const OpenIds& StableSplittings::family_of(const Formula& desugared) const {
  auto it = std::find(subformulas.begin(), subformulas.end(), desugared);
  if (it == subformulas.end()) throw InvalidInput("not a subformula: " + print(desugared));
  return families[static_cast<std::size_t>(it - subformulas.begin())];
}

namespace {

std::vector<Formula> children(const Formula& f) {
  if (is_unary(f.op())) return {f.operand()};
  if (is_binary(f.op())) return {f.lhs(), f.rhs()};
  return {};
}

// Opens of the class, other than its maximum, where the truth value at some
// point differs from the one at the maximum.
OpenIds deviating(const Model& model, const Extension& ext, const OpenIds& cls, std::size_t top) {
  const auto& opens = model.space().opens();
  OpenIds out;
  for (std::size_t v : cls) {
    if (v == top || opens[v] == 0) continue;
    if ((ext[v] ^ (ext[top] & opens[v])) != 0) out.push_back(v);
  }
  return out;
}

}  // namespace

StableSplittings build_stable_splittings(const Model& model, const Formula& f) {
  require_topology(model, "stable splitting construction");
  const SubsetSpace& host = model.space();
  const std::size_t whole = host.opens().size() - 1;

  StableSplittings out;
  out.target = desugar(f);
  out.subformulas = subformulas(f);
  out.generated = generated_family(model);
  const auto exts = extensions(model, f);

  for (const Formula& g : out.subformulas) {
    OpenIds start{whole};
    for (const Formula& c : children(g)) {
      const OpenIds& fc = out.family_of(c);
      start.insert(start.end(), fc.begin(), fc.end());
    }
    OpenIds fam = lattice_closure(host, normalized(start));
    const Extension& ext = exts.at(g);

    for (;;) {
      std::optional<std::size_t> witness;
      for (std::size_t u : fam) {
        OpenIds cls = remainder(host, fam, u);
        if (is_stable_for(model, ext, cls)) continue;
        OpenIds cand = deviating(model, ext, cls, u);
        OpenIds preferred;
        for (std::size_t v : cand)
          if (out.generated.contains(host.opens()[v])) preferred.push_back(v);
        if (preferred.empty()) {
          out.used_fallback = true;
          preferred = cand;
        }
        if (preferred.empty()) throw VerificationFailure("unstable class without a deviating open");
        // largest first; ties broken by canonical order
        witness = *std::min_element(preferred.begin(), preferred.end(), [&](std::size_t a, std::size_t b) {
          int ca = cardinality(host.opens()[a]), cb = cardinality(host.opens()[b]);
          return ca != cb ? ca > cb : a < b;
        });
        break;
      }
      if (!witness) break;
      fam.push_back(*witness);
      fam = lattice_closure(host, normalized(fam));
    }
    out.families.push_back(std::move(fam));
  }
  return out;
}

PartitionTheoremCheck verify_partition_theorem(const Model& model, const StableSplittings& s) {
  PartitionTheoremCheck r;
  const SubsetSpace& host = model.space();
  const std::size_t whole = host.opens().size() - 1;
  const auto exts = extensions(model, s.target);
  for (std::size_t i = 0; i < s.subformulas.size(); ++i) {
    const Formula& g = s.subformulas[i];
    const OpenIds& fam = s.families[i];
    if (!member(fam, whole)) {
      r.families_generated = false;
      r.detail = "X missing from the family of " + print(g);
    }
    for (std::size_t u : fam) {
      if (!s.generated.contains(host.opens()[u])) {
        r.families_generated = false;
        r.detail = host.render(host.opens()[u]) + " not generated, family of " + print(g);
      }
      if (!s.generated.contains(exts.at(g)[u])) {
        r.truth_sets_generated = false;
        r.detail = "truth set of " + print(g) + " at " + host.render(host.opens()[u]) + " not generated";
      }
    }
    try {
      Splitting split(host, fam);
      (void)equiv_classes(split);
    } catch (const Error& e) {
      r.monotone_and_stable = false;
      r.detail = e.what();
      continue;
    }
    for (const Formula& sub : subformulas(g)) {
      const OpenIds& fs = s.family_of(sub);
      if (!std::includes(fam.begin(), fam.end(), fs.begin(), fs.end())) {
        r.monotone_and_stable = false;
        r.detail = "family of " + print(sub) + " not inside family of " + print(g);
      }
      for (std::size_t u : fam)
        if (!is_stable_for(model, exts.at(sub), remainder(host, fam, u))) {
          r.monotone_and_stable = false;
          r.detail = "class of " + host.render(host.opens()[u]) + " unstable for " + print(sub);
        }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Quotients

Quotient quotient_points(const Model& model) {
  const SubsetSpace& s = model.space();
  const std::size_t n = s.point_count();
  std::map<std::vector<bool>, std::size_t> classes;
  std::vector<std::size_t> point_map(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<bool> sig;
    for (PointSet u : s.opens()) sig.push_back(contains(u, x));
    for (const auto& [atom, set] : model.valuation()) sig.push_back(contains(set, x));
    auto [it, fresh] = classes.emplace(std::move(sig), classes.size());
    point_map[x] = it->second;
  }
  const std::size_t k = classes.size();
  const std::size_t width = std::to_string(k).size();
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= k; ++i) {
    std::string d = std::to_string(i);
    names.push_back("x" + (k >= 10 ? std::string(width - d.size(), '0') : "") + d);
  }
  auto image = [&](PointSet set) {
    PointSet out = 0;
    for (std::size_t x = 0; x < n; ++x)
      if (contains(set, x)) out |= PointSet{1} << point_map[x];
    return out;
  };
  std::vector<PointSet> opens;
  for (PointSet u : s.opens()) opens.push_back(image(u));
  std::map<std::string, PointSet> val;
  for (const auto& [atom, set] : model.valuation()) val[atom] = image(set);

  Quotient q{Model(SubsetSpace(names, opens), val), point_map, {}};
  for (const World& w : model.worlds()) {
    World target{point_map[w.point], *q.model.space().open_index(image(s.opens()[w.open]))};
    q.world_map.emplace(w, target);
  }
  return q;
}

Finitized finitize(const Model& model, const Formula& f) {
  require_topology(model, "finitize");
  const SubsetSpace& host = model.space();
  const auto names = atoms(f);
  std::map<std::string, PointSet> val;
  for (const auto& [atom, set] : model.valuation())
    if (names.count(atom)) val[atom] = set;
  Model restricted(host, val);

  StableSplittings ss = build_stable_splittings(restricted, f);
  Finitized out{Model(), ss.top_family(), {}};
  std::vector<PointSet> opens{0};
  for (std::size_t u : out.family) opens.push_back(host.opens()[u]);
  Model reduced(SubsetSpace(host.points(), opens), val);
  Quotient q = quotient_points(reduced);

  for (const World& w : model.worlds()) {
    std::size_t rep = *hull(host, out.family, w.open);
    World mid{w.point, *reduced.space().open_index(host.opens()[rep])};
    out.world_map.emplace(w, q.world_map.at(mid));
  }
  out.model = std::move(q.model);

  const std::size_t n_opens = out.model.space().opens().size();
  if (n_opens > out.family.size() + 1)
    throw VerificationFailure("finitized model has more opens than the family bound");
  const std::size_t exponent = names.size() + out.family.size();
  if (exponent < 63 && out.model.space().point_count() > (std::size_t{1} << exponent))
    throw VerificationFailure("finitized model has more points than the bound");

  const auto before = extensions(restricted, f);
  const auto after = extensions(out.model, f);
  for (const auto& [g, ext] : before)
    for (const auto& [w, image] : out.world_map)
      if (contains(ext[w.open], w.point) != contains(after.at(g)[image.open], image.point))
        throw VerificationFailure("finitize changed the truth of " + print(g) + " at " +
                                  model.render(w));
  return out;
}

// ---------------------------------------------------------------------------
// Basis models

BasisReport restrict_to_basis(const Model& model, const std::vector<PointSet>& basis,
                              const std::vector<Formula>& test_formulas) {
  const SubsetSpace& host = model.space();
  std::vector<PointSet> b = canonical_family(basis);
  for (PointSet u : b) (void)id_of(host, u, "basis member");
  if (!closed_under_union(b)) throw InvalidInput("basis must be closed under union");
  for (PointSet u : host.opens()) {
    PointSet covered = 0;
    for (PointSet v : b)
      if (is_subset(v, u)) covered |= v;
    if (covered != u) throw InvalidInput("open " + host.render(u) + " is not a union of basis members");
  }
  BasisReport r{Model(SubsetSpace(host.points(), b), model.valuation()), true, true, {}};
  const SubsetSpace& small = r.basis_model.space();
  for (const Formula& f : test_formulas) {
    Extension full = extension(model, f);
    Extension reduced = extension(r.basis_model, f);
    for (std::size_t v = 0; v < small.opens().size(); ++v) {
      std::size_t u = *host.open_index(small.opens()[v]);
      if (full[u] != reduced[v]) {
        r.worlds_agree = false;
        r.detail = "truth of " + print(f) + " differs on " + host.render(small.opens()[v]);
      }
    }
    if (valid_in_model(model, f).valid != valid_in_model(r.basis_model, f).valid) {
      r.validity_agrees = false;
      r.detail = "validity of " + print(f) + " differs";
    }
  }
  return r;
}

std::optional<std::pair<std::size_t, std::size_t>> basis_remainder_witness(
    const SubsetSpace& host, const std::vector<PointSet>& basis, const OpenIds& family) {
  for (std::size_t v : family) {
    std::set<PointSet> rem;
    for (std::size_t id : remainder(host, family, v)) rem.insert(host.opens()[id]);
    const PointSet V = host.opens()[v];
    for (std::size_t x = 0; x < host.point_count(); ++x) {
      if (!contains(V, x)) continue;
      bool found = false;
      for (PointSet u : basis)
        if (contains(u, x) && is_subset(u, V) && rem.count(u)) {
          found = true;
          break;
        }
      if (!found) return std::make_pair(v, x);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

nlohmann::json splitting_report(const Model& model, const StableSplittings& s) {
  const SubsetSpace& host = model.space();
  const auto exts = extensions(model, s.target);
  auto sets = [&](const OpenIds& ids) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t id : ids)
      if (host.opens()[id] != 0) arr.push_back(set_to_json(host, host.opens()[id]));
    return arr;
  };
  nlohmann::json j;
  j["formula"] = print(s.target);
  j["family"] = sets(s.top_family());
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t u : s.top_family()) {
    if (host.opens()[u] == 0) continue;
    OpenIds cls = remainder(host, s.top_family(), u);
    nlohmann::json c;
    c["representative"] = set_to_json(host, host.opens()[u]);
    c["members"] = sets(cls);
    nlohmann::json stable = nlohmann::json::array();
    for (const Formula& g : s.subformulas)
      stable.push_back({{"formula", print(g)}, {"stable", is_stable_for(model, exts.at(g), cls)}});
    c["stability"] = stable;
    classes.push_back(c);
  }
  j["classes"] = classes;
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t i = 0; i < s.subformulas.size(); ++i)
    per.push_back({{"formula", print(s.subformulas[i])}, {"family", sets(s.families[i])}});
  j["subformula_families"] = per;
  j["witness_outside_generated_family"] = s.used_fallback;
  return j;
}

}  // namespace topologic
