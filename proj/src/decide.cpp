#include "topologic/decide.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include "topologic/error.hpp"
#include "topologic/semantics.hpp"
#include "topologic/splitting.hpp"

namespace topologic {

std::string to_string(SpaceClass c) {
  switch (c) {
    case SpaceClass::topology: return "topology";
    case SpaceClass::lattice: return "lattice";
    case SpaceClass::any_subset_space: return "any-subset-space";
  }
  return "?";
}

SpaceClass space_class_from_string(const std::string& s) {
  if (s == "topology") return SpaceClass::topology;
  if (s == "lattice") return SpaceClass::lattice;
  if (s == "any-subset-space") return SpaceClass::any_subset_space;
  throw InvalidInput("unknown space class '" + s + "'");
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::satisfiable: return "satisfiable";
    case VerdictStatus::unsat_up_to_bound: return "unsat-up-to-bound";
    case VerdictStatus::valid_up_to_bound: return "valid-up-to-bound";
    case VerdictStatus::countermodel: return "countermodel";
    case VerdictStatus::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

namespace {

using Relation = std::vector<std::vector<bool>>;

std::uint64_t matrix_key(const Relation& r) {
  const std::size_t n = r.size();
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) key = (key << 1) | (r[i][j] ? 1U : 0U);
  return key;
}

void check_point_count(std::size_t n) {
  if (n < 1 || n > kMaxSearchPoints)
    throw InvalidInput("point count must be between 1 and " + std::to_string(kMaxSearchPoints));
}

std::vector<PointSet> up_sets(const Relation& le) {
  const std::size_t n = le.size();
  std::vector<PointSet> out;
  for (PointSet s = 0; s <= full_set(n); ++s) {
    bool up = true;
    for (std::size_t i = 0; i < n && up; ++i)
      if (contains(s, i))
        for (std::size_t j = 0; j < n && up; ++j)
          if (le[i][j] && !contains(s, j)) up = false;
    if (up) out.push_back(s);
  }
  return canonical_family(std::move(out));
}

// Smallest encoding of the family over all point permutations.
std::vector<PointSet> canonical_under_permutation(const std::vector<PointSet>& family, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<PointSet> best;
  do {
    std::vector<PointSet> image;
    for (PointSet u : family) {
      PointSet v = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (contains(u, i)) v |= PointSet{1} << perm[i];
      image.push_back(v);
    }
    std::sort(image.begin(), image.end());
    if (best.empty() || image < best) best = std::move(image);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<Relation> enumerate_preorders(std::size_t n) {
  check_point_count(n);
  std::vector<Relation> current{Relation(1, std::vector<bool>(1, true))};
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<Relation> next;
    for (const Relation& r : current) {
      // new point k: below the points in `above`, above the points in `below`
      for (PointSet below = 0; below <= full_set(k); ++below) {
        bool down_closed = true;
        for (std::size_t a = 0; a < k && down_closed; ++a)
          for (std::size_t d = 0; d < k && down_closed; ++d)
            if (contains(below, d) && r[a][d] && !contains(below, a)) down_closed = false;
        if (!down_closed) continue;
        for (PointSet above = 0; above <= full_set(k); ++above) {
          bool ok = true;
          for (std::size_t u = 0; u < k && ok; ++u)
            for (std::size_t b = 0; b < k && ok; ++b)
              if (contains(above, u) && r[u][b] && !contains(above, b)) ok = false;
          for (std::size_t d = 0; d < k && ok; ++d)
            for (std::size_t u = 0; u < k && ok; ++u)
              if (contains(below, d) && contains(above, u) && !r[d][u]) ok = false;
          if (!ok) continue;
          Relation grown(k + 1, std::vector<bool>(k + 1, false));
          for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) grown[i][j] = r[i][j];
          for (std::size_t i = 0; i < k; ++i) {
            grown[i][k] = contains(below, i);
            grown[k][i] = contains(above, i);
          }
          grown[k][k] = true;
          next.push_back(std::move(grown));
        }
      }
    }
    current = std::move(next);
  }
  std::sort(current.begin(), current.end(),
            [](const Relation& a, const Relation& b) { return matrix_key(a) < matrix_key(b); });
  return current;
}

std::vector<std::vector<PointSet>> enumerate_families(std::size_t n, SpaceClass c) {
  check_point_count(n);
  std::vector<std::vector<PointSet>> out;
  if (c == SpaceClass::any_subset_space) {
    if (n > 3) throw InvalidInput("any-subset-space enumeration is limited to 3 points");
    const std::size_t subsets = std::size_t{1} << n;
    const PointSet full = full_set(n);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << subsets); ++code) {
      if (!((code >> full) & 1U)) continue;
      std::vector<PointSet> fam;
      for (PointSet s = 0; s < subsets; ++s)
        if ((code >> s) & 1U) fam.push_back(s);
      out.push_back(canonical_family(std::move(fam)));
    }
    return out;
  }
  for (const Relation& r : enumerate_preorders(n)) {
    std::vector<PointSet> t = up_sets(r);
    out.push_back(t);
    if (c == SpaceClass::lattice) {
      std::vector<PointSet> without(t.begin() + 1, t.end());  // canonical order puts the empty set first
      if (closed_under_intersection(without)) out.push_back(std::move(without));
    }
  }
  return out;
}

std::vector<SubsetSpace> enumerate_spaces(std::size_t n, SpaceClass c) {
  std::vector<SubsetSpace> out;
  for (auto& fam : enumerate_families(n, c)) out.push_back(SubsetSpace::numbered(n, std::move(fam)));
  return out;
}

bool in_class(const SubsetSpace& s, SpaceClass c) {
  switch (c) {
    case SpaceClass::topology: return is_topology(s);
    case SpaceClass::lattice: return is_lattice(s);
    case SpaceClass::any_subset_space: return true;
  }
  return false;
}

namespace {

struct Timeout {};

}  // namespace

Verdict decide_sat(const Formula& f, const SearchBudget& budget) {
  if (budget.max_points < 1 || budget.max_points > kMaxSearchPoints)
    throw InvalidInput("max points must be between 1 and " + std::to_string(kMaxSearchPoints));
  const auto names = atoms(f);
  const std::vector<std::string> atom_list(names.begin(), names.end());
  const Formula target = desugar(f);
  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    if (!budget.max_seconds) return false;
    std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
    return spent.count() > *budget.max_seconds;
  };

  constexpr std::uint64_t kMaxCandidates = std::uint64_t{1} << 40;
  // valuation count is largest at max_points; fail before searching anything
  if (atom_list.size() * budget.max_points >= 40)
    throw BudgetExceeded("search space too large for " + std::to_string(budget.max_points) + " points");

  Verdict v;
  for (std::size_t n = 1; n <= budget.max_points; ++n) {
    std::vector<std::vector<PointSet>> families = enumerate_families(n, budget.space_class);
    if (budget.prune_isomorphic) {
      std::set<std::vector<PointSet>> seen;
      std::vector<std::vector<PointSet>> kept;
      for (auto& fam : families)
        if (seen.insert(canonical_under_permutation(fam, n)).second) kept.push_back(std::move(fam));
      families = std::move(kept);
    }
    const std::uint64_t per_atom = std::uint64_t{1} << n;
    std::uint64_t valuations = 1;
    for (std::size_t i = 0; i < atom_list.size(); ++i) valuations *= per_atom;
    if (valuations > kMaxCandidates / std::max<std::uint64_t>(families.size(), 1))
      throw BudgetExceeded("search space too large for " + std::to_string(n) + " points");
    const std::uint64_t total = valuations * families.size();

    auto model_at = [&](std::uint64_t c) {
      const auto& fam = families[c / valuations];
      std::uint64_t code = c % valuations;
      std::map<std::string, PointSet> val;
      // first atom is the most significant digit
      for (std::size_t i = atom_list.size(); i-- > 0;) {
        val[atom_list[i]] = code % per_atom;
        code /= per_atom;
      }
      return Model(SubsetSpace::numbered(n, fam), std::move(val));
    };
    std::size_t hit;
    try {
      hit = first_index_where(
          total,
          [&](std::size_t c) {
            if ((c & 1023U) == 0 && out_of_time()) throw Timeout{};
            Model m = model_at(c);
            Extension ext = extension(m, target);
            for (PointSet e : ext)
              if (e) return true;
            return false;
          },
          budget.exec);
    } catch (const Timeout&) {
      v.status = VerdictStatus::budget_exhausted;
      return v;
    }
    if (hit < total) {
      v.models_examined += hit + 1;
      Model m = model_at(hit);
      Extension ext = extension(m, target);
      std::optional<World> least;
      for (std::size_t x = 0; x < n && !least; ++x)
        for (std::size_t u = 0; u < ext.size() && !least; ++u)
          if (contains(ext[u], x)) least = World{x, u};
      if (!eval(m, *least, f)) throw VerificationFailure("witness does not replay");
      v.status = VerdictStatus::satisfiable;
      v.model = std::move(m);
      v.world = least;
      return v;
    }
    v.models_examined += total;
    v.bound = n;
  }
  v.status = VerdictStatus::unsat_up_to_bound;
  return v;
}

Verdict decide_valid(const Formula& f, const SearchBudget& budget) {
  const Formula negated = Formula::negation(f);
  Verdict v = decide_sat(negated, budget);
  if (v.status == VerdictStatus::budget_exhausted) return v;
  if (v.status == VerdictStatus::unsat_up_to_bound) {
    v.status = VerdictStatus::valid_up_to_bound;
    return v;
  }
  v.status = VerdictStatus::countermodel;
  v.raw_model = v.model;
  v.raw_world = v.world;
  if (budget.space_class == SpaceClass::topology) {
    Finitized small = finitize(*v.raw_model, negated);
    v.model = small.model;
    v.world = small.world_map.at(*v.raw_world);
  } else {
    Quotient q = quotient_points(*v.raw_model);
    v.model = q.model;
    v.world = q.world_map.at(*v.raw_world);
  }
  if (eval(*v.model, *v.world, f) || !in_class(v.model->space(), budget.space_class))
    throw VerificationFailure("minimized countermodel does not replay");
  return v;
}

}  // namespace topologic
