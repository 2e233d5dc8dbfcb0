#pragma once

#include <random>
#include <string>
#include <vector>

#include "topologic/formula.hpp"
#include "topologic/space.hpp"

namespace topologic::testing {

// Random formula over the given atoms using every connective, nesting depth
// at most `depth`.
inline Formula random_formula(std::mt19937& rng, int depth, const std::vector<std::string>& atoms) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 12);
  int k = pick(rng);
  auto sub = [&] { return random_formula(rng, depth - 1, atoms); };
  switch (k) {
    case 0:
    case 1: {
      std::uniform_int_distribution<std::size_t> a(0, atoms.size() - 1);
      return Formula::atom(atoms[a(rng)]);
    }
    case 2: return (rng() % 2) ? Formula::top() : Formula::bot();
    case 3: return Formula::negation(sub());
    case 4: return Formula::conj(sub(), sub());
    case 5: return Formula::disj(sub(), sub());
    case 6: return Formula::implies(sub(), sub());
    case 7: return Formula::iff(sub(), sub());
    case 8: return Formula::knows(sub());
    case 9: return Formula::possible(sub());
    case 10: return Formula::box(sub());
    case 11: return Formula::diamond(sub());
    default: return Formula::conj(sub(), Formula::negation(sub()));
  }
}

// Random L' formula: atoms under &, ~ and <>K.
inline Formula random_l_prime(std::mt19937& rng, int depth, const std::vector<std::string>& atoms) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 3);
  auto sub = [&] { return random_l_prime(rng, depth - 1, atoms); };
  switch (pick(rng)) {
    case 0: {
      std::uniform_int_distribution<std::size_t> a(0, atoms.size() - 1);
      return Formula::atom(atoms[a(rng)]);
    }
    case 1: return Formula::negation(sub());
    case 2: return Formula::conj(sub(), sub());
    default: return Formula::diamond(Formula::knows(sub()));
  }
}

// Random topology on n points: up-sets of a random preorder (transitive
// closure of random edges plus reflexivity).
inline SubsetSpace random_topology(std::mt19937& rng, std::size_t n, double edge_prob = 0.3) {
  std::bernoulli_distribution edge(edge_prob);
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) le[i][j] = (i == j) || edge(rng);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  std::vector<PointSet> opens;
  for (PointSet s = 0; s <= full_set(n); ++s) {
    bool up = true;
    for (std::size_t i = 0; i < n && up; ++i)
      for (std::size_t j = 0; j < n && up; ++j)
        if (contains(s, i) && le[i][j] && !contains(s, j)) up = false;
    if (up) opens.push_back(s);
  }
  return SubsetSpace::numbered(n, opens);
}

inline Model random_model(std::mt19937& rng, const SubsetSpace& space, const std::vector<std::string>& atoms) {
  std::map<std::string, PointSet> val;
  std::uniform_int_distribution<PointSet> set(0, space.full());
  for (const auto& a : atoms) val[a] = set(rng);
  return Model(space, val);
}

}  // namespace topologic::testing

namespace topologic::testing {

// Independent brute-force enumeration: every family of subsets of n points
// containing X and closed under pairwise union and intersection, optionally
// required to contain the empty set. Feasible for n <= 4.
inline std::vector<SubsetSpace> all_lattices_bruteforce(std::size_t n, bool with_empty) {
  const std::size_t subsets = std::size_t{1} << n;
  const PointSet full = full_set(n);
  std::vector<SubsetSpace> out;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << subsets); ++fam) {
    if (!((fam >> full) & 1U)) continue;
    if (with_empty && !(fam & 1U)) continue;
    bool ok = true;
    for (std::size_t a = 0; a < subsets && ok; ++a) {
      if (!((fam >> a) & 1U)) continue;
      for (std::size_t b = 0; b < subsets && ok; ++b)
        if ((fam >> b) & 1U) ok = ((fam >> (a | b)) & 1U) && ((fam >> (a & b)) & 1U);
    }
    if (!ok) continue;
    std::vector<PointSet> opens;
    for (std::size_t a = 0; a < subsets; ++a)
      if ((fam >> a) & 1U) opens.push_back(a);
    out.push_back(SubsetSpace::numbered(n, opens));
  }
  return out;
}

inline std::vector<SubsetSpace> all_topologies_bruteforce(std::size_t n) {
  return all_lattices_bruteforce(n, true);
}

// Every valuation of the atoms over the space.
inline std::vector<Model> all_models(const SubsetSpace& s, const std::vector<std::string>& atoms) {
  std::vector<Model> out;
  const std::uint64_t per = std::uint64_t{1} << s.point_count();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < atoms.size(); ++i) total *= per;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::map<std::string, PointSet> val;
    std::uint64_t c = code;
    for (const auto& a : atoms) {
      val[a] = c % per;
      c /= per;
    }
    out.emplace_back(s, val);
  }
  return out;
}

}  // namespace topologic::testing
