#include "topologic/algebra.hpp"

#include <optional>

#include "topologic/error.hpp"
#include "topologic/frames.hpp"

namespace topologic {

MonadicAlgebra::MonadicAlgebra(std::size_t atom_count, std::vector<Element> interior, std::vector<Element> forall)
    : atoms_(atom_count), interior_(std::move(interior)), forall_(std::move(forall)) {
  if (atoms_ > kMaxAlgebraAtoms)
    throw InvalidInput("at most " + std::to_string(kMaxAlgebraAtoms) + " algebra atoms are supported");
  const std::size_t n = std::size_t{1} << atoms_;
  if (interior_.size() != n || forall_.size() != n)
    throw InvalidInput("operator tables need " + std::to_string(n) + " entries");
  for (const auto* table : {&interior_, &forall_})
    for (Element e : *table)
      if (e >= n) throw InvalidInput("operator table entry " + std::to_string(e) + " is outside the carrier");
}

namespace {

LawCheck violated(std::string law, std::vector<Element> witness) { return {false, std::move(law), std::move(witness)}; }

bool leq(Element a, Element b) { return (a & ~b) == 0; }

// Searches [0, n) for the least failing index; `decode` turns it into a witness.
template <class Pred, class Decode>
std::optional<LawCheck> first_failure(std::size_t n, const char* law, Pred&& fails, Decode&& decode, Execution exec) {
  std::size_t i = first_index_where(n, fails, exec);
  if (i == n) return std::nullopt;
  return violated(law, decode(i));
}

}  // namespace

LawCheck check_fma_laws(const MonadicAlgebra& alg, Execution exec) {
  const std::size_t n = alg.size();
  const auto e = [](std::size_t i) { return static_cast<Element>(i); };
  const auto one = [&](std::size_t i) { return std::vector<Element>{e(i)}; };
  const auto two = [&](std::size_t i) { return std::vector<Element>{e(i / n), e(i % n)}; };

  if (alg.interior(alg.top()) != alg.top()) return violated("I 1 = 1", {});
  if (alg.forall(alg.top()) != alg.top()) return violated("forall 1 = 1", {});
  if (auto r = first_failure(
          n, "I a <= a", [&](std::size_t a) { return !leq(alg.interior(e(a)), e(a)); }, one, exec))
    return *r;
  if (auto r = first_failure(
          n, "I I a = I a", [&](std::size_t a) { return alg.interior(alg.interior(e(a))) != alg.interior(e(a)); },
          one, exec))
    return *r;
  if (auto r = first_failure(
          n * n, "I(a & b) = I a & I b",
          [&](std::size_t i) {
            Element a = e(i / n), b = e(i % n);
            return alg.interior(a & b) != (alg.interior(a) & alg.interior(b));
          },
          two, exec))
    return *r;
  if (auto r = first_failure(
          n, "forall a <= a", [&](std::size_t a) { return !leq(alg.forall(e(a)), e(a)); }, one, exec))
    return *r;
  if (auto r = first_failure(
          n * n, "forall(a | forall b) = forall a | forall b",
          [&](std::size_t i) {
            Element a = e(i / n), b = e(i % n);
            return alg.forall(a | alg.forall(b)) != (alg.forall(a) | alg.forall(b));
          },
          two, exec))
    return *r;
  if (auto r = first_failure(
          n, "forall I a <= I forall a",
          [&](std::size_t a) { return !leq(alg.forall(alg.interior(e(a))), alg.interior(alg.forall(e(a)))); }, one,
          exec))
    return *r;
  return {};
}

namespace {

bool gma_inequality_fails(const MonadicAlgebra& alg, Element a, Element b, Element c) {
  const Element fa = alg.forall(a);
  const Element lhs = alg.closure(fa & b) & alg.exists(alg.closure(fa & c));
  const Element rhs = alg.closure(alg.forall(alg.closure(a)) & alg.closure(b) & alg.exists(alg.closure(c)));
  return !leq(lhs, rhs);
}

}  // namespace

LawCheck check_gma_laws(const MonadicAlgebra& alg, Execution exec) {
  LawCheck fma = check_fma_laws(alg, exec);
  if (!fma.holds) return fma;
  const std::size_t n = alg.size();
  const auto e = [](std::size_t i) { return static_cast<Element>(i); };
  if (auto r = first_failure(
          n, "C I a = I C a",
          [&](std::size_t a) { return alg.closure(alg.interior(e(a))) != alg.interior(alg.closure(e(a))); },
          [&](std::size_t a) { return std::vector<Element>{e(a)}; }, exec))
    return *r;
  return check_gma_inequality(alg, exec);
}

LawCheck check_gma_inequality(const MonadicAlgebra& alg, Execution exec) {
  const std::size_t n = alg.size();
  const std::size_t k = alg.atom_count();
  if (k == 0) return {};
  const std::size_t per = k * k;
  auto decode = [&](std::size_t i) {
    return std::vector<Element>{static_cast<Element>(i / per), Element{1} << ((i % per) / k), Element{1} << (i % k)};
  };
  if (auto r = first_failure(
          n * per, "C(forall a & b) & exists C(forall a & c) <= C(forall C a & C b & exists C c)",
          [&](std::size_t i) {
            auto w = decode(i);
            return gma_inequality_fails(alg, w[0], w[1], w[2]);
          },
          decode, exec))
    return *r;
  return {};
}

bool check_fma(const MonadicAlgebra& alg, Execution exec) { return check_fma_laws(alg, exec).holds; }
bool check_gma(const MonadicAlgebra& alg, Execution exec) { return check_gma_laws(alg, exec).holds; }

LawCheck check_gma_inequality_naive(const MonadicAlgebra& alg, std::size_t max_atoms) {
  if (alg.atom_count() > max_atoms)
    throw BudgetExceeded("naive GMA check limited to " + std::to_string(max_atoms) + " atoms");
  const Element n = static_cast<Element>(alg.size());
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      for (Element c = 0; c < n; ++c)
        if (gma_inequality_fails(alg, a, b, c))
          return violated("C(forall a & b) & exists C(forall a & c) <= C(forall C a & C b & exists C c)", {a, b, c});
  return {};
}

ComplexAlgebra complex_algebra(const Model& model) {
  SubsetFrame sf = subset_frame(model);
  const std::size_t k = sf.worlds.size();
  if (k > kMaxAlgebraAtoms)
    throw BudgetExceeded("complex algebra of " + std::to_string(k) + " worlds exceeds the " +
                         std::to_string(kMaxAlgebraAtoms) + "-atom cap");
  std::vector<Element> effort(k, 0), knowledge(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (sf.frame.r_effort[i][j]) effort[i] |= Element{1} << j;
      if (sf.frame.r_knowledge[i][j]) knowledge[i] |= Element{1} << j;
    }
  const std::size_t n = std::size_t{1} << k;
  std::vector<Element> interior(n, 0), forall(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t w = 0; w < k; ++w) {
      if (leq(effort[w], static_cast<Element>(a))) interior[a] |= Element{1} << w;
      if (leq(knowledge[w], static_cast<Element>(a))) forall[a] |= Element{1} << w;
    }
  return {MonadicAlgebra(k, std::move(interior), std::move(forall)), std::move(sf.worlds)};
}

AlgValuation world_valuation(const ComplexAlgebra& c, const Model& model) {
  AlgValuation v;
  for (const auto& [atom, set] : model.valuation()) {
    Element e = 0;
    for (std::size_t w = 0; w < c.worlds.size(); ++w)
      if (contains(set, c.worlds[w].point)) e |= Element{1} << w;
    v[atom] = e;
  }
  return v;
}

Element alg_eval(const MonadicAlgebra& alg, const AlgValuation& v, const Formula& f) {
  auto sub = [&](const Formula& g) { return alg_eval(alg, v, g); };
  switch (f.op()) {
    case Op::Atom: {
      auto it = v.find(f.name());
      if (it == v.end()) return 0;
      if (it->second > alg.top()) throw InvalidInput("value of '" + f.name() + "' is outside the carrier");
      if (!alg.in_fixed_subalgebra(it->second))
        throw InvalidInput("value of '" + f.name() + "' is not fixed by both interior and closure");
      return it->second;
    }
    case Op::Top: return alg.top();
    case Op::Bot: return 0;
    case Op::Not: return alg.complement(sub(f.operand()));
    case Op::And: return sub(f.lhs()) & sub(f.rhs());
    case Op::Or: return sub(f.lhs()) | sub(f.rhs());
    case Op::Implies: return alg.complement(sub(f.lhs())) | sub(f.rhs());
    case Op::Iff: {
      Element a = sub(f.lhs()), b = sub(f.rhs());
      return alg.complement(a ^ b);
    }
    case Op::K: return alg.forall(sub(f.operand()));
    case Op::L: return alg.exists(sub(f.operand()));
    case Op::Box: return alg.interior(sub(f.operand()));
    case Op::Dia: return alg.closure(sub(f.operand()));
  }
  throw Error("unknown connective");
}

nlohmann::json algebra_to_json(const MonadicAlgebra& alg) {
  return {{"atoms", alg.atom_count()}, {"interior", alg.interior_table()}, {"forall", alg.forall_table()}};
}

MonadicAlgebra algebra_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.contains("interior") || !j.contains("forall"))
    throw InvalidInput("algebra needs 'atoms', 'interior' and 'forall'");
  if (!j.at("atoms").is_number_unsigned()) throw InvalidInput("'atoms' must be a nonnegative integer");
  auto table = [&](const char* key) {
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw InvalidInput(std::string("'") + key + "' must be an array");
    std::vector<Element> out;
    for (const auto& x : arr) {
      if (!x.is_number_unsigned() || x.get<std::uint64_t>() > 0xFFFFFFFFULL)
        throw InvalidInput(std::string("'") + key + "' entries must be element bitmasks");
      out.push_back(x.get<Element>());
    }
    return out;
  };
  return MonadicAlgebra(j.at("atoms").get<std::size_t>(), table("interior"), table("forall"));
}

nlohmann::json law_check_to_json(const LawCheck& c) {
  nlohmann::json out{{"holds", c.holds}};
  if (!c.holds) {
    out["law"] = c.law;
    out["witness"] = c.witness;
  }
  return out;
}

}  // namespace topologic
