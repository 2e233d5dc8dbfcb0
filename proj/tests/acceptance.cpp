// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "topologic/algebra.hpp"
#include "topologic/decide.hpp"
#include "topologic/error.hpp"
#include "topologic/frames.hpp"
#include "topologic/normalform.hpp"
#include "topologic/semantics.hpp"
#include "topologic/splitting.hpp"

namespace topologic {
namespace {

// Pinned limits.
constexpr double kAxiomSweepSeconds = 300.0;
constexpr int kRandomLatticeModels = 200;
constexpr int kSplittingPairs = 500;
constexpr int kPartitionPairs = 200;
constexpr int kBasisPairs = 100;
constexpr int kDnfCorpus = 50;
constexpr std::size_t kDnfVerifyPoints = 3;
constexpr int kAlgebraFormulasPerModel = 20;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::string first_violation;

  void check(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    if (violations++ == 0) first_violation = what();
    pass = false;
  }
};

std::string summary(const Outcome& o) {
  std::ostringstream s;
  s << o.checks << " checks, " << o.violations << " violations";
  if (!o.detail.empty()) s << "; " << o.detail;
  if (!o.first_violation.empty()) s << "; first: " << o.first_violation;
  return s.str();
}

const std::vector<std::string> kAtoms{"A", "B"};

// ---------------------------------------------------------------------------
// 1. axiom soundness sweep

// L' formulas of depth <= 1 over A, B, top, bot.
std::vector<Formula> shallow_l_prime() {
  std::vector<Formula> leaves{Formula::atom("A"), Formula::atom("B"), Formula::top(), Formula::bot()};
  std::vector<Formula> out = leaves;
  for (const Formula& a : leaves) {
    out.push_back(Formula::negation(a));
    out.push_back(Formula::diamond(Formula::knows(a)));
    for (const Formula& b : leaves) out.push_back(Formula::conj(a, b));
  }
  return out;
}

Outcome axiom_sweep() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();

  std::vector<Model> models;
  for (std::size_t n = 1; n <= 3; ++n)
    for (const SubsetSpace& s : enumerate_spaces(n, SpaceClass::lattice))
      for (Model& m : testing::all_models(s, kAtoms)) models.push_back(std::move(m));
  const std::size_t exhaustive = models.size();
  std::mt19937 rng(101);
  const auto lattices4 = testing::all_lattices_bruteforce(4, false);
  for (int i = 0; i < kRandomLatticeModels; ++i)
    models.push_back(testing::random_model(rng, lattices4[rng() % lattices4.size()], kAtoms));

  const std::vector<Formula> candidates = shallow_l_prime();
  for (const Formula& f : candidates) o.check(in_L_prime(f) && l_prime_depth(f) <= 1, [&] { return print(f); });
  const std::vector<Formula> atomic{Formula::atom("A"), Formula::atom("B"), Formula::top(), Formula::bot()};

  std::vector<std::size_t> bad(models.size(), 0), done(models.size(), 0);
  std::vector<std::string> first(models.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const Model& m = models[mi];
    // An instance's truth depends only on the extensions substituted in, so
    // one representative per distinct extension covers every candidate.
    std::vector<Formula> reps;
    std::set<Extension> seen;
    for (const Formula& f : candidates)
      if (seen.insert(extension(m, f)).second) reps.push_back(f);
    for (int ax = 1; ax <= 12; ++ax) {
      const std::string name = "axiom-" + std::to_string(ax);
      const auto vars = scheme_metavariables(name);
      const auto& pool = ax == 2 ? atomic : reps;
      std::vector<std::size_t> idx(vars.size(), 0);
      while (true) {
        SchemeInstance inst{name, {}};
        for (std::size_t k = 0; k < vars.size(); ++k) inst.substitution[vars[k]] = pool[idx[k]];
        SchemeResult r = check_scheme(m, inst);
        ++done[mi];
        if (r.status != SchemeStatus::valid && bad[mi]++ == 0)
          first[mi] = name + " " + print(r.instance) + " in " + model_to_json(m).dump();
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == pool.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    o.checks += done[mi];
    if (bad[mi]) {
      if (o.violations == 0) o.first_violation = first[mi];
      o.violations += bad[mi];
      o.pass = false;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > kAxiomSweepSeconds) o.pass = false;
  std::ostringstream d;
  d << exhaustive << " exhaustive + " << kRandomLatticeModels << " random models, " << secs << " s (limit "
    << kAxiomSweepSeconds << ")";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 2. splitting partition laws

Outcome splitting_laws() {
  Outcome o;
  std::mt19937 rng(202);
  for (int t = 0; t < kSplittingPairs; ++t) {
    SubsetSpace s = testing::random_topology(rng, 1 + rng() % 4, 0.35);
    const auto& opens = s.opens();
    OpenIds gen;
    for (int k = 1 + rng() % 3; k > 0; --k) gen.push_back(rng() % opens.size());
    Splitting split(s, intersection_closure(s, gen));
    const OpenIds& fam = split.family();
    auto ctx = [&] { return space_to_json(s).dump(); };

    std::vector<EquivClass> classes;
    try {
      classes = equiv_classes(split);
    } catch (const VerificationFailure& e) {
      o.check(false, [&] { return std::string(e.what()) + " " + ctx(); });
      continue;
    }
    // disjoint and covering the down-set
    std::vector<int> hits(opens.size(), 0);
    for (const auto& c : classes)
      for (auto v : c.members) ++hits[v];
    for (std::size_t v = 0; v < opens.size(); ++v) {
      bool below = std::any_of(fam.begin(), fam.end(), [&](auto u) { return is_subset(opens[v], opens[u]); });
      o.check(hits[v] == (below ? 1 : 0), ctx);
    }
    // convex
    for (const auto& c : classes)
      for (auto lo : c.members)
        for (auto hi : c.members)
          for (std::size_t mid = 0; mid < opens.size(); ++mid)
            if (is_subset(opens[lo], opens[mid]) && is_subset(opens[mid], opens[hi]))
              o.check(std::binary_search(c.members.begin(), c.members.end(), mid), ctx);
    // classes of "below the same members"
    auto profile = [&](std::size_t v) {
      std::vector<bool> p;
      for (auto u : fam) p.push_back(is_subset(opens[v], opens[u]));
      return p;
    };
    for (const auto& c : classes) {
      o.check(std::binary_search(c.members.begin(), c.members.end(), c.representative), ctx);
      for (std::size_t v = 0; v < opens.size(); ++v)
        if (hits[v])
          o.check((profile(v) == profile(c.representative)) ==
                      std::binary_search(c.members.begin(), c.members.end(), v),
                  ctx);
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// 3 and 4 share a corpus

struct Case {
  Model model;
  Formula formula;
};

std::vector<Case> partition_corpus() {
  std::mt19937 rng(303);
  std::vector<Case> out;
  for (int t = 0; t < kPartitionPairs; ++t) {
    SubsetSpace s = testing::random_topology(rng, 1 + rng() % 4, 0.35);
    out.push_back({testing::random_model(rng, s, kAtoms), testing::random_formula(rng, 3, kAtoms)});
  }
  return out;
}

Outcome partition_theorem(const std::vector<Case>& corpus) {
  Outcome o;
  for (const Case& c : corpus) {
    auto ctx = [&] { return print(c.formula) + " in " + model_to_json(c.model).dump(); };
    StableSplittings s = build_stable_splittings(c.model, c.formula);
    PartitionTheoremCheck chk = verify_partition_theorem(c.model, s);
    o.check(chk.ok(), [&] { return chk.detail + " " + ctx(); });
    const SubsetSpace& host = c.model.space();
    // each family is a splitting and stable for its subformula and those below
    for (std::size_t i = 0; i < s.families.size(); ++i) {
      o.check(closed_under_intersection([&] {
                std::vector<PointSet> sets;
                for (auto id : s.families[i]) sets.push_back(host.opens()[id]);
                return sets;
              }()),
              ctx);
      const std::vector<Formula> below = subformulas(s.subformulas[i]);
      for (const EquivClass& cls : equiv_classes(Splitting(host, s.families[i])))
        for (const Formula& g : below) o.check(is_stable_for(c.model, cls.members, g), ctx);
    }
  }
  return o;
}

Outcome quotient_fidelity(const std::vector<Case>& corpus) {
  Outcome o;
  for (const Case& c : corpus) {
    auto ctx = [&] { return print(c.formula) + " in " + model_to_json(c.model).dump(); };
    const auto before = extensions(c.model, c.formula);

    Quotient q = quotient_points(c.model);
    const auto after_q = extensions(q.model, c.formula);
    o.check(q.world_map.size() == c.model.worlds().size(), ctx);
    for (const auto& [g, ext] : before)
      for (const auto& [w, image] : q.world_map)
        o.check(contains(ext[w.open], w.point) == contains(after_q.at(g)[image.open], image.point), ctx);

    Finitized f = finitize(c.model, c.formula);
    const auto after_f = extensions(f.model, c.formula);
    o.check(f.world_map.size() == c.model.worlds().size(), ctx);
    for (const auto& [g, ext] : before)
      for (const auto& [w, image] : f.world_map)
        o.check(contains(ext[w.open], w.point) == contains(after_f.at(g)[image.open], image.point), ctx);
  }

  // The half-open unit interval with opens [0, 2^-k): keep 0 and one point of
  // each band [2^-(k+1), 2^-k) for a growing number of bands.
  for (std::size_t bands = 1; bands <= 6; ++bands) {
    const std::size_t n = bands + 1;  // point 0 is "0"
    std::vector<PointSet> opens{0};
    for (std::size_t k = 0; k < bands; ++k) {
      PointSet u = 1;
      for (std::size_t b = k; b < bands; ++b) u |= PointSet{1} << (b + 1);
      opens.push_back(u);
    }
    Model replica(SubsetSpace::numbered(n, opens), {{"A", 1}});
    auto ctx = [&] { return "replica with " + std::to_string(bands) + " bands"; };
    for (const char* text : {"A", "K A", "<> K A", "[] L A -> A"}) {
      Finitized f = finitize(replica, parse(text));
      const SubsetSpace& s = f.model.space();
      o.check(s.points() == std::vector<std::string>{"x1", "x2"}, ctx);
      o.check(s.opens() == std::vector<PointSet>{0, 3}, ctx);
      o.check(f.model.value("A") == 1U, ctx);
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// 5. basis reduction

Outcome basis_reduction() {
  Outcome o;
  std::mt19937 rng(505);
  for (int t = 0; t < kBasisPairs; ++t) {
    const std::size_t n = 1 + rng() % 4;
    SubsetSpace s = testing::random_topology(rng, n, 0.35);
    // least opens of each point generate everything; add random extras, close under union
    std::vector<PointSet> basis;
    for (std::size_t x = 0; x < n; ++x) {
      PointSet least = s.full();
      for (PointSet u : s.opens())
        if (contains(u, x)) least &= u;
      basis.push_back(least);
    }
    for (PointSet u : s.opens())
      if (u && rng() % 3 == 0) basis.push_back(u);
    basis = close_family(basis, ClosureOps::Union);
    Model m = testing::random_model(rng, s, kAtoms);
    std::vector<Formula> tests;
    for (int k = 0; k < 5; ++k) tests.push_back(testing::random_formula(rng, 3, kAtoms));
    auto ctx = [&] { return model_to_json(m).dump(); };
    BasisReport r = restrict_to_basis(m, basis, tests);
    o.check(r.worlds_agree, [&] { return r.detail + " " + ctx(); });
    o.check(r.validity_agrees, [&] { return r.detail + " " + ctx(); });
    // independent replay on basis worlds
    for (const Formula& f : tests)
      for (const World& w : r.basis_model.worlds()) {
        const PointSet u = r.basis_model.space().opens()[w.open];
        World full{w.point, *m.space().open_index(u)};
        o.check(eval(m, full, f) == eval(r.basis_model, w, f), ctx);
      }
  }
  return o;
}

// ---------------------------------------------------------------------------
// 6. decidability smoke

Outcome decidability() {
  Outcome o;
  SearchBudget budget;
  budget.max_points = 3;
  for (int ax = 1; ax <= 12; ++ax) {
    const std::string name = "axiom-" + std::to_string(ax);
    Verdict v = decide_valid(scheme_template(name), budget);
    o.check(v.status == VerdictStatus::valid_up_to_bound && v.bound == 3, [&] { return name; });
  }
  for (const char* text : {"A -> K A", "L A -> A", "<> K A -> K A"}) {
    Formula f = parse(text);
    Verdict v = decide_valid(f, budget);
    const bool refuted = v.status == VerdictStatus::countermodel && v.model && v.world;
    o.check(refuted, [&] { return std::string(text) + " not refuted"; });
    if (refuted) {
      o.check(!eval(*v.model, *v.world, f), [&] { return std::string(text) + " countermodel does not replay"; });
      Model reloaded = model_from_json(model_to_json(*v.model));
      o.check(!eval(reloaded, *v.world, f), [&] { return std::string(text) + " reloaded countermodel"; });
    }
  }
  const std::size_t expected[] = {1, 4, 29};
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::size_t got = enumerate_families(n, SpaceClass::topology).size();
    o.check(got == expected[n - 1], [&] { return std::to_string(n) + " points: " + std::to_string(got); });
  }
  return o;
}

// ---------------------------------------------------------------------------
// 7. DNF

Outcome dnf_corpus() {
  Outcome o;
  std::mt19937 rng(707);
  SearchBudget check;
  check.max_points = kDnfVerifyPoints;
  for (int t = 0; t < kDnfCorpus; ++t) {
    Formula f = testing::random_formula(rng, 3, kAtoms);
    auto ctx = [&] { return print(f); };
    try {
      Dnf d = to_dnf(f, DnfOptions{.verify = true, .verify_points = kDnfVerifyPoints});
      Formula g = parse(print(d.render()));  // also checks the printed form re-parses
      o.check(classify(g).is_DNF, ctx);
      Verdict v = decide_valid(Formula::iff(f, g), check);
      o.check(v.status == VerdictStatus::valid_up_to_bound && v.bound == kDnfVerifyPoints, ctx);
    } catch (const std::exception& e) {
      o.check(false, [&] { return ctx() + ": " + e.what(); });
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// 8. frame duality

Outcome frame_duality() {
  Outcome o;
  for (std::size_t n = 1; n <= 4; ++n)
    for (const SubsetSpace& s : enumerate_spaces(n, SpaceClass::topology)) {
      auto ctx = [&] { return space_to_json(s).dump(); };
      SubsetFrame sf = subset_frame(s);
      ConditionReport rep = check_conditions(sf.frame);
      o.check(rep.all_hold(8), ctx);
      RecoveredSpace back = frame_to_space(sf.frame);
      SubsetFrame rebuilt = subset_frame(back.points, back.family);
      std::vector<std::size_t> map;
      for (const World& w : back.world_map) {
        auto it = std::find(rebuilt.worlds.begin(), rebuilt.worlds.end(), w);
        map.push_back(static_cast<std::size_t>(it - rebuilt.worlds.begin()));
      }
      o.check(is_isomorphism(sf.frame, rebuilt.frame, map), ctx);
      o.check(back.space.has_value() && back.family.size() == s.opens().size() - 1, ctx);  // empty open has no worlds
    }
  return o;
}

// ---------------------------------------------------------------------------
// 9. algebra

Outcome algebra_semantics() {
  Outcome o;
  std::mt19937 rng(909);
  for (std::size_t n = 1; n <= 3; ++n)
    for (const SubsetSpace& s : enumerate_spaces(n, SpaceClass::topology))
      for (const Model& m : testing::all_models(s, {"A"})) {
        auto ctx = [&] { return model_to_json(m).dump(); };
        ComplexAlgebra c = complex_algebra(m);
        o.check(check_gma(c.algebra), ctx);
        Model m2 = testing::random_model(rng, s, kAtoms);
        ComplexAlgebra c2 = complex_algebra(m2);
        AlgValuation v = world_valuation(c2, m2);
        auto truth = [&](const Formula& f) {
          Element e = 0;
          for (std::size_t w = 0; w < c2.worlds.size(); ++w)
            if (eval(m2, c2.worlds[w], f)) e |= Element{1} << w;
          return e;
        };
        for (int k = 0; k < kAlgebraFormulasPerModel; ++k) {
          Formula f = testing::random_formula(rng, 3, kAtoms);
          o.check(alg_eval(c2.algebra, v, f) == truth(f), [&] { return print(f) + " in " + ctx(); });
        }
        for (int ax = 1; ax <= 12; ++ax) {
          std::map<std::string, Formula> sub;
          for (const auto& var : scheme_metavariables("axiom-" + std::to_string(ax)))
            sub[var] = var == "A" ? Formula::atom(kAtoms[rng() % 2]) : testing::random_l_prime(rng, 2, kAtoms);
          Formula inst = instantiate({"axiom-" + std::to_string(ax), sub});
          o.check(alg_eval(c2.algebra, v, inst) == c2.algebra.top(), [&] { return print(inst) + " in " + ctx(); });
        }
      }
  return o;
}

}  // namespace
}  // namespace topologic

int main() {
  using namespace topologic;
  const std::vector<Case> corpus = partition_corpus();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 axiom soundness sweep", axiom_sweep},
      {"AC2 splitting partition laws", splitting_laws},
      {"AC3 partition theorem construction", [&] { return partition_theorem(corpus); }},
      {"AC4 quotient fidelity", [&] { return quotient_fidelity(corpus); }},
      {"AC5 basis reduction", basis_reduction},
      {"AC6 decidability smoke", decidability},
      {"AC7 DNF", dnf_corpus},
      {"AC8 frame duality", frame_duality},
      {"AC9 algebra", algebra_semantics},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " (" << summary(o) << ")" << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria pass")
            << std::endl;
  return failed ? 1 : 0;
}
