#include "topologic/semantics.hpp"

#include <algorithm>
#include <regex>

#include "topologic/error.hpp"

namespace topologic {

namespace {

bool holds(const Model& m, std::size_t x, std::size_t u, const Formula& f) {
  const auto& opens = m.space().opens();
  switch (f.op()) {
    case Op::Atom: return contains(m.value(f.name()), x);
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Not: return !holds(m, x, u, f.operand());
    case Op::And: return holds(m, x, u, f.lhs()) && holds(m, x, u, f.rhs());
    case Op::Or: return holds(m, x, u, f.lhs()) || holds(m, x, u, f.rhs());
    case Op::Implies: return !holds(m, x, u, f.lhs()) || holds(m, x, u, f.rhs());
    case Op::Iff: return holds(m, x, u, f.lhs()) == holds(m, x, u, f.rhs());
    case Op::K:
      for (std::size_t y = 0; y < m.space().point_count(); ++y)
        if (contains(opens[u], y) && !holds(m, y, u, f.operand())) return false;
      return true;
    case Op::L:
      for (std::size_t y = 0; y < m.space().point_count(); ++y)
        if (contains(opens[u], y) && holds(m, y, u, f.operand())) return true;
      return false;
    case Op::Box:
      for (std::size_t v = 0; v < opens.size(); ++v)
        if (is_subset(opens[v], opens[u]) && contains(opens[v], x) && !holds(m, x, v, f.operand()))
          return false;
      return true;
    case Op::Dia:
      for (std::size_t v = 0; v < opens.size(); ++v)
        if (is_subset(opens[v], opens[u]) && contains(opens[v], x) && holds(m, x, v, f.operand()))
          return true;
      return false;
  }
  return false;
}

// One bottom-up step of the extension kernel for a primitive node whose
// children are already computed.
PointSet step(const Model& m, std::size_t u, const Formula& f,
              const std::map<Formula, Extension>& done) {
  const auto& space = m.space();
  const PointSet U = space.opens()[u];
  switch (f.op()) {
    case Op::Atom: return m.value(f.name()) & U;
    case Op::Top: return U;
    case Op::Bot: return 0;
    case Op::Not: return U & ~done.at(f.operand())[u];
    case Op::And: return done.at(f.lhs())[u] & done.at(f.rhs())[u];
    case Op::K: return done.at(f.operand())[u] == U ? U : 0;
    case Op::Box: {
      const Extension& e = done.at(f.operand());
      PointSet bad = 0;
      for (std::size_t v : space.opens_below(u)) bad |= space.opens()[v] & ~e[v];
      return U & ~bad;
    }
    default:
      throw Error("extension kernel reached a derived connective");
  }
}

Validity least_failure(const Model& m, const Extension& ext) {
  const auto& opens = m.space().opens();
  for (std::size_t x = 0; x < m.space().point_count(); ++x)
    for (std::size_t u = 0; u < opens.size(); ++u)
      if (contains(opens[u], x) && !contains(ext[u], x)) return {false, World{x, u}};
  return {};
}

}  // namespace

bool eval(const Model& model, const World& w, const Formula& f) {
  if (!model.is_world(w)) throw InvalidInput("not a world of the model");
  return holds(model, w.point, w.open, f);
}

std::map<Formula, Extension> extensions(const Model& model, const Formula& f, Execution exec) {
  std::map<Formula, Extension> done;
  const std::size_t n_opens = model.space().opens().size();
  // parallel per open only pays off on larger families
  const Execution inner = n_opens >= 64 ? exec : Execution::serial;
  for (const Formula& g : subformulas(f)) {
    Extension e(n_opens);
    for_each_index(n_opens, [&](std::size_t u) { e[u] = step(model, u, g, done); }, inner);
    done.emplace(g, std::move(e));
  }
  return done;
}

Extension extension(const Model& model, const Formula& f, Execution exec) {
  auto all = extensions(model, f, exec);
  return all.at(desugar(f));
}

Validity valid_in_model(const Model& model, const Formula& f, Execution exec) {
  return least_failure(model, extension(model, f, exec));
}

Validity valid_in_model_reference(const Model& model, const Formula& f) {
  for (const World& w : model.worlds())
    if (!eval(model, w, f)) return {false, w};
  return {};
}

// ---------------------------------------------------------------------------
// Schemes

namespace {

const std::map<std::string, std::string>& fixed_schemes() {
  static const std::map<std::string, std::string> table = {
      {"axiom-1",
       "(phi -> psi -> phi) & ((phi -> psi -> chi) -> (phi -> psi) -> phi -> chi) & "
       "((~phi -> ~psi) -> psi -> phi) & (phi | ~phi)"},
      {"axiom-2", "(A -> [] A) & (~A -> [] ~A)"},
      {"axiom-3", "[] (phi -> psi) -> [] phi -> [] psi"},
      {"axiom-4", "[] phi -> phi"},
      {"axiom-5", "[] phi -> [] [] phi"},
      {"axiom-6", "K (phi -> psi) -> K phi -> K psi"},
      {"axiom-7", "K phi -> phi"},
      {"axiom-8", "K phi -> K K phi"},
      {"axiom-9", "phi -> K L phi"},
      {"axiom-10", "K [] phi -> [] K phi"},
      {"axiom-11", "<> [] phi -> [] <> phi"},
      {"axiom-12", "<> (K phi & psi) & L <> (K phi & chi) -> <> (K <> phi & <> psi & L <> chi)"},
      {"lemma-damand", "<> (phi & psi) <-> <> phi & <> psi"},
      {"prop-boxdam", "[] <> phi -> <> [] phi"},
      {"open-char", "A -> <> K A"},
      {"closed-char", "[] L A -> A"},
      {"dense-char", "[] L A"},
      {"nowhere-dense-char", "L <> K ~A"},
  };
  return table;
}

std::optional<std::size_t> lemma_main_arity(const std::string& name) {
  static const std::regex re(R"(lemma-main\(([1-9][0-9]?)\))");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return std::stoul(m[1].str());
}

Formula lemma_main(std::size_t n) {
  Formula phi = Formula::atom("phi");
  Formula dk = Formula::diamond(Formula::knows(phi));
  std::vector<Formula> premise{dk}, conclusion{Formula::knows(phi)};
  for (std::size_t i = 1; i <= n; ++i) {
    Formula psi = Formula::atom("psi" + std::to_string(i));
    premise.push_back(Formula::possible(Formula::conj(dk, psi)));
    conclusion.push_back(Formula::possible(psi));
  }
  return Formula::implies(Formula::conj_all(premise), Formula::diamond(Formula::conj_all(conclusion)));
}

bool needs_lattice(const std::string& name) {
  return name == "axiom-11" || name == "axiom-12" || name == "prop-boxdam" ||
         lemma_main_arity(name).has_value();
}

bool needs_topology(const std::string& name) {
  return name.size() > 5 && name.substr(name.size() - 5) == "-char";
}

}  // namespace

std::vector<std::string> scheme_names() {
  std::vector<std::string> out;
  for (int i = 1; i <= 12; ++i) out.push_back("axiom-" + std::to_string(i));
  out.insert(out.end(), {"lemma-damand", "lemma-main(1)", "lemma-main(2)", "lemma-main(3)",
                         "prop-boxdam", "open-char", "closed-char", "dense-char",
                         "nowhere-dense-char"});
  return out;
}

bool is_scheme_name(const std::string& name) {
  return fixed_schemes().count(name) > 0 || lemma_main_arity(name).has_value();
}

Formula scheme_template(const std::string& name) {
  if (auto it = fixed_schemes().find(name); it != fixed_schemes().end()) return parse(it->second);
  if (auto n = lemma_main_arity(name)) return lemma_main(*n);
  throw InvalidInput("unknown scheme '" + name + "'");
}

std::vector<std::string> scheme_metavariables(const std::string& name) {
  auto names = atoms(scheme_template(name));
  return {names.begin(), names.end()};
}

Formula instantiate(const SchemeInstance& inst) {
  Formula t = scheme_template(inst.scheme);
  for (const auto& v : scheme_metavariables(inst.scheme))
    if (!inst.substitution.count(v))
      throw InvalidInput("scheme '" + inst.scheme + "' needs a substitution for '" + v + "'");
  return substitute(t, inst.substitution);
}

SchemeResult check_scheme(const Model& model, const SchemeInstance& inst, Execution exec) {
  SchemeResult r;
  r.instance = instantiate(inst);
  auto fail = [&](std::string why) {
    r.status = SchemeStatus::precondition_failed;
    r.detail = std::move(why);
    return r;
  };
  const std::string& name = inst.scheme;
  if (name == "axiom-2") {
    Op op = inst.substitution.at("A").op();
    if (op != Op::Atom && op != Op::Top && op != Op::Bot)
      return fail("axiom-2 ranges over atoms only");
  }
  if (needs_lattice(name) && !is_lattice(model.space()))
    return fail("opens must be closed under union and intersection");
  if (needs_topology(name) && !is_topology(model.space())) return fail("space must be a topology");
  if (name == "lemma-damand" || lemma_main_arity(name)) {
    for (const auto& [var, g] : inst.substitution) {
      if (name == "lemma-damand" && var != "phi") continue;
      Formula bip = Formula::implies(Formula::diamond(g), Formula::box(g));
      if (!valid_in_model(model, bip, exec).valid)
        return fail("'" + print(g) + "' substituted for " + var + " is not bi-persistent in the model");
    }
  }
  Validity v = valid_in_model(model, r.instance, exec);
  r.status = v.valid ? SchemeStatus::valid : SchemeStatus::invalid;
  r.counterexample = v.counterexample;
  return r;
}

bool is_tautology(const Formula& f) {
  // propositional skeleton: everything below a modal operator is opaque
  std::vector<Formula> vars;
  auto collect = [&](auto&& self, const Formula& g) -> void {
    switch (g.op()) {
      case Op::Top:
      case Op::Bot: return;
      case Op::Not: self(self, g.operand()); return;
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff:
        self(self, g.lhs());
        self(self, g.rhs());
        return;
      default:
        if (std::find(vars.begin(), vars.end(), g) == vars.end()) vars.push_back(g);
    }
  };
  collect(collect, f);
  if (vars.size() > 20) throw BudgetExceeded("too many propositional variables for a truth table");
  auto value = [&](auto&& self, const Formula& g, std::uint32_t row) -> bool {
    switch (g.op()) {
      case Op::Top: return true;
      case Op::Bot: return false;
      case Op::Not: return !self(self, g.operand(), row);
      case Op::And: return self(self, g.lhs(), row) && self(self, g.rhs(), row);
      case Op::Or: return self(self, g.lhs(), row) || self(self, g.rhs(), row);
      case Op::Implies: return !self(self, g.lhs(), row) || self(self, g.rhs(), row);
      case Op::Iff: return self(self, g.lhs(), row) == self(self, g.rhs(), row);
      default: {
        auto idx = std::find(vars.begin(), vars.end(), g) - vars.begin();
        return (row >> idx) & 1U;
      }
    }
  };
  for (std::uint32_t row = 0; row < (1U << vars.size()); ++row)
    if (!value(value, f, row)) return false;
  return true;
}

Characterization characterize(const Model& model, const std::string& atom) {
  const SubsetSpace& s = model.space();
  if (!is_topology(s)) throw InvalidInput("characterization requires a topology");
  if (!is_valid_atom_name(atom)) throw InvalidInput("invalid atom name '" + atom + "'");
  const PointSet a = model.value(atom);
  Characterization c;
  c.open = interior(s, a) == a;
  c.closed = closure(s, a) == a;
  c.dense = closure(s, a) == s.full();
  c.nowhere_dense = interior(s, closure(s, a)) == 0;
  const std::map<std::string, Formula> sub{{"A", Formula::atom(atom)}};
  auto valid = [&](const char* scheme) {
    return valid_in_model(model, substitute(scheme_template(scheme), sub)).valid;
  };
  c.open_formula = valid("open-char");
  c.closed_formula = valid("closed-char");
  c.dense_formula = valid("dense-char");
  c.nowhere_dense_formula = valid("nowhere-dense-char");
  if (!c.agrees())
    throw VerificationFailure("set-theoretic and formula-based characterizations disagree for '" +
                              atom + "'");
  return c;
}

}  // namespace topologic
