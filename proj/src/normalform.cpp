#include "topologic/normalform.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <tuple>

#include "topologic/error.hpp"

namespace topologic {

Formula PnfBlock::render() const {
  std::vector<Formula> parts{base, Formula::knows(known)};
  for (const Formula& p : possibles) parts.push_back(Formula::possible(p));
  return Formula::conj_all(parts);
}

Formula Dnf::render() const {
  std::vector<Formula> parts;
  for (const PnfBlock& b : blocks) parts.push_back(b.render());
  return Formula::disj_all(parts);
}

std::string to_string(Persistence p) {
  switch (p) {
    case Persistence::persistent: return "persistent";
    case Persistence::anti_persistent: return "anti-persistent";
    case Persistence::bi_persistent: return "bi-persistent";
    case Persistence::none: return "none";
  }
  return "?";
}

namespace {

// Reduced ordered BDDs over atoms and <>K-terms. L' formulas denote point
// sets, so Boolean reasoning over these variables is sound; the constraint
// <>K g -> g is kept in `theory_` to prune more.
class LPrimeAlgebra {
 public:
  using Node = std::uint32_t;
  static constexpr Node kFalse = 0, kTrue = 1;

  LPrimeAlgebra() {
    nodes_.push_back({kNoVar, kFalse, kFalse});
    nodes_.push_back({kNoVar, kTrue, kTrue});
  }

  Node atom(const std::string& name) {
    auto [it, fresh] = atom_vars_.emplace(name, static_cast<std::uint32_t>(vars_.size()));
    if (fresh) vars_.push_back({true, name, kFalse});
    return mk(it->second, kFalse, kTrue);
  }

  // <>K applied to an L' point set, i.e. its interior.
  Node interior(Node inner) {
    if (inner == kTrue || inner == kFalse) return inner;
    const Entry& e = nodes_[inner];
    if (e.lo == kFalse && e.hi == kTrue && !vars_[e.var].is_atom) return inner;  // idempotent
    auto [it, fresh] = dk_vars_.emplace(inner, static_cast<std::uint32_t>(vars_.size()));
    if (fresh) {
      vars_.push_back({false, {}, inner});
      Node d = mk(it->second, kFalse, kTrue);
      theory_ = conj(theory_, disj(neg(d), inner));
      return d;
    }
    return mk(it->second, kFalse, kTrue);
  }

  Node neg(Node a) { return ite(a, kFalse, kTrue); }
  Node conj(Node a, Node b) { return ite(a, b, kFalse); }
  Node disj(Node a, Node b) { return ite(a, kTrue, b); }

  bool empty(Node a) { return conj(a, theory_) == kFalse; }
  bool implies(Node a, Node b) { return empty(conj(a, neg(b))); }

  // Builds the point set of an L' formula; nullopt if f is not in L'.
  std::optional<Node> from_formula(const Formula& f) {
    if (!in_L_prime(f)) return std::nullopt;
    return build(f);
  }

  Formula render(Node n) {
    if (n == kTrue) return Formula::top();
    if (n == kFalse) return Formula::bot();
    if (auto it = rendered_.find(n); it != rendered_.end()) return it->second;
    const Entry e = nodes_[n];
    const VarInfo& info = vars_[e.var];
    Formula v = info.is_atom ? Formula::atom(info.name)
                             : Formula::diamond(Formula::knows(render(info.inner)));
    Formula out;
    if (e.lo == kFalse && e.hi == kTrue) out = v;
    else if (e.lo == kTrue && e.hi == kFalse) out = Formula::negation(v);
    else if (e.lo == kFalse) out = Formula::conj(v, render(e.hi));
    else if (e.hi == kFalse) out = Formula::conj(Formula::negation(v), render(e.lo));
    else if (e.hi == kTrue) out = Formula::disj(v, render(e.lo));
    else if (e.lo == kTrue) out = Formula::disj(Formula::negation(v), render(e.hi));
    else out = Formula::disj(Formula::conj(v, render(e.hi)), Formula::conj(Formula::negation(v), render(e.lo)));
    rendered_.emplace(n, out);
    return out;
  }

 private:
  static constexpr std::uint32_t kNoVar = std::numeric_limits<std::uint32_t>::max();
  struct Entry {
    std::uint32_t var;
    Node lo, hi;
  };
  struct VarInfo {
    bool is_atom;
    std::string name;
    Node inner;
  };

  Node build(const Formula& f) {
    switch (f.op()) {
      case Op::Atom: return atom(f.name());
      case Op::Top: return kTrue;
      case Op::Bot: return kFalse;
      case Op::And: return conj(build(f.lhs()), build(f.rhs()));
      case Op::Or: return disj(build(f.lhs()), build(f.rhs()));
      case Op::Implies: return disj(neg(build(f.lhs())), build(f.rhs()));
      case Op::Iff: {
        Node a = build(f.lhs()), b = build(f.rhs());
        return disj(conj(a, b), conj(neg(a), neg(b)));
      }
      case Op::Dia: return interior(build(f.operand().operand()));
      case Op::Not: {
        const Formula& g = f.operand();
        // spelled-out <>K: ~[]~K h
        if (g.op() == Op::Box && g.operand().op() == Op::Not && g.operand().operand().op() == Op::K)
          return interior(build(g.operand().operand().operand()));
        return neg(build(g));
      }
      default: throw Error("non-L' connective inside an L' formula");
    }
  }

  Node mk(std::uint32_t var, Node lo, Node hi) {
    if (lo == hi) return lo;
    auto key = std::make_tuple(var, lo, hi);
    if (auto it = unique_.find(key); it != unique_.end()) return it->second;
    Node n = static_cast<Node>(nodes_.size());
    nodes_.push_back({var, lo, hi});
    unique_.emplace(key, n);
    return n;
  }

  std::uint32_t top_var(Node n) const { return nodes_[n].var; }

  Node cofactor(Node n, std::uint32_t var, bool value) const {
    if (n <= kTrue || nodes_[n].var != var) return n;
    return value ? nodes_[n].hi : nodes_[n].lo;
  }

  Node ite(Node f, Node g, Node h) {
    if (f == kTrue) return g;
    if (f == kFalse) return h;
    if (g == h) return g;
    if (g == kTrue && h == kFalse) return f;
    auto key = std::make_tuple(f, g, h);
    if (auto it = ite_memo_.find(key); it != ite_memo_.end()) return it->second;
    std::uint32_t v = top_var(f);
    if (g > kTrue) v = std::min(v, top_var(g));
    if (h > kTrue) v = std::min(v, top_var(h));
    Node hi = ite(cofactor(f, v, true), cofactor(g, v, true), cofactor(h, v, true));
    Node lo = ite(cofactor(f, v, false), cofactor(g, v, false), cofactor(h, v, false));
    Node r = mk(v, lo, hi);
    ite_memo_.emplace(key, r);
    return r;
  }

  std::vector<Entry> nodes_;
  std::vector<VarInfo> vars_;
  std::map<std::tuple<std::uint32_t, Node, Node>, Node> unique_;
  std::map<std::tuple<Node, Node, Node>, Node> ite_memo_;
  std::map<std::string, std::uint32_t> atom_vars_;
  std::map<Node, std::uint32_t> dk_vars_;
  std::map<Node, Formula> rendered_;
  Node theory_ = kTrue;
};

using Node = LPrimeAlgebra::Node;

struct Block {
  Node base;
  Node known;
  std::vector<Node> possibles;  // sorted, unique

  friend auto operator<=>(const Block&, const Block&) = default;
};

using Disjunction = std::vector<Block>;

class Normalizer {
 public:
  explicit Normalizer(const DnfOptions& options) : options_(options) {}

  Disjunction convert(const Formula& f) {
    if (auto n = alg_.from_formula(f)) return {Block{*n, LPrimeAlgebra::kTrue, {}}};
    Disjunction out;
    switch (f.op()) {
      case Op::Not: out = negate(convert(f.operand())); break;
      case Op::And: out = conjoin(convert(f.lhs()), convert(f.rhs())); break;
      case Op::Or: out = join(convert(f.lhs()), convert(f.rhs())); break;
      case Op::Implies: out = join(negate(convert(f.lhs())), convert(f.rhs())); break;
      case Op::Iff: {
        Disjunction a = convert(f.lhs()), b = convert(f.rhs());
        out = join(conjoin(a, b), conjoin(negate(a), negate(b)));
        break;
      }
      case Op::K: out = know(convert(f.operand())); break;
      case Op::L: out = possible(convert(f.operand())); break;
      case Op::Dia: out = diamond(convert(f.operand())); break;
      case Op::Box: out = negate(diamond(negate(convert(f.operand())))); break;
      default: throw Error("unexpected connective in DNF conversion");
    }
    trace_.push_back(print(f) + "  =>  " + std::to_string(out.size()) + " block(s)");
    return out;
  }

  PnfBlock export_block(const Block& b) {
    PnfBlock out{alg_.render(b.base), alg_.render(b.known), {}};
    for (Node p : b.possibles) out.possibles.push_back(alg_.render(p));
    return out;
  }

  std::vector<std::string> take_trace() { return std::move(trace_); }

 private:
  void charge(std::size_t steps) {
    steps_ += steps;
    if (steps_ > options_.step_limit)
      throw BudgetExceeded("DNF rewriting exceeded " + std::to_string(options_.step_limit) + " steps" +
                           trace_summary());
  }

  std::string trace_summary() const {
    std::string s;
    std::size_t from = trace_.size() > 5 ? trace_.size() - 5 : 0;
    for (std::size_t i = from; i < trace_.size(); ++i) s += "\n  " + trace_[i];
    return s;
  }

  void check_size(const Disjunction& d) {
    if (d.size() > options_.max_blocks)
      throw BudgetExceeded("DNF intermediate exceeded " + std::to_string(options_.max_blocks) + " blocks" +
                           trace_summary());
  }

  // Components are kept as written; emptiness and redundancy are judged
  // relative to the known set, since every point of the view lies in it.
  std::optional<Block> canonical(Block b) {
    charge(1);
    const Node here = alg_.conj(b.base, b.known);
    if (alg_.empty(here)) return std::nullopt;
    std::sort(b.possibles.begin(), b.possibles.end());
    b.possibles.erase(std::unique(b.possibles.begin(), b.possibles.end()), b.possibles.end());
    std::vector<Node> local;
    for (Node p : b.possibles) {
      local.push_back(alg_.conj(p, b.known));
      if (alg_.empty(local.back())) return std::nullopt;
    }
    std::vector<Node> kept;
    for (std::size_t i = 0; i < local.size(); ++i) {
      bool redundant = alg_.implies(here, local[i]);
      for (std::size_t j = 0; j < local.size() && !redundant; ++j)
        redundant = j != i && alg_.implies(local[j], local[i]) && !(alg_.implies(local[i], local[j]) && j > i);
      if (!redundant) kept.push_back(b.possibles[i]);
    }
    b.possibles = std::move(kept);
    return b;
  }

  bool block_implies(const Block& a, const Block& b) {
    const Node here = alg_.conj(a.base, a.known);
    if (!alg_.implies(here, b.base) || !alg_.implies(a.known, b.known)) return false;
    for (Node q : b.possibles) {
      bool found = alg_.implies(here, q);
      for (Node p : a.possibles)
        if (!found) found = alg_.implies(alg_.conj(p, a.known), q);
      if (!found) return false;
    }
    return true;
  }

  Disjunction simplify(const Disjunction& in) {
    std::map<std::pair<Node, std::vector<Node>>, Node> merged;
    for (const Block& raw : in) {
      auto b = canonical(raw);
      if (!b) continue;
      auto key = std::make_pair(b->known, b->possibles);
      auto [it, fresh] = merged.emplace(key, b->base);
      if (!fresh) it->second = alg_.disj(it->second, b->base);
    }
    Disjunction blocks;
    for (const auto& [key, base] : merged) blocks.push_back(Block{base, key.first, key.second});
    charge(blocks.size() * blocks.size());
    std::vector<bool> dropped(blocks.size(), false);
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (std::size_t j = 0; j < blocks.size() && !dropped[i]; ++j)
        if (j != i && !dropped[j] && block_implies(blocks[i], blocks[j])) dropped[i] = true;
    Disjunction out;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (!dropped[i]) out.push_back(blocks[i]);
    std::sort(out.begin(), out.end());
    check_size(out);
    return out;
  }

  Disjunction join(Disjunction a, const Disjunction& b) {
    a.insert(a.end(), b.begin(), b.end());
    return simplify(a);
  }

  Disjunction conjoin(const Disjunction& a, const Disjunction& b) {
    charge(a.size() * b.size());
    if (a.size() * b.size() > options_.max_blocks * 4)
      throw BudgetExceeded("DNF conjunction too large" + trace_summary());
    Disjunction out;
    for (const Block& x : a)
      for (const Block& y : b) {
        Block z{alg_.conj(x.base, y.base), alg_.conj(x.known, y.known), x.possibles};
        z.possibles.insert(z.possibles.end(), y.possibles.begin(), y.possibles.end());
        out.push_back(std::move(z));
      }
    return simplify(out);
  }

  // ~(b & K k & L p..) = ~b | L ~k | K ~p | ...
  Disjunction negate_block(const Block& b) {
    Disjunction out{Block{alg_.neg(b.base), LPrimeAlgebra::kTrue, {}}};
    if (b.known != LPrimeAlgebra::kTrue)
      out.push_back(Block{LPrimeAlgebra::kTrue, LPrimeAlgebra::kTrue, {alg_.neg(b.known)}});
    for (Node p : b.possibles) out.push_back(Block{LPrimeAlgebra::kTrue, alg_.neg(p), {}});
    return simplify(out);
  }

  Disjunction negate(const Disjunction& d) {
    Disjunction acc{Block{LPrimeAlgebra::kTrue, LPrimeAlgebra::kTrue, {}}};
    for (const Block& b : d) acc = conjoin(acc, negate_block(b));
    return acc;
  }

  // K(B1 | .. | Bm): some nonempty set S of blocks has its K/L part true in
  // the view, and the view lies inside the union of their bases.
  Disjunction know(const Disjunction& d) {
    const std::size_t m = d.size();
    if (m > 16) throw BudgetExceeded("K over more than 16 blocks" + trace_summary());
    charge(std::size_t{1} << m);
    Disjunction out;
    for (std::uint32_t s = 1; s < (1U << m); ++s) {
      Node cover = LPrimeAlgebra::kFalse, known = LPrimeAlgebra::kTrue;
      std::vector<Node> ps;
      for (std::size_t j = 0; j < m; ++j)
        if ((s >> j) & 1U) {
          cover = alg_.disj(cover, d[j].base);
          known = alg_.conj(known, d[j].known);
          ps.insert(ps.end(), d[j].possibles.begin(), d[j].possibles.end());
        }
      out.push_back(Block{LPrimeAlgebra::kTrue, alg_.conj(cover, known), ps});
    }
    return simplify(out);
  }

  // L(b & K k & L p..) = K k & L p.. & L b
  Disjunction possible(const Disjunction& d) {
    Disjunction out;
    for (const Block& b : d) {
      Block c{LPrimeAlgebra::kTrue, b.known, b.possibles};
      c.possibles.push_back(b.base);
      out.push_back(std::move(c));
    }
    return simplify(out);
  }

  // <>(b & K k & L p..) = b & <>K k & L(<>K k & p) ..  (views closed under union)
  Disjunction diamond(const Disjunction& d) {
    Disjunction out;
    for (const Block& b : d) {
      Node reach = alg_.interior(b.known);
      Block c{alg_.conj(b.base, reach), LPrimeAlgebra::kTrue, {}};
      for (Node p : b.possibles) c.possibles.push_back(alg_.conj(reach, p));
      out.push_back(std::move(c));
    }
    return simplify(out);
  }

  DnfOptions options_;
  LPrimeAlgebra alg_;
  std::vector<std::string> trace_;
  std::size_t steps_ = 0;
};

}  // namespace

Dnf to_dnf(const Formula& f, const DnfOptions& options) {
  Normalizer norm(options);
  Disjunction blocks = norm.convert(f);
  Dnf out;
  for (const Block& b : blocks) out.blocks.push_back(norm.export_block(b));
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const PnfBlock& a, const PnfBlock& b) { return a.render() < b.render(); });
  if (out.blocks.empty()) out.blocks.push_back(PnfBlock{Formula::bot(), Formula::top(), {}});
  out.trace = norm.take_trace();

  const Formula rendered = out.render();
  if (!classify(rendered).is_DNF) throw VerificationFailure("DNF output is not in disjunctive normal form");
  if (options.verify) {
    SearchBudget budget;
    budget.max_points = options.verify_points;
    Verdict v = decide_valid(Formula::iff(f, rendered), budget);
    if (v.status == VerdictStatus::budget_exhausted) throw BudgetExceeded("DNF verification ran out of budget");
    if (v.status != VerdictStatus::valid_up_to_bound)
      throw VerificationFailure("DNF output is not equivalent to the input: " + print(rendered));
  }
  return out;
}

PersistenceReport persistence_class(const Formula& f, const SearchBudget& budget) {
  PersistenceReport r;
  auto valid = [&](const Formula& g) {
    Verdict v = decide_valid(g, budget);
    if (v.status == VerdictStatus::budget_exhausted) throw BudgetExceeded("persistence check ran out of budget");
    return v.status == VerdictStatus::valid_up_to_bound;
  };
  r.persistent = valid(Formula::implies(f, Formula::box(f)));
  r.anti_persistent = valid(Formula::implies(Formula::diamond(f), f));
  r.in_L_prime = in_L_prime(f);
  r.bound = budget.max_points;
  if (r.persistent && r.anti_persistent) r.verdict = Persistence::bi_persistent;
  else if (r.persistent) r.verdict = Persistence::persistent;
  else if (r.anti_persistent) r.verdict = Persistence::anti_persistent;
  return r;
}

}  // namespace topologic
