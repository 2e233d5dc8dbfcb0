#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace topologic {

// Connectives of the bimodal language. Or, Implies, Iff, L and Dia are
// derived; `desugar` rewrites them into the primitive set.
enum class Op { Atom, Top, Bot, Not, And, Or, Implies, Iff, K, L, Box, Dia };

bool is_unary(Op op);
bool is_binary(Op op);
bool is_primitive(Op op);

// Immutable formula value with structural equality and a total order.
class Formula {
 public:
  // Default-constructed formula is `top`.
  Formula();

  static Formula atom(std::string name);
  static Formula top();
  static Formula bot();
  static Formula negation(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula knows(Formula f);
  static Formula possible(Formula f);  // L
  static Formula box(Formula f);
  static Formula diamond(Formula f);

  // Left-folded conjunction/disjunction; empty list yields top/bot.
  static Formula conj_all(const std::vector<Formula>& parts);
  static Formula disj_all(const std::vector<Formula>& parts);

  Op op() const;
  const std::string& name() const;  // atoms only
  Formula operand() const;  // unary only
  Formula lhs() const;      // binary only
  Formula rhs() const;      // binary only

  std::size_t size() const;   // node count
  std::size_t depth() const;  // leaves have depth 0

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  static Formula unary(Op op, Formula f);
  static Formula binary(Op op, Formula a, Formula b);
  std::shared_ptr<const Node> node_;
};

// Identifier rule for atom names: [A-Za-z_][A-Za-z0-9_]* minus K, L, top, bot.
bool is_valid_atom_name(std::string_view name);

Formula parse(std::string_view text);
std::string print(const Formula& f);
std::ostream& operator<<(std::ostream& os, const Formula& f);

// Eliminates Or, Implies, Iff, L and Dia.
Formula desugar(const Formula& f);

// Distinct subformulas of the desugared form in post-order of first
// occurrence; `f` itself comes last.
std::vector<Formula> subformulas(const Formula& f);

std::set<std::string> atoms(const Formula& f);

// Replaces atoms by name; atoms absent from the map are kept.
Formula substitute(const Formula& f, const std::map<std::string, Formula>& map);

struct SyntaxClass {
  bool in_L_prime = false;
  bool in_L_double_prime = false;
  bool is_PNF = false;
  bool is_DNF = false;
};

SyntaxClass classify(const Formula& f);

// Generated by atoms (including top and bot) under and, not and the compound
// prefix <>K. Or/Implies/Iff over L' operands count as L' since they
// abbreviate and/not combinations; ~[]~K is accepted as spelled-out <>K.
bool in_L_prime(const Formula& f);

// Depth in the L' generative grammar: atoms 0, each ~, & or <>K adds one.
// Returns npos-like SIZE_MAX for formulas outside L'.
std::size_t l_prime_depth(const Formula& f);

// Top-level conjuncts/disjuncts of a left- or right-nested chain.
std::vector<Formula> flatten_conj(const Formula& f);
std::vector<Formula> flatten_disj(const Formula& f);

}  // namespace topologic
