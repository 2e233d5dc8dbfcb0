#include "topologic/formula.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include "topologic/error.hpp"

namespace topologic {

struct Formula::Node {
  Op op;
  std::string name;
  std::shared_ptr<const Node> lhs;  // operand for unary nodes
  std::shared_ptr<const Node> rhs;
  std::size_t size = 1;
  std::size_t depth = 0;
};

namespace {

const Formula& shared_top() {
  static const Formula top = Formula::top();
  return top;
}

}  // namespace

bool is_unary(Op op) {
  return op == Op::Not || op == Op::K || op == Op::L || op == Op::Box || op == Op::Dia;
}

bool is_binary(Op op) {
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}

bool is_primitive(Op op) {
  switch (op) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
    case Op::Not:
    case Op::And:
    case Op::K:
    case Op::Box:
      return true;
    default:
      return false;
  }
}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula::Formula() : node_(shared_top().node_) {}

Formula Formula::atom(std::string name) {
  if (!is_valid_atom_name(name)) throw InvalidInput("invalid atom name '" + name + "'");
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::top() {
  auto n = std::make_shared<Node>();
  n->op = Op::Top;
  return Formula(std::move(n));
}

Formula Formula::bot() {
  auto n = std::make_shared<Node>();
  n->op = Op::Bot;
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) { return unary(Op::Not, std::move(f)); }
Formula Formula::knows(Formula f) { return unary(Op::K, std::move(f)); }
Formula Formula::possible(Formula f) { return unary(Op::L, std::move(f)); }
Formula Formula::box(Formula f) { return unary(Op::Box, std::move(f)); }
Formula Formula::diamond(Formula f) { return unary(Op::Dia, std::move(f)); }
Formula Formula::conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) {
  return binary(Op::Implies, std::move(a), std::move(b));
}
Formula Formula::iff(Formula a, Formula b) { return binary(Op::Iff, std::move(a), std::move(b)); }

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return top();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return bot();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
Formula Formula::operand() const { return Formula(node_->lhs); }
Formula Formula::lhs() const { return Formula(node_->lhs); }
Formula Formula::rhs() const { return Formula(node_->rhs); }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::depth() const { return node_->depth; }

Formula Formula::unary(Op op, Formula f) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->size = f.size() + 1;
  n->depth = f.depth() + 1;
  n->lhs = std::move(f.node_);
  return Formula(std::move(n));
}

Formula Formula::binary(Op op, Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->size = a.size() + b.size() + 1;
  n->depth = std::max(a.depth(), b.depth()) + 1;
  n->lhs = std::move(a.node_);
  n->rhs = std::move(b.node_);
  return Formula(std::move(n));
}

bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  switch (a.op()) {
    case Op::Atom:
      return a.name() <=> b.name();
    case Op::Top:
    case Op::Bot:
      return std::strong_ordering::equal;
    default:
      break;
  }
  if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
  if (is_binary(a.op())) return a.rhs() <=> b.rhs();
  return std::strong_ordering::equal;
}

namespace {

bool is_reserved(std::string_view word) {
  return word == "K" || word == "L" || word == "top" || word == "bot";
}

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

// ---------------------------------------------------------------------------
// Lexer / recursive-descent parser

enum class Tok { Ident, Not, Box, Dia, K, L, Top, Bot, And, Or, Imp, Iff, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    if (starts("<->")) {
      out.push_back({Tok::Iff, "<->", i});
      i += 3;
    } else if (starts("->")) {
      out.push_back({Tok::Imp, "->", i});
      i += 2;
    } else if (starts("[]")) {
      out.push_back({Tok::Box, "[]", i});
      i += 2;
    } else if (starts("<>")) {
      out.push_back({Tok::Dia, "<>", i});
      i += 2;
    } else if (c == '~') {
      out.push_back({Tok::Not, "~", i++});
    } else if (c == '&') {
      out.push_back({Tok::And, "&", i++});
    } else if (c == '|') {
      out.push_back({Tok::Or, "|", i++});
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", i++});
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word(s.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "K") kind = Tok::K;
      else if (word == "L") kind = Tok::L;
      else if (word == "top") kind = Tok::Top;
      else if (word == "bot") kind = Tok::Bot;
      out.push_back({kind, std::move(word), i});
      i = j;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().kind == Tok::RParen) throw ParseError("unbalanced ')'", peek().offset);
    if (peek().kind != Tok::End) throw ParseError("unexpected " + describe(peek()), peek().offset);
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (peek().kind == Tok::Iff) {
      next();
      f = Formula::iff(f, parse_imp());
    }
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (peek().kind == Tok::Imp) {
      next();
      return Formula::implies(f, parse_imp());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::Or) {
      next();
      f = Formula::disj(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Tok::And) {
      next();
      f = Formula::conj(f, parse_unary());
    }
    return f;
  }

  static bool starts_operand(Tok k) {
    switch (k) {
      case Tok::Ident:
      case Tok::Not:
      case Tok::Box:
      case Tok::Dia:
      case Tok::K:
      case Tok::L:
      case Tok::Top:
      case Tok::Bot:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Formula parse_unary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Not:
        return Formula::negation(operand_of(t));
      case Tok::Box:
        return Formula::box(operand_of(t));
      case Tok::Dia:
        return Formula::diamond(operand_of(t));
      case Tok::K:
        if (!starts_operand(peek().kind))
          throw ParseError("reserved word 'K' used as atom", t.offset);
        return Formula::knows(parse_unary());
      case Tok::L:
        if (!starts_operand(peek().kind))
          throw ParseError("reserved word 'L' used as atom", t.offset);
        return Formula::possible(parse_unary());
      case Tok::Top:
        return Formula::top();
      case Tok::Bot:
        return Formula::bot();
      case Tok::Ident:
        return Formula::atom(t.text);
      case Tok::LParen: {
        Formula f = parse_iff();
        if (peek().kind == Tok::End) throw ParseError("unbalanced '('", t.offset);
        if (peek().kind != Tok::RParen)
          throw ParseError("expected ')' for '(' at byte " + std::to_string(t.offset) +
                               ", found " + describe(peek()),
                           peek().offset);
        next();
        return f;
      }
      case Tok::RParen:
        throw ParseError("unbalanced ')'", t.offset);
      case Tok::End:
        throw ParseError("unexpected end of input", t.offset);
      default:
        throw ParseError("unexpected " + describe(t), t.offset);
    }
  }

  Formula operand_of(const Token& t) {
    if (!starts_operand(peek().kind))
      throw ParseError("missing operand after '" + t.text + "'", peek().offset);
    return parse_unary();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer. Levels: iff 0, imp 1, or 2, and 3, unary 4.

int level_of(Op op) {
  switch (op) {
    case Op::Iff:
      return 0;
    case Op::Implies:
      return 1;
    case Op::Or:
      return 2;
    case Op::And:
      return 3;
    default:
      return 4;
  }
}

void print_at(const Formula& f, int min_level, std::string& out) {
  int lvl = level_of(f.op());
  bool paren = lvl < min_level;
  if (paren) out += '(';
  switch (f.op()) {
    case Op::Atom:
      out += f.name();
      break;
    case Op::Top:
      out += "top";
      break;
    case Op::Bot:
      out += "bot";
      break;
    case Op::Not:
      out += '~';
      print_at(f.operand(), 4, out);
      break;
    case Op::K:
      out += "K ";
      print_at(f.operand(), 4, out);
      break;
    case Op::L:
      out += "L ";
      print_at(f.operand(), 4, out);
      break;
    case Op::Box:
      out += "[] ";
      print_at(f.operand(), 4, out);
      break;
    case Op::Dia:
      out += "<> ";
      print_at(f.operand(), 4, out);
      break;
    case Op::And:
      print_at(f.lhs(), 3, out);
      out += " & ";
      print_at(f.rhs(), 4, out);
      break;
    case Op::Or:
      print_at(f.lhs(), 2, out);
      out += " | ";
      print_at(f.rhs(), 3, out);
      break;
    case Op::Implies:
      print_at(f.lhs(), 2, out);
      out += " -> ";
      print_at(f.rhs(), 1, out);
      break;
    case Op::Iff:
      print_at(f.lhs(), 0, out);
      out += " <-> ";
      print_at(f.rhs(), 1, out);
      break;
  }
  if (paren) out += ')';
}

void collect_post_order(const Formula& f, std::set<Formula>& seen, std::vector<Formula>& out) {
  if (seen.count(f)) return;
  if (is_unary(f.op())) {
    collect_post_order(f.operand(), seen, out);
  } else if (is_binary(f.op())) {
    collect_post_order(f.lhs(), seen, out);
    collect_post_order(f.rhs(), seen, out);
  }
  if (seen.insert(f).second) out.push_back(f);
}

void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

bool in_l_double_prime(const Formula& f) {
  if (f.op() == Op::K || f.op() == Op::L) return in_L_prime(f.operand());
  // ~K~phi spelled out
  if (f.op() == Op::Not && f.operand().op() == Op::K && f.operand().operand().op() == Op::Not)
    return in_L_prime(f.operand().operand().operand());
  return false;
}

bool is_knows_block(const Formula& f) { return f.op() == Op::K && in_L_prime(f.operand()); }

bool is_possible_block(const Formula& f) {
  return in_l_double_prime(f) && !is_knows_block(f);
}

bool is_pnf(const Formula& f) {
  // Shape: L' conjuncts, then exactly one K(L'), then any number of L(L').
  auto parts = flatten_conj(f);
  std::size_t i = 0;
  while (i < parts.size() && in_L_prime(parts[i])) ++i;
  if (i == 0 || i == parts.size() || !is_knows_block(parts[i])) return false;
  ++i;
  for (; i < parts.size(); ++i)
    if (!is_possible_block(parts[i])) return false;
  return true;
}

}  // namespace

bool is_valid_atom_name(std::string_view name) {
  if (name.empty() || !ident_start(name.front())) return false;
  if (!std::all_of(name.begin(), name.end(), ident_char)) return false;
  return !is_reserved(name);
}

Formula parse(std::string_view text) { return Parser(lex(text)).parse_all(); }

std::string print(const Formula& f) {
  std::string out;
  print_at(f, 0, out);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << print(f); }

Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
      return f;
    case Op::Not:
      return Formula::negation(desugar(f.operand()));
    case Op::K:
      return Formula::knows(desugar(f.operand()));
    case Op::Box:
      return Formula::box(desugar(f.operand()));
    case Op::L:
      return Formula::negation(Formula::knows(Formula::negation(desugar(f.operand()))));
    case Op::Dia:
      return Formula::negation(Formula::box(Formula::negation(desugar(f.operand()))));
    case Op::And:
      return Formula::conj(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Or:
      return Formula::negation(Formula::conj(Formula::negation(desugar(f.lhs())),
                                             Formula::negation(desugar(f.rhs()))));
    case Op::Implies:
      return Formula::negation(
          Formula::conj(desugar(f.lhs()), Formula::negation(desugar(f.rhs()))));
    case Op::Iff: {
      Formula a = desugar(f.lhs());
      Formula b = desugar(f.rhs());
      return Formula::conj(Formula::negation(Formula::conj(a, Formula::negation(b))),
                           Formula::negation(Formula::conj(b, Formula::negation(a))));
    }
  }
  return f;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::set<Formula> seen;
  std::vector<Formula> out;
  collect_post_order(desugar(f), seen, out);
  return out;
}

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.op() == Op::Atom) out.insert(g.name());
    else if (is_unary(g.op())) walk(g.operand());
    else if (is_binary(g.op())) {
      walk(g.lhs());
      walk(g.rhs());
    }
  };
  walk(f);
  return out;
}

Formula substitute(const Formula& f, const std::map<std::string, Formula>& map) {
  switch (f.op()) {
    case Op::Atom: {
      auto it = map.find(f.name());
      return it == map.end() ? f : it->second;
    }
    case Op::Top:
    case Op::Bot:
      return f;
    case Op::Not:
      return Formula::negation(substitute(f.operand(), map));
    case Op::K:
      return Formula::knows(substitute(f.operand(), map));
    case Op::L:
      return Formula::possible(substitute(f.operand(), map));
    case Op::Box:
      return Formula::box(substitute(f.operand(), map));
    case Op::Dia:
      return Formula::diamond(substitute(f.operand(), map));
    case Op::And:
      return Formula::conj(substitute(f.lhs(), map), substitute(f.rhs(), map));
    case Op::Or:
      return Formula::disj(substitute(f.lhs(), map), substitute(f.rhs(), map));
    case Op::Implies:
      return Formula::implies(substitute(f.lhs(), map), substitute(f.rhs(), map));
    case Op::Iff:
      return Formula::iff(substitute(f.lhs(), map), substitute(f.rhs(), map));
  }
  return f;
}

std::size_t l_prime_depth(const Formula& f) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  auto up = [](std::size_t d) { return d == none ? none : d + 1; };
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
      return 0;
    case Op::Not: {
      const Formula& g = f.operand();
      // ~[]~K phi is the spelled-out form of <>K phi
      if (g.op() == Op::Box && g.operand().op() == Op::Not && g.operand().operand().op() == Op::K)
        return up(l_prime_depth(g.operand().operand().operand()));
      return up(l_prime_depth(g));
    }
    case Op::Dia:
      if (f.operand().op() == Op::K) return up(l_prime_depth(f.operand().operand()));
      return none;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff: {
      std::size_t a = l_prime_depth(f.lhs());
      std::size_t b = l_prime_depth(f.rhs());
      if (a == none || b == none) return none;
      return std::max(a, b) + 1;
    }
    default:
      return none;
  }
}

bool in_L_prime(const Formula& f) {
  return l_prime_depth(f) != std::numeric_limits<std::size_t>::max();
}

std::vector<Formula> flatten_conj(const Formula& f) {
  std::vector<Formula> out;
  flatten(f, Op::And, out);
  return out;
}

std::vector<Formula> flatten_disj(const Formula& f) {
  std::vector<Formula> out;
  flatten(f, Op::Or, out);
  return out;
}

SyntaxClass classify(const Formula& f) {
  SyntaxClass c;
  c.in_L_prime = in_L_prime(f);
  c.in_L_double_prime = in_l_double_prime(f);
  c.is_PNF = is_pnf(f);
  auto blocks = flatten_disj(f);
  c.is_DNF = std::all_of(blocks.begin(), blocks.end(), is_pnf);
  return c;
}

}  // namespace topologic
