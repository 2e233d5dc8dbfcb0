#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "topologic/decide.hpp"
#include "topologic/formula.hpp"

namespace topologic {

// base & K known & L p1 & ... & L pn, every component in L'.
struct PnfBlock {
  Formula base;
  Formula known;
  std::vector<Formula> possibles;

  Formula render() const;
};

struct Dnf {
  std::vector<PnfBlock> blocks;  // never empty; bot is a single unsatisfiable block
  std::vector<std::string> trace;

  Formula render() const;
};

struct DnfOptions {
  std::size_t step_limit = 200000;  // block operations before giving up
  std::size_t max_blocks = 4096;    // largest intermediate disjunction
  bool verify = true;
  std::size_t verify_points = 3;  // equivalence checked on topologies up to this size
};

// Throws BudgetExceeded past the step or block limits (the message carries
// the trace so far) and VerificationFailure if the result is not equivalent
// to f up to the verification bound.
Dnf to_dnf(const Formula& f, const DnfOptions& options = {});

enum class Persistence { persistent, anti_persistent, bi_persistent, none };

std::string to_string(Persistence p);

struct PersistenceReport {
  Persistence verdict = Persistence::none;
  bool persistent = false;       // f -> [] f valid up to the bound
  bool anti_persistent = false;  // <> f -> f valid up to the bound
  bool in_L_prime = false;       // syntactic sufficient condition for bi-persistence
  std::size_t bound = 0;
};

// Throws BudgetExceeded if the search budget runs out.
PersistenceReport persistence_class(const Formula& f, const SearchBudget& budget = {});

}  // namespace topologic
