#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace topologic::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kTrue = 0;        // true, success, valid
inline constexpr int kFalse = 1;       // false, counterexample found, satisfiable negation
inline constexpr int kUsage = 2;       // bad arguments or formula syntax
inline constexpr int kBadInput = 3;    // model/frame/algebra file violates its invariants
inline constexpr int kBudget = 4;      // search or rewriting budget exhausted

// Runs one command line (args[0] is the program name). Results go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace topologic::cli
