#pragma once

#include <string>
#include <vector>

#include "fusecalc/term.hpp"

namespace fusecalc {

/// True if `p` names a registered built-in predicate. The registered set is
/// fixed: <, <=, >, >=, ==, !=, contains.
bool isBuiltin(const std::string& p);

/// Evaluates a registered built-in over ground arguments.
/// Throws std::logic_error for unknown predicates (a load-time bug if it
/// ever reaches evaluation) and std::runtime_error for ill-sorted arguments.
bool evaluateBuiltin(const std::string& p, const std::vector<Term>& args);

}  // namespace fusecalc
