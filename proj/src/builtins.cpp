#include "fusecalc/builtins.hpp"

#include <stdexcept>

namespace fusecalc {

namespace {

std::int64_t asInt(const Term& t, const std::string& p) {
  if (t.kind() != Term::Kind::Int)
    throw std::runtime_error("built-in '" + p + "' needs integer arguments");
  return t.num();
}

}  // namespace

bool isBuiltin(const std::string& p) {
  return p == "<" || p == "<=" || p == ">" || p == ">=" || p == "==" || p == "!=" ||
         p == "contains";
}

bool evaluateBuiltin(const std::string& p, const std::vector<Term>& args) {
  if (!isBuiltin(p)) throw std::logic_error("unknown built-in predicate '" + p + "'");
  for (const Term& a : args)
    if (!a.isGround())
      throw std::runtime_error("built-in '" + p + "' applied to non-ground argument");
  if (args.size() != 2) throw std::runtime_error("built-in '" + p + "' expects 2 arguments");

  if (p == "==") return args[0] == args[1];
  if (p == "!=") return args[0] != args[1];
  if (p == "contains") {
    if (args[0].kind() != Term::Kind::SetV)
      throw std::runtime_error("'contains' expects a set as first argument");
    for (const Term& e : args[0].args())
      if (e == args[1]) return true;
    return false;
  }

  std::int64_t a = asInt(args[0], p), b = asInt(args[1], p);
  if (p == "<") return a < b;
  if (p == "<=") return a <= b;
  if (p == ">") return a > b;
  return a >= b;
}

}  // namespace fusecalc
