#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fusecalc/dl.hpp"
#include "fusecalc/term.hpp"

namespace fusecalc {

enum class CmpOp { Lt, Le, Gt, Ge };

const char* cmpOpText(CmpOp op);

struct BodyLiteral;
using Body = std::vector<BodyLiteral>;

/// Ordinary atom occurrence, possibly neg-wrapped, possibly a timed DL-atom.
struct OrdinaryLit {
  Atom atom;
};

/// p(x op tt, args) STH guard  -- picks the extremal time x satisfying
/// the comparison, the atom and the guard.
struct ComprehensionLit {
  std::string var;
  CmpOp op = CmpOp::Lt;
  Term bound;
  std::string pred;
  std::vector<Term> restArgs;
  Body guard;

  ComprehensionLit() : bound(Term::integer(0)) {}
};

struct BuiltinLit {
  std::string pred;
  std::vector<Term> args;
};

struct TimeCmpLit {
  Term lhs;
  CmpOp op = CmpOp::Lt;
  Term rhs;

  TimeCmpLit() : lhs(Term::integer(0)), rhs(Term::integer(0)) {}
  TimeCmpLit(Term l, CmpOp o, Term r) : lhs(std::move(l)), op(o), rhs(std::move(r)) {}
};

struct LetLit {
  std::string var;
  Term value;

  LetLit() : value(Term::integer(0)) {}
  LetLit(std::string v, Term t) : var(std::move(v)), value(std::move(t)) {}
};

struct ChooseLit {
  std::string var;
  Term choices;

  ChooseLit() : choices(Term::integer(0)) {}
  ChooseLit(std::string v, Term t) : var(std::move(v)), choices(std::move(t)) {}
};

struct CollectLit {
  std::string var;
  Term tmpl;
  Body guard;

  CollectLit() : tmpl(Term::integer(0)) {}
};

/// MAPROLE(out, set, role, filler) binds out to { (x, filler) : role | x in set }.
struct MapRoleLit {
  std::string var;
  Term set;
  Term role;
  Term filler;

  MapRoleLit()
      : set(Term::integer(0)), role(Term::integer(0)), filler(Term::integer(0)) {}
};

enum class DlCallKind { Entails, IsSat, IsUnsat };

/// ABox operand of a DL-call. With neither part set the induced ABox at the
/// rule's pivot time is used. ABOXAT(tt) projects the induced ABox at tt;
/// an assertion-set term can be unioned in with ++.
struct AboxExpr {
  std::optional<Term> atTime;
  std::optional<Term> assertions;

  bool implicit() const { return !atTime && !assertions; }
  bool readsInterpretation() const { return implicit() || atTime.has_value(); }
};

struct DlCallLit {
  DlCallKind kind = DlCallKind::Entails;
  AboxExpr abox;
  std::string tboxName;
  std::vector<Term> query;  // untimed DL-atoms as IsA/HasA terms; Entails only
};

struct NotLit {
  Body body;  // non-empty positive body, no nested negation
};

struct BodyLiteral {
  std::variant<OrdinaryLit, ComprehensionLit, BuiltinLit, TimeCmpLit, LetLit, ChooseLit,
               CollectLit, MapRoleLit, DlCallLit, NotLit>
      node;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

/// Free variables of a body literal, per form. Negative literals and the
/// guards of COLLECT bind their variables locally and contribute nothing.
std::set<std::string> fvar(const BodyLiteral& lit);
std::set<std::string> fvar(const Body& body);

/// All variables occurring in a literal, including guard- and negation-local
/// ones. Used by the brute-force oracle for the fvar property test.
std::set<std::string> allVars(const BodyLiteral& lit);

struct Rule {
  bool isFail = false;
  std::vector<Atom> heads;  // disjunction; empty iff isFail
  Body body;

  int id = -1;
  std::string file;
  int line = 0;
  /// "user", "prelude", "guard" or "step"; guards are exempt from
  /// stratification analysis.
  std::string origin = "user";

  bool isFact() const { return !isFail && body.empty(); }
  bool synthetic() const { return origin == "guard"; }
  std::string label() const;
};

struct Program {
  std::vector<Rule> rules;
  std::map<std::string, dl::TBox> tboxes;
  std::vector<TimePoint> declaredTimes;

  /// Arity of every ordinary predicate in use (validated conflict-free).
  std::map<std::string, std::size_t> predArity;
};

}  // namespace fusecalc
