#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fusecalc {

/// Discrete time; ticks are plain integers ordered by <.
using TimePoint = std::int64_t;

/// Immutable first-order term. Shared structure, value semantics.
///
/// Kinds:
///   Var      - rule variable (lowercase in surface syntax), `_N` for anonymous
///   Sym      - free constant (uppercase identifier, arity 0)
///   Int      - integer value; doubles as a ground time point
///   Str      - string literal
///   TimeSum  - non-ground time term `v + k`
///   Compound - functor applied to arguments (free function symbols, concept
///              constructors, and the reserved IsA/HasA untimed DL-atom forms)
///   SetV     - finite set value; compares by set equality (kept sorted/unique)
class Term {
 public:
  enum class Kind { Var, Sym, Int, Str, TimeSum, Compound, SetV };

  Term() = delete;

  static Term var(std::string name);
  static Term sym(std::string name);
  static Term integer(std::int64_t v);
  static Term str(std::string s);
  static Term timeSum(std::string var, std::int64_t k);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term setOf(std::vector<Term> elems);  // sorts and dedups

  Kind kind() const;
  const std::string& name() const;       // Var/Sym/Compound functor, TimeSum base
  std::int64_t num() const;               // Int value or TimeSum offset
  const std::string& text() const;        // Str payload
  const std::vector<Term>& args() const;  // Compound args or SetV elements

  bool isVar() const { return kind() == Kind::Var; }
  bool isGround() const;
  /// Syntactic time term: Int, Var, or TimeSum.
  bool isTimeTerm() const;

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  /// Total order used everywhere determinism matters.
  bool operator<(const Term& o) const;

  std::size_t hash() const;

  /// Collects variable names in occurrence order (deduplicated).
  void collectVars(std::vector<std::string>& out) const;

 private:
  struct Data;
  explicit Term(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

int compareTerms(const Term& a, const Term& b);

class Substitution;

/// One-way matching of a (possibly non-ground) pattern against a ground
/// term; extends `s` with new bindings. Time sums match by solving for
/// their base variable.
bool matchTerm(const Term& pattern, const Term& ground, Substitution& s);

/// Ordinary atom, optionally wrapped in strong negation. The time argument
/// lives at a fixed position: argument 0 for user predicates, 2 for IsAAt,
/// 3 for HasAAt. Zero-arity atoms sit at the implicit time 0.
struct Atom {
  bool neg = false;
  std::string pred;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string p, std::vector<Term> a) : pred(std::move(p)), args(std::move(a)) {}
  Atom(bool n, std::string p, std::vector<Term> a)
      : neg(n), pred(std::move(p)), args(std::move(a)) {}

  int timeArgIndex() const;
  /// The syntactic time term of this atom (Int(0) for zero-arity atoms).
  Term timeTerm() const;
  /// Ground time value; requires the time term to be a ground Int.
  TimePoint timeValue() const;

  bool isGround() const;
  void collectVars(std::vector<std::string>& out) const;

  bool operator==(const Atom& o) const;
  bool operator!=(const Atom& o) const { return !(*this == o); }
  bool operator<(const Atom& o) const;
};

int compareAtoms(const Atom& a, const Atom& b);

/// Reserved predicate and functor names.
namespace names {
inline constexpr const char* kIsAAt = "IsAAt";
inline constexpr const char* kHasAAt = "HasAAt";
inline constexpr const char* kIsA = "IsA";    // untimed DL-atom term functor
inline constexpr const char* kHasA = "HasA";  // untimed DL-role term functor
inline constexpr const char* kStep = "Step";
inline constexpr const char* kHappens = "Happens";
}  // namespace names

/// Grounding substitution: variable name -> ground term.
class Substitution {
 public:
  Substitution() = default;

  bool contains(const std::string& var) const;
  const Term* lookup(const std::string& var) const;
  /// Binds var; returns false if already bound to a different term.
  bool bind(const std::string& var, const Term& t);

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;

  const std::map<std::string, Term>& bindings() const { return map_; }
  bool empty() const { return map_.empty(); }

  /// Canonical serialization, used as a closure identity key.
  std::string key() const;

  bool operator==(const Substitution& o) const { return map_ == o.map_; }
  bool operator<(const Substitution& o) const { return map_ < o.map_; }

 private:
  std::map<std::string, Term> map_;
};

/// A finite set of ground atoms with a per-predicate index.
class Interpretation {
 public:
  /// Inserts a ground atom; returns true if new.
  bool insert(const Atom& a);
  bool contains(const Atom& a) const;
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  /// All atoms, in canonical order.
  const std::set<Atom>& atoms() const { return atoms_; }
  /// Atoms of one predicate/polarity, canonical order; empty set if none.
  const std::set<Atom>& atomsOf(const std::string& pred, bool neg) const;

  /// Distinct ground times of IsAAt/HasAAt atoms (positive polarity).
  std::set<TimePoint> dlAtomTimes() const;

  bool operator==(const Interpretation& o) const { return atoms_ == o.atoms_; }
  bool operator<(const Interpretation& o) const { return atoms_ < o.atoms_; }

 private:
  std::set<Atom> atoms_;
  std::map<std::pair<std::string, bool>, std::set<Atom>> index_;
};

}  // namespace fusecalc

template <>
struct std::hash<fusecalc::Term> {
  std::size_t operator()(const fusecalc::Term& t) const { return t.hash(); }
};
