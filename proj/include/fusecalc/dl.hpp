#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusecalc/term.hpp"

namespace fusecalc::dl {

/// Role name or its inverse.
struct Role {
  std::string name;
  bool inverse = false;

  Role inv() const { return Role{name, !inverse}; }
  bool operator==(const Role& o) const { return name == o.name && inverse == o.inverse; }
  bool operator<(const Role& o) const {
    return name != o.name ? name < o.name : inverse < o.inverse;
  }
};

/// ALCIF concept expression. Immutable, shared.
class Concept {
 public:
  enum class Kind { Name, Top, Bottom, Not, And, Or, Exists, Forall };

  static Concept name(std::string n);
  static Concept top();
  static Concept bottom();
  static Concept negation(Concept c);
  static Concept conj(Concept a, Concept b);
  static Concept disj(Concept a, Concept b);
  static Concept exists(Role r, Concept c);
  static Concept forall(Role r, Concept c);

  Kind kind() const;
  const std::string& conceptName() const;
  const Concept& left() const;   // Not/And/Or/Exists/Forall operand
  const Concept& right() const;  // And/Or second operand
  const Role& role() const;

  bool operator==(const Concept& o) const;
  bool operator<(const Concept& o) const;

 private:
  struct Data;
  explicit Concept(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

int compareConcepts(const Concept& a, const Concept& b);

struct ConceptAssertion {
  Term individual;
  Concept concept;
  bool operator<(const ConceptAssertion& o) const;
  bool operator==(const ConceptAssertion& o) const;
};

struct RoleAssertion {
  Term from;
  Term to;
  Role role;  // normalized: never inverse
  bool operator<(const RoleAssertion& o) const;
  bool operator==(const RoleAssertion& o) const;
};

/// Assertional part of a knowledge base. Individuals are free ground terms.
struct ABox {
  std::set<ConceptAssertion> concepts;
  std::set<RoleAssertion> roles;

  void addConcept(Term individual, Concept c);
  /// Inverse roles are normalized away: (a,b):r^- becomes (b,a):r.
  void addRole(Term from, Term to, Role r);
  void unite(const ABox& other);

  /// All individuals mentioned, in canonical term order.
  std::set<Term> individuals() const;
  bool operator==(const ABox& o) const {
    return concepts == o.concepts && roles == o.roles;
  }
};

struct Gci {
  Concept sub;
  Concept sup;
};

struct TBox {
  std::vector<Gci> gcis;
  std::set<std::string> functionalRoles;
};

/// Untimed DL-atom used in entailment queries.
struct QueryAtom {
  bool isRole = false;
  Term a = Term::integer(0);
  Concept c = Concept::top();  // concept queries
  Term b = Term::integer(0);   // role queries
  Role r;
};

/// Raised when the tableau exceeds its resource budget; the verdict is then
/// "unknown", never a silent guess.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Negation normal form: negation pushed down to concept names.
Concept nnf(const Concept& c);

/// Pairwise-distinguishing assertions making the given individuals unequal:
/// n(n-1)/2 fresh concept names, two assertions each. Fresh names derive
/// deterministically from the canonical spelling of the pair.
std::vector<ConceptAssertion> una(const std::set<Term>& individuals);

struct TableauOptions {
  std::int64_t maxSteps = 200000;
  int maxNodes = 5000;
};

/// KB satisfiability under standard first-order DL semantics. No implicit
/// unique-name assumption; callers add una(...) when they want one.
bool isSatisfiable(const ABox& a, const TBox& t, const TableauOptions& opts = {});

/// Ground query entailment by refutation, with the unique name assumption
/// applied over the individuals of the ABox and the query together.
bool entails(const ABox& a, const TBox& t, const std::vector<QueryAtom>& query,
             const TableauOptions& opts = {});

}  // namespace fusecalc::dl
