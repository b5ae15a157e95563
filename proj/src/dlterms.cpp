#include "fusecalc/dlterms.hpp"

namespace fusecalc {

bool isConceptConstructor(const std::string& f) {
  return f == "And" || f == "Or" || f == "Not" || f == "Neg" || f == "Exists" ||
         f == "Forall" || f == "Top" || f == "Bottom" || f == "Inverse";
}

std::optional<dl::Role> termToRole(const Term& t) {
  if (t.kind() == Term::Kind::Sym) return dl::Role{t.name(), false};
  if (t.kind() == Term::Kind::Compound && t.name() == "Inverse" && t.args().size() == 1 &&
      t.args()[0].kind() == Term::Kind::Sym)
    return dl::Role{t.args()[0].name(), true};
  return std::nullopt;
}

std::optional<dl::Concept> termToConcept(const Term& t) {
  using C = dl::Concept;
  if (t.kind() == Term::Kind::Sym) {
    if (t.name() == "Top") return C::top();
    if (t.name() == "Bottom") return C::bottom();
    if (isConceptConstructor(t.name())) return std::nullopt;
    return C::name(t.name());
  }
  if (t.kind() != Term::Kind::Compound) return std::nullopt;
  const auto& f = t.name();
  const auto& as = t.args();
  if ((f == "Not" || f == "Neg") && as.size() == 1) {
    auto c = termToConcept(as[0]);
    if (!c) return std::nullopt;
    return C::negation(*c);
  }
  if ((f == "And" || f == "Or") && as.size() == 2) {
    auto a = termToConcept(as[0]);
    auto b = termToConcept(as[1]);
    if (!a || !b) return std::nullopt;
    return f == "And" ? C::conj(*a, *b) : C::disj(*a, *b);
  }
  if ((f == "Exists" || f == "Forall") && as.size() == 2) {
    auto r = termToRole(as[0]);
    auto c = termToConcept(as[1]);
    if (!r || !c) return std::nullopt;
    return f == "Exists" ? C::exists(*r, *c) : C::forall(*r, *c);
  }
  return std::nullopt;
}

Term makeIsATerm(Term individual, Term concept) {
  return Term::compound(names::kIsA, {std::move(individual), std::move(concept)});
}

Term makeHasATerm(Term from, Term role, Term to) {
  return Term::compound(names::kHasA, {std::move(from), std::move(role), std::move(to)});
}

bool isIsATerm(const Term& t) {
  return t.kind() == Term::Kind::Compound && t.name() == names::kIsA &&
         t.args().size() == 2;
}

bool isHasATerm(const Term& t) {
  return t.kind() == Term::Kind::Compound && t.name() == names::kHasA &&
         t.args().size() == 3;
}

Atom makeIsAAtAtom(Term individual, Term concept, Term time) {
  return Atom(names::kIsAAt, {std::move(individual), std::move(concept), std::move(time)});
}

Atom makeHasAAtAtom(Term from, Term role, Term to, Term time) {
  return Atom(names::kHasAAt,
              {std::move(from), std::move(role), std::move(to), std::move(time)});
}

}  // namespace fusecalc
