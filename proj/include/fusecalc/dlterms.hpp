#pragma once

#include <optional>

#include "fusecalc/dl.hpp"
#include "fusecalc/term.hpp"

namespace fusecalc {

/// Conversions between the rule-level term encoding of DL material and the
/// reasoner's ASTs. Concepts and roles are plain terms on the rule side:
/// constants name concepts/roles, And/Or/Not/Neg/Exists/Forall/Inverse/Top/
/// Bottom compounds build expressions, and IsA/HasA compounds encode untimed
/// DL-atoms.

std::optional<dl::Concept> termToConcept(const Term& t);
std::optional<dl::Role> termToRole(const Term& t);

/// True if the symbol is reserved for concept construction.
bool isConceptConstructor(const std::string& functor);

Term makeIsATerm(Term individual, Term concept);
Term makeHasATerm(Term from, Term role, Term to);
bool isIsATerm(const Term& t);
bool isHasATerm(const Term& t);

Atom makeIsAAtAtom(Term individual, Term concept, Term time);
Atom makeHasAAtAtom(Term from, Term role, Term to, Term time);

}  // namespace fusecalc
