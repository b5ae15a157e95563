#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusecalc/ast.hpp"
#include "fusecalc/diagnostics.hpp"
#include "fusecalc/dl.hpp"
#include "fusecalc/term.hpp"

namespace fusecalc {

/// Projection of the timed DL-atoms of I at time d onto an ABox. Only
/// positive IsAAt/HasAAt atoms contribute; nothing is carried across times.
/// Throws EvalError on malformed concept or role terms.
dl::ABox inducedAbox(const Interpretation& i, TimePoint d);

/// Adds the assertions encoded in a ground set value (IsA/HasA elements).
void addAssertionSet(const Term& setValue, dl::ABox& into);

/// Content-addressed memo for DL verdicts. Calls are pure functions of
/// (ABox, TBox, query), so hits are always sound; one cache per engine run.
class DlCache {
 public:
  std::optional<bool> get(const std::string& key) const;
  void put(const std::string& key, bool value);
  std::size_t size() const { return map_.size(); }

 private:
  std::map<std::string, bool> map_;
};

/// Evaluates a DL-call against the current interpretation: resolves the ABox
/// operand (induced at pivot time, ABOXAT(tt), assertion sets, unions),
/// applies the unique name assumption per call form, and for entailment
/// enumerates unbound query variables over the known individuals (weak
/// DL-safety). Returns the extensions of `beta` under which the call holds.
std::vector<Substitution> evalDlCall(const Interpretation& i, const Substitution& beta,
                                     std::optional<TimePoint> pivotTime,
                                     const DlCallLit& call, const Program& prog,
                                     DlCache* cache);

/// Flags the DL-call configurations with soundness/completeness risks:
/// satisfiability over an induced ABox in a positive context of an ordinary
/// rule, and unsatisfiability under negation. Fail rules stay silent.
std::vector<Diagnostic> monotonicityLint(const Program& p);

}  // namespace fusecalc
