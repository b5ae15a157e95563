#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusecalc/ast.hpp"

namespace fusecalc {

/// Pivot metadata of one rule. Rules anchor either on a pivot variable (the
/// time argument of the leftmost eligible ordinary body literal) or, for
/// rules without time variables, on a ground anchor time.
struct PivotInfo {
  int bodyIndex = -1;
  std::optional<std::string> var;
  std::optional<TimePoint> anchor;
  /// Minimal syntactic head-time offset relative to the pivot. Rules with
  /// deltaMin >= 1 only read the strict past of their write layer and are
  /// scheduled after all strata of the pivot time.
  std::int64_t deltaMin = 0;
  bool missing = false;  // no pivot candidate although time variables occur

  bool delayed() const { return deltaMin >= 1; }
};

struct Violation {
  enum class Kind { PivotMissing, HeadTime, BodyTime, NegativeContext };
  Kind kind = Kind::PivotMissing;
  int ruleId = -1;
  int literalIndex = -1;  // top-level body index, -1 for head/pivot issues
  std::string message;
};

struct StratumMap {
  std::map<std::string, int> stratum;
  std::map<int, PivotInfo> pivots;
  int maxStratum = 0;

  int stratumOf(const std::string& pred) const {
    auto it = stratum.find(pred);
    return it == stratum.end() ? 0 : it->second;
  }
  const PivotInfo& pivotOf(int ruleId) const;
};

/// Strata as strongly connected components of the call graph, numbered by
/// longest chain from the sources (deterministic). Only dependencies that can
/// land on the same (time, stratum) layer as the rule's writes contribute
/// edges; strictly-past reads and delayed rules are free.
StratumMap computeStrata(const Program& p);

/// Validates stratification by time and by predicates. Empty result iff every
/// ordinary non-fact rule satisfies the pivot, head-time, body-time and
/// negative-context conditions; fail-rule bodies are checked except that
/// their negative contexts are discharged by end-of-time scheduling.
std::vector<Violation> checkSbtp(const Program& p, const StratumMap& s);

/// Virtual subgoals a rule's DL-calls stand for during stratification:
/// calls whose ABox is read from the interpretation depend on IsAAt/HasAAt.
/// Fail rules contribute none (they run after all strata of their time).
/// The bool flag is true for positive contexts.
std::vector<std::pair<std::string, bool>> dlcallVirtualDependencies(const Rule& r);

/// Human-readable dump for --explain-strata.
std::string explainStrata(const Program& p, const StratumMap& s);

}  // namespace fusecalc
