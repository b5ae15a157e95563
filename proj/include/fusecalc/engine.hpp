#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusecalc/ast.hpp"
#include "fusecalc/bridge.hpp"
#include "fusecalc/strat.hpp"

namespace fusecalc {

struct EngineOptions {
  bool allModels = true;
  std::int64_t maxSteps = 1000000;
  /// Runtime layer-monotonicity assertions (tests).
  bool instrument = false;
  /// One line per fired closure: rule id, body matcher, layer.
  std::function<void(const std::string&)> trace;
};

struct EngineStats {
  std::int64_t atomsInserted = 0;
  std::int64_t closuresFired = 0;
  std::int64_t branches = 0;
  std::map<std::string, std::int64_t> insertedPerPred;
};

struct EngineResult {
  std::vector<Interpretation> models;  // deduplicated, canonical order
  EngineStats stats;
};

/// Evaluation context for body matching outside the engine (tests, the
/// post-hoc verifier). pivotVar is resolved against the running substitution
/// when a DL-call needs the induced ABox.
struct EvalEnv {
  const Interpretation& interp;
  const Program& prog;
  std::optional<TimePoint> pivotTime;
  std::optional<std::string> pivotVar;
  DlCache* dlCache = nullptr;
  const Rule* rule = nullptr;
};

/// All minimal extensions of beta under which the literal holds, in
/// deterministic left-to-right discipline.
std::vector<Substitution> satisfies(const EvalEnv& env, const Substitution& beta,
                                    const BodyLiteral& lit);

/// Left-to-right body evaluation. Ground tests over still-unbound variables
/// are deferred until a later literal binds them; a test that never becomes
/// ground is an evaluation-order error.
std::vector<Substitution> evalBody(const EvalEnv& env, const Substitution& beta,
                                   const Body& body);

/// Head alternatives of a disjunctive closure: one per non-empty subset of
/// the head disjuncts, smallest subsets first.
std::vector<std::vector<Atom>> splitClosure(const Rule& r, const Substitution& beta);

/// Computes all finite possible models by layered fixpoint iteration with
/// splitting. Requires `p` to have passed checkSbtp.
EngineResult computePossibleModels(const Program& p, const StratumMap& strat,
                                   const EngineOptions& opts = {});

/// Post-hoc model checks, independent of the derivation: every closure of the
/// program is satisfied, no fail body holds, every atom is supported, and no
/// atom occurs together with its strong negation. Returns human-readable
/// issues; empty means the interpretation passes.
std::vector<std::string> verifyModel(const Program& p, const StratumMap& strat,
                                     const Interpretation& model);

}  // namespace fusecalc
