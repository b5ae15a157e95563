#include "fusecalc/strat.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "fusecalc/printer.hpp"

namespace fusecalc {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

/// Interval knowledge about a time term: offset relative to the rule's pivot
/// and absolute value. Both start unbounded and only tighten.
struct Bound {
  std::int64_t offLo = -kInf, offHi = kInf;
  std::int64_t absLo = -kInf, absHi = kInf;

  static Bound exactOff(std::int64_t k) {
    Bound b;
    b.offLo = b.offHi = k;
    return b;
  }
  static Bound exactAbs(std::int64_t v) {
    Bound b;
    b.absLo = b.absHi = v;
    return b;
  }

  Bound shifted(std::int64_t k) const {
    Bound b = *this;
    if (b.offLo > -kInf) b.offLo += k;
    if (b.offHi < kInf) b.offHi += k;
    if (b.absLo > -kInf) b.absLo += k;
    if (b.absHi < kInf) b.absHi += k;
    return b;
  }

  bool tightenUpper(const Bound& o, std::int64_t slack) {
    bool changed = false;
    if (o.offHi < kInf && o.offHi + slack < offHi) {
      offHi = o.offHi + slack;
      changed = true;
    }
    if (o.absHi < kInf && o.absHi + slack < absHi) {
      absHi = o.absHi + slack;
      changed = true;
    }
    return changed;
  }

  bool tightenLower(const Bound& o, std::int64_t slack) {
    bool changed = false;
    if (o.offLo > -kInf && o.offLo + slack > offLo) {
      offLo = o.offLo + slack;
      changed = true;
    }
    if (o.absLo > -kInf && o.absLo + slack > absLo) {
      absLo = o.absLo + slack;
      changed = true;
    }
    return changed;
  }
};

struct BoundEnv {
  std::map<std::string, Bound> vars;
  std::optional<TimePoint> anchor;  // ground-anchored rules
  Bound pivotAbs;                   // absolute knowledge about the pivot itself

  Bound of(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::Int: {
        Bound b = Bound::exactAbs(t.num());
        if (anchor) {
          b.offLo = b.offHi = t.num() - *anchor;
        } else {
          // Relate to the pivot through its absolute bounds if any.
          if (pivotAbs.absHi < kInf) b.offLo = t.num() - pivotAbs.absHi;
          if (pivotAbs.absLo > -kInf) b.offHi = t.num() - pivotAbs.absLo;
        }
        return b;
      }
      case Term::Kind::Var: {
        auto it = vars.find(t.name());
        return it == vars.end() ? Bound{} : it->second;
      }
      case Term::Kind::TimeSum: {
        auto it = vars.find(t.name());
        Bound base = it == vars.end() ? Bound{} : it->second;
        return base.shifted(t.num());
      }
      default:
        return Bound{};
    }
  }

  bool tighten(const Term& t, const Bound& limit, bool upper, std::int64_t slack) {
    std::string var;
    std::int64_t shift = 0;
    if (t.kind() == Term::Kind::Var) {
      var = t.name();
    } else if (t.kind() == Term::Kind::TimeSum) {
      var = t.name();
      shift = -t.num();
    } else {
      return false;
    }
    Bound& b = vars[var];
    return upper ? b.tightenUpper(limit, slack + shift) : b.tightenLower(limit, slack + shift);
  }
};

bool isPositiveReadLit(const BodyLiteral& lit) { return lit.is<OrdinaryLit>(); }

/// Applies one comparison-like constraint; returns true if anything tightened.
bool applyConstraint(BoundEnv& env, const BodyLiteral& lit) {
  bool changed = false;
  if (const auto* t = lit.as<TimeCmpLit>()) {
    std::int64_t slackHi = 0, slackLo = 0;
    bool strict = t->op == CmpOp::Lt || t->op == CmpOp::Gt;
    const Term* lo = nullptr;
    const Term* hi = nullptr;
    switch (t->op) {
      case CmpOp::Lt:
      case CmpOp::Le:
        lo = &t->lhs;
        hi = &t->rhs;
        break;
      case CmpOp::Gt:
      case CmpOp::Ge:
        lo = &t->rhs;
        hi = &t->lhs;
        break;
    }
    slackHi = strict ? -1 : 0;  // lo <= hi + slackHi
    slackLo = strict ? 1 : 0;
    changed |= env.tighten(*lo, env.of(*hi), true, slackHi);
    changed |= env.tighten(*hi, env.of(*lo), false, slackLo);
  } else if (const auto* l = lit.as<LetLit>()) {
    if (l->value.isTimeTerm()) {
      Bound v = env.of(l->value);
      changed |= env.tighten(Term::var(l->var), v, true, 0);
      changed |= env.tighten(Term::var(l->var), v, false, 0);
    }
  } else if (const auto* c = lit.as<ChooseLit>()) {
    if (c->choices.kind() == Term::Kind::SetV && !c->choices.args().empty()) {
      bool allInts = true;
      std::int64_t mn = kInf, mx = -kInf;
      for (const Term& e : c->choices.args()) {
        if (e.kind() != Term::Kind::Int) {
          allInts = false;
          break;
        }
        mn = std::min(mn, e.num());
        mx = std::max(mx, e.num());
      }
      if (allInts) {
        Bound b;
        b.absLo = mn;
        b.absHi = mx;
        changed |= env.tighten(Term::var(c->var), b, true, 0);
        changed |= env.tighten(Term::var(c->var), b, false, 0);
      }
    }
  } else if (const auto* o = lit.as<OrdinaryLit>()) {
    // Step(t, prev) is generated over consecutive time points: prev < t.
    if (!o->atom.neg && o->atom.pred == names::kStep && o->atom.args.size() == 2) {
      const Term& t = o->atom.args[0];
      const Term& prev = o->atom.args[1];
      changed |= env.tighten(prev, env.of(t), true, -1);
      changed |= env.tighten(t, env.of(prev), false, 1);
    }
  }
  return changed;
}

void propagate(BoundEnv& env, const Body& body) {
  for (int pass = 0; pass < static_cast<int>(body.size()) + 3; ++pass) {
    bool changed = false;
    for (const BodyLiteral& lit : body) changed |= applyConstraint(env, lit);
    if (!changed) break;
  }
}

/// An interpretation read inside some rule context, with its time bound.
struct Read {
  std::string pred;
  Bound bound;
  bool positiveCtx = true;
  int topIndex = -1;
  std::string what;  // rendering for diagnostics
};

class RuleAnalysis {
 public:
  RuleAnalysis(const Rule& r) : rule_(r) { analyze(); }

  const PivotInfo& pivot() const { return pivot_; }
  const std::vector<Read>& reads() const { return reads_; }
  const BoundEnv& env() const { return env_; }
  const std::vector<Bound>& headBounds() const { return headBounds_; }

 private:
  void analyze() {
    findPivot();
    env_.anchor = pivot_.anchor;
    if (pivot_.var) env_.vars[*pivot_.var] = Bound::exactOff(0);
    propagate(env_, rule_.body);
    if (pivot_.var) env_.pivotAbs = env_.vars[*pivot_.var];
    if (pivot_.anchor) env_.pivotAbs = Bound::exactAbs(*pivot_.anchor);
    // Re-propagate so integer literals can pick up pivot-relative offsets.
    propagate(env_, rule_.body);

    collectHeadBounds();
    collectReads(rule_.body, true, env_, -1);
  }

  void findPivot() {
    // Leftmost positive ordinary literal whose time term is a variable.
    for (std::size_t i = 0; i < rule_.body.size(); ++i) {
      const auto* o = rule_.body[i].as<OrdinaryLit>();
      if (!o) continue;
      Term t = o->atom.timeTerm();
      if (t.kind() == Term::Kind::Var) {
        pivot_.bodyIndex = static_cast<int>(i);
        pivot_.var = t.name();
        computeDelta();
        return;
      }
    }
    // Ground fallback: no time variables in ordinary literals.
    bool hasTimeVar = false;
    for (const BodyLiteral& lit : rule_.body) {
      if (const auto* o = lit.as<OrdinaryLit>())
        if (!o->atom.timeTerm().isGround()) hasTimeVar = true;
    }
    for (const Atom& h : rule_.heads)
      if (!h.timeTerm().isGround()) hasTimeVar = true;
    if (hasTimeVar) {
      pivot_.missing = true;
      return;
    }
    std::optional<TimePoint> anchor;
    for (const BodyLiteral& lit : rule_.body) {
      if (const auto* o = lit.as<OrdinaryLit>()) {
        TimePoint v = o->atom.timeTerm().num();
        anchor = anchor ? std::max(*anchor, v) : v;
      }
    }
    if (!anchor && rule_.isFail) {
      // Anchor pure-negative fail rules on the latest time they mention.
      std::optional<TimePoint> maxT;
      std::function<void(const Body&)> scan = [&](const Body& b) {
        for (const BodyLiteral& lit : b) {
          if (const auto* o = lit.as<OrdinaryLit>()) {
            if (o->atom.timeTerm().isGround())
              maxT = maxT ? std::max(*maxT, o->atom.timeTerm().num())
                          : o->atom.timeTerm().num();
          } else if (const auto* n = lit.as<NotLit>()) {
            scan(n->body);
          }
        }
      };
      scan(rule_.body);
      anchor = maxT;
    }
    if (!anchor && !rule_.heads.empty()) {
      TimePoint mn = rule_.heads[0].timeValue();
      for (const Atom& h : rule_.heads) mn = std::min(mn, h.timeValue());
      anchor = mn;
    }
    pivot_.anchor = anchor.value_or(0);
    computeDelta();
  }

  void computeDelta() {
    if (rule_.heads.empty()) {
      pivot_.deltaMin = 0;
      return;
    }
    std::int64_t d = kInf;
    for (const Atom& h : rule_.heads) {
      Term t = h.timeTerm();
      std::int64_t off = 0;
      if (pivot_.var) {
        if (t.kind() == Term::Kind::Var && t.name() == *pivot_.var)
          off = 0;
        else if (t.kind() == Term::Kind::TimeSum && t.name() == *pivot_.var)
          off = t.num();
        else
          off = 0;  // absolute or derived heads schedule conservatively
      } else if (pivot_.anchor && t.kind() == Term::Kind::Int) {
        off = t.num() - *pivot_.anchor;
      }
      d = std::min(d, off);
    }
    pivot_.deltaMin = std::max<std::int64_t>(d, 0);
  }

  void collectHeadBounds() {
    for (const Atom& h : rule_.heads) headBounds_.push_back(env_.of(h.timeTerm()));
  }

  void addRead(const std::string& pred, const Bound& b, bool positive, int top,
               std::string what) {
    reads_.push_back(Read{pred, b, positive, top, std::move(what)});
  }

  void addDlCallReads(const DlCallLit& d, bool positive, const BoundEnv& env, int top) {
    if (rule_.isFail) return;  // discharged by end-of-time scheduling
    if (!d.abox.readsInterpretation()) return;
    Bound b = d.abox.atTime ? env.of(*d.abox.atTime) : Bound::exactOff(0);
    addRead(names::kIsAAt, b, positive, top, "DL-call");
    addRead(names::kHasAAt, b, positive, top, "DL-call");
  }

  void collectReads(const Body& body, bool topLevel, const BoundEnv& env, int parentIdx) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      int top = topLevel ? static_cast<int>(i) : parentIdx;
      const BodyLiteral& lit = body[i];
      if (const auto* o = lit.as<OrdinaryLit>()) {
        addRead(o->atom.pred, env.of(o->atom.timeTerm()), true, top,
                renderAtom(o->atom));
      } else if (const auto* c = lit.as<ComprehensionLit>()) {
        // The comprehension atom and its guard count as negative context.
        BoundEnv inner = env;
        std::int64_t slack = (c->op == CmpOp::Lt) ? -1 : (c->op == CmpOp::Le ? 0 : kInf);
        if (slack < kInf)
          inner.tighten(Term::var(c->var), inner.of(c->bound), true, slack);
        if (c->op == CmpOp::Gt)
          inner.tighten(Term::var(c->var), inner.of(c->bound), false, 1);
        if (c->op == CmpOp::Ge)
          inner.tighten(Term::var(c->var), inner.of(c->bound), false, 0);
        propagate(inner, c->guard);
        Read r{c->pred, inner.of(Term::var(c->var)), false, top,
               c->pred + "(" + c->var + " " + cmpOpText(c->op) + " ...)"};
        reads_.push_back(r);
        collectNegReads(c->guard, inner, top);
      } else if (const auto* co = lit.as<CollectLit>()) {
        BoundEnv inner = env;
        propagate(inner, co->guard);
        collectNegReads(co->guard, inner, top);
      } else if (const auto* d = lit.as<DlCallLit>()) {
        addDlCallReads(*d, true, env, top);
      } else if (const auto* n = lit.as<NotLit>()) {
        BoundEnv inner = env;
        propagate(inner, n->body);
        collectNegReads(n->body, inner, top);
      }
    }
  }

  void collectNegReads(const Body& body, const BoundEnv& env, int top) {
    for (const BodyLiteral& lit : body) {
      if (const auto* o = lit.as<OrdinaryLit>()) {
        addRead(o->atom.pred, env.of(o->atom.timeTerm()), false, top,
                renderAtom(o->atom));
      } else if (const auto* d = lit.as<DlCallLit>()) {
        addDlCallReads(*d, false, env, top);
      } else if (const auto* c = lit.as<ComprehensionLit>()) {
        BoundEnv inner = env;
        std::int64_t slack = (c->op == CmpOp::Lt) ? -1 : (c->op == CmpOp::Le ? 0 : kInf);
        if (slack < kInf)
          inner.tighten(Term::var(c->var), inner.of(c->bound), true, slack);
        propagate(inner, c->guard);
        reads_.push_back(Read{c->pred, inner.of(Term::var(c->var)), false, top,
                              c->pred + "(comprehension)"});
        collectNegReads(c->guard, inner, top);
      } else if (const auto* co = lit.as<CollectLit>()) {
        BoundEnv inner = env;
        propagate(inner, co->guard);
        collectNegReads(co->guard, inner, top);
      }
    }
  }

  const Rule& rule_;
  PivotInfo pivot_;
  BoundEnv env_;
  std::vector<Read> reads_;
  std::vector<Bound> headBounds_;
};

bool atMostPivot(const Bound& b, const Bound& pivotAbs) {
  if (b.offHi <= 0) return true;
  return b.absHi < kInf && pivotAbs.absLo > -kInf && b.absHi <= pivotAbs.absLo;
}

bool strictlyPast(const Bound& b, const Bound& pivotAbs) {
  if (b.offHi <= -1) return true;
  return b.absHi < kInf && pivotAbs.absLo > -kInf && b.absHi < pivotAbs.absLo;
}

bool atLeastPivot(const Bound& b, const Bound& pivotAbs) {
  if (b.offLo >= 0) return true;
  return b.absLo > -kInf && pivotAbs.absHi < kInf && b.absLo >= pivotAbs.absHi;
}

// ---------------------------------------------------------------------------
// Strongly connected components (iterative Tarjan over sorted predicates).
// ---------------------------------------------------------------------------

struct SccResult {
  std::map<std::string, int> comp;
  int count = 0;
};

SccResult tarjan(const std::vector<std::string>& nodes,
                 const std::map<std::string, std::set<std::string>>& adj) {
  SccResult res;
  std::map<std::string, int> index, low;
  std::vector<std::string> stack;
  std::map<std::string, bool> onStack;
  int next = 0;

  struct Frame {
    std::string v;
    std::vector<std::string> succ;
    std::size_t i = 0;
  };

  for (const std::string& start : nodes) {
    if (index.count(start)) continue;
    std::vector<Frame> frames;
    auto open = [&](const std::string& v) {
      index[v] = low[v] = next++;
      stack.push_back(v);
      onStack[v] = true;
      Frame f;
      f.v = v;
      if (auto it = adj.find(v); it != adj.end())
        f.succ.assign(it->second.begin(), it->second.end());
      frames.push_back(std::move(f));
    };
    open(start);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.i < f.succ.size()) {
        const std::string& w = f.succ[f.i++];
        if (!index.count(w)) {
          open(w);
        } else if (onStack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          while (true) {
            std::string w = stack.back();
            stack.pop_back();
            onStack[w] = false;
            res.comp[w] = res.count;
            if (w == f.v) break;
          }
          ++res.count;
        }
        std::string v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return res;
}

void collectPreds(const Body& body, std::set<std::string>& out) {
  for (const BodyLiteral& lit : body) {
    if (const auto* o = lit.as<OrdinaryLit>()) {
      out.insert(o->atom.pred);
    } else if (const auto* c = lit.as<ComprehensionLit>()) {
      out.insert(c->pred);
      collectPreds(c->guard, out);
    } else if (const auto* co = lit.as<CollectLit>()) {
      collectPreds(co->guard, out);
    } else if (const auto* n = lit.as<NotLit>()) {
      collectPreds(n->body, out);
    } else if (const auto* d = lit.as<DlCallLit>()) {
      if (d->abox.readsInterpretation()) {
        out.insert(names::kIsAAt);
        out.insert(names::kHasAAt);
      }
    }
  }
}

}  // namespace

const PivotInfo& StratumMap::pivotOf(int ruleId) const {
  static const PivotInfo kNone;
  auto it = pivots.find(ruleId);
  return it == pivots.end() ? kNone : it->second;
}

std::vector<std::pair<std::string, bool>> dlcallVirtualDependencies(const Rule& r) {
  std::vector<std::pair<std::string, bool>> out;
  if (r.isFail) return out;
  std::function<void(const Body&, bool)> walk = [&](const Body& body, bool positive) {
    for (const BodyLiteral& lit : body) {
      if (const auto* d = lit.as<DlCallLit>()) {
        if (d->abox.readsInterpretation()) {
          out.emplace_back(names::kIsAAt, positive);
          out.emplace_back(names::kHasAAt, positive);
        }
      } else if (const auto* n = lit.as<NotLit>()) {
        walk(n->body, false);
      } else if (const auto* c = lit.as<ComprehensionLit>()) {
        walk(c->guard, false);
      } else if (const auto* co = lit.as<CollectLit>()) {
        walk(co->guard, false);
      }
    }
  };
  walk(r.body, true);
  return out;
}

StratumMap computeStrata(const Program& p) {
  StratumMap out;

  std::set<std::string> predSet;
  for (const Rule& r : p.rules) {
    for (const Atom& h : r.heads) predSet.insert(h.pred);
    collectPreds(r.body, predSet);
  }

  std::map<std::string, std::set<std::string>> adj;  // dep -> heads
  for (const Rule& r : p.rules) {
    RuleAnalysis an(r);
    out.pivots[r.id] = an.pivot();
    if (r.synthetic()) continue;

    // Head predicates of one rule share a stratum.
    for (std::size_t i = 1; i < r.heads.size(); ++i) {
      adj[r.heads[0].pred].insert(r.heads[i].pred);
      adj[r.heads[i].pred].insert(r.heads[0].pred);
    }
    if (r.isFail || an.pivot().delayed()) continue;

    for (const Read& read : an.reads()) {
      if (strictlyPast(read.bound, an.env().pivotAbs)) continue;
      for (const Atom& h : r.heads) adj[read.pred].insert(h.pred);
    }
  }

  std::vector<std::string> nodes(predSet.begin(), predSet.end());
  SccResult scc = tarjan(nodes, adj);

  // Longest chain from the sources over the condensation.
  std::map<int, std::set<int>> cadj;
  std::map<int, int> indeg;
  for (int c = 0; c < scc.count; ++c) indeg[c] = 0;
  for (const auto& [v, succs] : adj) {
    for (const std::string& w : succs) {
      int cv = scc.comp[v], cw = scc.comp[w];
      if (cv != cw && cadj[cv].insert(cw).second) ++indeg[cw];
    }
  }
  std::map<int, int> level;
  std::vector<int> queue;
  for (int c = 0; c < scc.count; ++c)
    if (indeg[c] == 0) {
      queue.push_back(c);
      level[c] = 0;
    }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int c = queue[qi];
    for (int w : cadj[c]) {
      level[w] = std::max(level[w], level[c] + 1);
      if (--indeg[w] == 0) queue.push_back(w);
    }
  }
  for (const std::string& v : nodes) {
    out.stratum[v] = level[scc.comp[v]];
    out.maxStratum = std::max(out.maxStratum, out.stratum[v]);
  }
  return out;
}

std::vector<Violation> checkSbtp(const Program& p, const StratumMap& s) {
  std::vector<Violation> out;
  for (const Rule& r : p.rules) {
    if (r.synthetic() || r.isFact()) continue;
    RuleAnalysis an(r);
    const PivotInfo& pv = an.pivot();

    if (pv.missing) {
      out.push_back(Violation{Violation::Kind::PivotMissing, r.id, -1,
                              "rule " + r.label() +
                                  ": no pivot literal (an ordinary positive body literal "
                                  "with a variable time argument)"});
      continue;
    }

    int headStratum = r.heads.empty() ? -1 : s.stratumOf(r.heads[0].pred);

    if (!r.isFail) {
      for (std::size_t i = 0; i < r.heads.size(); ++i) {
        if (!atLeastPivot(an.headBounds()[i], an.env().pivotAbs))
          out.push_back(Violation{
              Violation::Kind::HeadTime, r.id, -1,
              "rule " + r.label() + ": head time of " + renderAtom(r.heads[i]) +
                  " is not constrained to be >= the pivot"});
      }
    }

    for (const Read& read : an.reads()) {
      if (read.positiveCtx) {
        if (!atMostPivot(read.bound, an.env().pivotAbs))
          out.push_back(Violation{
              Violation::Kind::BodyTime, r.id, read.topIndex,
              "rule " + r.label() + ": body literal " + read.what +
                  " is not constrained to be <= the pivot"});
        continue;
      }
      // Negative context: strictly past (a), settled by the write delay or
      // end-of-time fail scheduling, or one stratum down (b).
      if (strictlyPast(read.bound, an.env().pivotAbs)) continue;
      if (!atMostPivot(read.bound, an.env().pivotAbs)) {
        out.push_back(Violation{
            Violation::Kind::NegativeContext, r.id, read.topIndex,
            "rule " + r.label() + ": negated literal " + read.what +
                " violates SBTP condition (a): not constrained below the pivot"});
        continue;
      }
      if (r.isFail || pv.delayed()) continue;
      if (s.stratumOf(read.pred) >= headStratum) {
        out.push_back(Violation{
            Violation::Kind::NegativeContext, r.id, read.topIndex,
            "rule " + r.label() + ": negated literal " + read.what +
                " violates SBTP condition (b): '" + read.pred +
                "' is not in a strictly lower stratum than the head"});
      }
    }
  }
  return out;
}

std::string explainStrata(const Program& p, const StratumMap& s) {
  std::ostringstream os;
  std::map<int, std::vector<std::string>> byLevel;
  for (const auto& [pred, level] : s.stratum) byLevel[level].push_back(pred);
  for (const auto& [level, preds] : byLevel) {
    os << "stratum " << level << ":";
    for (const std::string& q : preds) os << ' ' << q;
    os << '\n';
  }
  for (const Rule& r : p.rules) {
    const PivotInfo& pv = s.pivotOf(r.id);
    os << r.label() << ": ";
    if (pv.missing) {
      os << "pivot missing";
    } else if (pv.var) {
      os << "pivot " << *pv.var << " at body index " << pv.bodyIndex;
    } else {
      os << "ground anchor " << (pv.anchor ? *pv.anchor : 0);
    }
    os << ", delta " << pv.deltaMin;
    if (!r.heads.empty()) os << ", stratum " << s.stratumOf(r.heads[0].pred);
    os << '\n';
  }
  return os.str();
}

}  // namespace fusecalc
