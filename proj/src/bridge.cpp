#include "fusecalc/bridge.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "fusecalc/dlterms.hpp"
#include "fusecalc/printer.hpp"

namespace fusecalc {

namespace {

dl::Concept conceptOrThrow(const Term& t) {
  auto c = termToConcept(t);
  if (!c) throw EvalError("malformed concept term: " + renderTerm(t));
  return *c;
}

dl::Role roleOrThrow(const Term& t) {
  auto r = termToRole(t);
  if (!r) throw EvalError("malformed role term: " + renderTerm(t));
  return *r;
}

void conceptKey(const dl::Concept& c, std::ostringstream& os) {
  using K = dl::Concept::Kind;
  switch (c.kind()) {
    case K::Name:
      os << 'N' << c.conceptName() << ';';
      break;
    case K::Top:
      os << "T;";
      break;
    case K::Bottom:
      os << "B;";
      break;
    case K::Not:
      os << "!(";
      conceptKey(c.left(), os);
      os << ')';
      break;
    case K::And:
    case K::Or:
      os << (c.kind() == K::And ? "&(" : "|(");
      conceptKey(c.left(), os);
      conceptKey(c.right(), os);
      os << ')';
      break;
    case K::Exists:
    case K::Forall:
      os << (c.kind() == K::Exists ? "E" : "A") << c.role().name
         << (c.role().inverse ? "-" : "") << '(';
      conceptKey(c.left(), os);
      os << ')';
      break;
  }
}

std::string aboxKey(const dl::ABox& a) {
  std::ostringstream os;
  for (const auto& ca : a.concepts) {
    os << renderTerm(ca.individual) << ':';
    conceptKey(ca.concept, os);
  }
  for (const auto& ra : a.roles)
    os << '(' << renderTerm(ra.from) << ',' << renderTerm(ra.to) << "):" << ra.role.name
       << ';';
  return os.str();
}

}  // namespace

dl::ABox inducedAbox(const Interpretation& i, TimePoint d) {
  dl::ABox out;
  for (const Atom& a : i.atomsOf(names::kIsAAt, false)) {
    if (a.timeValue() != d) continue;
    out.addConcept(a.args[0], conceptOrThrow(a.args[1]));
  }
  for (const Atom& a : i.atomsOf(names::kHasAAt, false)) {
    if (a.timeValue() != d) continue;
    out.addRole(a.args[0], a.args[2], roleOrThrow(a.args[1]));
  }
  return out;
}

void addAssertionSet(const Term& setValue, dl::ABox& into) {
  if (setValue.kind() != Term::Kind::SetV)
    throw EvalError("ABox union expects a set of DL assertions, got " +
                    renderTerm(setValue));
  for (const Term& e : setValue.args()) {
    if (isIsATerm(e)) {
      into.addConcept(e.args()[0], conceptOrThrow(e.args()[1]));
    } else if (isHasATerm(e)) {
      into.addRole(e.args()[0], e.args()[2], roleOrThrow(e.args()[1]));
    } else {
      throw EvalError("not a DL assertion: " + renderTerm(e));
    }
  }
}

std::optional<bool> DlCache::get(const std::string& key) const {
  auto it = map_.find(key);
  return it == map_.end() ? std::nullopt : std::optional<bool>(it->second);
}

void DlCache::put(const std::string& key, bool value) { map_[key] = value; }

namespace {

const dl::TBox& tboxOrThrow(const Program& prog, const std::string& name) {
  auto it = prog.tboxes.find(name);
  if (it == prog.tboxes.end()) throw EvalError("unknown TBox '" + name + "'");
  return it->second;
}

bool cachedSat(const dl::ABox& a, const dl::TBox& t, const std::string& tname,
               DlCache* cache) {
  if (!cache) return dl::isSatisfiable(a, t);
  std::string key = "S|" + tname + '|' + aboxKey(a);
  if (auto hit = cache->get(key)) return *hit;
  bool v = dl::isSatisfiable(a, t);
  cache->put(key, v);
  return v;
}

bool cachedEntails(const dl::ABox& a, const dl::TBox& t, const std::string& tname,
                   const std::vector<dl::QueryAtom>& q, const std::string& qkey,
                   DlCache* cache) {
  if (!cache) return dl::entails(a, t, q);
  std::string key = "E|" + tname + '|' + qkey + '|' + aboxKey(a);
  if (auto hit = cache->get(key)) return *hit;
  bool v = dl::entails(a, t, q);
  cache->put(key, v);
  return v;
}

}  // namespace

std::vector<Substitution> evalDlCall(const Interpretation& i, const Substitution& beta,
                                     std::optional<TimePoint> pivotTime,
                                     const DlCallLit& call, const Program& prog,
                                     DlCache* cache) {
  const dl::TBox& tbox = tboxOrThrow(prog, call.tboxName);

  // Resolve the ABox operand; an unbound ABOXAT time variable enumerates the
  // times at which the interpretation holds any timed DL-atom (closed world).
  std::vector<std::pair<Substitution, dl::ABox>> alternatives;
  auto buildAt = [&](Substitution b, std::optional<TimePoint> at) {
    dl::ABox a;
    if (call.abox.implicit()) {
      if (!pivotTime)
        throw EvalError("implicit DL-call ABox without a pivot time");
      a = inducedAbox(i, *pivotTime);
    } else if (at) {
      a = inducedAbox(i, *at);
    }
    if (call.abox.assertions) {
      Term s = b.apply(*call.abox.assertions);
      if (!s.isGround()) throw EvalError("unbound assertion set in DL-call");
      addAssertionSet(s, a);
    }
    alternatives.emplace_back(std::move(b), std::move(a));
  };

  if (call.abox.atTime) {
    Term t = beta.apply(*call.abox.atTime);
    if (t.kind() == Term::Kind::Int) {
      buildAt(beta, t.num());
    } else {
      for (TimePoint d : i.dlAtomTimes()) {
        Substitution b = beta;
        if (matchTerm(t, Term::integer(d), b)) buildAt(std::move(b), d);
      }
    }
  } else {
    buildAt(beta, std::nullopt);
  }

  std::vector<Substitution> out;
  for (auto& [b, abox] : alternatives) {
    if (call.kind == DlCallKind::IsSat || call.kind == DlCallKind::IsUnsat) {
      dl::ABox withUna = abox;
      for (const auto& ca : dl::una(abox.individuals())) withUna.concepts.insert(ca);
      bool sat = cachedSat(withUna, tbox, call.tboxName, cache);
      if ((call.kind == DlCallKind::IsSat) == sat) out.push_back(b);
      continue;
    }

    // Entailment: enumerate unbound query variables over known individuals
    // plus the query's own ground individual terms.
    std::vector<Term> query;
    query.reserve(call.query.size());
    for (const Term& q : call.query) query.push_back(b.apply(q));

    std::vector<std::string> freeVars;
    std::set<Term> candidates = abox.individuals();
    for (const Term& q : query) {
      auto considerInd = [&](const Term& ind) {
        if (ind.isGround()) {
          candidates.insert(ind);
        } else {
          ind.collectVars(freeVars);
        }
      };
      considerInd(q.args()[0]);
      if (isHasATerm(q)) considerInd(q.args()[2]);
      // Concept/role positions must be bound by now.
      const Term& cr = q.args()[1];
      if (!cr.isGround())
        throw EvalError("unbound concept or role variable in DL query: " + renderTerm(q));
    }
    std::sort(freeVars.begin(), freeVars.end());
    freeVars.erase(std::unique(freeVars.begin(), freeVars.end()), freeVars.end());

    std::vector<Term> cand(candidates.begin(), candidates.end());
    std::vector<Substitution> assignments{b};
    for (const std::string& v : freeVars) {
      std::vector<Substitution> next;
      for (const Substitution& s : assignments) {
        for (const Term& c : cand) {
          Substitution e = s;
          if (e.bind(v, c)) next.push_back(std::move(e));
        }
      }
      assignments = std::move(next);
    }

    for (const Substitution& s : assignments) {
      std::vector<dl::QueryAtom> dlq;
      std::ostringstream qkey;
      bool ok = true;
      for (const Term& qt : query) {
        Term g = s.apply(qt);
        if (!g.isGround()) {
          ok = false;
          break;
        }
        dl::QueryAtom qa;
        if (isIsATerm(g)) {
          qa.isRole = false;
          qa.a = g.args()[0];
          qa.c = conceptOrThrow(g.args()[1]);
        } else if (isHasATerm(g)) {
          qa.isRole = true;
          qa.a = g.args()[0];
          qa.b = g.args()[2];
          qa.r = roleOrThrow(g.args()[1]);
        } else {
          throw EvalError("not a DL query atom: " + renderTerm(g));
        }
        qkey << renderTerm(g) << ';';
        dlq.push_back(std::move(qa));
      }
      if (!ok) continue;
      if (cachedEntails(abox, tbox, call.tboxName, dlq, qkey.str(), cache))
        out.push_back(s);
    }
  }
  return out;
}

std::vector<Diagnostic> monotonicityLint(const Program& p) {
  std::vector<Diagnostic> out;
  for (const Rule& r : p.rules) {
    std::function<void(const Body&, bool)> walk = [&](const Body& body, bool positive) {
      for (const BodyLiteral& lit : body) {
        if (const auto* d = lit.as<DlCallLit>()) {
          if (d->kind == DlCallKind::IsSat && positive && !r.isFail &&
              d->abox.readsInterpretation()) {
            out.push_back(Diagnostic{
                Diagnostic::Severity::Warning, r.file, r.line, 0,
                "rule " + r.label() +
                    ": DLISSAT over an induced ABox in a positive context can lose "
                    "completeness (satisfiability is non-monotonic)"});
          }
          if (d->kind == DlCallKind::IsUnsat && !positive) {
            out.push_back(Diagnostic{
                Diagnostic::Severity::Warning, r.file, r.line, 0,
                "rule " + r.label() +
                    ": DLISUNSAT under negation can lose soundness"});
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
  }
  return out;
}

}  // namespace fusecalc
