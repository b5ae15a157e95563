#include "fusecalc/printer.hpp"

#include <sstream>

#include "fusecalc/dlterms.hpp"

namespace fusecalc {

namespace {

void renderTermInto(const Term& t, std::ostringstream& os) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Sym:
      os << t.name();
      break;
    case Term::Kind::Int:
      os << t.num();
      break;
    case Term::Kind::Str:
      os << '"' << t.text() << '"';
      break;
    case Term::Kind::TimeSum:
      os << t.name() << '+' << t.num();
      break;
    case Term::Kind::Compound: {
      if (isIsATerm(t)) {
        renderTermInto(t.args()[0], os);
        os << " : ";
        renderTermInto(t.args()[1], os);
        break;
      }
      if (isHasATerm(t)) {
        os << '(';
        renderTermInto(t.args()[0], os);
        os << ", ";
        renderTermInto(t.args()[2], os);
        os << ") : ";
        renderTermInto(t.args()[1], os);
        break;
      }
      os << t.name() << '(';
      bool first = true;
      for (const Term& a : t.args()) {
        if (!first) os << ", ";
        first = false;
        renderTermInto(a, os);
      }
      os << ')';
      break;
    }
    case Term::Kind::SetV: {
      os << "Set(";
      bool first = true;
      for (const Term& a : t.args()) {
        if (!first) os << ", ";
        first = false;
        renderTermInto(a, os);
      }
      os << ')';
      break;
    }
  }
}

void renderAtomInto(const Atom& a, std::ostringstream& os) {
  if (a.neg) os << "neg(";
  if (a.pred == names::kIsAAt && a.args.size() == 3) {
    renderTermInto(a.args[0], os);
    os << " : ";
    renderTermInto(a.args[1], os);
    os << " @ ";
    renderTermInto(a.args[2], os);
  } else if (a.pred == names::kHasAAt && a.args.size() == 4) {
    os << '(';
    renderTermInto(a.args[0], os);
    os << ", ";
    renderTermInto(a.args[2], os);
    os << ") : ";
    renderTermInto(a.args[1], os);
    os << " @ ";
    renderTermInto(a.args[3], os);
  } else {
    os << a.pred;
    if (!a.args.empty()) {
      os << '(';
      bool first = true;
      for (const Term& t : a.args) {
        if (!first) os << ", ";
        first = false;
        renderTermInto(t, os);
      }
      os << ')';
    }
  }
  if (a.neg) os << ')';
}

void renderBodyInto(const Body& b, std::ostringstream& os);

void renderLiteralInto(const BodyLiteral& lit, std::ostringstream& os) {
  if (const auto* o = lit.as<OrdinaryLit>()) {
    renderAtomInto(o->atom, os);
  } else if (const auto* c = lit.as<ComprehensionLit>()) {
    os << c->pred << '(' << c->var << ' ' << cmpOpText(c->op) << ' '
       << renderTerm(c->bound);
    for (const Term& t : c->restArgs) os << ", " << renderTerm(t);
    os << ')';
    if (!c->guard.empty()) {
      os << " STH (";
      renderBodyInto(c->guard, os);
      os << ')';
    }
  } else if (const auto* bi = lit.as<BuiltinLit>()) {
    if (bi->pred == "contains")
      os << renderTerm(bi->args[0]) << " contains " << renderTerm(bi->args[1]);
    else
      os << renderTerm(bi->args[0]) << ' ' << bi->pred << ' ' << renderTerm(bi->args[1]);
  } else if (const auto* t = lit.as<TimeCmpLit>()) {
    os << renderTerm(t->lhs) << ' ' << cmpOpText(t->op) << ' ' << renderTerm(t->rhs);
  } else if (const auto* l = lit.as<LetLit>()) {
    os << "LET(" << l->var << ", " << renderTerm(l->value) << ')';
  } else if (const auto* ch = lit.as<ChooseLit>()) {
    os << "CHOOSE(" << ch->var << ", " << renderTerm(ch->choices) << ')';
  } else if (const auto* co = lit.as<CollectLit>()) {
    os << "COLLECT(" << co->var << ", " << renderTerm(co->tmpl) << " STH (";
    renderBodyInto(co->guard, os);
    os << "))";
  } else if (const auto* m = lit.as<MapRoleLit>()) {
    os << "MAPROLE(" << m->var << ", " << renderTerm(m->set) << ", "
       << renderTerm(m->role) << ", " << renderTerm(m->filler) << ')';
  } else if (const auto* d = lit.as<DlCallLit>()) {
    auto renderAbox = [&os](const AboxExpr& e) {
      if (e.atTime) os << "ABOXAT(" << renderTerm(*e.atTime) << ')';
      if (e.atTime && e.assertions) os << " ++ ";
      if (e.assertions) os << renderTerm(*e.assertions);
    };
    if (d->kind == DlCallKind::Entails) {
      if (d->abox.implicit()) {
        os << d->tboxName;
      } else {
        os << '(';
        renderAbox(d->abox);
        os << ", " << d->tboxName << ')';
      }
      os << " |= ";
      bool first = true;
      for (const Term& q : d->query) {
        if (!first) os << " and ";
        first = false;
        renderTermInto(q, os);
      }
    } else {
      os << (d->kind == DlCallKind::IsSat ? "DLISSAT(" : "DLISUNSAT(");
      if (!d->abox.implicit()) {
        renderAbox(d->abox);
        os << ", ";
      }
      os << d->tboxName << ')';
    }
  } else if (const auto* n = lit.as<NotLit>()) {
    os << "not (";
    renderBodyInto(n->body, os);
    os << ')';
  }
}

void renderBodyInto(const Body& b, std::ostringstream& os) {
  bool first = true;
  for (const BodyLiteral& lit : b) {
    if (!first) os << ", ";
    first = false;
    renderLiteralInto(lit, os);
  }
}

}  // namespace

std::string renderTerm(const Term& t) {
  std::ostringstream os;
  renderTermInto(t, os);
  return os.str();
}

std::string renderAtom(const Atom& a) {
  std::ostringstream os;
  renderAtomInto(a, os);
  return os.str();
}

std::string renderLiteral(const BodyLiteral& lit) {
  std::ostringstream os;
  renderLiteralInto(lit, os);
  return os.str();
}

std::string renderRule(const Rule& r) {
  std::ostringstream os;
  if (r.isFail) {
    os << "fail";
  } else {
    bool first = true;
    for (const Atom& h : r.heads) {
      if (!first) os << " or ";
      first = false;
      renderAtomInto(h, os);
    }
  }
  if (!r.body.empty()) {
    os << " :- ";
    renderBodyInto(r.body, os);
  }
  os << '.';
  return os.str();
}

std::string renderProgram(const Program& p) {
  std::ostringstream os;
  for (const Rule& r : p.rules) os << renderRule(r) << '\n';
  return os.str();
}

std::string renderModel(const Interpretation& i) {
  std::ostringstream os;
  bool first = true;
  for (const Atom& a : i.atoms()) {
    if (!first) os << '\n';
    first = false;
    renderAtomInto(a, os);
  }
  return os.str();
}

std::string renderMachine(const std::vector<Interpretation>& models) {
  std::ostringstream os;
  int k = 0;
  for (const Interpretation& m : models) {
    os << "model " << ++k << '\n';
    for (const Atom& a : m.atoms()) {
      renderAtomInto(a, os);
      os << '\n';
    }
    os << "end\n";
  }
  os << "models " << models.size() << '\n';
  return os.str();
}

std::string renderText(const std::vector<Interpretation>& models) {
  std::ostringstream os;
  int k = 0;
  for (const Interpretation& m : models) {
    os << "Model " << ++k << ":\n";
    for (const Atom& a : m.atoms()) {
      os << "  ";
      renderAtomInto(a, os);
      os << '\n';
    }
  }
  if (models.empty())
    os << "no models.\n";
  else
    os << models.size() << " model(s).\n";
  return os.str();
}

}  // namespace fusecalc
