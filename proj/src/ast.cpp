#include "fusecalc/ast.hpp"

#include <algorithm>

namespace fusecalc {

const char* cmpOpText(CmpOp op) {
  switch (op) {
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
  }
  return "?";
}

namespace {

void varsOf(const Term& t, std::set<std::string>& out) {
  std::vector<std::string> vs;
  t.collectVars(vs);
  out.insert(vs.begin(), vs.end());
}

void varsOf(const std::vector<Term>& ts, std::set<std::string>& out) {
  for (const Term& t : ts) varsOf(t, out);
}

}  // namespace

std::set<std::string> fvar(const BodyLiteral& lit) {
  std::set<std::string> out;
  if (const auto* o = lit.as<OrdinaryLit>()) {
    varsOf(o->atom.args, out);
  } else if (const auto* c = lit.as<ComprehensionLit>()) {
    out.insert(c->var);
    varsOf(c->bound, out);
    varsOf(c->restArgs, out);
  } else if (const auto* b = lit.as<BuiltinLit>()) {
    varsOf(b->args, out);
  } else if (const auto* t = lit.as<TimeCmpLit>()) {
    varsOf(t->lhs, out);
    varsOf(t->rhs, out);
  } else if (const auto* l = lit.as<LetLit>()) {
    out.insert(l->var);
    varsOf(l->value, out);
  } else if (const auto* ch = lit.as<ChooseLit>()) {
    out.insert(ch->var);
    varsOf(ch->choices, out);
  } else if (const auto* co = lit.as<CollectLit>()) {
    out.insert(co->var);
  } else if (const auto* m = lit.as<MapRoleLit>()) {
    out.insert(m->var);
    varsOf(m->set, out);
    varsOf(m->role, out);
    varsOf(m->filler, out);
  } else if (const auto* d = lit.as<DlCallLit>()) {
    if (d->kind == DlCallKind::Entails) varsOf(d->query, out);
  }
  // NotLit: empty.
  return out;
}

std::set<std::string> fvar(const Body& body) {
  std::set<std::string> out;
  for (const BodyLiteral& lit : body) {
    auto vs = fvar(lit);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

std::set<std::string> allVars(const BodyLiteral& lit) {
  std::set<std::string> out = fvar(lit);
  auto addBody = [&out](const Body& b) {
    for (const BodyLiteral& l : b) {
      auto vs = allVars(l);
      out.insert(vs.begin(), vs.end());
    }
  };
  if (const auto* c = lit.as<ComprehensionLit>()) {
    addBody(c->guard);
  } else if (const auto* co = lit.as<CollectLit>()) {
    varsOf(co->tmpl, out);
    addBody(co->guard);
  } else if (const auto* n = lit.as<NotLit>()) {
    addBody(n->body);
  } else if (const auto* d = lit.as<DlCallLit>()) {
    varsOf(d->query, out);
    if (d->abox.atTime) varsOf(*d->abox.atTime, out);
    if (d->abox.assertions) varsOf(*d->abox.assertions, out);
  }
  return out;
}

std::string Rule::label() const {
  std::string s = "r" + std::to_string(id);
  if (!file.empty()) s += " (" + file + ":" + std::to_string(line) + ")";
  return s;
}

}  // namespace fusecalc
