#include "fusecalc/term.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fusecalc {

struct Term::Data {
  Kind kind;
  std::string name;  // Var/Sym name, Compound functor, TimeSum base variable
  std::int64_t num = 0;
  std::string text;
  std::vector<Term> args;
};

namespace {
const std::string kEmpty;
const std::vector<Term> kNoArgs;
}  // namespace

Term Term::var(std::string name) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Var;
  d->name = std::move(name);
  return Term(std::move(d));
}

Term Term::sym(std::string name) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Sym;
  d->name = std::move(name);
  return Term(std::move(d));
}

Term Term::integer(std::int64_t v) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Int;
  d->num = v;
  return Term(std::move(d));
}

Term Term::str(std::string s) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Str;
  d->text = std::move(s);
  return Term(std::move(d));
}

Term Term::timeSum(std::string var, std::int64_t k) {
  if (k == 0) return Term::var(std::move(var));
  auto d = std::make_shared<Data>();
  d->kind = Kind::TimeSum;
  d->name = std::move(var);
  d->num = k;
  return Term(std::move(d));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return Term::sym(std::move(functor));
  auto d = std::make_shared<Data>();
  d->kind = Kind::Compound;
  d->name = std::move(functor);
  d->args = std::move(args);
  return Term(std::move(d));
}

Term Term::setOf(std::vector<Term> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  auto d = std::make_shared<Data>();
  d->kind = Kind::SetV;
  d->args = std::move(elems);
  return Term(std::move(d));
}

Term::Kind Term::kind() const { return data_->kind; }
const std::string& Term::name() const { return data_->name; }
std::int64_t Term::num() const { return data_->num; }
const std::string& Term::text() const { return data_->text; }
const std::vector<Term>& Term::args() const { return data_->args; }

bool Term::isGround() const {
  switch (kind()) {
    case Kind::Var:
    case Kind::TimeSum:
      return false;
    case Kind::Sym:
    case Kind::Int:
    case Kind::Str:
      return true;
    case Kind::Compound:
    case Kind::SetV:
      for (const Term& a : args())
        if (!a.isGround()) return false;
      return true;
  }
  return false;
}

bool Term::isTimeTerm() const {
  return kind() == Kind::Int || kind() == Kind::Var || kind() == Kind::TimeSum;
}

int compareTerms(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Sym:
      return a.name().compare(b.name());
    case Term::Kind::Int:
      return a.num() < b.num() ? -1 : (a.num() > b.num() ? 1 : 0);
    case Term::Kind::Str:
      return a.text().compare(b.text());
    case Term::Kind::TimeSum: {
      int c = a.name().compare(b.name());
      if (c != 0) return c;
      return a.num() < b.num() ? -1 : (a.num() > b.num() ? 1 : 0);
    }
    case Term::Kind::Compound: {
      int c = a.name().compare(b.name());
      if (c != 0) return c;
      [[fallthrough]];
    }
    case Term::Kind::SetV: {
      const auto& xs = a.args();
      const auto& ys = b.args();
      for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i) {
        int c = compareTerms(xs[i], ys[i]);
        if (c != 0) return c;
      }
      if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

bool Term::operator==(const Term& o) const {
  return data_ == o.data_ || compareTerms(*this, o) == 0;
}

bool Term::operator<(const Term& o) const { return compareTerms(*this, o) < 0; }

std::size_t Term::hash() const {
  std::size_t h = static_cast<std::size_t>(kind()) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  switch (kind()) {
    case Kind::Var:
    case Kind::Sym:
      mix(std::hash<std::string>{}(name()));
      break;
    case Kind::Int:
      mix(std::hash<std::int64_t>{}(num()));
      break;
    case Kind::Str:
      mix(std::hash<std::string>{}(text()));
      break;
    case Kind::TimeSum:
      mix(std::hash<std::string>{}(name()));
      mix(std::hash<std::int64_t>{}(num()));
      break;
    case Kind::Compound:
      mix(std::hash<std::string>{}(name()));
      [[fallthrough]];
    case Kind::SetV:
      for (const Term& a : args()) mix(a.hash());
      break;
  }
  return h;
}

void Term::collectVars(std::vector<std::string>& out) const {
  switch (kind()) {
    case Kind::Var:
    case Kind::TimeSum:
      if (std::find(out.begin(), out.end(), name()) == out.end()) out.push_back(name());
      break;
    case Kind::Compound:
    case Kind::SetV:
      for (const Term& a : args()) a.collectVars(out);
      break;
    default:
      break;
  }
}

int Atom::timeArgIndex() const {
  if (pred == names::kIsAAt) return 2;
  if (pred == names::kHasAAt) return 3;
  return 0;
}

Term Atom::timeTerm() const {
  if (args.empty()) return Term::integer(0);
  return args[static_cast<std::size_t>(timeArgIndex())];
}

TimePoint Atom::timeValue() const {
  Term t = timeTerm();
  if (t.kind() != Term::Kind::Int)
    throw std::logic_error("timeValue on atom with non-ground time");
  return t.num();
}

bool Atom::isGround() const {
  for (const Term& a : args)
    if (!a.isGround()) return false;
  return true;
}

void Atom::collectVars(std::vector<std::string>& out) const {
  for (const Term& a : args) a.collectVars(out);
}

int compareAtoms(const Atom& a, const Atom& b) {
  int c = a.pred.compare(b.pred);
  if (c != 0) return c;
  // Time before the remaining arguments, so models list chronologically.
  {
    int ta = a.timeArgIndex(), tb = b.timeArgIndex();
    if (!a.args.empty() && !b.args.empty() && ta == tb) {
      c = compareTerms(a.args[static_cast<std::size_t>(ta)],
                       b.args[static_cast<std::size_t>(tb)]);
      if (c != 0) return c;
    }
  }
  for (std::size_t i = 0; i < std::min(a.args.size(), b.args.size()); ++i) {
    c = compareTerms(a.args[i], b.args[i]);
    if (c != 0) return c;
  }
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  if (a.neg != b.neg) return a.neg ? 1 : -1;
  return 0;
}

bool Atom::operator==(const Atom& o) const { return compareAtoms(*this, o) == 0; }
bool Atom::operator<(const Atom& o) const { return compareAtoms(*this, o) < 0; }

bool matchTerm(const Term& pattern, const Term& ground, Substitution& s) {
  switch (pattern.kind()) {
    case Term::Kind::Var:
      return s.bind(pattern.name(), ground);
    case Term::Kind::TimeSum: {
      if (ground.kind() != Term::Kind::Int) return false;
      return s.bind(pattern.name(), Term::integer(ground.num() - pattern.num()));
    }
    case Term::Kind::Sym:
    case Term::Kind::Int:
    case Term::Kind::Str:
      return pattern == ground;
    case Term::Kind::Compound: {
      if (ground.kind() != Term::Kind::Compound || pattern.name() != ground.name() ||
          pattern.args().size() != ground.args().size())
        return false;
      for (std::size_t i = 0; i < pattern.args().size(); ++i)
        if (!matchTerm(pattern.args()[i], ground.args()[i], s)) return false;
      return true;
    }
    case Term::Kind::SetV:
      return pattern.isGround() && pattern == ground;
  }
  return false;
}

bool Substitution::contains(const std::string& var) const { return map_.count(var) > 0; }

const Term* Substitution::lookup(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

bool Substitution::bind(const std::string& var, const Term& t) {
  auto [it, inserted] = map_.emplace(var, t);
  return inserted || it->second == t;
}

Term Substitution::apply(const Term& t) const {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Term* b = lookup(t.name());
      return b ? *b : t;
    }
    case Term::Kind::TimeSum: {
      const Term* b = lookup(t.name());
      if (!b) return t;
      if (b->kind() == Term::Kind::Int) return Term::integer(b->num() + t.num());
      if (b->kind() == Term::Kind::TimeSum)
        return Term::timeSum(b->name(), b->num() + t.num());
      throw std::logic_error("time sum over non-time binding");
    }
    case Term::Kind::Compound: {
      std::vector<Term> as;
      as.reserve(t.args().size());
      for (const Term& a : t.args()) as.push_back(apply(a));
      return Term::compound(t.name(), std::move(as));
    }
    case Term::Kind::SetV: {
      std::vector<Term> as;
      as.reserve(t.args().size());
      for (const Term& a : t.args()) as.push_back(apply(a));
      return Term::setOf(std::move(as));
    }
    default:
      return t;
  }
}

Atom Substitution::apply(const Atom& a) const {
  Atom out;
  out.neg = a.neg;
  out.pred = a.pred;
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(apply(t));
  return out;
}

std::string Substitution::key() const {
  std::ostringstream os;
  for (const auto& [v, t] : map_) os << v << '=' << t.hash() << ';';
  return os.str();
}

bool Interpretation::insert(const Atom& a) {
  auto [it, inserted] = atoms_.insert(a);
  if (inserted) index_[{a.pred, a.neg}].insert(a);
  return inserted;
}

bool Interpretation::contains(const Atom& a) const { return atoms_.count(a) > 0; }

const std::set<Atom>& Interpretation::atomsOf(const std::string& pred, bool neg) const {
  static const std::set<Atom> kEmptySet;
  auto it = index_.find({pred, neg});
  return it == index_.end() ? kEmptySet : it->second;
}

std::set<TimePoint> Interpretation::dlAtomTimes() const {
  std::set<TimePoint> out;
  for (const char* p : {names::kIsAAt, names::kHasAAt})
    for (const Atom& a : atomsOf(p, false)) out.insert(a.timeValue());
  return out;
}

}  // namespace fusecalc
