#include "fusecalc/dl.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fusecalc::dl {

struct Concept::Data {
  Kind kind;
  std::string name;
  std::optional<Concept> l, r;
  Role role;
};

Concept Concept::name(std::string n) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Name;
  d->name = std::move(n);
  return Concept(std::move(d));
}

Concept Concept::top() {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Top;
  return Concept(std::move(d));
}

Concept Concept::bottom() {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Bottom;
  return Concept(std::move(d));
}

Concept Concept::negation(Concept c) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Not;
  d->l = std::move(c);
  return Concept(std::move(d));
}

Concept Concept::conj(Concept a, Concept b) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::And;
  d->l = std::move(a);
  d->r = std::move(b);
  return Concept(std::move(d));
}

Concept Concept::disj(Concept a, Concept b) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Or;
  d->l = std::move(a);
  d->r = std::move(b);
  return Concept(std::move(d));
}

Concept Concept::exists(Role r, Concept c) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Exists;
  d->role = std::move(r);
  d->l = std::move(c);
  return Concept(std::move(d));
}

Concept Concept::forall(Role r, Concept c) {
  auto d = std::make_shared<Data>();
  d->kind = Kind::Forall;
  d->role = std::move(r);
  d->l = std::move(c);
  return Concept(std::move(d));
}

Concept::Kind Concept::kind() const { return data_->kind; }
const std::string& Concept::conceptName() const { return data_->name; }
const Concept& Concept::left() const { return *data_->l; }
const Concept& Concept::right() const { return *data_->r; }
const Role& Concept::role() const { return data_->role; }

int compareConcepts(const Concept& a, const Concept& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Concept::Kind::Top:
    case Concept::Kind::Bottom:
      return 0;
    case Concept::Kind::Name:
      return a.conceptName().compare(b.conceptName());
    case Concept::Kind::Not:
      return compareConcepts(a.left(), b.left());
    case Concept::Kind::And:
    case Concept::Kind::Or: {
      int c = compareConcepts(a.left(), b.left());
      return c != 0 ? c : compareConcepts(a.right(), b.right());
    }
    case Concept::Kind::Exists:
    case Concept::Kind::Forall: {
      if (a.role() == b.role()) return compareConcepts(a.left(), b.left());
      return a.role() < b.role() ? -1 : 1;
    }
  }
  return 0;
}

bool Concept::operator==(const Concept& o) const {
  return data_ == o.data_ || compareConcepts(*this, o) == 0;
}
bool Concept::operator<(const Concept& o) const { return compareConcepts(*this, o) < 0; }

bool ConceptAssertion::operator<(const ConceptAssertion& o) const {
  int c = compareTerms(individual, o.individual);
  if (c != 0) return c < 0;
  return concept < o.concept;
}
bool ConceptAssertion::operator==(const ConceptAssertion& o) const {
  return individual == o.individual && concept == o.concept;
}

bool RoleAssertion::operator<(const RoleAssertion& o) const {
  int c = compareTerms(from, o.from);
  if (c != 0) return c < 0;
  c = compareTerms(to, o.to);
  if (c != 0) return c < 0;
  return role < o.role;
}
bool RoleAssertion::operator==(const RoleAssertion& o) const {
  return from == o.from && to == o.to && role == o.role;
}

void ABox::addConcept(Term individual, Concept c) {
  concepts.insert(ConceptAssertion{std::move(individual), std::move(c)});
}

void ABox::addRole(Term from, Term to, Role r) {
  if (r.inverse) {
    std::swap(from, to);
    r = r.inv();
  }
  roles.insert(RoleAssertion{std::move(from), std::move(to), std::move(r)});
}

void ABox::unite(const ABox& other) {
  concepts.insert(other.concepts.begin(), other.concepts.end());
  roles.insert(other.roles.begin(), other.roles.end());
}

std::set<Term> ABox::individuals() const {
  std::set<Term> out;
  for (const auto& ca : concepts) out.insert(ca.individual);
  for (const auto& ra : roles) {
    out.insert(ra.from);
    out.insert(ra.to);
  }
  return out;
}

Concept nnf(const Concept& c) {
  switch (c.kind()) {
    case Concept::Kind::Name:
    case Concept::Kind::Top:
    case Concept::Kind::Bottom:
      return c;
    case Concept::Kind::And:
      return Concept::conj(nnf(c.left()), nnf(c.right()));
    case Concept::Kind::Or:
      return Concept::disj(nnf(c.left()), nnf(c.right()));
    case Concept::Kind::Exists:
      return Concept::exists(c.role(), nnf(c.left()));
    case Concept::Kind::Forall:
      return Concept::forall(c.role(), nnf(c.left()));
    case Concept::Kind::Not: {
      const Concept& d = c.left();
      switch (d.kind()) {
        case Concept::Kind::Name:
          return c;  // negated name is minimal
        case Concept::Kind::Top:
          return Concept::bottom();
        case Concept::Kind::Bottom:
          return Concept::top();
        case Concept::Kind::Not:
          return nnf(d.left());
        case Concept::Kind::And:
          return Concept::disj(nnf(Concept::negation(d.left())),
                               nnf(Concept::negation(d.right())));
        case Concept::Kind::Or:
          return Concept::conj(nnf(Concept::negation(d.left())),
                               nnf(Concept::negation(d.right())));
        case Concept::Kind::Exists:
          return Concept::forall(d.role(), nnf(Concept::negation(d.left())));
        case Concept::Kind::Forall:
          return Concept::exists(d.role(), nnf(Concept::negation(d.left())));
      }
    }
  }
  return c;
}

namespace {

// Deterministic injective spelling for fresh UNA concept names. '#' cannot
// occur in parsed concept names, so these never collide with user names.
void encodeTerm(const Term& t, std::ostringstream& os) {
  switch (t.kind()) {
    case Term::Kind::Var:
      os << "v:" << t.name();
      break;
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
    case Term::Kind::Compound:
      os << t.name();
      [[fallthrough]];
    case Term::Kind::SetV: {
      os << '(';
      bool first = true;
      for (const Term& a : t.args()) {
        if (!first) os << ',';
        first = false;
        encodeTerm(a, os);
      }
      os << ')';
      break;
    }
  }
}

std::string encodeTerm(const Term& t) {
  std::ostringstream os;
  encodeTerm(t, os);
  return os.str();
}

}  // namespace

std::vector<ConceptAssertion> una(const std::set<Term>& individuals) {
  std::vector<Term> inds(individuals.begin(), individuals.end());
  std::vector<ConceptAssertion> out;
  for (std::size_t i = 0; i < inds.size(); ++i) {
    for (std::size_t j = i + 1; j < inds.size(); ++j) {
      std::string n = "UNA#" + encodeTerm(inds[i]) + "#" + encodeTerm(inds[j]);
      Concept fresh = Concept::name(n);
      out.push_back(ConceptAssertion{inds[i], fresh});
      out.push_back(ConceptAssertion{inds[j], Concept::negation(fresh)});
    }
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Tableau procedure.
//
// Completion graph over root nodes (named individuals) and blockable tree
// nodes generated by the exists-rule. GCIs are internalized: every node label
// carries nnf(~C | D) for each C [= D. Termination with inverse and
// functional roles relies on pairwise blocking. Functional constraints are
// enforced by merging neighbors; merged named individuals clash through UNA
// concepts when the caller asserted them.
// ---------------------------------------------------------------------------

struct Node {
  int id = 0;
  bool root = false;
  bool alive = true;
  int parent = -1;  // generating predecessor for blockable nodes
  std::set<Concept> label;
};

struct Edge {
  std::set<Role> roles;  // labels of the directed edge
};

struct Graph {
  std::vector<Node> nodes;
  std::map<std::pair<int, int>, Edge> edges;

  int addNode(bool root, int parent) {
    Node n;
    n.id = static_cast<int>(nodes.size());
    n.root = root;
    n.parent = parent;
    nodes.push_back(std::move(n));
    return nodes.back().id;
  }

  void addEdge(int from, int to, const Role& r) {
    if (r.inverse)
      edges[{to, from}].roles.insert(r.inv());
    else
      edges[{from, to}].roles.insert(r);
  }
};

class Tableau {
 public:
  Tableau(const TBox& tbox, const TableauOptions& opts) : opts_(opts) {
    for (const Gci& g : tbox.gcis)
      universal_.push_back(nnf(Concept::disj(Concept::negation(g.sub), g.sup)));
    std::sort(universal_.begin(), universal_.end());
    universal_.erase(std::unique(universal_.begin(), universal_.end()), universal_.end());
    for (const std::string& r : tbox.functionalRoles) functional_.insert(r);
  }

  bool run(const ABox& abox) {
    Graph g;
    std::map<Term, int> roots;
    auto rootOf = [&](const Term& t) {
      auto it = roots.find(t);
      if (it != roots.end()) return it->second;
      int id = g.addNode(true, -1);
      for (const Concept& u : universal_) g.nodes[id].label.insert(u);
      roots.emplace(t, id);
      return id;
    };
    for (const auto& ca : abox.concepts) g.nodes[rootOf(ca.individual)].label.insert(nnf(ca.concept));
    for (const auto& ra : abox.roles) g.addEdge(rootOf(ra.from), rootOf(ra.to), ra.role);
    if (g.nodes.empty()) {
      // TBox consistency needs a witness element: domains are non-empty.
      int id = g.addNode(true, -1);
      for (const Concept& u : universal_) g.nodes[id].label.insert(u);
    }
    return expand(g);
  }

 private:
  void step() {
    if (--stepsLeft_ < 0) throw BudgetExceeded("DL tableau step budget exceeded");
  }

  static bool isClash(const Node& n) {
    for (const Concept& c : n.label) {
      if (c.kind() == Concept::Kind::Bottom) return true;
      if (c.kind() == Concept::Kind::Not && n.label.count(c.left())) return true;
    }
    return false;
  }

  // y is an r-neighbor of x if x --r--> y or y --r^- --> x.
  std::vector<int> neighbors(const Graph& g, int x, const Role& r) const {
    std::vector<int> out;
    for (const auto& [key, e] : g.edges) {
      auto [from, to] = key;
      if (!g.nodes[from].alive || !g.nodes[to].alive) continue;
      if (from == x && e.roles.count(r)) out.push_back(to);
      if (to == x && e.roles.count(r.inv())) out.push_back(from);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool isAncestor(const Graph& g, int anc, int x) const {
    for (int p = g.nodes[x].parent; p != -1; p = g.nodes[p].parent)
      if (p == anc) return true;
    return false;
  }

  // Roles r such that `child` is an r-neighbor of `pred`. Edges created for
  // inverse existentials are stored in the reverse direction, so both
  // orientations contribute.
  std::set<Role> connectingLabel(const Graph& g, int pred, int child) const {
    std::set<Role> out;
    if (auto it = g.edges.find({pred, child}); it != g.edges.end())
      out.insert(it->second.roles.begin(), it->second.roles.end());
    if (auto it = g.edges.find({child, pred}); it != g.edges.end())
      for (const Role& r : it->second.roles) out.insert(r.inv());
    return out;
  }

  // Pairwise blocking: x is directly blocked by an ancestor y when both are
  // blockable, their labels match, the labels of their predecessors match,
  // and the connecting edge labels match. A node below a blocked node is
  // indirectly blocked.
  bool isBlocked(const Graph& g, int x) const {
    // Collect the ancestor path root..x.
    std::vector<int> path;
    for (int p = x; p != -1; p = g.nodes[p].parent) path.push_back(p);
    std::reverse(path.begin(), path.end());
    // Scan for the first directly blocked node on the path.
    for (std::size_t i = 2; i < path.size(); ++i) {
      int cand = path[i];
      if (g.nodes[cand].root) continue;
      int candPred = g.nodes[cand].parent;
      std::set<Role> candRoles = connectingLabel(g, candPred, cand);
      for (std::size_t j = 1; j < i; ++j) {
        int y = path[j];
        if (g.nodes[y].root) continue;
        int yPred = g.nodes[y].parent;
        if (yPred == -1) continue;
        if (g.nodes[cand].label == g.nodes[y].label &&
            g.nodes[candPred].label == g.nodes[yPred].label &&
            candRoles == connectingLabel(g, yPred, y))
          return true;  // cand directly blocked; x is cand or below it
      }
    }
    return false;
  }

  // Merge node y into node x; prunes y's blockable subtree.
  void merge(Graph& g, int x, int y) {
    // Kill blockable descendants of y.
    for (Node& n : g.nodes)
      if (n.alive && !n.root && n.id != y && isAncestor(g, y, n.id)) n.alive = false;
    // Redirect surviving edges.
    std::map<std::pair<int, int>, Edge> rewritten;
    for (auto& [key, e] : g.edges) {
      auto [from, to] = key;
      if (!g.nodes[from].alive || !g.nodes[to].alive) continue;
      int nf = from == y ? x : from;
      int nt = to == y ? x : to;
      rewritten[{nf, nt}].roles.insert(e.roles.begin(), e.roles.end());
    }
    g.edges = std::move(rewritten);
    g.nodes[x].label.insert(g.nodes[y].label.begin(), g.nodes[y].label.end());
    g.nodes[y].alive = false;
  }

  bool expand(Graph& g) {
    while (true) {
      step();
      bool changed = false;

      // 1. Clash.
      for (const Node& n : g.nodes)
        if (n.alive && isClash(n)) return false;

      // 2. Conjunctions.
      for (Node& n : g.nodes) {
        if (!n.alive) continue;
        for (const Concept& c : n.label) {
          if (c.kind() != Concept::Kind::And) continue;
          bool addL = !n.label.count(c.left());
          bool addR = !n.label.count(c.right());
          if (addL || addR) {
            if (addL) n.label.insert(c.left());
            if (addR) n.label.insert(c.right());
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
      if (changed) continue;

      // 3. Universal restrictions.
      for (Node& n : g.nodes) {
        if (!n.alive) continue;
        for (const Concept& c : n.label) {
          if (c.kind() != Concept::Kind::Forall) continue;
          for (int y : neighbors(g, n.id, c.role())) {
            if (!g.nodes[y].label.count(c.left())) {
              g.nodes[y].label.insert(c.left());
              changed = true;
              break;
            }
          }
          if (changed) break;
        }
        if (changed) break;
      }
      if (changed) continue;

      // 4. Functional merge.
      for (const Node& n : g.nodes) {
        if (!n.alive) continue;
        for (const std::string& f : functional_) {
          auto ns = neighbors(g, n.id, Role{f, false});
          if (ns.size() >= 2) {
            // Merge the newer into the older; roots are oldest of all.
            int a = ns[0], b = ns[1];
            if (!g.nodes[a].root && (g.nodes[b].root || b < a)) std::swap(a, b);
            merge(g, a, b);
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
      if (changed) continue;

      // 5. Disjunction branch (depth-first, left alternative first).
      for (Node& n : g.nodes) {
        if (!n.alive) continue;
        for (const Concept& c : n.label) {
          if (c.kind() != Concept::Kind::Or) continue;
          if (n.label.count(c.left()) || n.label.count(c.right())) continue;
          Graph left = g;
          left.nodes[n.id].label.insert(c.left());
          if (expand(left)) return true;
          g.nodes[n.id].label.insert(c.right());
          changed = true;
          break;
        }
        if (changed) break;
      }
      if (changed) continue;

      // 6. Existential generation (not on blocked nodes).
      for (Node& n : g.nodes) {
        if (!n.alive) continue;
        bool blockedKnown = false, blocked = false;
        for (const Concept& c : n.label) {
          if (c.kind() != Concept::Kind::Exists) continue;
          bool witnessed = false;
          for (int y : neighbors(g, n.id, c.role()))
            if (g.nodes[y].label.count(c.left())) {
              witnessed = true;
              break;
            }
          if (witnessed) continue;
          if (!blockedKnown) {
            blocked = !n.root && isBlocked(g, n.id);
            blockedKnown = true;
          }
          if (blocked) continue;
          if (static_cast<int>(g.nodes.size()) > opts_.maxNodes)
            throw BudgetExceeded("DL tableau node budget exceeded");
          int y = g.addNode(false, n.id);
          g.nodes[y].label.insert(c.left());
          for (const Concept& u : universal_) g.nodes[y].label.insert(u);
          g.addEdge(n.id, y, c.role());
          changed = true;
          break;
        }
        if (changed) break;
      }
      if (changed) continue;

      return true;  // complete and clash-free
    }
  }

  TableauOptions opts_;
  std::int64_t stepsLeft_ = 0;
  std::vector<Concept> universal_;
  std::set<std::string> functional_;

 public:
  void resetBudget() { stepsLeft_ = opts_.maxSteps; }
};

}  // namespace

bool isSatisfiable(const ABox& a, const TBox& t, const TableauOptions& opts) {
  Tableau tab(t, opts);
  tab.resetBudget();
  return tab.run(a);
}

bool entails(const ABox& a, const TBox& t, const std::vector<QueryAtom>& query,
             const TableauOptions& opts) {
  std::set<Term> inds = a.individuals();
  for (const QueryAtom& q : query) {
    inds.insert(q.a);
    if (q.isRole) inds.insert(q.b);
  }
  ABox base = a;
  for (const ConceptAssertion& ca : una(inds)) base.concepts.insert(ca);

  int freshId = 0;
  for (const QueryAtom& q : query) {
    ABox refute = base;
    if (!q.isRole) {
      refute.addConcept(q.a, Concept::negation(q.c));
    } else {
      Concept fresh = Concept::name("Q#" + std::to_string(freshId++));
      refute.addConcept(q.a, Concept::forall(q.r, Concept::negation(fresh)));
      refute.addConcept(q.b, fresh);
    }
    if (isSatisfiable(refute, t, opts)) return false;
  }
  return true;
}

}  // namespace fusecalc::dl
