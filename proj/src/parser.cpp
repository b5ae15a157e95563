#include "fusecalc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "fusecalc/builtins.hpp"
#include "fusecalc/dlterms.hpp"

namespace fusecalc {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
  UIdent,
  LIdent,
  Int,
  Str,
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t num = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::string file) : src_(src), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipSpace();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    Token end;
    end.kind = Tok::End;
    end.line = line_;
    end.col = col_;
    out.push_back(end);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(Diagnostic{Diagnostic::Severity::Error, file_, line_, col_, msg});
  }

  char peek(std::size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skipSpace() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool tryUtf8(const char* seq, std::size_t n) {
    if (pos_ + n > src_.size()) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (src_[pos_ + i] != seq[i]) return false;
    for (std::size_t i = 0; i < n; ++i) advance();
    return true;
  }

  Token make(Tok kind, std::string text, int line, int col) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.col = col;
    return t;
  }

  Token next() {
    int line = line_, col = col_;
    char c = peek();

    // A few UTF-8 conveniences so the reference listings read naturally.
    if (tryUtf8("\xE2\x8A\xA8", 3)) return make(Tok::Punct, "|=", line, col);   // entails
    if (tryUtf8("\xE2\x88\x8B", 3)) return make(Tok::LIdent, "contains", line, col);
    if (tryUtf8("\xE2\x8A\x91", 3)) return make(Tok::LIdent, "sub", line, col);  // GCI
    if (tryUtf8("\xE2\x89\xA4", 3)) return make(Tok::Punct, "<=", line, col);
    if (tryUtf8("\xE2\x89\xA5", 3)) return make(Tok::Punct, ">=", line, col);
    if (tryUtf8("\xE2\x89\xA0", 3)) return make(Tok::Punct, "!=", line, col);

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      std::string s;
      if (c == '-') s.push_back(advance());
      while (std::isdigit(static_cast<unsigned char>(peek()))) s.push_back(advance());
      Token t = make(Tok::Int, s, line, col);
      t.num = std::stoll(s);
      return t;
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        s.push_back(advance());
      bool upper = std::isupper(static_cast<unsigned char>(s[0]));
      return make(upper ? Tok::UIdent : Tok::LIdent, s, line, col);
    }

    if (c == '"') {
      advance();
      std::string s;
      while (true) {
        if (pos_ >= src_.size()) fail("unterminated string literal");
        char d = advance();
        if (d == '"') break;
        if (d == '\\') {
          char e = advance();
          if (e == 'n')
            s.push_back('\n');
          else
            s.push_back(e);
        } else {
          s.push_back(d);
        }
      }
      return make(Tok::Str, s, line, col);
    }

    auto two = [&](const char* p) {
      return peek() == p[0] && peek(1) == p[1];
    };
    for (const char* p : {":-", "<=", ">=", "==", "!=", "|=", "++"}) {
      if (two(p)) {
        advance();
        advance();
        return make(Tok::Punct, p, line, col);
      }
    }
    static const std::string singles = ".,(){}<>:@+#";
    if (singles.find(c) != std::string::npos) {
      advance();
      return make(Tok::Punct, std::string(1, c), line, col);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

bool isSpecialForm(const std::string& s) {
  return s == "LET" || s == "CHOOSE" || s == "COLLECT" || s == "MAPROLE" ||
         s == "DLISSAT" || s == "DLISUNSAT" || s == "ABOXAT" || s == "STH";
}

class Parser {
 public:
  Parser(std::string_view text, std::string file) : file_(std::move(file)) {
    toks_ = Lexer(text, file_).run();
  }

  void parseInto(Program& prog) {
    while (!at(Tok::End)) {
      if (atKeyword("tbox")) {
        parseTBoxDecl(prog);
      } else if (atKeyword("abox")) {
        fail("abox blocks are only valid in dl-check knowledge-base files");
      } else if (atPunct("#")) {
        parseDirective(prog);
      } else {
        parseRule(prog);
      }
    }
  }

  KbFile parseKb() {
    KbFile kb;
    bool sawTbox = false, sawAbox = false;
    while (!at(Tok::End)) {
      if (atKeyword("tbox")) {
        if (sawTbox) fail("dl-check file must contain exactly one tbox block");
        sawTbox = true;
        Program scratch;
        parseTBoxDecl(scratch);
        kb.tbox = scratch.tboxes.begin()->second;
      } else if (atKeyword("abox")) {
        if (sawAbox) fail("dl-check file must contain exactly one abox block");
        sawAbox = true;
        parseABoxBlock(kb.abox);
      } else {
        fail("expected a tbox or abox block");
      }
    }
    if (!sawTbox || !sawAbox) fail("dl-check file needs one tbox and one abox block");
    return kb;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t off = 1) const {
    return toks_[std::min(pos_ + off, toks_.size() - 1)];
  }

  bool at(Tok k) const { return cur().kind == k; }
  bool atPunct(const std::string& p) const {
    return cur().kind == Tok::Punct && cur().text == p;
  }
  bool atKeyword(const std::string& k) const {
    return cur().kind == Tok::LIdent && cur().text == k;
  }

  Token eat() { return toks_[pos_++]; }

  Token expectPunct(const std::string& p) {
    if (!atPunct(p)) fail("expected '" + p + "'");
    return eat();
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what);
    return eat();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(Diagnostic{Diagnostic::Severity::Error, file_, cur().line, cur().col,
                                msg});
  }

  [[noreturn]] void failAt(const Token& t, const std::string& msg) const {
    throw ParseError(Diagnostic{Diagnostic::Severity::Error, file_, t.line, t.col, msg});
  }

  // -- terms ----------------------------------------------------------------

  Term freshAnon() { return Term::var("_" + std::to_string(++anonCounter_)); }

  Term parsePrimary() {
    if (at(Tok::Int)) {
      std::int64_t v = eat().num;
      if (atPunct("+")) {
        eat();
        v += expect(Tok::Int, "integer offset after '+'").num;
      }
      return Term::integer(v);
    }
    if (at(Tok::Str)) return Term::str(eat().text);
    if (at(Tok::LIdent)) {
      std::string name = eat().text;
      if (name == "_") return freshAnon();
      if (atPunct("+")) {
        eat();
        Token k = expect(Tok::Int, "integer offset after '+'");
        return Term::timeSum(name, k.num);
      }
      return Term::var(name);
    }
    if (at(Tok::UIdent)) {
      Token f = eat();
      if (!atPunct("(")) {
        if (f.text == "Set" || f.text == "List") fail("set literal needs parentheses");
        return Term::sym(f.text);
      }
      eat();  // (
      std::vector<Term> args;
      if (!atPunct(")")) {
        args.push_back(parseTerm());
        while (atPunct(",")) {
          eat();
          args.push_back(parseTerm());
        }
      }
      expectPunct(")");
      if (f.text == "Set" || f.text == "List") {
        for (const Term& a : args)
          if (!a.isGround())
            failAt(f, "set literals must contain only ground terms");
        return Term::setOf(std::move(args));
      }
      return Term::compound(f.text, std::move(args));
    }
    if (atPunct("(")) {
      // (t1, t2) : role  -- untimed DL role atom in term position.
      Token open = eat();
      Term a = parseTerm();
      expectPunct(",");
      Term b = parseTerm();
      expectPunct(")");
      if (!atPunct(":")) failAt(open, "expected ':' after term pair");
      eat();
      Term role = parsePrimary();
      return makeHasATerm(std::move(a), std::move(role), std::move(b));
    }
    fail("expected a term");
  }

  Term parseTerm() {
    Term t = parsePrimary();
    // `t : C` forms an untimed DL-atom term, unless t is already one.
    if (atPunct(":") && !isHasATerm(t)) {
      eat();
      Term c = parsePrimary();
      return makeIsATerm(std::move(t), std::move(c));
    }
    return t;
  }

  std::optional<Atom> termToAtomAt(const Term& t, const Term& time) {
    if (isIsATerm(t)) return makeIsAAtAtom(t.args()[0], t.args()[1], time);
    if (isHasATerm(t)) return makeHasAAtAtom(t.args()[0], t.args()[1], t.args()[2], time);
    return std::nullopt;
  }

  std::optional<Atom> plainTermToAtom(const Term& t) {
    if (t.kind() == Term::Kind::Sym) {
      if (isConceptConstructor(t.name())) return std::nullopt;
      return Atom(t.name(), {});
    }
    if (t.kind() == Term::Kind::Compound) {
      if (isConceptConstructor(t.name()) || isIsATerm(t) || isHasATerm(t))
        return std::nullopt;
      return Atom(t.name(), t.args());
    }
    return std::nullopt;
  }

  // -- atoms (heads, neg(...), fact positions) -------------------------------

  Atom parseAtomLike() {
    if (atKeyword("neg")) {
      eat();
      expectPunct("(");
      Atom a = parseAtomLike();
      expectPunct(")");
      if (a.neg) fail("neg cannot be nested");
      a.neg = true;
      return a;
    }
    Token start = cur();
    Term t = parseTerm();
    if (atPunct("@")) {
      eat();
      Term time = parseTerm();
      auto a = termToAtomAt(t, time);
      if (!a) failAt(start, "'@' applies only to DL-atoms");
      return *a;
    }
    if (isIsATerm(t) || isHasATerm(t))
      failAt(start, "untimed DL-atom needs '@ <time>' at rule level");
    auto a = plainTermToAtom(t);
    if (!a) failAt(start, "expected an atom");
    return *a;
  }

  // -- DL call pieces ---------------------------------------------------------

  std::vector<Term> parseDlQuery() {
    std::vector<Term> q;
    while (true) {
      Token start = cur();
      Term t = parseTerm();
      if (!isIsATerm(t) && !isHasATerm(t))
        failAt(start, "DL query expects untimed DL-atoms (t : C or (t1,t2) : r)");
      q.push_back(std::move(t));
      if (atKeyword("and")) {
        eat();
        continue;
      }
      break;
    }
    return q;
  }

  AboxExpr parseAboxExpr() {
    AboxExpr e;
    if (cur().kind == Tok::UIdent && cur().text == "ABOXAT") {
      eat();
      expectPunct("(");
      e.atTime = parseTerm();
      expectPunct(")");
    } else {
      e.assertions = parseTerm();
      return maybeUnion(std::move(e));
    }
    return maybeUnion(std::move(e));
  }

  AboxExpr maybeUnion(AboxExpr e) {
    if (atPunct("++")) {
      eat();
      if (e.assertions) fail("at most one assertion set in an ABox union");
      e.assertions = parseTerm();
    }
    return e;
  }

  std::string parseTBoxName() {
    if (!at(Tok::LIdent)) fail("expected a TBox name (lowercase identifier)");
    return eat().text;
  }

  // -- body literals ----------------------------------------------------------

  BodyLiteral parseSpecialForm() {
    Token f = eat();  // the special-form keyword
    expectPunct("(");
    if (f.text == "LET") {
      LetLit l;
      l.var = expect(Tok::LIdent, "variable").text;
      expectPunct(",");
      l.value = parseTerm();
      expectPunct(")");
      return BodyLiteral{l};
    }
    if (f.text == "CHOOSE") {
      ChooseLit c;
      c.var = expect(Tok::LIdent, "variable").text;
      expectPunct(",");
      c.choices = parseTerm();
      expectPunct(")");
      return BodyLiteral{c};
    }
    if (f.text == "COLLECT") {
      CollectLit c;
      c.var = expect(Tok::LIdent, "variable").text;
      expectPunct(",");
      c.tmpl = parseTerm();
      if (!(cur().kind == Tok::UIdent && cur().text == "STH"))
        fail("expected STH in COLLECT");
      eat();
      c.guard = parseGuard();
      expectPunct(")");
      return BodyLiteral{c};
    }
    if (f.text == "MAPROLE") {
      MapRoleLit m;
      m.var = expect(Tok::LIdent, "variable").text;
      expectPunct(",");
      m.set = parseTerm();
      expectPunct(",");
      m.role = parseTerm();
      expectPunct(",");
      m.filler = parseTerm();
      expectPunct(")");
      return BodyLiteral{m};
    }
    if (f.text == "DLISSAT" || f.text == "DLISUNSAT") {
      DlCallLit d;
      d.kind = f.text == "DLISSAT" ? DlCallKind::IsSat : DlCallKind::IsUnsat;
      // Single argument: tbox name (implicit ABox). Two: abox expr, tbox.
      std::size_t save = pos_;
      if (at(Tok::LIdent) && peek().kind == Tok::Punct && peek().text == ")") {
        d.tboxName = eat().text;
      } else {
        pos_ = save;
        d.abox = parseAboxExpr();
        expectPunct(",");
        d.tboxName = parseTBoxName();
      }
      expectPunct(")");
      return BodyLiteral{d};
    }
    failAt(f, "'" + f.text + "' is not a body special form");
  }

  Body parseGuard() {
    Body b;
    if (atPunct("(")) {
      eat();
      b.push_back(parseBodyLiteral());
      while (atPunct(",")) {
        eat();
        b.push_back(parseBodyLiteral());
      }
      expectPunct(")");
    } else {
      b.push_back(parseBodyLiteral());
    }
    return b;
  }

  BodyLiteral parseNot() {
    eat();  // not
    NotLit n;
    if (atPunct("(")) {
      // Could be a parenthesized body or a single literal that itself starts
      // with '(' (a role atom / explicit DL call). Try the body reading first.
      std::size_t save = pos_;
      try {
        eat();  // (
        n.body.push_back(parseBodyLiteral());
        while (atPunct(",")) {
          eat();
          n.body.push_back(parseBodyLiteral());
        }
        expectPunct(")");
        return BodyLiteral{n};
      } catch (const ParseError&) {
        pos_ = save;
        n.body.clear();
      }
    }
    n.body.push_back(parseBodyLiteral());
    return BodyLiteral{n};
  }

  BodyLiteral finishComparison(Term lhs, CmpOp op) {
    Term rhs = parseTerm();
    if (lhs.isTimeTerm() && rhs.isTimeTerm()) return BodyLiteral{TimeCmpLit{lhs, op, rhs}};
    return BodyLiteral{BuiltinLit{cmpOpText(op), {lhs, rhs}}};
  }

  std::optional<CmpOp> atCmpOp() const {
    if (cur().kind != Tok::Punct) return std::nullopt;
    if (cur().text == "<") return CmpOp::Lt;
    if (cur().text == "<=") return CmpOp::Le;
    if (cur().text == ">") return CmpOp::Gt;
    if (cur().text == ">=") return CmpOp::Ge;
    return std::nullopt;
  }

  // Postfix dispatch shared by every literal that starts with a term.
  BodyLiteral literalFromTerm(const Token& start, Term t) {
    if (atPunct("@")) {
      eat();
      Term time = parseTerm();
      auto a = termToAtomAt(t, time);
      if (!a) failAt(start, "'@' applies only to DL-atoms");
      return BodyLiteral{OrdinaryLit{*a}};
    }
    if (auto op = atCmpOp()) {
      eat();
      return finishComparison(t, *op);
    }
    if (atPunct("!=") || atPunct("==")) {
      std::string op = eat().text;
      Term rhs = parseTerm();
      return BodyLiteral{BuiltinLit{op, {t, rhs}}};
    }
    if (atKeyword("contains")) {
      eat();
      Term rhs = parseTerm();
      return BodyLiteral{BuiltinLit{"contains", {t, rhs}}};
    }
    if (atPunct("|=")) {
      eat();
      if (t.kind() != Term::Kind::Var)
        failAt(start, "left of '|=' must be a TBox name (lowercase identifier)");
      DlCallLit d;
      d.kind = DlCallKind::Entails;
      d.tboxName = t.name();
      d.query = parseDlQuery();
      return BodyLiteral{d};
    }
    if (isIsATerm(t) || isHasATerm(t))
      failAt(start, "untimed DL-atom needs '@ <time>' in a rule body");
    auto a = plainTermToAtom(t);
    if (!a) failAt(start, "expected a body literal");
    return BodyLiteral{OrdinaryLit{*a}};
  }

  BodyLiteral parseBodyLiteral() {
    if (atKeyword("not")) return parseNot();
    if (atKeyword("neg")) return BodyLiteral{OrdinaryLit{parseAtomLike()}};
    if (at(Tok::UIdent) && isSpecialForm(cur().text) && peek().kind == Tok::Punct &&
        peek().text == "(")
      return parseSpecialForm();

    Token start = cur();

    if (atPunct("(")) {
      // Explicit-ABox entailment call or a role atom.
      std::size_t save = pos_;
      try {
        eat();  // (
        AboxExpr abox = parseAboxExpr();
        expectPunct(",");
        std::string tname = parseTBoxName();
        expectPunct(")");
        expectPunct("|=");
        DlCallLit d;
        d.kind = DlCallKind::Entails;
        d.abox = abox;
        d.tboxName = tname;
        d.query = parseDlQuery();
        return BodyLiteral{d};
      } catch (const ParseError&) {
        pos_ = save;
      }
      Term t = parseTerm();  // the '(' pair-role path
      return literalFromTerm(start, t);
    }

    if (at(Tok::UIdent) && peek().kind == Tok::Punct && peek().text == "(") {
      // Ordinary atom, compound term, or comprehension.
      Token f = eat();
      eat();  // (
      Term first = parseTerm();
      if (auto op = atCmpOp()) {
        // Comprehension: P(x op tt, args) [STH guard]
        eat();
        if (first.kind() != Term::Kind::Var)
          failAt(f, "comprehension time position must be a fresh variable");
        ComprehensionLit c;
        c.var = first.name();
        c.op = *op;
        c.bound = parseTerm();
        c.pred = f.text;
        while (atPunct(",")) {
          eat();
          c.restArgs.push_back(parseTerm());
        }
        expectPunct(")");
        if (cur().kind == Tok::UIdent && cur().text == "STH") {
          eat();
          c.guard = parseGuard();
        }
        return BodyLiteral{c};
      }
      std::vector<Term> args{first};
      while (atPunct(",")) {
        eat();
        args.push_back(parseTerm());
      }
      expectPunct(")");
      Term t = Term::compound(f.text, std::move(args));
      if (f.text == "Set" || f.text == "List") {
        for (const Term& a : t.args())
          if (!a.isGround()) failAt(f, "set literals must contain only ground terms");
        t = Term::setOf(t.args());
      }
      if (atPunct(":") && !isHasATerm(t)) {
        eat();
        Term c = parsePrimary();
        t = makeIsATerm(t, c);
      }
      return literalFromTerm(start, t);
    }

    Term t = parseTerm();
    return literalFromTerm(start, t);
  }

  // -- rules ------------------------------------------------------------------

  void parseRule(Program& prog) {
    Token start = cur();
    anonCounter_ = 0;

    bool isFail = false;
    std::vector<Atom> heads;
    bool conjunctive = false;

    if (atKeyword("fail")) {
      eat();
      isFail = true;
    } else {
      // Optional parenthesized head group: "(A and B) :- ...".
      bool grouped = false;
      if (atPunct("(")) {
        std::size_t save = pos_;
        try {
          eat();
          heads.push_back(parseAtomLike());
          if (!atKeyword("and") && !atKeyword("or")) fail("not a head group");
          grouped = true;
        } catch (const ParseError&) {
          pos_ = save;
          heads.clear();
        }
      }
      if (!grouped) heads.push_back(parseAtomLike());
      if (atKeyword("and") || atKeyword("or")) {
        std::string conn = cur().text;
        conjunctive = conn == "and";
        while (atKeyword(conn)) {
          eat();
          heads.push_back(parseAtomLike());
        }
        if (atKeyword(conjunctive ? "or" : "and"))
          fail("cannot mix 'and' and 'or' in one head");
      }
      if (grouped) expectPunct(")");
    }

    Body body;
    if (atPunct(":-")) {
      eat();
      if (!atPunct(".")) {
        body.push_back(parseBodyLiteral());
        while (atPunct(",")) {
          eat();
          body.push_back(parseBodyLiteral());
        }
      }
    }
    expectPunct(".");

    auto push = [&](std::vector<Atom> hs) {
      Rule r;
      r.isFail = isFail;
      r.heads = std::move(hs);
      r.body = body;
      r.file = file_;
      r.line = start.line;
      prog.rules.push_back(std::move(r));
    };

    if (isFail) {
      push({});
    } else if (conjunctive) {
      // Conjunctive heads are sugar for one rule per conjunct.
      for (const Atom& h : heads) push({h});
    } else {
      push(heads);
    }
  }

  // -- tbox / abox blocks -------------------------------------------------------

  dl::Concept termToConceptOrFail(const Token& at, const Term& t) {
    if (!t.isGround()) failAt(at, "TBox concepts must be ground");
    auto c = termToConcept(t);
    if (!c) failAt(at, "malformed concept expression");
    return *c;
  }

  void parseTBoxDecl(Program& prog) {
    eat();  // tbox
    if (!at(Tok::LIdent)) fail("expected a TBox name (lowercase identifier)");
    std::string name = eat().text;
    if (prog.tboxes.count(name)) fail("duplicate TBox '" + name + "'");
    dl::TBox tbox;
    expectPunct("{");
    while (!atPunct("}")) {
      if (atKeyword("functional")) {
        eat();
        Token r = expect(Tok::UIdent, "role name");
        tbox.functionalRoles.insert(r.text);
        expectPunct(".");
        continue;
      }
      Token start = cur();
      Term lhs = parsePrimary();
      if (!atKeyword("sub")) fail("expected 'sub' in GCI");
      eat();
      Term rhs = parsePrimary();
      expectPunct(".");
      tbox.gcis.push_back(
          dl::Gci{termToConceptOrFail(start, lhs), termToConceptOrFail(start, rhs)});
    }
    eat();  // }
    prog.tboxes.emplace(std::move(name), std::move(tbox));
  }

  void parseABoxBlock(dl::ABox& abox) {
    eat();  // abox
    if (!at(Tok::LIdent)) fail("expected an ABox name (lowercase identifier)");
    eat();
    expectPunct("{");
    while (!atPunct("}")) {
      Token start = cur();
      Term t = parseTerm();
      expectPunct(".");
      if (isIsATerm(t)) {
        if (!t.isGround()) failAt(start, "ABox assertions must be ground");
        auto c = termToConcept(t.args()[1]);
        if (!c) failAt(start, "malformed concept expression");
        abox.addConcept(t.args()[0], *c);
      } else if (isHasATerm(t)) {
        if (!t.isGround()) failAt(start, "ABox assertions must be ground");
        auto r = termToRole(t.args()[1]);
        if (!r) failAt(start, "malformed role expression");
        abox.addRole(t.args()[0], t.args()[2], *r);
      } else {
        failAt(start, "expected a DL assertion (t : C or (t1,t2) : r)");
      }
    }
    eat();  // }
  }

  void parseDirective(Program& prog) {
    eat();  // #
    if (!atKeyword("times")) fail("unknown directive (supported: #times)");
    eat();
    prog.declaredTimes.push_back(expect(Tok::Int, "time point").num);
    while (atPunct(",")) {
      eat();
      prog.declaredTimes.push_back(expect(Tok::Int, "time point").num);
    }
    expectPunct(".");
  }

  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int anonCounter_ = 0;
};

// ---------------------------------------------------------------------------
// Static validation
// ---------------------------------------------------------------------------

class Validator {
 public:
  explicit Validator(Program& prog) : prog_(prog) {}

  void run() {
    for (Rule& r : prog_.rules) validateRule(r);
  }

 private:
  [[noreturn]] void fail(const Rule& r, const std::string& msg) {
    throw ParseError(
        Diagnostic{Diagnostic::Severity::Error, r.file, r.line, 0, "rule " + r.label() + ": " + msg});
  }

  void checkArity(const Rule& r, const Atom& a) {
    if (a.pred == names::kIsAAt || a.pred == names::kHasAAt) {
      std::size_t want = a.pred == names::kIsAAt ? 3 : 4;
      if (a.args.size() != want) fail(r, a.pred + " needs " + std::to_string(want) + " arguments");
      return;
    }
    auto [it, inserted] = prog_.predArity.emplace(a.pred, a.args.size());
    if (!inserted && it->second != a.args.size())
      fail(r, "predicate '" + a.pred + "' used with arities " + std::to_string(it->second) +
                  " and " + std::to_string(a.args.size()));
  }

  void checkAtomSorts(const Rule& r, const Atom& a) {
    checkArity(r, a);
    if (a.args.empty()) return;
    Term t = a.timeTerm();
    if (!t.isTimeTerm())
      fail(r, "time position of '" + a.pred + "' holds a non-time term");
  }

  void walkBody(const Rule& r, const Body& b, bool insideNot,
                std::vector<const Body*>& ancestors) {
    ancestors.push_back(&b);
    for (const BodyLiteral& lit : b) {
      if (const auto* o = lit.as<OrdinaryLit>()) {
        checkAtomSorts(r, o->atom);
      } else if (const auto* c = lit.as<ComprehensionLit>()) {
        Atom probe(c->pred, {});
        probe.args.push_back(Term::var(c->var));
        for (const Term& t : c->restArgs) probe.args.push_back(t);
        checkAtomSorts(r, probe);
        walkBody(r, c->guard, true, ancestors);
      } else if (const auto* bi = lit.as<BuiltinLit>()) {
        if (!isBuiltin(bi->pred)) fail(r, "unknown built-in predicate '" + bi->pred + "'");
      } else if (const auto* co = lit.as<CollectLit>()) {
        std::set<std::string> tmplVars;
        std::vector<std::string> vs;
        co->tmpl.collectVars(vs);
        tmplVars.insert(vs.begin(), vs.end());
        for (const Body* anc : ancestors) {
          for (const std::string& v : tmplVars)
            if (fvar(*anc).count(v))
              fail(r, "COLLECT template variable '" + v +
                          "' clashes with an enclosing free variable");
        }
        walkBody(r, co->guard, true, ancestors);
      } else if (const auto* d = lit.as<DlCallLit>()) {
        if (!prog_.tboxes.count(d->tboxName))
          fail(r, "unknown TBox '" + d->tboxName + "'");
      } else if (const auto* n = lit.as<NotLit>()) {
        if (insideNot) fail(r, "nested negation is not allowed");
        if (n->body.empty()) fail(r, "empty negated body");
        for (const BodyLiteral& inner : n->body)
          if (inner.is<NotLit>()) fail(r, "nested negation is not allowed");
        walkBody(r, n->body, true, ancestors);
      }
    }
    ancestors.pop_back();
  }

  void validateRule(Rule& r) {
    for (const Atom& h : r.heads) checkAtomSorts(r, h);
    std::vector<const Body*> ancestors;
    walkBody(r, r.body, false, ancestors);

    // Range restriction: var(H) subset of fvar(B).
    std::set<std::string> bodyVars = fvar(r.body);
    for (const Atom& h : r.heads) {
      std::vector<std::string> hv;
      h.collectVars(hv);
      for (const std::string& v : hv)
        if (!bodyVars.count(v))
          fail(r, "not range-restricted: head variable '" + v + "' unbound in body");
    }
  }

  Program& prog_;
};

}  // namespace

Program parseProgram(std::string_view text, const std::string& filename) {
  Program prog;
  Parser(text, filename).parseInto(prog);
  int id = 0;
  for (Rule& r : prog.rules) r.id = id++;
  Validator(prog).run();
  return prog;
}

Program parseProgramFiles(const std::vector<std::pair<std::string, std::string>>& files) {
  Program prog;
  for (const auto& [name, text] : files) Parser(text, name).parseInto(prog);
  int id = 0;
  for (Rule& r : prog.rules) r.id = id++;
  Validator(prog).run();
  return prog;
}

KbFile parseKbFile(std::string_view text, const std::string& filename) {
  return Parser(text, filename).parseKb();
}

}  // namespace fusecalc
