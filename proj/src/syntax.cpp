#include "truthlab/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

namespace truthlab {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t str_hash(const std::string& s) { return std::hash<std::string>{}(s); }

}  // namespace

// ---------------------------------------------------------------------------
// Term and formula construction
// ---------------------------------------------------------------------------

static Term make_term(TermKind k, std::string id, FormulaPtr payload) {
  Term t;
  t.kind = k;
  t.id = std::move(id);
  t.payload = std::move(payload);
  std::size_t h = mix(0xABCD, static_cast<std::size_t>(k));
  h = mix(h, str_hash(t.id));
  if (t.payload) h = mix(h, t.payload->h);
  t.h = h;
  return t;
}

Term t_base(std::string id) { return make_term(TermKind::BaseConst, std::move(id), nullptr); }
Term t_name(std::string id) { return make_term(TermKind::NameRef, std::move(id), nullptr); }
Term t_alias(std::string id) { return make_term(TermKind::Alias, std::move(id), nullptr); }
Term t_var(std::string id) { return make_term(TermKind::Var, std::move(id), nullptr); }

Term t_quote(FormulaPtr sentence) {
  if (!sentence) throw Error("t_quote: null payload");
  return make_term(TermKind::Quote, "", std::move(sentence));
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.h != b.h || a.id != b.id) return false;
  if (a.kind == TermKind::Quote) return equal(a.payload, b.payload);
  return true;
}

static FormulaPtr make_formula(Conn k, Term t1, Term t2, FormulaPtr a, FormulaPtr b,
                               std::string var) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->t1 = std::move(t1);
  f->t2 = std::move(t2);
  f->a = std::move(a);
  f->b = std::move(b);
  f->var = std::move(var);
  std::size_t h = mix(0x1234, static_cast<std::size_t>(k));
  h = mix(h, f->t1.h);
  h = mix(h, f->t2.h);
  if (f->a) h = mix(h, f->a->h);
  if (f->b) h = mix(h, f->b->h);
  h = mix(h, str_hash(f->var));
  f->h = h;
  return f;
}

FormulaPtr f_eq(Term lhs, Term rhs) {
  return make_formula(Conn::Eq, std::move(lhs), std::move(rhs), nullptr, nullptr, "");
}
FormulaPtr f_truth(Term arg) {
  return make_formula(Conn::TruthAtom, std::move(arg), Term{}, nullptr, nullptr, "");
}
FormulaPtr f_det(Term arg) {
  return make_formula(Conn::DetAtom, std::move(arg), Term{}, nullptr, nullptr, "");
}
FormulaPtr f_ttruth(Term arg) {
  return make_formula(Conn::TypedTruthAtom, std::move(arg), Term{}, nullptr, nullptr, "");
}
FormulaPtr f_not(FormulaPtr f) {
  return make_formula(Conn::Not, Term{}, Term{}, std::move(f), nullptr, "");
}
FormulaPtr f_and(FormulaPtr f, FormulaPtr g) {
  return make_formula(Conn::And, Term{}, Term{}, std::move(f), std::move(g), "");
}
FormulaPtr f_or(FormulaPtr f, FormulaPtr g) {
  return make_formula(Conn::Or, Term{}, Term{}, std::move(f), std::move(g), "");
}
FormulaPtr f_imp(FormulaPtr f, FormulaPtr g) {
  return make_formula(Conn::Imp, Term{}, Term{}, std::move(f), std::move(g), "");
}
FormulaPtr f_forall(std::string var, FormulaPtr body) {
  return make_formula(Conn::ForAll, Term{}, Term{}, std::move(body), nullptr, std::move(var));
}
FormulaPtr f_exists(std::string var, FormulaPtr body) {
  return make_formula(Conn::Exists, Term{}, Term{}, std::move(body), nullptr, std::move(var));
}
FormulaPtr f_iff(FormulaPtr f, FormulaPtr g) { return f_and(f_imp(f, g), f_imp(g, f)); }

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->h != b->h || a->kind != b->kind || a->var != b->var) return false;
  switch (a->kind) {
    case Conn::Eq:
      return a->t1 == b->t1 && a->t2 == b->t2;
    case Conn::TruthAtom:
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      return a->t1 == b->t1;
    case Conn::Not:
    case Conn::ForAll:
    case Conn::Exists:
      return equal(a->a, b->a);
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      return equal(a->a, b->a) && equal(a->b, b->b);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Language / free variables / substitution
// ---------------------------------------------------------------------------

static void scan_lang(const FormulaPtr& f, bool& has_d, bool& has_tt) {
  switch (f->kind) {
    case Conn::DetAtom: has_d = true; break;
    case Conn::TypedTruthAtom: has_tt = true; break;
    case Conn::Not:
    case Conn::ForAll:
    case Conn::Exists:
      scan_lang(f->a, has_d, has_tt);
      break;
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      scan_lang(f->a, has_d, has_tt);
      scan_lang(f->b, has_d, has_tt);
      break;
    default: break;
  }
}

Lang language(const FormulaPtr& f) {
  bool has_d = false, has_tt = false;
  scan_lang(f, has_d, has_tt);
  if (has_d && has_tt) return Lang::Mixed;
  if (has_d) return Lang::LD;
  if (has_tt) return Lang::LCT;
  return Lang::LT;
}

bool lang_within(Lang lang, Lang bound) {
  if (lang == Lang::LT) return true;
  if (lang == Lang::Mixed) return false;
  return lang == bound;
}

bool in_language(const FormulaPtr& f, Lang lang) { return lang_within(language(f), lang); }

static void free_vars_term(const Term& t, const std::set<std::string>& bound,
                           std::set<std::string>& out) {
  if (t.kind == TermKind::Var && bound.count(t.id) == 0) out.insert(t.id);
}

static void free_vars_rec(const FormulaPtr& f, std::set<std::string>& bound,
                          std::set<std::string>& out) {
  switch (f->kind) {
    case Conn::Eq:
      free_vars_term(f->t1, bound, out);
      free_vars_term(f->t2, bound, out);
      break;
    case Conn::TruthAtom:
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      free_vars_term(f->t1, bound, out);
      break;
    case Conn::Not:
      free_vars_rec(f->a, bound, out);
      break;
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      free_vars_rec(f->a, bound, out);
      free_vars_rec(f->b, bound, out);
      break;
    case Conn::ForAll:
    case Conn::Exists: {
      bool fresh = bound.insert(f->var).second;
      free_vars_rec(f->a, bound, out);
      if (fresh) bound.erase(f->var);
      break;
    }
  }
}

void collect_free_vars(const FormulaPtr& f, std::set<std::string>& out) {
  std::set<std::string> bound;
  free_vars_rec(f, bound, out);
}

bool is_sentence(const FormulaPtr& f) {
  std::set<std::string> fv;
  collect_free_vars(f, fv);
  return fv.empty();
}

Term substitute_term(const Term& t, const std::string& var, const Term& repl) {
  if (t.kind == TermKind::Var && t.id == var) return repl;
  return t;  // quote payloads are opaque
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Term& t) {
  switch (f->kind) {
    case Conn::Eq: {
      Term l = substitute_term(f->t1, var, t);
      Term r = substitute_term(f->t2, var, t);
      if (l == f->t1 && r == f->t2) return f;
      return f_eq(l, r);
    }
    case Conn::TruthAtom:
    case Conn::DetAtom:
    case Conn::TypedTruthAtom: {
      Term arg = substitute_term(f->t1, var, t);
      if (arg == f->t1) return f;
      if (f->kind == Conn::TruthAtom) return f_truth(arg);
      if (f->kind == Conn::DetAtom) return f_det(arg);
      return f_ttruth(arg);
    }
    case Conn::Not: {
      auto a = substitute(f->a, var, t);
      return a == f->a ? f : f_not(a);
    }
    case Conn::And:
    case Conn::Or:
    case Conn::Imp: {
      auto a = substitute(f->a, var, t);
      auto b = substitute(f->b, var, t);
      if (a == f->a && b == f->b) return f;
      if (f->kind == Conn::And) return f_and(a, b);
      if (f->kind == Conn::Or) return f_or(a, b);
      return f_imp(a, b);
    }
    case Conn::ForAll:
    case Conn::Exists: {
      if (f->var == var) return f;  // bound occurrence untouched
      auto a = substitute(f->a, var, t);
      if (a == f->a) return f;
      return f->kind == Conn::ForAll ? f_forall(f->var, a) : f_exists(f->var, a);
    }
  }
  return f;
}

FormulaPtr normalize(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::Eq:
    case Conn::TruthAtom:
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      return f;
    case Conn::Not: {
      auto a = normalize(f->a);
      return a == f->a ? f : f_not(a);
    }
    case Conn::And: {
      auto a = normalize(f->a), b = normalize(f->b);
      if (a == f->a && b == f->b) return f;
      return f_and(a, b);
    }
    case Conn::Or:
      return f_not(f_and(f_not(normalize(f->a)), f_not(normalize(f->b))));
    case Conn::Imp:
      return f_not(f_and(normalize(f->a), f_not(normalize(f->b))));
    case Conn::ForAll: {
      auto a = normalize(f->a);
      return a == f->a ? f : f_forall(f->var, a);
    }
    case Conn::Exists:
      return f_not(f_forall(f->var, f_not(normalize(f->a))));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Printing (concrete DSL syntax; binary connectives fully parenthesized)
// ---------------------------------------------------------------------------

static void print_formula(const FormulaPtr& f, std::ostream& os);

static void print_term(const Term& t, std::ostream& os) {
  switch (t.kind) {
    case TermKind::BaseConst: os << "base " << t.id; break;
    case TermKind::NameRef: os << "name " << t.id; break;
    case TermKind::Alias: os << "alias " << t.id; break;
    case TermKind::Var: os << t.id; break;
    case TermKind::Quote:
      os << "quote(";
      print_formula(t.payload, os);
      os << ")";
      break;
  }
}

static void print_formula(const FormulaPtr& f, std::ostream& os) {
  switch (f->kind) {
    case Conn::Eq:
      print_term(f->t1, os);
      os << " = ";
      print_term(f->t2, os);
      break;
    case Conn::TruthAtom:
      os << "T(";
      print_term(f->t1, os);
      os << ")";
      break;
    case Conn::DetAtom:
      os << "D(";
      print_term(f->t1, os);
      os << ")";
      break;
    case Conn::TypedTruthAtom:
      os << "TT(";
      print_term(f->t1, os);
      os << ")";
      break;
    case Conn::Not:
      os << "not ";
      if (f->a->kind == Conn::Eq) {
        os << "(";
        print_formula(f->a, os);
        os << ")";
      } else {
        print_formula(f->a, os);
      }
      break;
    case Conn::And:
    case Conn::Or:
    case Conn::Imp: {
      const char* op = f->kind == Conn::And ? " and " : (f->kind == Conn::Or ? " or " : " -> ");
      os << "(";
      print_formula(f->a, os);
      os << op;
      print_formula(f->b, os);
      os << ")";
      break;
    }
    case Conn::ForAll:
    case Conn::Exists:
      os << (f->kind == Conn::ForAll ? "forall " : "exists ") << f->var << " . ";
      if (f->a->kind == Conn::Eq) {
        os << "(";
        print_formula(f->a, os);
        os << ")";
      } else {
        print_formula(f->a, os);
      }
      break;
  }
}

std::string to_text(const FormulaPtr& f) {
  std::ostringstream os;
  print_formula(f, os);
  return os.str();
}

std::string to_text(const Term& t) {
  std::ostringstream os;
  print_term(t, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// SentenceSystem basics
// ---------------------------------------------------------------------------

const FormulaPtr& SentenceSystem::name_body(const std::string& id) const {
  auto it = names.find(id);
  if (it == names.end()) throw UnresolvedReference("unresolved name " + id);
  return it->second;
}

int SentenceSystem::name_index(const std::string& id) const {
  for (std::size_t i = 0; i < name_order.size(); ++i)
    if (name_order[i] == id) return static_cast<int>(i);
  return -1;
}

bool SentenceSystem::in_sentence_pool(const FormulaPtr& f) const {
  for (const auto& s : sentence_pool)
    if (equal(s, f)) return true;
  return false;
}

bool SentenceSystem::in_term_pool(const Term& t) const {
  for (const auto& u : term_pool)
    if (u == t) return true;
  return false;
}

bool operator==(const SentenceSystem& a, const SentenceSystem& b) {
  if (a.base != b.base || a.name_order != b.name_order || a.alias_order != b.alias_order)
    return false;
  for (const auto& n : a.name_order)
    if (!equal(a.names.at(n), b.names.at(n))) return false;
  for (const auto& al : a.alias_order)
    if (!(a.aliases.at(al) == b.aliases.at(al))) return false;
  if (a.term_pool.size() != b.term_pool.size()) return false;
  for (std::size_t i = 0; i < a.term_pool.size(); ++i)
    if (!(a.term_pool[i] == b.term_pool[i])) return false;
  if (a.sentence_pool.size() != b.sentence_pool.size()) return false;
  for (std::size_t i = 0; i < a.sentence_pool.size(); ++i)
    if (!equal(a.sentence_pool[i], b.sentence_pool[i])) return false;
  if (a.formula_pool.size() != b.formula_pool.size()) return false;
  for (std::size_t i = 0; i < a.formula_pool.size(); ++i) {
    if (a.formula_pool[i].first != b.formula_pool[i].first) return false;
    if (!equal(a.formula_pool[i].second, b.formula_pool[i].second)) return false;
  }
  return true;
}

bool operator==(const Denotation& a, const Denotation& b) {
  if (a.is_sentence != b.is_sentence) return false;
  if (a.is_sentence) return equal(a.sentence, b.sentence);
  return a.base_id == b.base_id;
}

Term resolve_alias(const Term& t, const SentenceSystem& sys) {
  Term cur = t;
  int guard = 0;
  while (cur.kind == TermKind::Alias) {
    auto it = sys.aliases.find(cur.id);
    if (it == sys.aliases.end()) throw UnresolvedReference("unresolved alias " + cur.id);
    cur = it->second;
    if (++guard > 1000) throw ValidationError("alias cycle at " + t.id);
  }
  return cur;
}

Denotation denote(const Term& t, const SentenceSystem& sys) {
  Term r = resolve_alias(t, sys);
  Denotation d;
  switch (r.kind) {
    case TermKind::BaseConst: {
      bool known = std::find(sys.base.begin(), sys.base.end(), r.id) != sys.base.end();
      if (!known) throw UnresolvedReference("unknown base element " + r.id);
      d.is_sentence = false;
      d.base_id = r.id;
      return d;
    }
    case TermKind::NameRef:
      d.is_sentence = true;
      d.sentence = sys.name_body(r.id);
      return d;
    case TermKind::Quote:
      d.is_sentence = true;
      d.sentence = r.payload;
      return d;
    case TermKind::Var:
      throw UnresolvedReference("denote: open term");
    case TermKind::Alias:
      break;  // unreachable
  }
  throw UnresolvedReference("denote: bad term");
}

FormulaPtr truthy_equation(const SentenceSystem& sys) {
  if (sys.base.empty()) throw PreconditionViolated("system has no base elements");
  return f_eq(t_base(sys.base[0]), t_base(sys.base[0]));
}

void StableNodeSet::add_term(const Term& t) {
  if (t.kind == TermKind::Quote) add_formula(t.payload);
}

void StableNodeSet::add_formula(const FormulaPtr& f) {
  if (!f || set_.count(f.get())) return;
  set_.insert(f.get());
  keep_alive_.push_back(f);
  switch (f->kind) {
    case Conn::Eq:
      add_term(f->t1);
      add_term(f->t2);
      break;
    case Conn::TruthAtom:
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      add_term(f->t1);
      break;
    case Conn::Not:
    case Conn::ForAll:
    case Conn::Exists:
      add_formula(f->a);
      break;
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      add_formula(f->a);
      add_formula(f->b);
      break;
  }
}

std::shared_ptr<const StableNodeSet> StableNodeSet::for_system(const SentenceSystem& sys) {
  auto out = std::make_shared<StableNodeSet>();
  for (const auto& n : sys.name_order) out->add_formula(sys.names.at(n));
  for (const auto& s : sys.sentence_pool) out->add_formula(s);
  for (const auto& t : sys.term_pool) out->add_term(t);
  for (const auto& a : sys.alias_order) out->add_term(sys.aliases.at(a));
  for (const auto& [v, f] : sys.formula_pool) out->add_formula(f);
  return out;
}

FormulaPtr falsy_equation(const SentenceSystem& sys) {
  return f_not(truthy_equation(sys));
}

// ---------------------------------------------------------------------------
// ng companions and the negation toggle
// ---------------------------------------------------------------------------

FormulaPtr toggle_not(const FormulaPtr& f) {
  if (f->kind == Conn::Not) return f->a;
  return f_not(f);
}

static const char* kNegSuffix = "__neg";

SentenceSystem with_neg_companions(const SentenceSystem& sys) {
  SentenceSystem out = sys;
  std::vector<std::string> originals = out.name_order;
  for (const auto& n : originals) {
    if (n.size() > 5 && n.rfind(kNegSuffix) == n.size() - 5) continue;
    std::string comp = n + kNegSuffix;
    if (out.names.count(comp)) continue;
    out.name_order.push_back(comp);
    out.names[comp] = f_not(out.names.at(n));
  }
  return out;
}

Term neg_quote(const Term& t, const SentenceSystem& sys) {
  Term r = resolve_alias(t, sys);
  switch (r.kind) {
    case TermKind::Quote:
      return t_quote(toggle_not(r.payload));
    case TermKind::NameRef: {
      std::string id = r.id;
      std::string comp;
      if (id.size() > 5 && id.rfind(kNegSuffix) == id.size() - 5)
        comp = id.substr(0, id.size() - 5);
      else
        comp = id + kNegSuffix;
      if (!sys.has_name(comp))
        throw UnresolvedReference("missing negation companion for name " + id);
      return t_name(comp);
    }
    case TermKind::BaseConst:
      return r;  // ng of a non-sentence stays a non-sentence
    default:
      throw UnresolvedReference("neg_quote: open term");
  }
}

// ---------------------------------------------------------------------------
// Tokenizer / parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Ident, Symbol, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        id.push_back(src_[pos_]);
        bump();
      }
      tok_.kind = Token::Ident;
      tok_.text = id;
      return;
    }
    if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
      tok_.kind = Token::Symbol;
      tok_.text = ":=";
      bump();
      bump();
      return;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      tok_.kind = Token::Symbol;
      tok_.text = "->";
      bump();
      bump();
      return;
    }
    if (std::string("();=.").find(c) != std::string::npos) {
      tok_.kind = Token::Symbol;
      tok_.text = std::string(1, c);
      bump();
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"base", "name",  "alias",  "term",   "pool",
                                           "sentence", "formula", "not", "and", "or",
                                           "forall", "exists", "quote", "T", "D", "TT"};
  return kw.count(s) != 0;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  FormulaPtr parse_formula() {
    auto f = parse_imp();
    return f;
  }

  Term parse_term() { return parse_term_inner(); }

  bool at_end() { return lex_.peek().kind == Token::End; }

  Token expect_ident() {
    Token t = lex_.next();
    if (t.kind != Token::Ident) throw ParseError("expected identifier", t.line, t.col);
    return t;
  }

  void expect_symbol(const std::string& s) {
    Token t = lex_.next();
    if (t.kind != Token::Symbol || t.text != s)
      throw ParseError("expected '" + s + "'", t.line, t.col);
  }

  bool peek_ident(const std::string& s) {
    return lex_.peek().kind == Token::Ident && lex_.peek().text == s;
  }

  bool peek_symbol(const std::string& s) {
    return lex_.peek().kind == Token::Symbol && lex_.peek().text == s;
  }

  Token next() { return lex_.next(); }
  const Token& peek() { return lex_.peek(); }

 private:
  FormulaPtr parse_imp() {
    auto lhs = parse_or();
    if (peek_symbol("->")) {
      next();
      auto rhs = parse_imp();  // right associative
      return f_imp(lhs, rhs);
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    auto lhs = parse_and();
    while (peek_ident("or")) {
      next();
      lhs = f_or(lhs, parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    auto lhs = parse_unary();
    while (peek_ident("and")) {
      next();
      lhs = f_and(lhs, parse_unary());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (peek_ident("not")) {
      next();
      return f_not(parse_unary());
    }
    if (peek_ident("forall") || peek_ident("exists")) {
      bool universal = peek_ident("forall");
      next();
      Token v = expect_ident();
      if (is_keyword(v.text)) throw ParseError("reserved word used as variable", v.line, v.col);
      expect_symbol(".");
      auto body = parse_unary();
      return universal ? f_forall(v.text, body) : f_exists(v.text, body);
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Token::Ident && (t.text == "T" || t.text == "D" || t.text == "TT")) {
      Token atom = next();
      expect_symbol("(");
      Term arg = parse_term_inner();
      expect_symbol(")");
      if (atom.text == "T") return f_truth(arg);
      if (atom.text == "D") return f_det(arg);
      return f_ttruth(arg);
    }
    if (t.kind == Token::Symbol && t.text == "(") {
      next();
      auto f = parse_imp();
      expect_symbol(")");
      return f;
    }
    Term lhs = parse_term_inner();
    expect_symbol("=");
    Term rhs = parse_term_inner();
    return f_eq(lhs, rhs);
  }

  Term parse_term_inner() {
    const Token& t = peek();
    if (t.kind != Token::Ident) throw ParseError("expected term", t.line, t.col);
    if (t.text == "base") {
      next();
      return t_base(expect_ident().text);
    }
    if (t.text == "name") {
      next();
      return t_name(expect_ident().text);
    }
    if (t.text == "alias") {
      next();
      return t_alias(expect_ident().text);
    }
    if (t.text == "quote") {
      next();
      expect_symbol("(");
      auto f = parse_imp();
      expect_symbol(")");
      return t_quote(f);
    }
    Token v = next();
    if (is_keyword(v.text)) throw ParseError("reserved word used as term", v.line, v.col);
    return t_var(v.text);
  }

  Lexer lex_;
};

void check_user_id(const std::string& id, int line, int col) {
  if (id.find("__") != std::string::npos)
    throw ParseError("identifiers containing '__' are reserved", line, col);
  if (is_keyword(id)) throw ParseError("reserved word '" + id + "'", line, col);
}

// Bare identifiers in term position resolve after the whole file is read:
// quantifier-bound variables stay variables, otherwise declared names, base
// elements and aliases are looked up (forward references allowed).
FormulaPtr resolve_formula(const FormulaPtr& f, std::set<std::string>& bound,
                           const SentenceSystem& sys, bool allow_free);

Term resolve_term(const Term& t, std::set<std::string>& bound, const SentenceSystem& sys,
                  bool allow_free) {
  switch (t.kind) {
    case TermKind::Var: {
      if (bound.count(t.id)) return t;
      if (sys.names.count(t.id)) return t_name(t.id);
      if (std::find(sys.base.begin(), sys.base.end(), t.id) != sys.base.end())
        return t_base(t.id);
      if (sys.aliases.count(t.id)) return t_alias(t.id);
      if (allow_free) return t;
      throw ValidationError("unresolved name " + t.id);
    }
    case TermKind::Quote: {
      std::set<std::string> fresh;
      return t_quote(resolve_formula(t.payload, fresh, sys, false));
    }
    default:
      return t;
  }
}

FormulaPtr resolve_formula(const FormulaPtr& f, std::set<std::string>& bound,
                           const SentenceSystem& sys, bool allow_free) {
  switch (f->kind) {
    case Conn::Eq:
      return f_eq(resolve_term(f->t1, bound, sys, allow_free),
                  resolve_term(f->t2, bound, sys, allow_free));
    case Conn::TruthAtom:
      return f_truth(resolve_term(f->t1, bound, sys, allow_free));
    case Conn::DetAtom:
      return f_det(resolve_term(f->t1, bound, sys, allow_free));
    case Conn::TypedTruthAtom:
      return f_ttruth(resolve_term(f->t1, bound, sys, allow_free));
    case Conn::Not:
      return f_not(resolve_formula(f->a, bound, sys, allow_free));
    case Conn::And:
      return f_and(resolve_formula(f->a, bound, sys, allow_free),
                   resolve_formula(f->b, bound, sys, allow_free));
    case Conn::Or:
      return f_or(resolve_formula(f->a, bound, sys, allow_free),
                  resolve_formula(f->b, bound, sys, allow_free));
    case Conn::Imp:
      return f_imp(resolve_formula(f->a, bound, sys, allow_free),
                   resolve_formula(f->b, bound, sys, allow_free));
    case Conn::ForAll:
    case Conn::Exists: {
      bool fresh = bound.insert(f->var).second;
      auto body = resolve_formula(f->a, bound, sys, allow_free);
      if (fresh) bound.erase(f->var);
      return f->kind == Conn::ForAll ? f_forall(f->var, body) : f_exists(f->var, body);
    }
  }
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation helpers
// ---------------------------------------------------------------------------

static void validate_refs_term(const Term& t, const SentenceSystem& sys, bool allow_vars);

static void validate_refs(const FormulaPtr& f, const SentenceSystem& sys, bool allow_vars) {
  switch (f->kind) {
    case Conn::Eq:
      validate_refs_term(f->t1, sys, allow_vars);
      validate_refs_term(f->t2, sys, allow_vars);
      break;
    case Conn::TruthAtom:
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      validate_refs_term(f->t1, sys, allow_vars);
      break;
    case Conn::Not:
      validate_refs(f->a, sys, allow_vars);
      break;
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      validate_refs(f->a, sys, allow_vars);
      validate_refs(f->b, sys, allow_vars);
      break;
    case Conn::ForAll:
    case Conn::Exists:
      validate_refs(f->a, sys, true);
      break;
  }
}

static void validate_refs_term(const Term& t, const SentenceSystem& sys, bool allow_vars) {
  switch (t.kind) {
    case TermKind::BaseConst:
      if (std::find(sys.base.begin(), sys.base.end(), t.id) == sys.base.end())
        throw ValidationError("unresolved base element " + t.id);
      break;
    case TermKind::NameRef:
      if (!sys.has_name(t.id)) throw ValidationError("unresolved name " + t.id);
      break;
    case TermKind::Alias:
      if (sys.aliases.find(t.id) == sys.aliases.end())
        throw ValidationError("unresolved alias " + t.id);
      break;
    case TermKind::Quote:
      if (!is_sentence(t.payload)) throw ValidationError("quote payload must be a sentence");
      validate_refs(t.payload, sys, false);
      break;
    case TermKind::Var:
      if (!allow_vars) throw ValidationError("unexpected free variable " + t.id);
      break;
  }
}

static void check_alias_acyclic(const SentenceSystem& sys) {
  for (const auto& a : sys.alias_order) {
    std::set<std::string> seen;
    Term cur = sys.aliases.at(a);
    seen.insert(a);
    while (cur.kind == TermKind::Alias) {
      if (!seen.insert(cur.id).second) throw ValidationError("cyclic alias " + a);
      auto it = sys.aliases.find(cur.id);
      if (it == sys.aliases.end()) throw ValidationError("unresolved alias " + cur.id);
      cur = it->second;
    }
  }
}

// ---------------------------------------------------------------------------
// Dependency closure and pool generation
// ---------------------------------------------------------------------------

namespace {

struct PoolBuilder {
  std::vector<FormulaPtr> order;
  FormulaSet seen;
  int cap;

  explicit PoolBuilder(int cap_) : cap(cap_) {}

  bool add(const FormulaPtr& f) {
    if (seen.count(f)) return false;
    if (static_cast<int>(order.size()) >= cap)
      throw PoolBudgetExceeded("sentence pool exceeds cap " + std::to_string(cap));
    seen.insert(f);
    order.push_back(f);
    return true;
  }
};

void scan_terms_of(const FormulaPtr& f, const SentenceSystem& sys,
                   const std::function<void(const Term&)>& visit) {
  switch (f->kind) {
    case Conn::Eq:
      visit(f->t1);
      visit(f->t2);
      break;
    case Conn::TruthAtom:
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      visit(f->t1);
      break;
    case Conn::Not:
    case Conn::ForAll:
    case Conn::Exists:
      scan_terms_of(f->a, sys, visit);
      break;
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      scan_terms_of(f->a, sys, visit);
      scan_terms_of(f->b, sys, visit);
      break;
  }
}

// Closes `pool` under immediate subsentences, quote payloads, name bodies and
// term-pool instances of quantified sentences.
void dependency_close(PoolBuilder& pool, const SentenceSystem& sys) {
  std::size_t next = 0;
  while (next < pool.order.size()) {
    FormulaPtr f = pool.order[next++];
    switch (f->kind) {
      case Conn::Not:
        pool.add(f->a);
        break;
      case Conn::And:
      case Conn::Or:
      case Conn::Imp:
        pool.add(f->a);
        pool.add(f->b);
        break;
      case Conn::ForAll:
      case Conn::Exists:
        for (const auto& t : sys.term_pool) pool.add(substitute(f->a, f->var, t));
        break;
      default:
        break;
    }
    scan_terms_of(f, sys, [&](const Term& t0) {
      Term t = t0;
      if (t.kind == TermKind::Alias) t = resolve_alias(t, sys);
      if (t.kind == TermKind::Quote)
        pool.add(t.payload);
      else if (t.kind == TermKind::NameRef)
        pool.add(sys.name_body(t.id));
    });
  }
}

void add_term(std::vector<Term>& pool, std::unordered_set<std::size_t>* hashes, const Term& t) {
  for (const auto& u : pool)
    if (u == t) return;
  pool.push_back(t);
  (void)hashes;
}

}  // namespace

SentenceSystem generate_pools(const SentenceSystem& sys, int depth, int max_pool) {
  if (depth < 0) throw PreconditionViolated("depth must be >= 0");
  SentenceSystem out = sys;
  out.generated_depth = depth;

  // Canonical term pool: base constants, declared names, aliases, declared terms.
  out.term_pool.clear();
  for (const auto& b : out.base) add_term(out.term_pool, nullptr, t_base(b));
  for (const auto& n : out.name_order) add_term(out.term_pool, nullptr, t_name(n));
  for (const auto& a : out.alias_order) add_term(out.term_pool, nullptr, t_alias(a));
  for (const auto& t : out.declared_terms) add_term(out.term_pool, nullptr, t);

  // Generation seeds: name bodies plus canonical equality seeds.
  std::vector<FormulaPtr> seeds;
  FormulaSet seed_set;
  auto push_seed = [&](const FormulaPtr& f) {
    if (seed_set.insert(f).second) seeds.push_back(f);
  };
  for (const auto& n : out.name_order) push_seed(out.names.at(n));
  if (!out.base.empty()) {
    push_seed(f_eq(t_base(out.base[0]), t_base(out.base[0])));
    if (out.base.size() >= 2) push_seed(f_eq(t_base(out.base[0]), t_base(out.base[1])));
  }

  // All sentences buildable from the seeds with <= depth applications of
  // not, and, and T-over-quote (counted over the whole build tree).
  std::vector<std::pair<FormulaPtr, int>> built;
  FormulaSet built_set;
  std::unordered_map<const Formula*, int> cost;
  auto push_built = [&](const FormulaPtr& f, int c) {
    auto it = cost.find(f.get());
    if (built_set.count(f)) return false;
    built_set.insert(f);
    built.push_back({f, c});
    cost[f.get()] = c;
    (void)it;
    return true;
  };
  for (const auto& s : seeds) push_built(s, 0);
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t n = built.size();
    if (static_cast<int>(n) > max_pool)
      throw PoolBudgetExceeded("generated pool exceeds cap " + std::to_string(max_pool));
    for (std::size_t i = 0; i < n; ++i) {
      auto [f, cf] = built[i];
      if (cf + 1 <= depth) {
        if (push_built(f_not(f), cf + 1)) grew = true;
        if (push_built(f_truth(t_quote(f)), cf + 1)) grew = true;
      }
      for (std::size_t j = 0; j < n; ++j) {
        auto [g, cg] = built[j];
        if (cf + cg + 1 <= depth) {
          if (push_built(f_and(f, g), cf + cg + 1)) grew = true;
        }
      }
      if (static_cast<int>(built.size()) > max_pool)
        throw PoolBudgetExceeded("generated pool exceeds cap " + std::to_string(max_pool));
    }
  }

  // Pool order: bodies, declared sentences, equality seeds, generated, closure.
  PoolBuilder pool(max_pool);
  for (const auto& n : out.name_order) pool.add(out.names.at(n));
  for (const auto& d : out.declared_sentences) pool.add(d);
  for (const auto& s : seeds) pool.add(s);
  {
    // Deterministic generated order: by cost, then by printed form.
    std::vector<std::pair<FormulaPtr, int>> gen = built;
    std::stable_sort(gen.begin(), gen.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second < y.second;
      return to_text(x.first) < to_text(y.first);
    });
    for (const auto& [f, c] : gen) pool.add(f);
  }
  out.sentence_pool = pool.order;
  dependency_close(pool, out);
  out.sentence_pool = pool.order;

  // One quote-extension phase, then a final re-closure.
  for (const auto& s : out.sentence_pool) add_term(out.term_pool, nullptr, t_quote(s));
  dependency_close(pool, out);
  out.sentence_pool = pool.order;
  return out;
}

// ---------------------------------------------------------------------------
// parse_system / print_system
// ---------------------------------------------------------------------------

SentenceSystem parse_system(const std::string& text, int max_pool) {
  SentenceSystem sys;
  Parser p(text);
  while (!p.at_end()) {
    Token head = p.next();
    if (head.kind != Token::Ident)
      throw ParseError("expected statement keyword", head.line, head.col);
    if (head.text == "base") {
      while (!p.peek_symbol(";")) {
        Token id = p.expect_ident();
        check_user_id(id.text, id.line, id.col);
        if (std::find(sys.base.begin(), sys.base.end(), id.text) != sys.base.end())
          throw ParseError("duplicate base element " + id.text, id.line, id.col);
        sys.base.push_back(id.text);
      }
      p.expect_symbol(";");
    } else if (head.text == "name") {
      Token id = p.expect_ident();
      check_user_id(id.text, id.line, id.col);
      p.expect_symbol(":=");
      FormulaPtr body = p.parse_formula();
      p.expect_symbol(";");
      if (sys.names.count(id.text))
        throw ParseError("duplicate name " + id.text, id.line, id.col);
      sys.name_order.push_back(id.text);
      sys.names[id.text] = body;
    } else if (head.text == "term") {
      Token id = p.expect_ident();
      check_user_id(id.text, id.line, id.col);
      p.expect_symbol(":=");
      Term t = p.parse_term();
      p.expect_symbol(";");
      if (sys.aliases.count(id.text))
        throw ParseError("duplicate alias " + id.text, id.line, id.col);
      sys.alias_order.push_back(id.text);
      sys.aliases[id.text] = t;
    } else if (head.text == "pool") {
      Token what = p.expect_ident();
      if (what.text == "sentence") {
        FormulaPtr f = p.parse_formula();
        p.expect_symbol(";");
        sys.declared_sentences.push_back(f);
      } else if (what.text == "term") {
        Term t = p.parse_term();
        p.expect_symbol(";");
        sys.declared_terms.push_back(t);
      } else if (what.text == "formula") {
        Token v = p.expect_ident();
        check_user_id(v.text, v.line, v.col);
        p.expect_symbol(".");
        FormulaPtr f = p.parse_formula();
        p.expect_symbol(";");
        sys.formula_pool.push_back({v.text, f});
      } else {
        throw ParseError("expected 'sentence', 'term' or 'formula'", what.line, what.col);
      }
    } else {
      throw ParseError("unknown statement '" + head.text + "'", head.line, head.col);
    }
  }

  // Identifier uniqueness across declaration kinds.
  {
    std::set<std::string> ids;
    for (const auto& b : sys.base)
      if (!ids.insert(b).second) throw ValidationError("duplicate identifier " + b);
    for (const auto& n : sys.name_order)
      if (!ids.insert(n).second) throw ValidationError("duplicate identifier " + n);
    for (const auto& a : sys.alias_order)
      if (!ids.insert(a).second) throw ValidationError("duplicate identifier " + a);
  }

  // Resolve bare identifiers, then validate.
  for (const auto& n : sys.name_order) {
    std::set<std::string> bound;
    sys.names[n] = resolve_formula(sys.names.at(n), bound, sys, false);
  }
  for (auto& t : sys.declared_terms) {
    std::set<std::string> bound;
    t = resolve_term(t, bound, sys, false);
  }
  for (const auto& a : sys.alias_order) {
    std::set<std::string> bound;
    sys.aliases[a] = resolve_term(sys.aliases.at(a), bound, sys, false);
  }
  for (auto& d : sys.declared_sentences) {
    std::set<std::string> bound;
    d = resolve_formula(d, bound, sys, false);
  }
  for (auto& [v, f] : sys.formula_pool) {
    std::set<std::string> bound{v};
    f = resolve_formula(f, bound, sys, false);
  }

  for (const auto& n : sys.name_order) {
    const auto& body = sys.names.at(n);
    if (!is_sentence(body)) throw ValidationError("open formula in name body " + n);
    validate_refs(body, sys, false);
  }
  check_alias_acyclic(sys);
  for (const auto& a : sys.alias_order) validate_refs_term(sys.aliases.at(a), sys, false);
  for (const auto& d : sys.declared_sentences) {
    if (!is_sentence(d)) throw ValidationError("pool sentence must be closed: " + to_text(d));
    validate_refs(d, sys, false);
  }
  for (const auto& t : sys.declared_terms) {
    validate_refs_term(t, sys, false);
    if (t.kind == TermKind::Var) throw ValidationError("pool term must be closed");
  }
  for (const auto& [v, f] : sys.formula_pool) {
    std::set<std::string> fv;
    collect_free_vars(f, fv);
    fv.erase(v);
    if (!fv.empty())
      throw ValidationError("pool formula has free variables besides " + v + ": " + to_text(f));
    validate_refs(f, sys, true);
  }

  return generate_pools(sys, 0, max_pool);
}

std::string print_system(const SentenceSystem& sys) {
  std::ostringstream os;
  if (!sys.base.empty()) {
    os << "base";
    for (const auto& b : sys.base) os << " " << b;
    os << ";\n";
  }
  for (const auto& n : sys.name_order) {
    if (n.find("__") != std::string::npos) continue;  // companions are derived
    os << "name " << n << " := " << to_text(sys.names.at(n)) << ";\n";
  }
  for (const auto& a : sys.alias_order)
    os << "term " << a << " := " << to_text(sys.aliases.at(a)) << ";\n";
  for (const auto& d : sys.declared_sentences) os << "pool sentence " << to_text(d) << ";\n";
  for (const auto& t : sys.declared_terms) os << "pool term " << to_text(t) << ";\n";
  for (const auto& [v, f] : sys.formula_pool)
    os << "pool formula " << v << " . " << to_text(f) << ";\n";
  return os.str();
}

FormulaPtr parse_formula_text(const std::string& text, const SentenceSystem& sys,
                              bool allow_free) {
  Parser p(text);
  FormulaPtr f = p.parse_formula();
  if (!p.at_end()) {
    const Token& t = p.peek();
    throw ParseError("trailing input after formula", t.line, t.col);
  }
  std::set<std::string> bound;
  f = resolve_formula(f, bound, sys, allow_free);
  if (!allow_free && !is_sentence(f)) throw ValidationError("formula has free variables");
  validate_refs(f, sys, allow_free);
  return f;
}

Term parse_term_text(const std::string& text, const SentenceSystem& sys) {
  Parser p(text);
  Term t = p.parse_term();
  if (!p.at_end()) {
    const Token& tk = p.peek();
    throw ParseError("trailing input after term", tk.line, tk.col);
  }
  std::set<std::string> bound;
  t = resolve_term(t, bound, sys, false);
  validate_refs_term(t, sys, false);
  return t;
}

}  // namespace truthlab
