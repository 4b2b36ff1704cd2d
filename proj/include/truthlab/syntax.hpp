#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "truthlab/errors.hpp"

namespace truthlab {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class TermKind : uint8_t { BaseConst, NameRef, Alias, Quote, Var };

struct Term {
  TermKind kind = TermKind::Var;
  std::string id;       // BaseConst / NameRef / Alias / Var
  FormulaPtr payload;   // Quote
  std::size_t h = 0;

  Term() = default;
};

Term t_base(std::string id);
Term t_name(std::string id);
Term t_alias(std::string id);
Term t_quote(FormulaPtr sentence);
Term t_var(std::string id);

bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

enum class Conn : uint8_t {
  Eq,
  TruthAtom,       // T
  DetAtom,         // D        (L_D)
  TypedTruthAtom,  // TT       (L_CT)
  Not,
  And,
  Or,
  Imp,
  ForAll,
  Exists,
};

struct Formula {
  Conn kind;
  Term t1, t2;     // Eq uses both; atoms use t1
  FormulaPtr a, b; // Not uses a; And/Or/Imp use a,b; quantifiers use a
  std::string var; // quantifiers
  std::size_t h = 0;
};

FormulaPtr f_eq(Term lhs, Term rhs);
FormulaPtr f_truth(Term arg);
FormulaPtr f_det(Term arg);
FormulaPtr f_ttruth(Term arg);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr f, FormulaPtr g);
FormulaPtr f_or(FormulaPtr f, FormulaPtr g);
FormulaPtr f_imp(FormulaPtr f, FormulaPtr g);
FormulaPtr f_forall(std::string var, FormulaPtr body);
FormulaPtr f_exists(std::string var, FormulaPtr body);
// (a -> b) and (b -> a)
FormulaPtr f_iff(FormulaPtr f, FormulaPtr g);

bool equal(const FormulaPtr& a, const FormulaPtr& b);

struct FormulaHash {
  std::size_t operator()(const FormulaPtr& f) const { return f ? f->h : 0; }
};
struct FormulaEq {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const { return equal(a, b); }
};
using FormulaSet = std::unordered_set<FormulaPtr, FormulaHash, FormulaEq>;

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.h; }
};

// Language of the *displayed* atoms; quote payloads are opaque (they play the
// role of numerals, so a T-atom over a quoted D-sentence is still an L_T atom).
enum class Lang : uint8_t { LT, LD, LCT, Mixed };

Lang language(const FormulaPtr& f);
bool in_language(const FormulaPtr& f, Lang lang);
// True when `lang` formulas are acceptable wherever `bound` formulas are.
bool lang_within(Lang lang, Lang bound);

void collect_free_vars(const FormulaPtr& f, std::set<std::string>& out);
bool is_sentence(const FormulaPtr& f);

// Capture-free substitution of a closed term for every free occurrence of
// `var`. Does not descend into quote payloads.
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Term& t);
Term substitute_term(const Term& t, const std::string& var, const Term& repl);

// Normalization to the {not, and, forall, =, T, D, TT} core: Or/Imp/Exists
// rewritten by the usual definitions. Semantics-preserving.
FormulaPtr normalize(const FormulaPtr& f);

std::string to_text(const FormulaPtr& f);
std::string to_text(const Term& t);

// ---------------------------------------------------------------------------
// Sentence systems
// ---------------------------------------------------------------------------

struct SentenceSystem {
  std::vector<std::string> base;  // ordered base domain

  std::vector<std::string> name_order;
  std::unordered_map<std::string, FormulaPtr> names;

  std::vector<std::string> alias_order;
  std::unordered_map<std::string, Term> aliases;

  std::vector<Term> term_pool;
  std::vector<FormulaPtr> sentence_pool;
  std::vector<std::pair<std::string, FormulaPtr>> formula_pool;

  // Declarations, kept for regeneration and printing.
  std::vector<FormulaPtr> declared_sentences;
  std::vector<Term> declared_terms;
  int generated_depth = 0;

  bool has_name(const std::string& id) const { return names.count(id) != 0; }
  const FormulaPtr& name_body(const std::string& id) const;
  int name_index(const std::string& id) const;  // -1 when absent
  bool in_sentence_pool(const FormulaPtr& f) const;
  bool in_term_pool(const Term& t) const;
};

bool operator==(const SentenceSystem& a, const SentenceSystem& b);

struct Denotation {
  bool is_sentence = false;
  std::string base_id;  // when !is_sentence
  FormulaPtr sentence;  // when is_sentence
};

bool operator==(const Denotation& a, const Denotation& b);

Denotation denote(const Term& t, const SentenceSystem& sys);
// Chases alias indirections; result is never an Alias term.
Term resolve_alias(const Term& t, const SentenceSystem& sys);

SentenceSystem parse_system(const std::string& text, int max_pool = 2000);
SentenceSystem generate_pools(const SentenceSystem& sys, int depth, int max_pool = 2000);
std::string print_system(const SentenceSystem& sys);

// Formula / term parsers for CLI input and tests; references are validated
// against `sys`. The formula parser requires a closed formula unless
// `allow_free` is set.
FormulaPtr parse_formula_text(const std::string& text, const SentenceSystem& sys,
                              bool allow_free = false);
Term parse_term_text(const std::string& text, const SentenceSystem& sys);

// Registers the negation companion `<name>__neg` (body = toggled body) for
// every name of `sys`, used by the F t := T(ng t) renderings and the dual
// map. Idempotent.
SentenceSystem with_neg_companions(const SentenceSystem& sys);

// ng on terms: payload toggle for quotes, companion swap for names, identity
// on base-denoting terms. `sys` must already carry the companions.
Term neg_quote(const Term& t, const SentenceSystem& sys);
// The payload toggle itself: strips a leading negation, else adds one.
FormulaPtr toggle_not(const FormulaPtr& f);

// Canonical true / false equations over the base domain (b0=b0, not(b0=b0)).
FormulaPtr truthy_equation(const SentenceSystem& sys);
FormulaPtr falsy_equation(const SentenceSystem& sys);

// The set of formula nodes whose addresses are pinned for the lifetime of a
// system (pool members, name bodies, quote payloads and their subformulas).
// Evaluators memoize by node address, which is only sound on these: transient
// instance nodes can be freed and their addresses reused.
class StableNodeSet {
 public:
  static std::shared_ptr<const StableNodeSet> for_system(const SentenceSystem& sys);
  bool contains(const Formula* p) const { return set_.count(p) != 0; }

 private:
  void add_formula(const FormulaPtr& f);
  void add_term(const Term& t);
  std::unordered_set<const Formula*> set_;
  std::vector<FormulaPtr> keep_alive_;
};

}  // namespace truthlab
