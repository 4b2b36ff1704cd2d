#pragma once

#include <vector>

#include "truthlab/syntax.hpp"
#include "truthlab/valuation.hpp"

namespace truthlab {

class Model;

// Determinateness elimination. D t becomes, per variant,
//   cons:  T`T(ng... )`  i.e.  T(quote(T(t'))) or T(quote(T(ng t')))
//   comp:  not T(quote(T(t'))) or not T(quote(T(ng t')))
//   sym:   the conjunction of both
// where t' is the delta-translated term (quote payloads translated, names
// with D-reachable bodies mapped to companion names added to the system).
struct DeltaResult {
  FormulaPtr formula;
  SentenceSystem system;  // input system possibly extended with companions
};

DeltaResult delta(const FormulaPtr& f, DetVariant variant, const SentenceSystem& sys);

// Stateful variant for translating many formulas against one system; the
// system snapshot grows monotonically as companions are required.
class DeltaTranslator {
 public:
  DeltaTranslator(DetVariant variant, const SentenceSystem& sys);
  FormulaPtr translate(const FormulaPtr& f);
  Term translate_term(const Term& t);
  const SentenceSystem& system() const { return sys_; }
  DetVariant variant() const { return variant_; }

 private:
  FormulaPtr expand_det(const Term& translated);
  DetVariant variant_;
  SentenceSystem sys_;
  std::unordered_map<std::string, std::string> name_map_;
  // The key node is pinned by the entry; memoizing by bare address would be
  // unsound once transient inputs are freed and their addresses reused.
  std::unordered_map<const Formula*, std::pair<FormulaPtr, FormulaPtr>> memo_;
};

// Cantini's dual map: fixes arithmetical atoms, commutes with the logical
// operations, and sends T t to not T(ng t). The translation acts at the code
// level, so quoted content is translated too; names with truth-dependent
// bodies get dual companions added to the system.
struct DualResult {
  FormulaPtr formula;
  SentenceSystem system;
};

DualResult dual_c(const FormulaPtr& f, const SentenceSystem& sys);

class DualTranslator {
 public:
  explicit DualTranslator(const SentenceSystem& sys);
  FormulaPtr translate(const FormulaPtr& f);
  Term translate_term(const Term& t);
  const SentenceSystem& system() const { return sys_; }

 private:
  Term ng_of(const Term& t);
  SentenceSystem sys_;
  std::unordered_map<std::string, std::string> name_map_;
  std::unordered_map<const Formula*, std::pair<FormulaPtr, FormulaPtr>> memo_;
};

// tau: outer T becomes the typed TT; inner (quoted) occurrences untouched.
FormulaPtr tau(const FormulaPtr& f);

// iota: code-level cleanup sending sentences outside L_T to the falsum 0=1;
// requires at least two base elements.
FormulaPtr iota(const FormulaPtr& f, const SentenceSystem& sys);
Term iota_term(const Term& t, const SentenceSystem& sys);

// sigma: TT t -> T(iota t); T t -> T(quote(T(iota t))); commutes otherwise.
FormulaPtr sigma(const FormulaPtr& f, const SentenceSystem& sys);

// Internal / deep theory of a model, relative to a pool:
//   internal = {A : m |= T(quote A)},  deep = {A : m |= T(quote T(quote A))}.
std::vector<FormulaPtr> extract_internal(const Model& m, const std::vector<FormulaPtr>& pool);
std::vector<FormulaPtr> extract_deep(const Model& m, const std::vector<FormulaPtr>& pool);

}  // namespace truthlab
