#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "truthlab/syntax.hpp"
#include "truthlab/translations.hpp"
#include "truthlab/valuation.hpp"

namespace truthlab {

enum class ModelKind { Inner, Closure, Patched, CD, LemmaB, Typed, FHStage };

class Model;
using ModelPtr = std::shared_ptr<const Model>;

// A two-valued structure supporting satisfaction queries over the pool
// languages. Satisfaction is total except on FH stage models, where queries
// that consult sentences outside the finite pool are fragment-indeterminate.
class Model {
 public:
  ModelKind kind = ModelKind::Closure;
  std::string label;

  // System prepared with negation companions; fp extended accordingly.
  std::shared_ptr<const SentenceSystem> sys;
  FixedPoint fp;
  DetVariant variant = DetVariant::Cons;
  FormulaPtr lemma_b;

  ModelPtr base;       // Patched
  FormulaSet toggles;  // Patched

  std::vector<FormulaPtr> fh_d, fh_t;  // FHStage (normalized)

  Lang model_lang() const;
  std::optional<bool> eval_opt(const FormulaPtr& f) const;
  // Throws Error when the query is fragment-indeterminate (FH models only).
  bool satisfies(const FormulaPtr& f) const;

  // Kripkean value of a sentence under the model's fixed point.
  V4 fde_value(const FormulaPtr& f) const;
  bool inner_satisfies(const FormulaPtr& f) const;

 private:
  std::optional<bool> eval_rec(const FormulaPtr& f) const;
  std::optional<bool> atom_truth(const Term& t) const;
  std::optional<bool> atom_det(const Term& t) const;
  std::optional<bool> atom_typed(const Term& t) const;
  bool tb_eval(const FormulaPtr& f) const;  // LemmaB inner layer
  bool t_extension_member(const FormulaPtr& s) const;  // Closure/Patched atom layer

  FormulaPtr delta_of(const FormulaPtr& f) const;

  bool cacheable(const Formula* p) const;
  mutable std::shared_ptr<const StableNodeSet> stable_;
  mutable std::unordered_map<const Formula*, int8_t> outer_memo_;
  mutable std::unordered_map<const Formula*, int8_t> tb_memo_;
  mutable std::unordered_map<const Formula*, int8_t> inner_memo_;
  mutable std::unique_ptr<Evaluator> fde_;
  mutable std::unique_ptr<DeltaTranslator> delta_;
  mutable FormulaSet fh_d_set_, fh_t_set_, fh_pool_set_;
  mutable bool fh_sets_ready_ = false;
};

// eval_inner(A, fp, sys): classical satisfaction in (N, X). T-atoms read
// membership in X (the t-bit of the denoted sentence's value).
bool eval_inner(const FormulaPtr& a, const FixedPoint& fp, const SentenceSystem& sys);
bool eval_model(const FormulaPtr& a, const Model& m);

ModelPtr build_inner_model(const FixedPoint& fp, const SentenceSystem& sys);
ModelPtr build_closure_model(const FixedPoint& fp, const SentenceSystem& sys);
ModelPtr build_cd_model(const FixedPoint& fp, const SentenceSystem& sys, DetVariant variant);
// Requires B outside the variant's determinate set.
ModelPtr build_lemma_b_model(const FixedPoint& fp, const SentenceSystem& sys, DetVariant variant,
                             const FormulaPtr& b);
ModelPtr build_typed_model(const FixedPoint& fp, const SentenceSystem& sys);
// Requires a Closure or Patched base; toggles must be pool sentences.
ModelPtr patch_model(const ModelPtr& m, const std::vector<FormulaPtr>& toggles);

// Recovers the name assignment from doubly quoted truth ascriptions:
// t-bit of name L iff m |= T(quote(T(quote(body_L)))), f-bit from the
// negated form. Companion names are skipped.
NameAssignment extract_inner(const Model& m, const SentenceSystem& raw_sys);

// ---------------------------------------------------------------------------
// Fujimoto-Halbach staged construction over the finite pool
// ---------------------------------------------------------------------------

struct FHStages {
  std::vector<FormulaPtr> d_set;  // normalized
  std::vector<FormulaPtr> t_set;  // normalized
  int stage = 0;                  // first stage at which the pair repeats
};

struct NonStabilized {
  int stages_run = 0;
  int cycle_start = -1;  // -1 when no repeat was observed within the budget
  int cycle_period = 0;
  std::vector<std::pair<int, int>> trace;  // (|D_k|, |T_k|)
};

using FHResult = std::variant<FHStages, NonStabilized>;

FHResult fh_construct(const SentenceSystem& sys, int max_stages);
ModelPtr build_fh_model(const FHStages& st, const SentenceSystem& sys);

}  // namespace truthlab
