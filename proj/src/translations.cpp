#include "truthlab/translations.hpp"

#include "truthlab/closure.hpp"

namespace truthlab {

namespace {

bool contains_det_directly(const FormulaPtr& f);

bool term_contains_det(const Term& t) {
  return t.kind == TermKind::Quote && contains_det_directly(t.payload);
}

bool contains_det_directly(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::DetAtom:
      return true;
    case Conn::Eq:
      return term_contains_det(f->t1) || term_contains_det(f->t2);
    case Conn::TruthAtom:
    case Conn::TypedTruthAtom:
      return term_contains_det(f->t1);
    case Conn::Not:
    case Conn::ForAll:
    case Conn::Exists:
      return contains_det_directly(f->a);
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      return contains_det_directly(f->a) || contains_det_directly(f->b);
  }
  return false;
}

void collect_name_refs(const FormulaPtr& f, std::set<std::string>& out);

void collect_name_refs_term(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::NameRef) out.insert(t.id);
  if (t.kind == TermKind::Quote) collect_name_refs(t.payload, out);
}

void collect_name_refs(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Conn::Eq:
      collect_name_refs_term(f->t1, out);
      collect_name_refs_term(f->t2, out);
      break;
    case Conn::TruthAtom:
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      collect_name_refs_term(f->t1, out);
      break;
    case Conn::Not:
    case Conn::ForAll:
    case Conn::Exists:
      collect_name_refs(f->a, out);
      break;
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      collect_name_refs(f->a, out);
      collect_name_refs(f->b, out);
      break;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// delta
// ---------------------------------------------------------------------------

namespace {

// Negation companions created while companion bodies were still placeholders
// must be refreshed once the final bodies are in place.
void refresh_neg_companions(SentenceSystem& sys) {
  const std::string suffix = "__neg";
  for (const auto& n : sys.name_order) {
    if (n.size() <= suffix.size() || n.rfind(suffix) != n.size() - suffix.size()) continue;
    std::string base = n.substr(0, n.size() - suffix.size());
    if (sys.has_name(base)) sys.names[n] = f_not(sys.names.at(base));
  }
}

}  // namespace

DeltaTranslator::DeltaTranslator(DetVariant variant, const SentenceSystem& sys)
    : variant_(variant), sys_(sys) {
  // Names whose bodies (transitively, through names referenced anywhere,
  // including quote payloads) mention D need a translated companion.
  std::set<std::string> affected;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& n : sys_.name_order) {
      if (affected.count(n)) continue;
      const auto& body = sys_.names.at(n);
      bool hit = contains_det_directly(body);
      if (!hit) {
        std::set<std::string> refs;
        collect_name_refs(body, refs);
        for (const auto& r : refs)
          if (affected.count(r)) {
            hit = true;
            break;
          }
      }
      if (hit) {
        affected.insert(n);
        changed = true;
      }
    }
  }
  std::string suffix = "__delta_" + to_string(variant_);
  for (const auto& n : affected) name_map_[n] = n + suffix;
  // Register companion slots first so cyclic bodies resolve, then fill them.
  for (const auto& [orig, comp] : name_map_) {
    if (!sys_.has_name(comp)) {
      sys_.name_order.push_back(comp);
      sys_.names[comp] = sys_.names.at(orig);
    }
  }
  for (const auto& [orig, comp] : name_map_) sys_.names[comp] = translate(sys_.names.at(orig));
  refresh_neg_companions(sys_);
}

Term DeltaTranslator::translate_term(const Term& t0) {
  Term t = resolve_alias(t0, sys_);
  switch (t.kind) {
    case TermKind::Quote:
      return t_quote(translate(t.payload));
    case TermKind::NameRef: {
      auto it = name_map_.find(t.id);
      return it == name_map_.end() ? t : t_name(it->second);
    }
    default:
      return t0.kind == TermKind::Alias ? t : t0;
  }
}

FormulaPtr DeltaTranslator::expand_det(const Term& t) {
  // ensure the negation companion exists for name terms
  Term resolved = resolve_alias(t, sys_);
  if (resolved.kind == TermKind::NameRef) {
    std::string comp = resolved.id + "__neg";
    if (!sys_.has_name(comp)) {
      sys_.name_order.push_back(comp);
      sys_.names[comp] = toggle_not(sys_.names.at(resolved.id));
    }
  }
  Term ng = neg_quote(resolved, sys_);
  FormulaPtr tt = f_truth(t_quote(f_truth(resolved)));
  FormulaPtr tf = f_truth(t_quote(f_truth(ng)));
  switch (variant_) {
    case DetVariant::Cons:
      return f_or(tt, tf);
    case DetVariant::Comp:
      return f_or(f_not(tt), f_not(tf));
    default:
      return f_and(f_or(tt, tf), f_or(f_not(tt), f_not(tf)));
  }
}

FormulaPtr DeltaTranslator::translate(const FormulaPtr& f) {
  if (memo_.size() > 200000) memo_.clear();
  auto it = memo_.find(f.get());
  if (it != memo_.end()) return it->second.second;
  FormulaPtr out;
  switch (f->kind) {
    case Conn::Eq: {
      Term l = translate_term(f->t1), r = translate_term(f->t2);
      out = (l == f->t1 && r == f->t2) ? f : f_eq(l, r);
      break;
    }
    case Conn::TruthAtom: {
      Term a = translate_term(f->t1);
      out = (a == f->t1) ? f : f_truth(a);
      break;
    }
    case Conn::DetAtom:
      out = expand_det(translate_term(f->t1));
      break;
    case Conn::TypedTruthAtom:
      throw LanguageError("delta: typed truth atoms are not in L_D");
    case Conn::Not: {
      auto a = translate(f->a);
      out = (a == f->a) ? f : f_not(a);
      break;
    }
    case Conn::And:
    case Conn::Or:
    case Conn::Imp: {
      auto a = translate(f->a), b = translate(f->b);
      if (a == f->a && b == f->b)
        out = f;
      else if (f->kind == Conn::And)
        out = f_and(a, b);
      else if (f->kind == Conn::Or)
        out = f_or(a, b);
      else
        out = f_imp(a, b);
      break;
    }
    case Conn::ForAll:
    case Conn::Exists: {
      auto a = translate(f->a);
      out = (a == f->a) ? f : (f->kind == Conn::ForAll ? f_forall(f->var, a) : f_exists(f->var, a));
      break;
    }
  }
  memo_[f.get()] = {f, out};
  return out;
}

DeltaResult delta(const FormulaPtr& f, DetVariant variant, const SentenceSystem& sys) {
  DeltaTranslator tr(variant, sys);
  DeltaResult r;
  r.formula = tr.translate(f);
  r.system = tr.system();
  return r;
}

// ---------------------------------------------------------------------------
// dual map c
// ---------------------------------------------------------------------------

namespace {

bool contains_truth_atom(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::TruthAtom:
      return true;
    case Conn::Eq: {
      auto term_has = [](const Term& t) {
        return t.kind == TermKind::Quote && contains_truth_atom(t.payload);
      };
      return term_has(f->t1) || term_has(f->t2);
    }
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      return false;
    case Conn::Not:
    case Conn::ForAll:
    case Conn::Exists:
      return contains_truth_atom(f->a);
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      return contains_truth_atom(f->a) || contains_truth_atom(f->b);
  }
  return false;
}

}  // namespace

DualTranslator::DualTranslator(const SentenceSystem& sys) : sys_(sys) {
  // Names whose bodies are touched by the translation receive a companion
  // with the dualized body; fixed bodies map to the name itself.
  std::set<std::string> affected;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& n : sys_.name_order) {
      if (affected.count(n)) continue;
      const auto& body = sys_.names.at(n);
      bool hit = contains_truth_atom(body);
      if (!hit) {
        std::set<std::string> refs;
        collect_name_refs(body, refs);
        for (const auto& r : refs)
          if (affected.count(r)) {
            hit = true;
            break;
          }
      }
      if (hit) {
        affected.insert(n);
        changed = true;
      }
    }
  }
  for (const auto& n : affected) name_map_[n] = n + "__dual";
  for (const auto& [orig, comp] : name_map_) {
    if (!sys_.has_name(comp)) {
      sys_.name_order.push_back(comp);
      sys_.names[comp] = sys_.names.at(orig);
    }
  }
  for (const auto& [orig, comp] : name_map_) sys_.names[comp] = translate(sys_.names.at(orig));
  refresh_neg_companions(sys_);
}

Term DualTranslator::ng_of(const Term& t) {
  Term r = resolve_alias(t, sys_);
  if (r.kind == TermKind::NameRef) {
    std::string comp = r.id + "__neg";
    if (!sys_.has_name(comp)) {
      sys_.name_order.push_back(comp);
      sys_.names[comp] = f_not(sys_.names.at(r.id));
    }
  }
  return neg_quote(r, sys_);
}

Term DualTranslator::translate_term(const Term& t0) {
  Term t = resolve_alias(t0, sys_);
  switch (t.kind) {
    case TermKind::Quote:
      return t_quote(translate(t.payload));
    case TermKind::NameRef: {
      auto it = name_map_.find(t.id);
      return it == name_map_.end() ? t : t_name(it->second);
    }
    default:
      return t0.kind == TermKind::Alias ? t : t0;
  }
}

FormulaPtr DualTranslator::translate(const FormulaPtr& f) {
  if (memo_.size() > 200000) memo_.clear();
  auto it = memo_.find(f.get());
  if (it != memo_.end()) return it->second.second;
  FormulaPtr out;
  switch (f->kind) {
    case Conn::Eq:
      out = f;  // arithmetical vocabulary is preserved
      break;
    case Conn::TruthAtom:
      out = f_not(f_truth(ng_of(translate_term(f->t1))));
      break;
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      throw LanguageError("dual_c: formula is not in L_T: " + to_text(f));
    case Conn::Not:
      out = f_not(translate(f->a));
      break;
    case Conn::And:
      out = f_and(translate(f->a), translate(f->b));
      break;
    case Conn::Or:
      out = f_or(translate(f->a), translate(f->b));
      break;
    case Conn::Imp:
      out = f_imp(translate(f->a), translate(f->b));
      break;
    case Conn::ForAll:
      out = f_forall(f->var, translate(f->a));
      break;
    case Conn::Exists:
      out = f_exists(f->var, translate(f->a));
      break;
  }
  memo_[f.get()] = {f, out};
  return out;
}

DualResult dual_c(const FormulaPtr& f, const SentenceSystem& sys) {
  DualTranslator tr(sys);
  DualResult r;
  r.formula = tr.translate(f);
  r.system = tr.system();
  return r;
}

// ---------------------------------------------------------------------------
// tau / iota / sigma
// ---------------------------------------------------------------------------

FormulaPtr tau(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::Eq:
      return f;
    case Conn::TruthAtom:
      return f_ttruth(f->t1);  // inner occurrences stay homophonic
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      throw LanguageError("tau: input must be in L_T");
    case Conn::Not:
      return f_not(tau(f->a));
    case Conn::And:
      return f_and(tau(f->a), tau(f->b));
    case Conn::Or:
      return f_or(tau(f->a), tau(f->b));
    case Conn::Imp:
      return f_imp(tau(f->a), tau(f->b));
    case Conn::ForAll:
      return f_forall(f->var, tau(f->a));
    case Conn::Exists:
      return f_exists(f->var, tau(f->a));
  }
  return f;
}

static FormulaPtr iota_falsum(const SentenceSystem& sys) {
  if (sys.base.size() < 2)
    throw PreconditionViolated("iota requires a system with at least two base elements");
  return f_eq(t_base(sys.base[0]), t_base(sys.base[1]));
}

namespace {

bool contains_typed_directly(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::TypedTruthAtom:
      return true;
    case Conn::Eq: {
      auto term_has = [](const Term& t) {
        return t.kind == TermKind::Quote && contains_typed_directly(t.payload);
      };
      return term_has(f->t1) || term_has(f->t2);
    }
    case Conn::TruthAtom:
    case Conn::DetAtom:
      return f->t1.kind == TermKind::Quote && contains_typed_directly(f->t1.payload);
    case Conn::Not:
    case Conn::ForAll:
    case Conn::Exists:
      return contains_typed_directly(f->a);
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      return contains_typed_directly(f->a) || contains_typed_directly(f->b);
  }
  return false;
}

// A name is iota-fixed when nothing reachable from its body (through other
// names, including inside quotes) mentions the typed truth predicate.
bool iota_fixed_name(const std::string& id, const SentenceSystem& sys) {
  std::set<std::string> seen{id};
  std::vector<std::string> work{id};
  while (!work.empty()) {
    std::string cur = work.back();
    work.pop_back();
    const auto& body = sys.name_body(cur);
    if (contains_typed_directly(body)) return false;
    std::set<std::string> refs;
    collect_name_refs(body, refs);
    for (const auto& r : refs)
      if (seen.insert(r).second) work.push_back(r);
  }
  return true;
}

}  // namespace

Term iota_term(const Term& t0, const SentenceSystem& sys) {
  Term t = resolve_alias(t0, sys);
  switch (t.kind) {
    case TermKind::Quote: {
      FormulaPtr cleaned = iota(t.payload, sys);
      return equal(cleaned, t.payload) ? t : t_quote(cleaned);
    }
    case TermKind::NameRef: {
      if (!iota_fixed_name(t.id, sys))
        throw PreconditionViolated("iota over a name with a typed-truth-dependent body: " + t.id);
      return t;
    }
    default:
      return t;
  }
}

FormulaPtr iota(const FormulaPtr& f, const SentenceSystem& sys) {
  if (language(f) != Lang::LT) return iota_falsum(sys);
  switch (f->kind) {
    case Conn::Eq:
      return f;
    case Conn::TruthAtom: {
      Term a = iota_term(f->t1, sys);
      return (a == f->t1) ? f : f_truth(a);
    }
    case Conn::Not: {
      auto a = iota(f->a, sys);
      return a == f->a ? f : f_not(a);
    }
    case Conn::And: {
      auto a = iota(f->a, sys), b = iota(f->b, sys);
      return (a == f->a && b == f->b) ? f : f_and(a, b);
    }
    case Conn::Or: {
      auto a = iota(f->a, sys), b = iota(f->b, sys);
      return (a == f->a && b == f->b) ? f : f_or(a, b);
    }
    case Conn::Imp: {
      auto a = iota(f->a, sys), b = iota(f->b, sys);
      return (a == f->a && b == f->b) ? f : f_imp(a, b);
    }
    case Conn::ForAll: {
      auto a = iota(f->a, sys);
      return a == f->a ? f : f_forall(f->var, a);
    }
    case Conn::Exists: {
      auto a = iota(f->a, sys);
      return a == f->a ? f : f_exists(f->var, a);
    }
    default:
      return f;  // unreachable: D/TT filtered by the language guard
  }
}

FormulaPtr sigma(const FormulaPtr& f, const SentenceSystem& sys) {
  switch (f->kind) {
    case Conn::Eq:
      return f;
    case Conn::TypedTruthAtom:
      return f_truth(iota_term(f->t1, sys));
    case Conn::TruthAtom:
      return f_truth(t_quote(f_truth(iota_term(f->t1, sys))));
    case Conn::DetAtom:
      throw LanguageError("sigma: input must be in the typed language");
    case Conn::Not:
      return f_not(sigma(f->a, sys));
    case Conn::And:
      return f_and(sigma(f->a, sys), sigma(f->b, sys));
    case Conn::Or:
      return f_or(sigma(f->a, sys), sigma(f->b, sys));
    case Conn::Imp:
      return f_imp(sigma(f->a, sys), sigma(f->b, sys));
    case Conn::ForAll:
      return f_forall(f->var, sigma(f->a, sys));
    case Conn::Exists:
      return f_exists(f->var, sigma(f->a, sys));
  }
  return f;
}

// ---------------------------------------------------------------------------
// internal / deep theories
// ---------------------------------------------------------------------------

std::vector<FormulaPtr> extract_internal(const Model& m, const std::vector<FormulaPtr>& pool) {
  std::vector<FormulaPtr> out;
  for (const auto& a : pool)
    if (m.satisfies(f_truth(t_quote(a)))) out.push_back(a);
  return out;
}

std::vector<FormulaPtr> extract_deep(const Model& m, const std::vector<FormulaPtr>& pool) {
  std::vector<FormulaPtr> out;
  for (const auto& a : pool)
    if (m.satisfies(f_truth(t_quote(f_truth(t_quote(a)))))) out.push_back(a);
  return out;
}

}  // namespace truthlab
