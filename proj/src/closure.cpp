#include "truthlab/closure.hpp"

#include <algorithm>
#include <sstream>

namespace truthlab {

namespace {

constexpr int8_t kFalse = 0, kTrue = 1, kUnknown = 2;

std::optional<bool> from_cell(int8_t c) {
  if (c == kUnknown) return std::nullopt;
  return c == kTrue;
}

int8_t to_cell(std::optional<bool> v) { return v.has_value() ? (*v ? kTrue : kFalse) : kUnknown; }

std::string describe_assignment(const FixedPoint& fp, const SentenceSystem& sys) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (std::size_t i = 0; i < sys.name_order.size(); ++i) {
    const std::string& n = sys.name_order[i];
    if (n.find("__") != std::string::npos) continue;
    if (!first) os << ",";
    first = false;
    os << n << ":" << to_string(fp.values[i]);
  }
  os << "}";
  return os.str();
}

}  // namespace

Lang Model::model_lang() const {
  switch (kind) {
    case ModelKind::CD:
    case ModelKind::LemmaB:
    case ModelKind::FHStage:
      return Lang::LD;
    case ModelKind::Typed:
      return Lang::LCT;
    default:
      return Lang::LT;
  }
}

bool Model::cacheable(const Formula* p) const {
  if (!stable_) stable_ = StableNodeSet::for_system(*sys);
  return stable_->contains(p);
}

V4 Model::fde_value(const FormulaPtr& f) const {
  if (!fde_) {
    if (!stable_) stable_ = StableNodeSet::for_system(*sys);
    fde_ = std::make_unique<Evaluator>(*sys, fp.values, stable_);
  }
  return fde_->value(f);
}

FormulaPtr Model::delta_of(const FormulaPtr& f) const {
  if (language(f) == Lang::LT) return f;
  if (kind != ModelKind::CD && kind != ModelKind::LemmaB)
    throw LanguageError("model has no determinateness translation");
  if (!delta_) delta_ = std::make_unique<DeltaTranslator>(variant, *sys);
  std::size_t names_before = delta_->system().name_order.size();
  FormulaPtr out = delta_->translate(f);
  if (delta_->system().name_order.size() != names_before)
    throw PreconditionViolated("delta translation required fresh names at evaluation time");
  return out;
}

bool Model::inner_satisfies(const FormulaPtr& f) const {
  const bool cache = cacheable(f.get());
  if (cache) {
    auto it = inner_memo_.find(f.get());
    if (it != inner_memo_.end()) return it->second == kTrue;
  }
  bool v = false;
  switch (f->kind) {
    case Conn::Eq:
      v = denote(f->t1, *sys) == denote(f->t2, *sys);
      break;
    case Conn::TruthAtom: {
      Denotation d = denote(f->t1, *sys);
      if (!d.is_sentence || language(d.sentence) != Lang::LT)
        v = false;
      else
        v = fde_value(d.sentence).t_bit();
      break;
    }
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      throw LanguageError("inner model is an L_T structure: " + to_text(f));
    case Conn::Not:
      v = !inner_satisfies(f->a);
      break;
    case Conn::And:
      v = inner_satisfies(f->a) && inner_satisfies(f->b);
      break;
    case Conn::Or:
      v = inner_satisfies(f->a) || inner_satisfies(f->b);
      break;
    case Conn::Imp:
      v = !inner_satisfies(f->a) || inner_satisfies(f->b);
      break;
    case Conn::ForAll: {
      v = true;
      for (const auto& t : sys->term_pool)
        if (!inner_satisfies(substitute(f->a, f->var, t))) {
          v = false;
          break;
        }
      break;
    }
    case Conn::Exists: {
      v = false;
      for (const auto& t : sys->term_pool)
        if (inner_satisfies(substitute(f->a, f->var, t))) {
          v = true;
          break;
        }
      break;
    }
  }
  if (cache) inner_memo_[f.get()] = v ? kTrue : kFalse;
  return v;
}

bool Model::t_extension_member(const FormulaPtr& s) const {
  if (kind == ModelKind::Closure) return inner_satisfies(s);
  if (kind == ModelKind::Patched) {
    bool b = base->t_extension_member(s);
    return toggles.count(s) ? !b : b;
  }
  throw Error("t_extension_member: wrong model kind");
}

bool Model::tb_eval(const FormulaPtr& f) const {
  const bool cache = cacheable(f.get());
  if (cache) {
    auto it = tb_memo_.find(f.get());
    if (it != tb_memo_.end()) return it->second == kTrue;
  }
  bool v = false;
  switch (f->kind) {
    case Conn::Eq:
      v = denote(f->t1, *sys) == denote(f->t2, *sys);
      break;
    case Conn::TruthAtom: {
      Denotation d = denote(f->t1, *sys);
      if (!d.is_sentence || !lang_within(language(d.sentence), Lang::LD)) {
        v = false;
      } else {
        // T_B = {determinately true} + {B}
        v = (fde_value(delta_of(d.sentence)) == V4::T()) || equal(d.sentence, lemma_b);
      }
      break;
    }
    case Conn::DetAtom: {
      Denotation d = denote(f->t1, *sys);
      v = d.is_sentence && lang_within(language(d.sentence), Lang::LD) &&
          is_determinate(fde_value(delta_of(d.sentence)), variant);
      break;
    }
    case Conn::TypedTruthAtom:
      throw LanguageError("lemma-B model is an L_D structure");
    case Conn::Not:
      v = !tb_eval(f->a);
      break;
    case Conn::And:
      v = tb_eval(f->a) && tb_eval(f->b);
      break;
    case Conn::Or:
      v = tb_eval(f->a) || tb_eval(f->b);
      break;
    case Conn::Imp:
      v = !tb_eval(f->a) || tb_eval(f->b);
      break;
    case Conn::ForAll: {
      v = true;
      for (const auto& t : sys->term_pool)
        if (!tb_eval(substitute(f->a, f->var, t))) {
          v = false;
          break;
        }
      break;
    }
    case Conn::Exists: {
      v = false;
      for (const auto& t : sys->term_pool)
        if (tb_eval(substitute(f->a, f->var, t))) {
          v = true;
          break;
        }
      break;
    }
  }
  if (cache) tb_memo_[f.get()] = v ? kTrue : kFalse;
  return v;
}

std::optional<bool> Model::atom_truth(const Term& t) const {
  Denotation d = denote(t, *sys);
  switch (kind) {
    case ModelKind::Inner:
      return d.is_sentence && language(d.sentence) == Lang::LT &&
             fde_value(d.sentence).t_bit();
    case ModelKind::Closure:
    case ModelKind::Patched:
      if (!d.is_sentence || language(d.sentence) != Lang::LT) return false;
      return t_extension_member(d.sentence);
    case ModelKind::CD:
      if (!d.is_sentence || !lang_within(language(d.sentence), Lang::LD)) return false;
      return inner_satisfies(delta_of(d.sentence));
    case ModelKind::LemmaB:
      if (!d.is_sentence || !lang_within(language(d.sentence), Lang::LD)) return false;
      return tb_eval(d.sentence);
    case ModelKind::Typed:
      return d.is_sentence && language(d.sentence) == Lang::LT &&
             fde_value(d.sentence).t_bit();
    case ModelKind::FHStage: {
      if (!d.is_sentence || !lang_within(language(d.sentence), Lang::LD)) return false;
      FormulaPtr n = normalize(d.sentence);
      if (fh_t_set_.count(n)) return true;
      if (fh_pool_set_.count(n)) return false;
      return std::nullopt;  // outside the finite fragment
    }
  }
  return false;
}

std::optional<bool> Model::atom_det(const Term& t) const {
  Denotation d = denote(t, *sys);
  switch (kind) {
    case ModelKind::CD:
    case ModelKind::LemmaB:
      return d.is_sentence && lang_within(language(d.sentence), Lang::LD) &&
             is_determinate(fde_value(delta_of(d.sentence)), variant);
    case ModelKind::FHStage: {
      if (!d.is_sentence || !lang_within(language(d.sentence), Lang::LD)) return false;
      FormulaPtr n = normalize(d.sentence);
      if (fh_d_set_.count(n)) return true;
      if (fh_pool_set_.count(n)) return false;
      return std::nullopt;
    }
    default:
      throw LanguageError("model has no determinateness predicate");
  }
}

std::optional<bool> Model::atom_typed(const Term& t) const {
  if (kind != ModelKind::Typed) throw LanguageError("model has no typed truth predicate");
  Denotation d = denote(t, *sys);
  if (!d.is_sentence || language(d.sentence) != Lang::LT) return false;
  return inner_satisfies(d.sentence);
}

std::optional<bool> Model::eval_rec(const FormulaPtr& f) const {
  const bool cache = cacheable(f.get());
  if (cache) {
    auto it = outer_memo_.find(f.get());
    if (it != outer_memo_.end()) return from_cell(it->second);
  }
  std::optional<bool> v;
  switch (f->kind) {
    case Conn::Eq:
      v = denote(f->t1, *sys) == denote(f->t2, *sys);
      break;
    case Conn::TruthAtom:
      v = atom_truth(f->t1);
      break;
    case Conn::DetAtom:
      v = atom_det(f->t1);
      break;
    case Conn::TypedTruthAtom:
      v = atom_typed(f->t1);
      break;
    case Conn::Not: {
      auto a = eval_rec(f->a);
      v = a.has_value() ? std::optional<bool>(!*a) : std::nullopt;
      break;
    }
    case Conn::And: {
      auto a = eval_rec(f->a);
      if (a.has_value() && !*a) {
        v = false;
        break;
      }
      auto b = eval_rec(f->b);
      if (b.has_value() && !*b)
        v = false;
      else if (a.has_value() && b.has_value())
        v = true;
      else
        v = std::nullopt;
      break;
    }
    case Conn::Or: {
      auto a = eval_rec(f->a);
      if (a.has_value() && *a) {
        v = true;
        break;
      }
      auto b = eval_rec(f->b);
      if (b.has_value() && *b)
        v = true;
      else if (a.has_value() && b.has_value())
        v = false;
      else
        v = std::nullopt;
      break;
    }
    case Conn::Imp: {
      auto a = eval_rec(f->a);
      if (a.has_value() && !*a) {
        v = true;
        break;
      }
      auto b = eval_rec(f->b);
      if (b.has_value() && *b)
        v = true;
      else if (a.has_value() && b.has_value())
        v = false;
      else
        v = std::nullopt;
      break;
    }
    case Conn::ForAll: {
      bool unknown = false;
      v = true;
      for (const auto& t : sys->term_pool) {
        auto inst = eval_rec(substitute(f->a, f->var, t));
        if (inst.has_value() && !*inst) {
          v = false;
          unknown = false;
          break;
        }
        if (!inst.has_value()) unknown = true;
      }
      if (v.has_value() && *v && unknown) v = std::nullopt;
      break;
    }
    case Conn::Exists: {
      bool unknown = false;
      v = false;
      for (const auto& t : sys->term_pool) {
        auto inst = eval_rec(substitute(f->a, f->var, t));
        if (inst.has_value() && *inst) {
          v = true;
          unknown = false;
          break;
        }
        if (!inst.has_value()) unknown = true;
      }
      if (v.has_value() && !*v && unknown) v = std::nullopt;
      break;
    }
  }
  if (cache) outer_memo_[f.get()] = to_cell(v);
  return v;
}

std::optional<bool> Model::eval_opt(const FormulaPtr& f) const {
  if (kind == ModelKind::FHStage && !fh_sets_ready_) {
    for (const auto& s : fh_d) fh_d_set_.insert(s);
    for (const auto& s : fh_t) fh_t_set_.insert(s);
    for (const auto& s : sys->sentence_pool)
      if (lang_within(language(s), Lang::LD)) fh_pool_set_.insert(normalize(s));
    fh_sets_ready_ = true;
  }
  return eval_rec(f);
}

bool Model::satisfies(const FormulaPtr& f) const {
  auto v = eval_opt(f);
  if (!v.has_value())
    throw Error("query is fragment-indeterminate on this stage model: " + to_text(f));
  return *v;
}

bool eval_inner(const FormulaPtr& a, const FixedPoint& fp, const SentenceSystem& sys) {
  return build_inner_model(fp, sys)->satisfies(a);
}

bool eval_model(const FormulaPtr& a, const Model& m) { return m.satisfies(a); }

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<Model> new_model(ModelKind kind, const FixedPoint& fp,
                                 const SentenceSystem& sys) {
  auto m = std::make_shared<Model>();
  m->kind = kind;
  auto prepared = std::make_shared<SentenceSystem>(with_neg_companions(sys));
  m->sys = prepared;
  m->fp.values = extend_to_companions(fp.values, sys, *prepared);
  m->fp.flags = fp.flags;
  return m;
}

void attach_delta(Model& m, DetVariant variant) {
  m.variant = variant;
  // The translator must not need fresh names for anything reachable from the
  // pool; with L_T name bodies it only reuses the negation companions.
  for (const auto& n : m.sys->name_order)
    if (language(m.sys->names.at(n)) != Lang::LT)
      throw PreconditionViolated("CD-style models require L_T name bodies (delta-translate the system first)");
}

}  // namespace

ModelPtr build_inner_model(const FixedPoint& fp, const SentenceSystem& sys) {
  auto m = new_model(ModelKind::Inner, fp, sys);
  m->label = "inner" + describe_assignment(m->fp, *m->sys);
  return m;
}

ModelPtr build_closure_model(const FixedPoint& fp, const SentenceSystem& sys) {
  auto m = new_model(ModelKind::Closure, fp, sys);
  m->label = "closure" + describe_assignment(m->fp, *m->sys);
  return m;
}

ModelPtr build_cd_model(const FixedPoint& fp, const SentenceSystem& sys, DetVariant variant) {
  auto m = new_model(ModelKind::CD, fp, sys);
  attach_delta(*m, variant);
  m->label = "cd-" + to_string(variant) + describe_assignment(m->fp, *m->sys);
  return m;
}

ModelPtr build_lemma_b_model(const FixedPoint& fp, const SentenceSystem& sys, DetVariant variant,
                             const FormulaPtr& b) {
  if (!is_sentence(b)) throw PreconditionViolated("B must be a sentence");
  if (!lang_within(language(b), Lang::LD))
    throw PreconditionViolated("B must be an L_D sentence");
  auto m = new_model(ModelKind::LemmaB, fp, sys);
  attach_delta(*m, variant);
  m->lemma_b = b;
  // Precondition: B outside the variant's determinate set.
  DeltaTranslator tr(variant, *m->sys);
  FormulaPtr db = tr.translate(b);
  V4 v = eval_fde(db, m->fp.values, *m->sys);
  if (is_determinate(v, variant))
    throw PreconditionViolated("B is determinate (value " + to_string(v) + "): " + to_text(b));
  m->label = "lemma-b-" + to_string(variant) + "[B=" + to_text(b) + "]" +
             describe_assignment(m->fp, *m->sys);
  return m;
}

ModelPtr build_typed_model(const FixedPoint& fp, const SentenceSystem& sys) {
  auto m = new_model(ModelKind::Typed, fp, sys);
  const_cast<Model&>(*m).label = "typed" + describe_assignment(m->fp, *m->sys);
  return m;
}

ModelPtr patch_model(const ModelPtr& m, const std::vector<FormulaPtr>& toggles) {
  if (m->kind != ModelKind::Closure && m->kind != ModelKind::Patched)
    throw PreconditionViolated("patch_model requires a closure or patched base");
  auto out = std::make_shared<Model>();
  out->kind = ModelKind::Patched;
  out->sys = m->sys;
  out->fp = m->fp;
  out->base = m;
  std::ostringstream os;
  os << m->label << "+toggle{";
  for (std::size_t i = 0; i < toggles.size(); ++i) {
    const auto& t = toggles[i];
    if (!m->sys->in_sentence_pool(t))
      throw PreconditionViolated("toggle outside the sentence pool: " + to_text(t));
    out->toggles.insert(t);
    os << (i ? "," : "") << to_text(t);
  }
  os << "}";
  out->label = os.str();
  return out;
}

NameAssignment extract_inner(const Model& m, const SentenceSystem& raw_sys) {
  NameAssignment w(raw_sys.name_order.size(), V4::N());
  for (std::size_t i = 0; i < raw_sys.name_order.size(); ++i) {
    const auto& body = raw_sys.names.at(raw_sys.name_order[i]);
    bool t = m.satisfies(f_truth(t_quote(f_truth(t_quote(body)))));
    bool f = m.satisfies(f_truth(t_quote(f_truth(t_quote(f_not(body))))));
    w[i] = V4{static_cast<uint8_t>((t ? 1 : 0) | (f ? 2 : 0))};
  }
  return w;
}

// ---------------------------------------------------------------------------
// Fujimoto-Halbach stages
// ---------------------------------------------------------------------------

namespace {

struct FHUniverse {
  std::vector<FormulaPtr> order;  // normalized pool sentences (L_T + L_D)
  FormulaSet set;
};

FHUniverse fh_universe(const SentenceSystem& sys) {
  FHUniverse u;
  for (const auto& s : sys.sentence_pool) {
    if (!lang_within(language(s), Lang::LD)) continue;
    FormulaPtr n = normalize(s);
    if (u.set.insert(n).second) u.order.push_back(n);
  }
  return u;
}

// Gamma_Y(X): the positive inductive step from the right-to-left directions
// of the determinateness axioms (equations; T/D over determinate values;
// negation; conjunction with a determinate false conjunct; quantifiers).
FormulaSet fh_gamma(const FHUniverse& u, const FormulaSet& x, const FormulaSet& y,
                    const SentenceSystem& sys) {
  FormulaSet out;
  auto in_x = [&](const FormulaPtr& f) { return x.count(f) != 0; };
  auto in_y = [&](const FormulaPtr& f) { return y.count(f) != 0; };
  for (const auto& a : u.order) {
    bool det = false;
    switch (a->kind) {
      case Conn::Eq:
        det = true;
        break;
      case Conn::TruthAtom:
      case Conn::DetAtom: {
        Denotation d = denote(a->t1, sys);
        det = d.is_sentence && lang_within(language(d.sentence), Lang::LD) &&
              in_x(normalize(d.sentence));
        break;
      }
      case Conn::Not:
        det = in_x(a->a);
        break;
      case Conn::And: {
        const auto& l = a->a;
        const auto& r = a->b;
        det = (in_x(l) && in_x(r)) || (in_x(l) && in_y(f_not(l))) || (in_x(r) && in_y(f_not(r)));
        break;
      }
      case Conn::ForAll: {
        bool all = true, witness = false;
        for (const auto& t : sys.term_pool) {
          FormulaPtr inst = substitute(a->a, a->var, t);
          bool di = in_x(inst);
          if (!di) all = false;
          if (di && in_y(f_not(inst))) witness = true;
        }
        det = all || witness;
        break;
      }
      default:
        det = false;  // normalized universe has no Or/Imp/Exists
    }
    if (det) out.insert(a);
  }
  return out;
}

std::vector<FormulaPtr> ordered(const FHUniverse& u, const FormulaSet& s) {
  std::vector<FormulaPtr> out;
  for (const auto& a : u.order)
    if (s.count(a)) out.push_back(a);
  return out;
}

std::string fh_key(const FHUniverse& u, const FormulaSet& d, const FormulaSet& t) {
  std::string k;
  k.reserve(u.order.size() * 2);
  for (const auto& a : u.order) {
    k.push_back(d.count(a) ? '1' : '0');
    k.push_back(t.count(a) ? '1' : '0');
  }
  return k;
}

}  // namespace

static ModelPtr build_fh_model_raw(const SentenceSystem& sys, std::vector<FormulaPtr> d,
                                   std::vector<FormulaPtr> t) {
  auto m = std::make_shared<Model>();
  m->kind = ModelKind::FHStage;
  m->sys = std::make_shared<SentenceSystem>(with_neg_companions(sys));
  m->fp.values = NameAssignment(m->sys->name_order.size(), V4::N());
  m->fh_d = std::move(d);
  m->fh_t = std::move(t);
  std::ostringstream os;
  os << "fh-stage{|D|=" << m->fh_d.size() << ",|T|=" << m->fh_t.size() << "}";
  m->label = os.str();
  return m;
}

ModelPtr build_fh_model(const FHStages& st, const SentenceSystem& sys) {
  return build_fh_model_raw(sys, st.d_set, st.t_set);
}

FHResult fh_construct(const SentenceSystem& sys, int max_stages) {
  if (max_stages < 1) throw PreconditionViolated("max_stages must be >= 1");
  FHUniverse u = fh_universe(sys);
  FormulaSet d_cur, t_cur;
  std::vector<std::string> history;
  std::vector<std::pair<int, int>> trace;
  history.push_back(fh_key(u, d_cur, t_cur));
  trace.push_back({0, 0});

  for (int k = 1; k <= max_stages; ++k) {
    FormulaSet d_next = fh_gamma(u, d_cur, t_cur, sys);
    FormulaSet t_next;
    {
      ModelPtr stage = build_fh_model_raw(sys, ordered(u, d_cur), ordered(u, t_cur));
      for (const auto& a : u.order) {
        auto v = stage->eval_opt(a);
        if (v.has_value() && *v) t_next.insert(a);
      }
    }
    std::string key = fh_key(u, d_next, t_next);
    trace.push_back({static_cast<int>(d_next.size()), static_cast<int>(t_next.size())});
    if (key == history.back()) {
      FHStages st;
      st.d_set = ordered(u, d_next);
      st.t_set = ordered(u, t_next);
      st.stage = k;
      return st;
    }
    for (std::size_t i = 0; i + 1 < history.size(); ++i) {
      if (history[i] == key) {
        NonStabilized ns;
        ns.stages_run = k;
        ns.cycle_start = static_cast<int>(i);
        ns.cycle_period = static_cast<int>(history.size() - i);
        ns.trace = trace;
        return ns;
      }
    }
    history.push_back(key);
    d_cur = std::move(d_next);
    t_cur = std::move(t_next);
  }
  NonStabilized ns;
  ns.stages_run = max_stages;
  ns.trace = trace;
  return ns;
}

}  // namespace truthlab
