#include "truthlab/valuation.hpp"

#include <algorithm>

namespace truthlab {

V4 v4_not(V4 a) {
  uint8_t t = (a.bits >> 1) & 1;
  uint8_t f = a.bits & 1;
  return V4{static_cast<uint8_t>(t | (f << 1))};
}

V4 v4_and(V4 a, V4 b) {
  uint8_t t = (a.bits & b.bits) & 1;
  uint8_t f = (a.bits | b.bits) & 2;
  return V4{static_cast<uint8_t>(t | f)};
}

V4 v4_or(V4 a, V4 b) {
  uint8_t t = (a.bits | b.bits) & 1;
  uint8_t f = (a.bits & b.bits) & 2;
  return V4{static_cast<uint8_t>(t | f)};
}

V4 v4_imp(V4 a, V4 b) { return v4_or(v4_not(a), b); }

bool leq_k(V4 a, V4 b) { return (a.bits & b.bits) == a.bits; }

V4 v4_conflate(V4 a) {
  uint8_t t = ((a.bits >> 1) & 1) ^ 1;
  uint8_t f = (a.bits & 1) ^ 1;
  return V4{static_cast<uint8_t>(t | (f << 1))};
}

std::string to_string(V4 v) {
  switch (v.bits) {
    case 0: return "N";
    case 1: return "T";
    case 2: return "F";
    default: return "B";
  }
}

V4 v4_from_string(const std::string& s) {
  if (s == "N") return V4::N();
  if (s == "T") return V4::T();
  if (s == "F") return V4::F();
  if (s == "B") return V4::B();
  throw Error("bad V4 literal: " + s);
}

std::string to_string(DetVariant v) {
  switch (v) {
    case DetVariant::Cons: return "cons";
    case DetVariant::Comp: return "comp";
    default: return "sym";
  }
}

// ---------------------------------------------------------------------------
// FDE evaluation
// ---------------------------------------------------------------------------

Evaluator::Evaluator(const SentenceSystem& sys, const NameAssignment& w,
                     std::shared_ptr<const StableNodeSet> stable)
    : sys_(sys), w_(w), stable_(std::move(stable)) {
  if (w.size() != sys.name_order.size())
    throw Error("assignment size does not match name table");
}

V4 Evaluator::value(const FormulaPtr& f) { return eval(f); }

V4 Evaluator::eval(const FormulaPtr& f) {
  const bool cacheable = stable_ && stable_->contains(f.get());
  if (cacheable) {
    auto it = memo_.find(f.get());
    if (it != memo_.end()) return it->second;
  }
  V4 v;
  switch (f->kind) {
    case Conn::Eq: {
      Denotation l = denote(f->t1, sys_);
      Denotation r = denote(f->t2, sys_);
      v = (l == r) ? V4::T() : V4::F();
      break;
    }
    case Conn::TruthAtom: {
      Term t = resolve_alias(f->t1, sys_);
      if (t.kind == TermKind::Var) throw UnresolvedReference("eval_fde: open term");
      if (t.kind == TermKind::BaseConst) {
        v = V4::F();  // val t outside Sent: only the negation enters the jump
      } else if (t.kind == TermKind::NameRef) {
        const FormulaPtr& body = sys_.name_body(t.id);
        if (language(body) != Lang::LT) {
          v = V4::F();
        } else {
          int idx = sys_.name_index(t.id);
          v = w_[static_cast<std::size_t>(idx)];
        }
      } else {  // Quote: payloads strictly shrink, recurse
        if (language(t.payload) != Lang::LT)
          v = V4::F();
        else
          v = eval(t.payload);
      }
      break;
    }
    case Conn::DetAtom:
    case Conn::TypedTruthAtom:
      throw LanguageError("eval_fde: formula is not in L_T: " + to_text(f));
    case Conn::Not:
      v = v4_not(eval(f->a));
      break;
    case Conn::And:
      v = v4_and(eval(f->a), eval(f->b));
      break;
    case Conn::Or:
      v = v4_or(eval(f->a), eval(f->b));
      break;
    case Conn::Imp:
      v = v4_imp(eval(f->a), eval(f->b));
      break;
    case Conn::ForAll: {
      v = V4::T();
      for (const auto& t : sys_.term_pool) v = v4_and(v, eval(substitute(f->a, f->var, t)));
      break;
    }
    case Conn::Exists: {
      v = V4::F();
      for (const auto& t : sys_.term_pool) v = v4_or(v, eval(substitute(f->a, f->var, t)));
      break;
    }
  }
  if (cacheable) memo_[f.get()] = v;
  return v;
}

V4 eval_fde(const FormulaPtr& s, const NameAssignment& w, const SentenceSystem& sys) {
  Evaluator ev(sys, w);
  return ev.value(s);
}

NameAssignment jump_step(const NameAssignment& w, const SentenceSystem& sys) {
  Evaluator ev(sys, w);
  NameAssignment out(w.size());
  for (std::size_t i = 0; i < sys.name_order.size(); ++i) {
    const auto& body = sys.names.at(sys.name_order[i]);
    // A name denoting a sentence outside L_T is outside the jump's universe;
    // its truth atom evaluates to F and its own slot is pinned at N.
    if (language(body) != Lang::LT) {
      out[i] = V4::N();
      continue;
    }
    out[i] = ev.value(body);
  }
  return out;
}

bool is_jump_fixed_point(const NameAssignment& w, const SentenceSystem& sys) {
  return jump_step(w, sys) == w;
}

ClassFlags classify(const NameAssignment& w) {
  ClassFlags c;
  c.consistent = std::none_of(w.begin(), w.end(), [](V4 v) { return v == V4::B(); });
  c.complete = std::none_of(w.begin(), w.end(), [](V4 v) { return v == V4::N(); });
  c.symmetric = c.consistent || c.complete;
  c.mixed = !c.symmetric;
  return c;
}

FixedPoint least_fixed_point(const SentenceSystem& sys) {
  NameAssignment w(sys.name_order.size(), V4::N());
  // Monotone in the knowledge order, so at most 2*|names| strict steps.
  for (std::size_t step = 0; step <= 2 * w.size() + 1; ++step) {
    NameAssignment next = jump_step(w, sys);
    if (next == w) break;
    w = next;
  }
  FixedPoint fp;
  fp.values = w;
  fp.flags = classify(w);
  return fp;
}

std::vector<FixedPoint> enumerate_fixed_points(const SentenceSystem& sys, int max_names) {
  std::size_t k = sys.name_order.size();
  if (static_cast<int>(k) > max_names)
    throw EnumerationBudgetExceeded("enumeration over " + std::to_string(k) +
                                    " names exceeds cap " + std::to_string(max_names));
  std::vector<FixedPoint> out;
  // Odometer with the first name most significant; value order N < T < F < B.
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= 4;
  for (std::size_t code = 0; code < total; ++code) {
    NameAssignment cand(k);
    std::size_t cc = code;
    for (std::size_t i = k; i-- > 0;) {
      cand[i] = V4{static_cast<uint8_t>(cc & 3)};
      cc >>= 2;
    }
    if (is_jump_fixed_point(cand, sys)) {
      FixedPoint fp;
      fp.values = cand;
      fp.flags = classify(cand);
      out.push_back(fp);
    }
  }
  return out;
}

FixedPoint dual(const FixedPoint& fp) {
  FixedPoint out;
  out.values.reserve(fp.values.size());
  for (V4 v : fp.values) out.values.push_back(v4_conflate(v));
  out.flags = classify(out.values);
  return out;
}

bool is_determinate(V4 value, DetVariant variant) {
  switch (variant) {
    case DetVariant::Cons: return value != V4::N();
    case DetVariant::Comp: return value != V4::B();
    default: return value == V4::T() || value == V4::F();
  }
}

bool is_determinate(const FormulaPtr& s, const FixedPoint& fp, DetVariant variant,
                    const SentenceSystem& sys) {
  return is_determinate(eval_fde(s, fp.values, sys), variant);
}

std::vector<FormulaPtr> determinate_set(const FixedPoint& fp, DetVariant variant,
                                        const std::vector<FormulaPtr>& pool,
                                        const SentenceSystem& sys) {
  Evaluator ev(sys, fp.values);
  std::vector<FormulaPtr> out;
  for (const auto& s : pool) {
    if (language(s) != Lang::LT) continue;
    if (is_determinate(ev.value(s), variant)) out.push_back(s);
  }
  return out;
}

namespace {

bool strip_suffix(std::string& s, const std::string& suffix) {
  if (s.size() > suffix.size() && s.rfind(suffix) == s.size() - suffix.size()) {
    s.resize(s.size() - suffix.size());
    return true;
  }
  return false;
}

// Resolves a companion name against a base name table: __neg companions
// negate the value, __dual companions carry the same value (the assignment
// being extended is already the dual one).
V4 companion_value(const std::string& name, const NameAssignment& w,
                   const SentenceSystem& base) {
  std::string cur = name;
  bool flip = false;
  for (;;) {
    int idx = base.name_index(cur);
    if (idx >= 0) {
      V4 v = w[static_cast<std::size_t>(idx)];
      return flip ? v4_not(v) : v;
    }
    if (strip_suffix(cur, "__neg")) {
      flip = !flip;
      continue;
    }
    if (strip_suffix(cur, "__dual")) continue;
    throw Error("no derivable value for companion name " + name);
  }
}

}  // namespace

NameAssignment extend_to_companions(const NameAssignment& w, const SentenceSystem& original,
                                    const SentenceSystem& prepared) {
  NameAssignment out(prepared.name_order.size(), V4::N());
  for (std::size_t i = 0; i < prepared.name_order.size(); ++i)
    out[i] = companion_value(prepared.name_order[i], w, original);
  return out;
}

FixedPoint extend_fixed_point(const FixedPoint& fp, const SentenceSystem& from,
                              const SentenceSystem& to) {
  FixedPoint out;
  out.values = extend_to_companions(fp.values, from, to);
  out.flags = fp.flags;
  return out;
}

}  // namespace truthlab
