#include "truthlab/schemas.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "truthlab/translations.hpp"

namespace truthlab {

namespace {

using Json = nlohmann::ordered_json;

// -- shorthand builders ------------------------------------------------------

FormulaPtr TQ(const FormulaPtr& f) { return f_truth(t_quote(f)); }
// TT phi / TF phi for sentence metavariables (one inner truth/falsity layer).
FormulaPtr tt_sent(const FormulaPtr& f) { return TQ(TQ(f)); }
FormulaPtr tf_sent(const FormulaPtr& f) { return TQ(f_truth(t_quote(f_not(f)))); }
// TT t / TF t for term metavariables.
FormulaPtr tt_term(const Term& t) { return TQ(f_truth(t)); }
FormulaPtr tf_term(const Term& t, const SentenceSystem& sys) {
  return TQ(f_truth(neg_quote(t, sys)));
}
// TFT t and FT t (T15 and the equivalence trio).
FormulaPtr tft_term(const Term& t) { return TQ(f_truth(t_quote(f_not(f_truth(t))))); }
FormulaPtr ft_term(const Term& t) { return f_truth(t_quote(f_not(f_truth(t)))); }

FormulaPtr big_and(const std::vector<FormulaPtr>& fs, const SentenceSystem& sys) {
  if (fs.empty()) return truthy_equation(sys);
  FormulaPtr out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = f_and(out, fs[i]);
  return out;
}

FormulaPtr big_or(const std::vector<FormulaPtr>& fs, const SentenceSystem& sys) {
  if (fs.empty()) return falsy_equation(sys);
  FormulaPtr out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = f_or(out, fs[i]);
  return out;
}

// Arithmetical side condition Sent(val t), decided at instantiation.
FormulaPtr sent_condition(const Term& t, Lang lang, const SentenceSystem& sys) {
  Denotation d = denote(t, sys);
  bool is_sent = d.is_sentence && lang_within(language(d.sentence), lang);
  return is_sent ? truthy_equation(sys) : falsy_equation(sys);
}

Schema schema(std::string id, std::vector<MetaKind> metas, Lang lang, bool enrich, bool sent_only,
              std::function<FormulaPtr(const SchemaArgs&, const SentenceSystem&)> build) {
  Schema s;
  s.id = std::move(id);
  s.metavars = std::move(metas);
  s.metavar_lang = lang;
  s.quoted_enrichment = enrich;
  s.sentence_terms_only = sent_only;
  s.build = std::move(build);
  return s;
}

// -- KF ----------------------------------------------------------------------

std::vector<Schema> kf_schemas(Lang lang) {
  std::vector<Schema> out;
  out.push_back(schema("KF1", {MetaKind::Term, MetaKind::Term}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         auto eq = f_eq(a.terms[0], a.terms[1]);
                         return f_and(f_iff(TQ(eq), eq), f_iff(TQ(f_not(eq)), f_not(eq)));
                       }));
  out.push_back(schema("KF2", {MetaKind::Term}, lang, true, false,
                       [lang](const SchemaArgs& a, const SentenceSystem& sys) {
                         const Term& t = a.terms[0];
                         auto c1 = f_iff(TQ(f_truth(t)), f_truth(t));
                         Denotation d = denote(t, sys);
                         bool sent = d.is_sentence && lang_within(language(d.sentence), lang);
                         auto not_sent = sent ? falsy_equation(sys) : truthy_equation(sys);
                         auto c2 = f_iff(TQ(f_not(f_truth(t))),
                                         f_or(f_truth(neg_quote(t, sys)), not_sent));
                         return f_and(c1, c2);
                       }));
  out.push_back(schema("KF3", {MetaKind::Sentence}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& phi = a.sentences[0];
                         return f_iff(f_truth(t_quote(f_not(f_not(phi)))), TQ(phi));
                       }));
  out.push_back(schema("KF4", {MetaKind::Sentence, MetaKind::Sentence}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         auto c1 = f_iff(TQ(f_and(p, q)), f_and(TQ(p), TQ(q)));
                         auto c2 = f_iff(f_truth(t_quote(f_not(f_and(p, q)))),
                                         f_or(f_truth(t_quote(f_not(p))),
                                              f_truth(t_quote(f_not(q)))));
                         return f_and(c1, c2);
                       }));
  out.push_back(schema("KF5", {MetaKind::Formula1}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> univ, exis;
                         for (const auto& t : sys.term_pool) {
                           univ.push_back(TQ(substitute(body, v, t)));
                           exis.push_back(TQ(substitute(body, v, t)));
                         }
                         auto c1 = f_iff(TQ(f_forall(v, body)), big_and(univ, sys));
                         auto c2 = f_iff(TQ(f_exists(v, body)), big_or(exis, sys));
                         return f_and(c1, c2);
                       }));
  return out;
}

Schema cons_schema(Lang lang) {
  return schema("Cons", {MetaKind::Sentence}, lang, false, false,
                [](const SchemaArgs& a, const SentenceSystem&) {
                  const auto& p = a.sentences[0];
                  return f_imp(f_truth(t_quote(f_not(p))), f_not(TQ(p)));
                });
}

Schema comp_schema(Lang lang) {
  return schema("Comp", {MetaKind::Sentence}, lang, false, false,
                [](const SchemaArgs& a, const SentenceSystem&) {
                  const auto& p = a.sentences[0];
                  return f_imp(f_not(TQ(p)), f_truth(t_quote(f_not(p))));
                });
}

// -- CD+ ---------------------------------------------------------------------

std::vector<Schema> cdplus_schemas(Lang lang) {
  std::vector<Schema> out;
  out.push_back(schema("T1", {MetaKind::Term, MetaKind::Term}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         auto eq = f_eq(a.terms[0], a.terms[1]);
                         return f_iff(TQ(eq), eq);
                       }));
  out.push_back(schema("T2plus", {MetaKind::Term}, lang, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_iff(f_det(t), TQ(f_det(t)));
                       }));
  out.push_back(schema("T3", {MetaKind::Term}, lang, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_imp(f_det(t), f_iff(tt_term(t), f_truth(t)));
                       }));
  out.push_back(schema("T4", {MetaKind::Sentence}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         return f_iff(f_truth(t_quote(f_not(p))), f_not(TQ(p)));
                       }));
  out.push_back(schema("T5", {MetaKind::Sentence, MetaKind::Sentence}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(TQ(f_and(p, q)), f_and(TQ(p), TQ(q)));
                       }));
  out.push_back(schema("T6", {MetaKind::Formula1}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> inst;
                         for (const auto& t : sys.term_pool)
                           inst.push_back(TQ(substitute(body, v, t)));
                         return f_iff(TQ(f_forall(v, body)), big_and(inst, sys));
                       }));
  out.push_back(schema("D1", {MetaKind::Term, MetaKind::Term}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         return f_det(t_quote(f_eq(a.terms[0], a.terms[1])));
                       }));
  out.push_back(schema("D2", {MetaKind::Term}, lang, true, true,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_iff(f_det(t_quote(f_truth(t))), f_det(t));
                       }));
  out.push_back(schema("D3", {MetaKind::Term}, lang, true, true,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_iff(f_det(t_quote(f_det(t))), f_det(t));
                       }));
  out.push_back(schema("D4", {MetaKind::Sentence}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         return f_iff(f_det(t_quote(f_not(p))), f_det(t_quote(p)));
                       }));
  out.push_back(schema("D5", {MetaKind::Sentence, MetaKind::Sentence}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         auto dp = f_det(t_quote(p));
                         auto dq = f_det(t_quote(q));
                         auto fp_ = f_truth(t_quote(f_not(p)));
                         auto fq = f_truth(t_quote(f_not(q)));
                         auto rhs = f_or(f_and(dp, dq), f_or(f_and(dp, fp_), f_and(dq, fq)));
                         return f_iff(f_det(t_quote(f_and(p, q))), rhs);
                       }));
  out.push_back(schema("D6", {MetaKind::Formula1}, lang, false, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> all, wit;
                         for (const auto& t : sys.term_pool) {
                           auto inst = substitute(body, v, t);
                           all.push_back(f_det(t_quote(inst)));
                           wit.push_back(f_and(f_det(t_quote(inst)),
                                               f_truth(t_quote(f_not(inst)))));
                         }
                         auto rhs = f_or(big_and(all, sys), big_or(wit, sys));
                         return f_iff(f_det(t_quote(f_forall(v, body))), rhs);
                       }));
  out.push_back(schema("R1", {MetaKind::Formula1, MetaKind::Term, MetaKind::Term}, lang, false,
                       false, [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& [v, body] = a.formulas[0];
                         const Term& s = a.terms[0];
                         const Term& t = a.terms[1];
                         return f_imp(f_eq(s, t), f_iff(TQ(substitute(body, v, s)),
                                                        TQ(substitute(body, v, t))));
                       }));
  out.push_back(schema("R2", {MetaKind::Formula1, MetaKind::Term, MetaKind::Term}, lang, false,
                       false, [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& [v, body] = a.formulas[0];
                         const Term& s = a.terms[0];
                         const Term& t = a.terms[1];
                         return f_imp(f_eq(s, t),
                                      f_iff(f_det(t_quote(substitute(body, v, s))),
                                            f_det(t_quote(substitute(body, v, t)))));
                       }));
  return out;
}

// -- CKF ---------------------------------------------------------------------

std::vector<Schema> ckf_schemas(const std::string& final_axiom) {
  const Lang L = Lang::LT;
  std::vector<Schema> out;
  out.push_back(schema("T1", {MetaKind::Term, MetaKind::Term}, L, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         auto eq = f_eq(a.terms[0], a.terms[1]);
                         return f_iff(TQ(eq), eq);
                       }));
  out.push_back(schema("T4", {MetaKind::Sentence}, L, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         return f_iff(f_truth(t_quote(f_not(p))), f_not(TQ(p)));
                       }));
  out.push_back(schema("T5", {MetaKind::Sentence, MetaKind::Sentence}, L, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(TQ(f_and(p, q)), f_and(TQ(p), TQ(q)));
                       }));
  out.push_back(schema("T6", {MetaKind::Formula1}, L, false, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> inst;
                         for (const auto& t : sys.term_pool)
                           inst.push_back(TQ(substitute(body, v, t)));
                         return f_iff(TQ(f_forall(v, body)), big_and(inst, sys));
                       }));
  out.push_back(schema("T7", {MetaKind::Term, MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         auto eq = f_eq(a.terms[0], a.terms[1]);
                         return f_iff(tt_sent(eq), eq);
                       }));
  out.push_back(schema("T8", {MetaKind::Term, MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         auto eq = f_eq(a.terms[0], a.terms[1]);
                         return f_iff(tf_sent(eq), f_not(eq));
                       }));
  out.push_back(schema("T9", {MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         return f_iff(tt_sent(p), tt_sent(f_not(f_not(p))));
                       }));
  out.push_back(schema("T10", {MetaKind::Sentence, MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(tt_sent(f_and(p, q)), f_and(tt_sent(p), tt_sent(q)));
                       }));
  out.push_back(schema("T11", {MetaKind::Sentence, MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(tf_sent(f_and(p, q)), f_or(tf_sent(p), tf_sent(q)));
                       }));
  out.push_back(schema("T12", {MetaKind::Formula1}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> inst;
                         for (const auto& t : sys.term_pool)
                           inst.push_back(TQ(substitute(body, v, t)));
                         return f_iff(tt_sent(f_forall(v, body)), TQ(big_and(inst, sys)));
                       }));
  out.push_back(schema("T13", {MetaKind::Formula1}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> inst;
                         for (const auto& t : sys.term_pool)
                           inst.push_back(f_truth(t_quote(f_not(substitute(body, v, t)))));
                         return f_iff(tf_sent(f_forall(v, body)), TQ(big_or(inst, sys)));
                       }));
  out.push_back(schema("T14", {MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_iff(TQ(f_truth(t_quote(f_truth(t)))), tt_term(t));
                       }));
  out.push_back(schema("T15", {MetaKind::Term}, L, true, true,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const Term& t = a.terms[0];
                         return f_iff(tft_term(t), tf_term(t, sys));
                       }));
  if (final_axiom == "TDel") {
    out.push_back(schema("TDel", {MetaKind::Term}, L, true, false,
                         [](const SchemaArgs& a, const SentenceSystem&) {
                           const Term& t = a.terms[0];
                           return f_imp(tt_term(t), f_truth(t));
                         }));
  } else if (final_axiom == "TRep") {
    out.push_back(schema("TRep", {MetaKind::Term}, L, true, false,
                         [](const SchemaArgs& a, const SentenceSystem&) {
                           const Term& t = a.terms[0];
                           return f_imp(f_truth(t), tt_term(t));
                         }));
  } else {  // TSym
    out.push_back(schema("TSym", {MetaKind::Term, MetaKind::Term}, L, true, false,
                         [](const SchemaArgs& a, const SentenceSystem&) {
                           const Term& s = a.terms[0];
                           const Term& t = a.terms[1];
                           return f_or(f_imp(tt_term(t), f_truth(t)),
                                       f_imp(f_truth(s), tt_term(s)));
                         }));
  }
  out.push_back(schema("R1", {MetaKind::Formula1, MetaKind::Term, MetaKind::Term}, L, false,
                       false, [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& [v, body] = a.formulas[0];
                         const Term& s = a.terms[0];
                         const Term& t = a.terms[1];
                         return f_imp(f_eq(s, t), f_iff(TQ(substitute(body, v, s)),
                                                        TQ(substitute(body, v, t))));
                       }));
  return out;
}

std::vector<Schema> ckf_theorem_schemas() {
  const Lang L = Lang::LT;
  std::vector<Schema> out;
  out.push_back(schema("FIter", {MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const Term& t = a.terms[0];
                         auto ft = f_truth(neg_quote(t, sys));
                         return f_iff(TQ(ft), TQ(TQ(ft)));
                       }));
  out.push_back(schema("TCons", {MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         return f_imp(tf_sent(p), f_not(tt_sent(p)));
                       }));
  out.push_back(schema("TDisj", {MetaKind::Sentence, MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(tt_sent(f_or(p, q)), f_or(tt_sent(p), tt_sent(q)));
                       }));
  out.push_back(schema("FDisj", {MetaKind::Sentence, MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(tf_sent(f_or(p, q)), f_and(tf_sent(p), tf_sent(q)));
                       }));
  return out;
}

std::vector<Schema> rts_schemas() {
  return {schema("RTS", {MetaKind::Sentence}, Lang::LT, false, false,
                 [](const SchemaArgs& a, const SentenceSystem&) {
                   const auto& p = a.sentences[0];
                   return f_imp(f_det(t_quote(p)), f_iff(TQ(p), p));
                 })};
}

std::vector<Schema> sentencehood_schemas() {
  return {schema("Sent", {MetaKind::Term}, Lang::LT, true, false,
                 [](const SchemaArgs& a, const SentenceSystem& sys) {
                   const Term& t = a.terms[0];
                   return f_imp(tt_term(t), sent_condition(t, Lang::LT, sys));
                 })};
}

std::vector<Schema> cons_equiv_schemas() {
  const Lang L = Lang::LT;
  std::vector<Schema> out;
  out.push_back(schema("EqvI", {MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_imp(tt_term(t), f_truth(t));
                       }));
  out.push_back(schema("EqvII", {MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const Term& t = a.terms[0];
                         return f_imp(tf_term(t, sys), f_not(tt_term(t)));
                       }));
  out.push_back(schema("EqvIII", {MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_imp(tft_term(t), ft_term(t));
                       }));
  return out;
}

std::vector<Schema> ct_schemas() {
  const Lang L = Lang::LT;
  std::vector<Schema> out = kf_schemas(L);
  out.push_back(cons_schema(L));
  out.push_back(schema("TT1", {MetaKind::Term, MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& s = a.terms[0];
                         const Term& t = a.terms[1];
                         auto eq = f_eq(s, t);
                         auto c1 = f_iff(f_ttruth(t_quote(eq)), eq);
                         auto c2 = f_iff(f_ttruth(t_quote(f_truth(t))), f_truth(t));
                         return f_and(c1, c2);
                       }));
  out.push_back(schema("TT2", {MetaKind::Sentence}, L, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         return f_iff(f_ttruth(t_quote(f_not(p))), f_not(f_ttruth(t_quote(p))));
                       }));
  out.push_back(schema("TT3", {MetaKind::Sentence, MetaKind::Sentence}, L, false, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(f_ttruth(t_quote(f_and(p, q))),
                                      f_and(f_ttruth(t_quote(p)), f_ttruth(t_quote(q))));
                       }));
  out.push_back(schema("TT4", {MetaKind::Formula1}, L, false, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> inst;
                         for (const auto& t : sys.term_pool)
                           inst.push_back(f_ttruth(t_quote(substitute(body, v, t))));
                         return f_iff(f_ttruth(t_quote(f_forall(v, body))), big_and(inst, sys));
                       }));
  return out;
}

std::vector<Schema> irregular_schemas() {
  const Lang L = Lang::LT;
  std::vector<Schema> out;
  out.push_back(schema("cor-i", {MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_imp(TQ(f_truth(t_quote(f_truth(t)))), tt_term(t));
                       }));
  out.push_back(schema("cor-ii", {MetaKind::Term}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const Term& t = a.terms[0];
                         return f_imp(tt_term(t), TQ(f_truth(t_quote(f_truth(t)))));
                       }));
  out.push_back(schema("cor-iii", {MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         return f_iff(tt_sent(p), tt_sent(f_not(f_not(p))));
                       }));
  out.push_back(schema("cor-iv", {MetaKind::Sentence, MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(tt_sent(f_and(p, q)), f_and(tt_sent(p), tt_sent(q)));
                       }));
  out.push_back(schema("cor-v", {MetaKind::Sentence, MetaKind::Sentence}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         const auto& q = a.sentences[1];
                         return f_iff(tf_sent(f_and(p, q)), f_or(tf_sent(p), tf_sent(q)));
                       }));
  out.push_back(schema("cor-vi", {MetaKind::Formula1}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> inst;
                         for (const auto& t : sys.term_pool)
                           inst.push_back(TQ(substitute(body, v, t)));
                         return f_iff(tt_sent(f_forall(v, body)), TQ(big_and(inst, sys)));
                       }));
  out.push_back(schema("cor-vii", {MetaKind::Formula1}, L, true, false,
                       [](const SchemaArgs& a, const SentenceSystem& sys) {
                         const auto& [v, body] = a.formulas[0];
                         std::vector<FormulaPtr> inst;
                         for (const auto& t : sys.term_pool)
                           inst.push_back(f_truth(t_quote(f_not(substitute(body, v, t)))));
                         return f_iff(tf_sent(f_forall(v, body)), TQ(big_or(inst, sys)));
                       }));
  out.push_back(schema("dt-conv", {MetaKind::Sentence}, Lang::LD, true, false,
                       [](const SchemaArgs& a, const SentenceSystem&) {
                         const auto& p = a.sentences[0];
                         return f_imp(f_or(tt_sent(p), tf_sent(p)), f_det(t_quote(p)));
                       }));
  return out;
}

// -- registry ----------------------------------------------------------------

Theory make_theory(std::string id, Lang lang, std::optional<DetVariant> dv,
                   std::vector<Schema> schemas, std::vector<std::string> notes = {}) {
  Theory t;
  t.id = std::move(id);
  t.lang = lang;
  t.delta_variant = dv;
  t.schemas = std::move(schemas);
  t.semantic_only = std::move(notes);
  return t;
}

const std::vector<Theory>& all_theories() {
  static const std::vector<Theory> reg = [] {
    std::vector<Theory> r;
    r.push_back(make_theory("kf", Lang::LT, {}, kf_schemas(Lang::LT),
                            {"induction (semantic-only: vacuous over finite pools)"}));
    {
      auto s = kf_schemas(Lang::LT);
      s.push_back(cons_schema(Lang::LT));
      r.push_back(make_theory("kf-cons", Lang::LT, {}, std::move(s),
                              {"induction (semantic-only)"}));
    }
    {
      auto s = kf_schemas(Lang::LT);
      s.push_back(comp_schema(Lang::LT));
      r.push_back(make_theory("kf-comp", Lang::LT, {}, std::move(s),
                              {"induction (semantic-only)"}));
    }
    r.push_back(make_theory("cdplus", Lang::LD, {}, cdplus_schemas(Lang::LD),
                            {"induction with T and D (semantic-only)"}));
    r.push_back(make_theory("cdplust-cons", Lang::LT, DetVariant::Cons,
                            cdplus_schemas(Lang::LT), {"induction (semantic-only)"}));
    r.push_back(make_theory("cdplust-comp", Lang::LT, DetVariant::Comp,
                            cdplus_schemas(Lang::LT), {"induction (semantic-only)"}));
    r.push_back(make_theory("cdplust-sym", Lang::LT, DetVariant::Sym,
                            cdplus_schemas(Lang::LT), {"induction (semantic-only)"}));
    r.push_back(make_theory("ckf", Lang::LT, {}, ckf_schemas("TDel"),
                            {"induction extended to T (semantic-only)"}));
    r.push_back(make_theory("ckf-cp", Lang::LT, {}, ckf_schemas("TRep"),
                            {"induction extended to T (semantic-only)"}));
    r.push_back(make_theory("ckf-sym", Lang::LT, {}, ckf_schemas("TSym"),
                            {"induction extended to T (semantic-only)"}));
    r.push_back(make_theory("ckf-theorems", Lang::LT, {}, ckf_theorem_schemas()));
    r.push_back(make_theory("rts-cons", Lang::LT, DetVariant::Cons, rts_schemas()));
    r.push_back(make_theory("rts-comp", Lang::LT, DetVariant::Comp, rts_schemas()));
    r.push_back(make_theory("rts-sym", Lang::LT, DetVariant::Sym, rts_schemas()));
    r.push_back(make_theory("sentencehood", Lang::LT, {}, sentencehood_schemas()));
    r.push_back(make_theory("cons-equiv", Lang::LT, {}, cons_equiv_schemas()));
    r.push_back(make_theory("ct-kf-cons", Lang::LCT, {}, ct_schemas(),
                            {"induction (semantic-only)"}));
    r.push_back(make_theory("cdp-irregular", Lang::LD, {}, irregular_schemas()));
    return r;
  }();
  return reg;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

const std::vector<std::string>& theory_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& t : all_theories()) v.push_back(t.id);
    return v;
  }();
  return ids;
}

const Theory& theory(const std::string& id) {
  std::string key = lower(id);
  for (const auto& t : all_theories())
    if (t.id == key) return t;
  throw UnknownTheory("unknown theory: " + id);
}

std::vector<Schema> catalog(const std::string& theory_id) { return theory(theory_id).schemas; }

std::pair<const Theory*, const Schema*> find_schema(const std::string& schema_id) {
  std::string key = schema_id;
  std::string th;
  auto colon = key.find(':');
  if (colon != std::string::npos) {
    th = lower(key.substr(0, colon));
    key = key.substr(colon + 1);
  }
  if (key == "T16") key = "TDel";  // recorded alias
  for (const auto& t : all_theories()) {
    if (!th.empty() && t.id != th) continue;
    for (const auto& s : t.schemas)
      if (s.id == key) return {&t, &s};
  }
  throw UnknownTheory("unknown schema: " + schema_id);
}

// ---------------------------------------------------------------------------
// Instantiation
// ---------------------------------------------------------------------------

namespace {

struct Ranges {
  std::vector<FormulaPtr> sentences;
  std::vector<std::pair<std::string, FormulaPtr>> formulas;
  std::vector<Term> terms;
};

Ranges ranges_for(const Schema& s, const SentenceSystem& sys, const CheckLimits& limits) {
  Ranges r;
  bool want_sent = false, want_fml = false, want_term = false;
  for (auto mk : s.metavars) {
    if (mk == MetaKind::Sentence) want_sent = true;
    if (mk == MetaKind::Formula1) want_fml = true;
    if (mk == MetaKind::Term) want_term = true;
  }
  if (want_sent) {
    FormulaSet seen;
    auto push = [&](const FormulaPtr& f) {
      if (seen.insert(f).second) r.sentences.push_back(f);
    };
    for (const auto& p : sys.sentence_pool)
      if (lang_within(language(p), s.metavar_lang)) push(p);
    if (s.quoted_enrichment) {
      std::vector<FormulaPtr> base = r.sentences;
      for (const auto& p : base) push(f_truth(t_quote(p)));
      for (const auto& p : base) push(f_truth(t_quote(f_truth(t_quote(p)))));
    }
    if (static_cast<int>(r.sentences.size()) > limits.max_pool)
      throw PoolBudgetExceeded("sentence metavariable range exceeds cap");
  }
  if (want_fml) {
    for (const auto& fp : sys.formula_pool)
      if (lang_within(language(fp.second), s.metavar_lang)) r.formulas.push_back(fp);
  }
  if (want_term) {
    auto push = [&](const Term& t) {
      for (const auto& u : r.terms)
        if (u == t) return;
      r.terms.push_back(t);
    };
    for (const auto& t : sys.term_pool) push(t);
    for (const auto& p : sys.sentence_pool) push(t_quote(p));
    if (s.quoted_enrichment)
      for (const auto& p : sys.sentence_pool)
        if (lang_within(language(p), s.metavar_lang)) push(t_quote(f_truth(t_quote(p))));
    if (s.sentence_terms_only) {
      std::vector<Term> kept;
      for (const auto& t : r.terms) {
        Denotation d = denote(t, sys);
        if (d.is_sentence && lang_within(language(d.sentence), s.metavar_lang)) kept.push_back(t);
      }
      r.terms = std::move(kept);
    }
    if (static_cast<int>(r.terms.size()) > limits.max_pool + 64)
      throw PoolBudgetExceeded("term metavariable range exceeds cap");
  }
  return r;
}

class InstanceEnumerator {
 public:
  InstanceEnumerator(const Schema& s, const SentenceSystem& sys, const CheckLimits& limits)
      : schema_(s), sys_(sys), ranges_(ranges_for(s, sys, limits)) {
    total_ = 1;
    for (auto mk : s.metavars) {
      long n = 0;
      switch (mk) {
        case MetaKind::Sentence: n = static_cast<long>(ranges_.sentences.size()); break;
        case MetaKind::Formula1: n = static_cast<long>(ranges_.formulas.size()); break;
        case MetaKind::Term: n = static_cast<long>(ranges_.terms.size()); break;
      }
      if (n == 0) {
        total_ = 0;
        return;
      }
      if (total_ > limits.max_instances_per_schema / n + 1)
        throw PoolBudgetExceeded("schema " + s.id + " instance count exceeds cap");
      total_ *= n;
      if (total_ > limits.max_instances_per_schema)
        throw PoolBudgetExceeded("schema " + s.id + " instance count exceeds cap");
    }
    idx_.assign(s.metavars.size(), 0);
  }

  long total() const { return total_; }

  std::optional<FormulaPtr> next() {
    if (done_ || total_ == 0) return std::nullopt;
    SchemaArgs args;
    for (std::size_t i = 0; i < schema_.metavars.size(); ++i) {
      switch (schema_.metavars[i]) {
        case MetaKind::Sentence: args.sentences.push_back(ranges_.sentences[idx_[i]]); break;
        case MetaKind::Formula1: args.formulas.push_back(ranges_.formulas[idx_[i]]); break;
        case MetaKind::Term: args.terms.push_back(ranges_.terms[idx_[i]]); break;
      }
    }
    FormulaPtr inst = schema_.build(args, sys_);
    // odometer, last metavariable fastest
    for (std::size_t i = schema_.metavars.size(); i-- > 0;) {
      std::size_t n = 0;
      switch (schema_.metavars[i]) {
        case MetaKind::Sentence: n = ranges_.sentences.size(); break;
        case MetaKind::Formula1: n = ranges_.formulas.size(); break;
        case MetaKind::Term: n = ranges_.terms.size(); break;
      }
      if (++idx_[i] < n) return inst;
      idx_[i] = 0;
    }
    done_ = true;
    return inst;
  }

 private:
  const Schema& schema_;
  const SentenceSystem& sys_;
  Ranges ranges_;
  std::vector<std::size_t> idx_;
  long total_ = 0;
  bool done_ = false;
};

}  // namespace

std::vector<FormulaPtr> instantiate(const Schema& s, const SentenceSystem& sys,
                                    const CheckLimits& limits) {
  InstanceEnumerator e(s, sys, limits);
  std::vector<FormulaPtr> out;
  out.reserve(static_cast<std::size_t>(e.total()));
  while (auto f = e.next()) out.push_back(*f);
  return out;
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

CheckReport check(const ModelPtr& m, const std::string& theory_id, const CheckLimits& limits) {
  const Theory& th = theory(theory_id);
  bool lang_ok = th.lang == Lang::LT || th.lang == m->model_lang();
  if (!lang_ok) throw LanguageError("theory " + th.id + " is not in the model's language");
  CheckReport rep;
  rep.theory = th.id;
  rep.model = m->label;
  rep.fragment_sentences = static_cast<int>(m->sys->sentence_pool.size());
  rep.fragment_terms = static_cast<int>(m->sys->term_pool.size());
  rep.fragment_formulas = static_cast<int>(m->sys->formula_pool.size());
  rep.fragment_depth = m->sys->generated_depth;
  rep.semantic_only = th.semantic_only;

  std::unique_ptr<DeltaTranslator> tr;
  if (th.delta_variant) tr = std::make_unique<DeltaTranslator>(*th.delta_variant, *m->sys);

  for (const auto& s : th.schemas) {
    SchemaResult sr;
    sr.id = s.id;
    InstanceEnumerator e(s, *m->sys, limits);
    while (auto inst = e.next()) {
      ++sr.instances;
      FormulaPtr to_eval = *inst;
      if (tr) to_eval = tr->translate(to_eval);
      auto v = m->eval_opt(to_eval);
      if (!v.has_value()) {
        ++sr.skipped;
        continue;
      }
      if (!*v) {
        ++sr.failures_total;
        if (static_cast<int>(sr.failures.size()) < limits.failure_cap)
          sr.failures.push_back(to_text(*inst));
      }
    }
    if (sr.failures_total > 0) rep.pass = false;
    rep.schemas.push_back(std::move(sr));
  }
  return rep;
}

std::optional<Counterexample> find_counterexample(const ModelPtr& m, const std::string& schema_id,
                                                  const CheckLimits& limits) {
  auto [th, s] = find_schema(schema_id);
  std::unique_ptr<DeltaTranslator> tr;
  if (th->delta_variant) tr = std::make_unique<DeltaTranslator>(*th->delta_variant, *m->sys);
  InstanceEnumerator e(*s, *m->sys, limits);
  while (auto inst = e.next()) {
    FormulaPtr to_eval = *inst;
    if (tr) to_eval = tr->translate(to_eval);
    auto v = m->eval_opt(to_eval);
    if (v.has_value() && !*v) {
      Counterexample c;
      c.schema_id = th->id + ":" + s->id;
      c.instance = *inst;
      c.printed = to_text(*inst);
      return c;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

std::string CheckReport::to_json() const {
  Json j;
  j["theory"] = theory;
  j["model"] = model;
  j["fragment"] = Json{{"sentences", fragment_sentences},
                       {"terms", fragment_terms},
                       {"formulas", fragment_formulas},
                       {"depth", fragment_depth}};
  Json arr = Json::array();
  for (const auto& s : schemas) {
    Json js;
    js["id"] = s.id;
    js["instances"] = s.instances;
    if (s.skipped > 0) js["skipped"] = s.skipped;
    Json fails = Json::array();
    for (const auto& f : s.failures) fails.push_back(f);
    js["failures"] = fails;
    if (s.failures_total > static_cast<long>(s.failures.size()))
      js["failures_total"] = s.failures_total;
    arr.push_back(js);
  }
  j["schemas"] = arr;
  j["verdict"] = pass ? "pass" : "fail";
  return j.dump(2);
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  os << "theory " << theory << " on " << model << "\n";
  os << "fragment: sentences=" << fragment_sentences << " terms=" << fragment_terms
     << " formulas=" << fragment_formulas << " depth=" << fragment_depth << "\n";
  for (const auto& s : schemas) {
    os << "  " << s.id << ": " << s.instances << " instances";
    if (s.skipped) os << ", " << s.skipped << " skipped";
    if (s.failures_total) {
      os << ", " << s.failures_total << " failures";
      for (const auto& f : s.failures) os << "\n    fail: " << f;
    }
    os << "\n";
  }
  for (const auto& n : semantic_only) os << "  [not checked] " << n << "\n";
  os << "verdict: " << (pass ? "pass" : "fail") << "\n";
  return os.str();
}

}  // namespace truthlab
