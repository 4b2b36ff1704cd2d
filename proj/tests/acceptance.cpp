// Acceptance suite: one line per criterion, exit code = number of failures.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "truthlab/scenarios.hpp"
#include "truthlab/schemas.hpp"
#include "truthlab/translations.hpp"

using namespace truthlab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

SentenceSystem load_sys(const std::string& id, int depth) {
  return generate_pools(parse_system(bundled_system_source(id)), depth);
}

bool scenario_ok(const std::string& id, Criterion& c) {
  auto rep = run_scenario(id);
  for (const auto& s : rep.steps)
    c.require(s.pass, id + ": " + s.name + (s.detail.empty() ? "" : " (" + s.detail + ")"));
  return rep.pass;
}

// 1. Fixed-point enumeration on {liar, truth-teller}: 8 points, 3/3/2, lfp N/N, < 1 s.
Criterion criterion1() {
  Criterion c;
  auto t0 = Clock::now();
  auto sys = load_sys("liar_tt", 2);
  auto fps = enumerate_fixed_points(sys);
  auto lfp = least_fixed_point(sys);
  double dt = seconds_since(t0);
  c.require(fps.size() == 8, "expected 8 fixed points, got " + std::to_string(fps.size()));
  int cons = 0, comp = 0, mixed = 0;
  for (const auto& fp : fps) {
    if (fp.flags.consistent) ++cons;
    if (fp.flags.complete) ++comp;
    if (fp.flags.mixed) ++mixed;
  }
  c.require(cons == 3 && comp == 3 && mixed == 2,
            "class counts " + std::to_string(cons) + "/" + std::to_string(comp) + "/" +
                std::to_string(mixed));
  c.require(lfp.values == NameAssignment{V4::N(), V4::N()}, "lfp is not {L:N, U:N}");
  c.require(dt < 1.0, "took " + std::to_string(dt) + " s");
  c.detail << "8 points, 3/3/2, " << dt << " s";
  return c;
}

// 2. Soundness suites at depth 2 on every bundled system, each suite < 60 s.
Criterion criterion2() {
  Criterion c;
  const std::vector<std::string> systems = {"liar_tt", "grounded", "tt2", "qtt", "delta_ld"};
  double worst = 0;
  int suites = 0;
  auto run_suite = [&](const ModelPtr& m, const std::string& th, const std::string& where) {
    auto t0 = Clock::now();
    CheckReport rep = check(m, th);
    double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    ++suites;
    c.require(rep.pass, th + " fails on " + where);
    c.require(dt < 60.0, th + " on " + where + " took " + std::to_string(dt) + " s");
  };
  for (const auto& sid : systems) {
    auto sys = load_sys(sid, 2);
    for (const auto& fp : enumerate_fixed_points(sys)) {
      std::string where = sid + " " + build_closure_model(fp, sys)->label;
      if (fp.flags.consistent) {
        auto closure = build_closure_model(fp, sys);
        run_suite(closure, "ckf", where);
        run_suite(closure, "cdplust-cons", where);
        run_suite(closure, "rts-cons", where);
        run_suite(build_inner_model(fp, sys), "kf-cons", where);
      }
      if (fp.flags.complete) {
        auto closure = build_closure_model(fp, sys);
        run_suite(closure, "ckf-cp", where);
        run_suite(closure, "cdplust-comp", where);
        run_suite(build_inner_model(fp, sys), "kf-comp", where);
      }
      if (fp.flags.symmetric) {
        auto closure = build_closure_model(fp, sys);
        run_suite(closure, "ckf-sym", where);
        run_suite(closure, "cdplust-sym", where);
      }
    }
  }
  c.detail << suites << " suites, slowest " << worst << " s";
  return c;
}

// 3. The mixed point {L:B, U:N} fails every determinateness definition with
//    the tau-or-lambda witness.
Criterion criterion3() {
  Criterion c;
  scenario_ok("mixed-failure", c);
  return c;
}

// 4. Lemma-B irregularity: CD+ passes while iterated-truth principles fail.
Criterion criterion4() {
  Criterion c;
  auto sys = load_sys("liar_tt", 2);
  auto lfp = least_fixed_point(sys);
  FormulaPtr lambda = f_not(f_truth(t_name("L")));
  FormulaPtr neg_lambda = f_truth(t_name("L"));

  auto m1 = build_lemma_b_model(lfp, sys, DetVariant::Cons, neg_lambda);
  auto t0 = Clock::now();
  CheckReport cd = check(m1, "cdplus");
  double dt = seconds_since(t0);
  c.require(cd.pass, "CD+ fails on the B = T(L) lemma-B model");
  c.require(dt < 60.0, "CD+ suite took " + std::to_string(dt) + " s");
  auto ce1 = find_counterexample(m1, "cdp-irregular:cor-i");
  c.require(ce1.has_value(), "no T14 forward failure on B = T(L)");
  if (ce1) {
    // the witness term names the liar
    const FormulaPtr& inst = ce1->instance;
    bool at_liar = false;
    if (inst->kind == Conn::Imp) {
      // T(quote(T(quote(T(t))))) -> T(quote(T(t))): dig out t
      const FormulaPtr& lhs = inst->a;
      if (lhs->kind == Conn::TruthAtom && lhs->t1.kind == TermKind::Quote) {
        const FormulaPtr& l2 = lhs->t1.payload;
        if (l2->kind == Conn::TruthAtom && l2->t1.kind == TermKind::Quote) {
          const FormulaPtr& l3 = l2->t1.payload;
          if (l3->kind == Conn::TruthAtom) {
            Denotation d = denote(l3->t1, *m1->sys);
            at_liar = d.is_sentence && equal(d.sentence, lambda);
          }
        }
      }
    }
    c.require(at_liar, "cor-i witness is not at the liar: " + ce1->printed);
  }

  auto m2 = build_lemma_b_model(lfp, sys, DetVariant::Cons, lambda);
  auto ce2 = find_counterexample(m2, "cdp-irregular:cor-ii");
  c.require(ce2.has_value(), "no T14 converse failure on B = liar");
  auto ce_dt = find_counterexample(m2, "cdp-irregular:dt-conv");
  c.require(ce_dt.has_value(), "TT/TF-to-D converse does not fail");

  // items (iii)-(vii) on truth-teller systems
  {
    auto tt2 = load_sys("tt2", 2);
    auto tt2_lfp = least_fixed_point(tt2);
    FormulaPtr tau0 = f_truth(t_name("U0"));
    FormulaPtr tau1 = f_truth(t_name("U1"));
    auto m3 = build_lemma_b_model(tt2_lfp, tt2, DetVariant::Cons, tau0);
    c.require(find_counterexample(m3, "cdp-irregular:cor-iii").has_value(), "(iii) holds");
    auto m4 = build_lemma_b_model(tt2_lfp, tt2, DetVariant::Cons, f_and(tau0, tau1));
    c.require(find_counterexample(m4, "cdp-irregular:cor-iv").has_value(), "(iv) holds");
    auto m5 = build_lemma_b_model(tt2_lfp, tt2, DetVariant::Cons, f_not(f_and(tau0, tau1)));
    c.require(find_counterexample(m5, "cdp-irregular:cor-v").has_value(), "(v) holds");
  }
  {
    auto qtt = load_sys("qtt", 2);
    auto qtt_lfp = least_fixed_point(qtt);
    FormulaPtr qbody = qtt.names.at("QT");
    auto m6 = build_lemma_b_model(qtt_lfp, qtt, DetVariant::Cons, qbody);
    c.require(find_counterexample(m6, "cdp-irregular:cor-vi").has_value(), "(vi) holds");
    auto m7 = build_lemma_b_model(qtt_lfp, qtt, DetVariant::Cons, f_not(qbody));
    c.require(find_counterexample(m7, "cdp-irregular:cor-vii").has_value(), "(vii) holds");
  }
  c.detail << "CD+ suite " << dt << " s";
  return c;
}

// 5. Categoricity perturbation and inner extraction.
Criterion criterion5() {
  Criterion c;
  scenario_ok("ncat", c);
  return c;
}

// 6. Internal vs deep theories.
Criterion criterion6() {
  Criterion c;
  scenario_ok("internal-deep", c);
  return c;
}

// 7. Duality.
Criterion criterion7() {
  Criterion c;
  scenario_ok("duality", c);
  return c;
}

// 8. The consistency-statement trio.
Criterion criterion8() {
  Criterion c;
  scenario_ok("cons-equiv", c);
  return c;
}

// 9. Translations and the typed theory.
Criterion criterion9() {
  Criterion c;
  scenario_ok("translations", c);
  scenario_ok("typed", c);
  return c;
}

// 10. The staged construction.
Criterion criterion10() {
  Criterion c;
  scenario_ok("fh-construction", c);
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char* title;
    Criterion (*fn)();
  };
  const Entry entries[] = {
      {"fixed-point enumeration (8 points, classes 3/3/2, lfp N/N, < 1 s)", criterion1},
      {"soundness suites at depth 2 (CKF, CD+|T, RTS, KF on every fixed point)", criterion2},
      {"mixed fixed point refutes all determinateness definitions", criterion3},
      {"lemma-B models: CD+ holds, iterated-truth principles fail", criterion4},
      {"categoricity: single toggles break CKF, extraction is the identity", criterion5},
      {"internal vs deep theories separate; deep disquotation is total", criterion6},
      {"duality: conflation, the dual map, and verdict swapping", criterion7},
      {"the three consistency statements have matching verdicts", criterion8},
      {"delta/tau/sigma translations are faithful; typed models pass CT[KF+Cons]", criterion9},
      {"staged determinateness construction stabilizes or reports its cycle", criterion10},
  };
  int failures = 0;
  int index = 0;
  for (const auto& e : entries) {
    ++index;
    Criterion c;
    try {
      c = e.fn();
    } catch (const std::exception& ex) {
      c.pass = false;
      c.detail << "exception: " << ex.what();
    }
    if (!c.pass) ++failures;
    std::printf("[%s] %2d. %s%s%s\n", c.pass ? "PASS" : "FAIL", index, e.title,
                c.detail.str().empty() ? "" : " -- ", c.detail.str().c_str());
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
