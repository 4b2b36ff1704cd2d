#include "doctest.h"
#include "truthlab/closure.hpp"
#include "truthlab/translations.hpp"

using namespace truthlab;

namespace {

FormulaPtr TQ(const FormulaPtr& f) { return f_truth(t_quote(f)); }

}  // namespace

TEST_CASE("delta expands D along the truly-true-or-truly-false definition") {
  auto sys = parse_system("base 0 1;\n");
  auto zz = f_eq(t_base("0"), t_base("0"));
  auto r = delta(f_det(t_quote(zz)), DetVariant::Cons, sys);
  // TT<0=0> or TF<0=0>, with falsity as the truth of the negation
  auto expect = f_or(TQ(f_truth(t_quote(zz))), TQ(f_truth(t_quote(f_not(zz)))));
  CHECK(equal(r.formula, expect));
  // comp and sym variants per their definitions
  auto rc = delta(f_det(t_quote(zz)), DetVariant::Comp, sys);
  auto tt = TQ(f_truth(t_quote(zz)));
  auto tf = TQ(f_truth(t_quote(f_not(zz))));
  CHECK(equal(rc.formula, f_or(f_not(tt), f_not(tf))));
  auto rs = delta(f_det(t_quote(zz)), DetVariant::Sym, sys);
  CHECK(equal(rs.formula, f_and(f_or(tt, tf), f_or(f_not(tt), f_not(tf)))));
}

TEST_CASE("delta is the identity on D-free input") {
  auto sys = parse_system("base 0 1;\nname L := not T(L);\n");
  auto f = f_truth(t_quote(f_not(f_truth(t_name("L")))));
  auto r = delta(f, DetVariant::Cons, sys);
  CHECK(r.formula.get() == f.get());
  CHECK(r.system.name_order == sys.name_order);
}

TEST_CASE("delta on a self-referential D-name introduces a looping companion") {
  auto sys = parse_system("base 0 1;\nname DL := D(DL);\n");
  auto r = delta(f_det(t_name("DL")), DetVariant::Cons, sys);
  REQUIRE(r.system.has_name("DL__delta_cons"));
  const auto& body = r.system.names.at("DL__delta_cons");
  // body := TT(DL__delta_cons) or TF(DL__delta_cons)
  auto comp = t_name("DL__delta_cons");
  auto expect = f_or(TQ(f_truth(comp)), TQ(f_truth(t_name("DL__delta_cons__neg"))));
  CHECK(equal(body, expect));
  // transparency at a fixed point of the extended system: the companion's
  // value solves v = (v or not v), so the least solution is N
  auto lfp = least_fixed_point(r.system);
  int idx = r.system.name_index("DL__delta_cons");
  CHECK(lfp.values[static_cast<std::size_t>(idx)] == V4::N());
  CHECK(eval_fde(body, lfp.values, r.system) == V4::N());
}

TEST_CASE("dual map fixes arithmetic and dualizes truth atoms") {
  auto sys = parse_system("base 0 1;\n");
  auto zz = f_eq(t_base("0"), t_base("0"));
  CHECK(equal(dual_c(zz, sys).formula, zz));
  auto r = dual_c(TQ(zz), sys);
  CHECK(equal(r.formula, f_not(f_truth(t_quote(f_not(zz))))));
  // c of c is semantically equivalent to the identity in every bundled model
  auto liar = generate_pools(parse_system("base 0 1;\nname L := not T(L);\nname U := T(U);\n"), 1);
  DualTranslator tr1(liar);
  DualTranslator tr2(tr1.system());
  for (const auto& fp : enumerate_fixed_points(liar)) {
    auto closure = build_closure_model(extend_fixed_point(fp, liar, tr2.system()), tr2.system());
    for (const auto& a : liar.sentence_pool) {
      if (language(a) != Lang::LT) continue;
      CHECK(closure->satisfies(a) == closure->satisfies(tr2.translate(tr1.translate(a))));
    }
  }
}

TEST_CASE("tau retypes outer truth and leaves quoted content alone") {
  auto inner = f_truth(t_name("L"));
  auto sys = parse_system("base 0 1;\nname L := not T(L);\n");
  (void)sys;
  auto f = f_truth(t_quote(inner));
  CHECK(equal(tau(f), f_ttruth(t_quote(inner))));
  CHECK_THROWS_AS(tau(f_det(t_quote(inner))), LanguageError);
}

TEST_CASE("sigma doubles untyped layers and singles typed ones") {
  auto sys = parse_system("base 0 1;\n");
  auto zz = f_eq(t_base("0"), t_base("0"));
  CHECK(equal(sigma(f_ttruth(t_quote(zz)), sys), TQ(zz)));
  CHECK(equal(sigma(TQ(zz), sys), TQ(TQ(zz))));
}

TEST_CASE("iota sends foreign sentences to the falsum and needs two base elements") {
  auto sys = parse_system("base 0 1;\n");
  auto zz = f_eq(t_base("0"), t_base("0"));
  auto foreign = f_ttruth(t_quote(zz));
  CHECK(equal(iota(foreign, sys), f_eq(t_base("0"), t_base("1"))));
  CHECK(equal(iota(zz, sys), zz));
  // cleanup reaches through truth atoms' quoted arguments
  auto nested = f_truth(t_quote(foreign));
  CHECK(equal(iota(nested, sys), f_truth(t_quote(f_eq(t_base("0"), t_base("1"))))));
  auto small = parse_system("base 0;\n");
  CHECK_THROWS_AS(iota(foreign, small), PreconditionViolated);
}

TEST_CASE("internal and deep theories of the liar closure separate") {
  auto sys = generate_pools(parse_system("base 0 1;\nname L := not T(L);\nname U := T(U);\n"
                                         "pool sentence (not T(L)) or (not not T(L));\n"
                                         "pool sentence (not T(L)) and (not not T(L));\n"),
                            1);
  auto lfp = least_fixed_point(sys);
  auto closure = build_closure_model(lfp, sys);
  std::vector<FormulaPtr> lt;
  for (const auto& s : sys.sentence_pool)
    if (language(s) == Lang::LT) lt.push_back(s);
  auto internal = extract_internal(*closure, lt);
  auto deep = extract_deep(*closure, lt);
  auto lambda = sys.names.at("L");
  auto em = f_or(lambda, f_not(lambda));
  auto has = [](const std::vector<FormulaPtr>& v, const FormulaPtr& f) {
    for (const auto& g : v)
      if (equal(f, g)) return true;
    return false;
  };
  CHECK(has(internal, em));
  CHECK(!has(deep, em));
  // deep set = the fixed point's truth set on the pool
  for (const auto& s : lt) {
    bool in_deep = has(deep, s);
    CHECK(in_deep == eval_fde(s, lfp.values, sys).t_bit());
  }
  // glut closure holds the contradiction deeply
  auto glut_closure = build_closure_model(dual(lfp), sys);
  auto contradiction = f_and(lambda, f_not(lambda));
  CHECK(has(extract_deep(*glut_closure, lt), contradiction));
}
