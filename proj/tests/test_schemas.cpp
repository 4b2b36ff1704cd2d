#include "doctest.h"
#include "truthlab/schemas.hpp"

using namespace truthlab;

TEST_CASE("catalog sizes follow the axiom listings") {
  CHECK(catalog("ckf").size() == 15);      // T1, T4-T6, T7-T15, TDel, R1
  CHECK(catalog("ckf-cp").size() == 15);   // TDel replaced by TRep
  CHECK(catalog("ckf-sym").size() == 15);  // TDel replaced by TSym
  CHECK(catalog("cdplus").size() == 14);   // T1-T6 with T2+, D1-D6, R1, R2
  CHECK(catalog("cdplust-cons").size() == 14);
  CHECK(catalog("kf").size() == 5);
  CHECK(catalog("kf-cons").size() == 6);
  CHECK(catalog("ct-kf-cons").size() == 10);  // KF1-5, Cons, TT1-TT4
  CHECK(catalog("cons-equiv").size() == 3);
  CHECK_THROWS_AS(catalog("X"), UnknownTheory);
}

TEST_CASE("the TDel alias T16 resolves") {
  auto [th, s] = find_schema("T16");
  CHECK(th->id == "ckf");
  CHECK(s->id == "TDel");
  CHECK_THROWS_AS(find_schema("nope"), UnknownTheory);
}

TEST_CASE("induction is recorded as semantic-only, not instantiated") {
  CHECK(!theory("cdplus").semantic_only.empty());
  for (const auto& s : theory("cdplus").schemas) CHECK(s.id.find("induction") == std::string::npos);
}

TEST_CASE("instantiation counts over crafted pools") {
  // a five-sentence pool: T4 has 5 instances, T5 has 25
  auto sys5 = parse_system(
      "base 0 1;\n"
      "pool sentence not (0 = 0);\n"
      "pool sentence T(quote(0 = 0));\n"
      "pool sentence 1 = 1;\n");
  REQUIRE(sys5.sentence_pool.size() == 5);
  const Theory& ckf = theory("ckf");
  const Schema* t4 = nullptr;
  const Schema* t5 = nullptr;
  for (const auto& s : ckf.schemas) {
    if (s.id == "T4") t4 = &s;
    if (s.id == "T5") t5 = &s;
  }
  CHECK(instantiate(*t4, sys5).size() == 5);
  CHECK(instantiate(*t5, sys5).size() == 25);

  // R1 over term pool {0, alias a := 0, quote(0=0)} and two pool formulas
  auto sysr = parse_system(
      "base 0;\n"
      "term a := base 0;\n"
      "pool term quote(0 = 0);\n"
      "pool formula v . T(v);\n"
      "pool formula v . not T(v);\n");
  REQUIRE(sysr.term_pool.size() == 3);
  REQUIRE(sysr.sentence_pool.size() == 1);
  const Schema* r1 = nullptr;
  for (const auto& s : ckf.schemas)
    if (s.id == "R1") r1 = &s;
  CHECK(instantiate(*r1, sysr).size() == 18);
}

TEST_CASE("quoted enrichment widens iterated-truth ranges only") {
  auto sys = parse_system("base 0 1;\npool sentence 1 = 1;\n");  // pool of 3
  REQUIRE(sys.sentence_pool.size() == 3);
  const Theory& ckf = theory("ckf");
  const Schema* t4 = nullptr;
  const Schema* t9 = nullptr;
  for (const auto& s : ckf.schemas) {
    if (s.id == "T4") t4 = &s;
    if (s.id == "T9") t9 = &s;
  }
  CHECK(instantiate(*t4, sys).size() == 3);
  CHECK(instantiate(*t9, sys).size() == 9);  // pool + singly/doubly quoted
}

TEST_CASE("check passes CKF on a consistent closure and reports fragments") {
  auto sys = generate_pools(
      parse_system("base 0 1;\nname L := not T(L);\nname U := T(U);\n"), 1);
  auto closure = build_closure_model(least_fixed_point(sys), sys);
  CheckReport rep = check(closure, "ckf");
  CHECK(rep.pass);
  CHECK(rep.theory == "ckf");
  CHECK(rep.fragment_depth == 1);
  CHECK(rep.schemas.size() == 15);
  for (const auto& s : rep.schemas) CHECK(s.failures_total == 0);
}

TEST_CASE("check rejects theories outside the model language") {
  auto sys = parse_system("base 0 1;\nname L := not T(L);\n");
  auto closure = build_closure_model(least_fixed_point(sys), sys);
  CHECK_THROWS_AS(check(closure, "cdplus"), LanguageError);
}

TEST_CASE("find_counterexample reports the first failing instance or none") {
  auto sys = generate_pools(
      parse_system("base 0 1;\nname L := not T(L);\nname U := T(U);\n"), 1);
  auto fps = enumerate_fixed_points(sys);
  // mixed point {L:B, U:N} refutes TDel
  const FixedPoint* mixed = nullptr;
  for (const auto& fp : fps)
    if (fp.values == NameAssignment{V4::B(), V4::N()}) mixed = &fp;
  REQUIRE(mixed);
  auto closure = build_closure_model(*mixed, sys);
  auto ce = find_counterexample(closure, "ckf:TDel");
  REQUIRE(ce.has_value());
  CHECK(ce->schema_id == "ckf:TDel");
  // and none on the least fixed point's closure
  auto good = build_closure_model(least_fixed_point(sys), sys);
  CHECK(!find_counterexample(good, "ckf:TDel").has_value());
}

TEST_CASE("instance budget errors are PoolBudgetExceeded") {
  auto sys = generate_pools(
      parse_system("base 0 1;\nname L := not T(L);\nname U := T(U);\n"), 1);
  const Theory& ckf = theory("ckf");
  const Schema* t5 = nullptr;
  for (const auto& s : ckf.schemas)
    if (s.id == "T5") t5 = &s;
  CheckLimits tight;
  tight.max_instances_per_schema = 10;
  CHECK_THROWS_AS(instantiate(*t5, sys, tight), PoolBudgetExceeded);
}

TEST_CASE("JSON reports are byte-stable") {
  auto sys = generate_pools(parse_system("base 0 1;\nname L := not T(L);\n"), 1);
  auto closure = build_closure_model(least_fixed_point(sys), sys);
  auto a = check(closure, "ckf").to_json();
  auto closure2 = build_closure_model(least_fixed_point(sys), sys);
  auto b = check(closure2, "ckf").to_json();
  CHECK(a == b);
  CHECK(a.find("\"theory\"") != std::string::npos);
  CHECK(a.find("\"fragment\"") != std::string::npos);
  CHECK(a.find("\"verdict\"") != std::string::npos);
}
