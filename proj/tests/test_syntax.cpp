#include <algorithm>
#include <functional>
#include <set>

#include "doctest.h"
#include "truthlab/syntax.hpp"

using namespace truthlab;

namespace {

std::set<std::string> pool_texts(const SentenceSystem& sys) {
  std::set<std::string> out;
  for (const auto& s : sys.sentence_pool) out.insert(to_text(s));
  return out;
}

}  // namespace

TEST_CASE("parse_system maps the liar declaration to its constructor form") {
  auto sys = parse_system("name L := not T(L);\n");
  REQUIRE(sys.name_order == std::vector<std::string>{"L"});
  CHECK(equal(sys.names.at("L"), f_not(f_truth(t_name("L")))));
}

TEST_CASE("parse_system accepts the truth-teller with a base declaration") {
  auto sys = parse_system("name U := T(U); base 0 1;\n");
  CHECK(sys.base == std::vector<std::string>{"0", "1"});
  CHECK(equal(sys.names.at("U"), f_truth(t_name("U"))));
}

TEST_CASE("unresolved names are a validation error") {
  CHECK_THROWS_AS(parse_system("name X := T(Y);\n"), ValidationError);
}

TEST_CASE("cyclic aliases are rejected") {
  CHECK_THROWS_AS(parse_system("term a := alias b;\nterm b := alias a;\n"), ValidationError);
}

TEST_CASE("open name bodies are rejected") {
  CHECK_THROWS_AS(parse_system("name X := T(v);\n"), ValidationError);
}

TEST_CASE("reserved identifiers are rejected") {
  CHECK_THROWS_AS(parse_system("name X__y := 0 = 0; base 0;\n"), ParseError);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_system("base 0;\nname L := ;\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("denotation follows the quotation laws") {
  auto sys = parse_system("base 0 1;\nname L := not T(L);\nterm a := base 0;\n");
  auto zz = f_eq(t_base("0"), t_base("0"));
  // den(Quote(phi)) = SentenceVal(phi)
  Denotation d = denote(t_quote(zz), sys);
  REQUIRE(d.is_sentence);
  CHECK(equal(d.sentence, zz));
  // den(NameRef L) = the body
  d = denote(t_name("L"), sys);
  REQUIRE(d.is_sentence);
  CHECK(equal(d.sentence, f_not(f_truth(t_name("L")))));
  // den(BaseConst 1) = base element
  d = denote(t_base("1"), sys);
  CHECK(!d.is_sentence);
  CHECK(d.base_id == "1");
  // aliases chase to their target
  CHECK(denote(t_alias("a"), sys) == denote(t_base("0"), sys));
}

TEST_CASE("substitution replaces free occurrences only and respects quotes") {
  Term c = t_base("0");
  // substitute into an atom
  auto f1 = f_truth(t_var("v"));
  CHECK(equal(substitute(f1, "v", t_quote(f_eq(t_base("0"), t_base("0")))),
              f_truth(t_quote(f_eq(t_base("0"), t_base("0"))))));
  // bound occurrences untouched
  auto f2 = f_forall("v", f_truth(t_var("v")));
  CHECK(equal(substitute(f2, "v", c), f2));
  // quote payloads are opaque
  auto f3 = f_eq(t_quote(f_truth(t_var("v"))), t_var("v"));
  auto r3 = substitute(f3, "v", c);
  CHECK(equal(r3, f_eq(t_quote(f_truth(t_var("v"))), c)));
}

TEST_CASE("liar system at depth 0 closes to the hand-computed pool") {
  auto sys = parse_system("base 0 1;\nname L := not T(L);\n");
  std::set<std::string> expect = {"not T(name L)", "T(name L)", "base 0 = base 0",
                                  "base 0 = base 1"};
  CHECK(pool_texts(sys) == expect);
}

TEST_CASE("depth 1 generation adds exactly the one-step combinations") {
  auto sys = parse_system("base 0;\nname L := not T(L);\n");
  sys = generate_pools(sys, 1);
  auto texts = pool_texts(sys);
  CHECK(texts.count("T(quote(not T(name L)))"));
  CHECK(texts.count("not not T(name L)"));
  CHECK(texts.count("(not T(name L) and base 0 = base 0)"));
  // oracle: one application of {not, and, T-quote} over the seeds, then the
  // subsentence closure (which only re-adds seeds and their parts here)
  std::vector<FormulaPtr> seeds = {f_not(f_truth(t_name("L"))),
                                   f_eq(t_base("0"), t_base("0"))};
  std::set<std::string> expect = {"not T(name L)", "T(name L)", "base 0 = base 0"};
  for (const auto& a : seeds) {
    expect.insert(to_text(f_not(a)));
    expect.insert(to_text(f_truth(t_quote(a))));
    for (const auto& b : seeds) expect.insert(to_text(f_and(a, b)));
  }
  CHECK(texts == expect);
}

TEST_CASE("pool budget errors on small caps") {
  auto sys = parse_system("base 0;\nname A := T(A);\nname B := T(B);\nname C := T(C);\n", 10);
  CHECK_THROWS_AS(generate_pools(sys, 1, 10), PoolBudgetExceeded);
}

TEST_CASE("generate_pools is idempotent for a fixed depth") {
  auto sys = parse_system("base 0 1;\nname L := not T(L);\nname U := T(U);\n");
  auto g1 = generate_pools(sys, 2);
  auto g2 = generate_pools(g1, 2);
  CHECK(g1 == g2);
  // and on a quantified system, where closure feeds back through quote terms
  auto q = parse_system("base 0;\nname QT := forall v . ((v = v) and T(QT));\n");
  auto q1 = generate_pools(q, 1);
  auto q2 = generate_pools(q1, 1);
  CHECK(q1 == q2);
}

TEST_CASE("dependency closure is monotone and extensive") {
  auto small = parse_system("base 0 1;\nname L := not T(L);\n");
  auto big = parse_system("base 0 1;\nname L := not T(L);\npool sentence T(quote(0 = 0));\n");
  auto texts_small = pool_texts(small);
  auto texts_big = pool_texts(big);
  for (const auto& t : texts_small) CHECK(texts_big.count(t));  // monotone
  CHECK(texts_big.count("T(quote(base 0 = base 0))"));          // extensive
}

TEST_CASE("print then parse round-trips generated systems") {
  const char* sources[] = {
      "base 0 1;\nname L := not T(L);\nname U := T(U);\nterm a := base 0;\n"
      "pool sentence T(U) or not T(L);\npool formula v . T(v);\n",
      "base 0;\nname QT := forall v . ((v = v) and T(QT));\n",
      "base 0 1;\nname G := T(quote(0 = 0));\npool sentence D(quote(0 = 0));\n",
  };
  for (const char* src : sources) {
    auto sys = parse_system(src);
    auto back = parse_system(print_system(sys));
    CHECK(sys == back);
    auto deep = generate_pools(sys, 2);
    auto deep_back = generate_pools(parse_system(print_system(deep)), 2);
    CHECK(deep == deep_back);
  }
}

TEST_CASE("language tags scan displayed atoms only") {
  auto lt = f_truth(t_quote(f_det(t_base("0"))));  // D under a quote stays L_T
  CHECK(language(lt) == Lang::LT);
  CHECK(language(f_det(t_base("0"))) == Lang::LD);
  CHECK(language(f_ttruth(t_base("0"))) == Lang::LCT);
  CHECK(language(f_and(f_det(t_base("0")), f_ttruth(t_base("0")))) == Lang::Mixed);
}

TEST_CASE("normalization eliminates or, imp and exists") {
  auto sys = parse_system("base 0;\n");
  auto f = parse_formula_text("exists v . (T(v) or (0 = 0 -> T(v)))", sys, true);
  auto n = normalize(f);
  std::function<bool(const FormulaPtr&)> core_only = [&](const FormulaPtr& g) -> bool {
    switch (g->kind) {
      case Conn::Or:
      case Conn::Imp:
      case Conn::Exists:
        return false;
      case Conn::Not:
      case Conn::ForAll:
        return core_only(g->a);
      case Conn::And:
        return core_only(g->a) && core_only(g->b);
      default:
        return true;
    }
  };
  CHECK(core_only(n));
}

TEST_CASE("neg_quote toggles quotes and swaps name companions") {
  auto sys = with_neg_companions(parse_system("base 0;\nname L := not T(L);\n"));
  auto zz = f_eq(t_base("0"), t_base("0"));
  CHECK(to_text(neg_quote(t_quote(zz), sys)) == "quote(not (base 0 = base 0))");
  CHECK(to_text(neg_quote(t_name("L"), sys)) == "name L__neg");
  CHECK(to_text(neg_quote(t_name("L__neg"), sys)) == "name L");
  CHECK(equal(sys.names.at("L__neg"), f_not(f_not(f_truth(t_name("L"))))));
}
