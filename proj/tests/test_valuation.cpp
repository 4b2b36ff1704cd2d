#include <random>

#include "doctest.h"
#include "truthlab/valuation.hpp"

using namespace truthlab;

namespace {

const V4 kAll[] = {V4::N(), V4::T(), V4::F(), V4::B()};

SentenceSystem liar_tt() {
  return parse_system("base 0 1;\nname L := not T(L);\nname U := T(U);\n");
}

}  // namespace

TEST_CASE("V4 lattice laws") {
  // negation swaps T/F and fixes N/B
  CHECK(v4_not(V4::T()) == V4::F());
  CHECK(v4_not(V4::F()) == V4::T());
  CHECK(v4_not(V4::N()) == V4::N());
  CHECK(v4_not(V4::B()) == V4::B());
  for (V4 a : kAll) {
    CHECK(v4_not(v4_not(a)) == a);
    CHECK(v4_conflate(v4_conflate(a)) == a);
    for (V4 b : kAll) {
      // De Morgan over the truth order
      CHECK(v4_not(v4_and(a, b)) == v4_or(v4_not(a), v4_not(b)));
      // conflation is a lattice automorphism for the truth operations
      CHECK(v4_conflate(v4_and(a, b)) == v4_and(v4_conflate(a), v4_conflate(b)));
      CHECK(v4_conflate(v4_not(a)) == v4_not(v4_conflate(a)));
      // knowledge-order monotonicity of the truth operations
      for (V4 a2 : kAll) {
        if (!leq_k(a, a2)) continue;
        CHECK(leq_k(v4_not(a), v4_not(a2)));
        for (V4 b2 : kAll) {
          if (!leq_k(b, b2)) continue;
          CHECK(leq_k(v4_and(a, b), v4_and(a2, b2)));
          CHECK(leq_k(v4_or(a, b), v4_or(a2, b2)));
        }
      }
    }
  }
  CHECK(v4_and(V4::N(), V4::B()) == V4::F());
  CHECK(v4_or(V4::N(), V4::B()) == V4::T());
}

TEST_CASE("eval_fde matches the jump clauses") {
  auto sys = liar_tt();
  NameAssignment w{V4::N(), V4::N()};
  auto lambda = sys.names.at("L");
  // N is negation-fixed
  CHECK(eval_fde(lambda, w, sys) == V4::N());
  // grounded truth ascription
  CHECK(eval_fde(f_truth(t_quote(f_eq(t_base("0"), t_base("0")))), w, sys) == V4::T());
  // B is negation-fixed
  w[0] = V4::B();
  CHECK(eval_fde(lambda, w, sys) == V4::B());
  // truth over a non-sentence denotation is false
  CHECK(eval_fde(f_truth(t_base("0")), w, sys) == V4::F());
}

TEST_CASE("jump steps") {
  auto sys = liar_tt();
  NameAssignment w{V4::N(), V4::T()};
  auto next = jump_step(w, sys);
  CHECK(next[0] == V4::N());  // liar stays N
  CHECK(next[1] == V4::T());  // truth-teller keeps T
  w = {V4::T(), V4::N()};
  next = jump_step(w, sys);
  CHECK(next[0] == V4::F());  // not a fixed point: not T flips to F
}

TEST_CASE("jump is knowledge-monotone (randomized pairs)") {
  auto sys = liar_tt();
  std::mt19937 rng(20240811);
  for (int i = 0; i < 200; ++i) {
    NameAssignment lo(2), hi(2);
    for (int k = 0; k < 2; ++k) {
      uint8_t a = static_cast<uint8_t>(rng() & 3);
      uint8_t extra = static_cast<uint8_t>(rng() & 3);
      lo[k] = V4{a};
      hi[k] = V4{static_cast<uint8_t>(a | extra)};
    }
    auto jlo = jump_step(lo, sys);
    auto jhi = jump_step(hi, sys);
    for (int k = 0; k < 2; ++k) CHECK(leq_k(jlo[k], jhi[k]));
  }
}

TEST_CASE("least fixed points") {
  auto liar = parse_system("base 0;\nname L := not T(L);\n");
  auto lfp = least_fixed_point(liar);
  CHECK(lfp.values == NameAssignment{V4::N()});

  auto grounded = parse_system("base 0 1;\nname G := T(quote(0 = 0));\n");
  CHECK(least_fixed_point(grounded).values == NameAssignment{V4::T()});

  // oracle: exhaustive enumeration confirms {L:N, U:N} is knowledge-least
  auto sys = liar_tt();
  auto fps = enumerate_fixed_points(sys);
  auto least = least_fixed_point(sys);
  CHECK(least.values == NameAssignment{V4::N(), V4::N()});
  for (const auto& fp : fps) {
    bool leq = true;
    for (std::size_t k = 0; k < fp.values.size(); ++k)
      if (!leq_k(least.values[k], fp.values[k])) leq = false;
    CHECK(leq);
  }
}

TEST_CASE("enumeration of the liar / truth-teller system") {
  auto sys = liar_tt();
  auto fps = enumerate_fixed_points(sys);
  REQUIRE(fps.size() == 8);
  // brute-force oracle over all 16 candidates, using only eval_fde
  std::vector<NameAssignment> expected;
  for (uint8_t a = 0; a < 4; ++a)
    for (uint8_t b = 0; b < 4; ++b) {
      NameAssignment w{V4{a}, V4{b}};
      Evaluator ev(sys, w);
      if (ev.value(sys.names.at("L")) == w[0] && ev.value(sys.names.at("U")) == w[1])
        expected.push_back(w);
    }
  REQUIRE(expected.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(fps[i].values == expected[i]);
  // frozen classification counts: 3 consistent / 3 complete / 2 mixed
  int cons = 0, comp = 0, mixed = 0;
  for (const auto& fp : fps) {
    if (fp.flags.consistent) ++cons;
    if (fp.flags.complete) ++comp;
    if (fp.flags.mixed) ++mixed;
  }
  CHECK(cons == 3);
  CHECK(comp == 3);
  CHECK(mixed == 2);
  // grounded names are forced
  auto grounded = parse_system("base 0 1;\nname G := T(quote(0 = 0));\n");
  CHECK(enumerate_fixed_points(grounded).size() == 1);
}

TEST_CASE("enumeration budget") {
  std::string src = "base 0;\n";
  for (char c = 'A'; c <= 'E'; ++c) src += std::string("name U") + c + " := T(U" + c + ");\n";
  auto sys = parse_system(src);
  CHECK_THROWS_AS(enumerate_fixed_points(sys, 4), EnumerationBudgetExceeded);
}

TEST_CASE("classification flags") {
  CHECK(classify({V4::N(), V4::T()}).consistent);
  CHECK(classify({V4::N(), V4::T()}).symmetric);
  CHECK(classify({V4::B(), V4::B()}).complete);
  CHECK(classify({V4::B(), V4::B()}).symmetric);
  auto fl = classify({V4::B(), V4::N()});
  CHECK(fl.mixed);
  CHECK(!fl.symmetric);
}

TEST_CASE("dual swaps gaps and gluts and is an involution") {
  FixedPoint fp;
  fp.values = {V4::N(), V4::T()};
  fp.flags = classify(fp.values);
  auto d = dual(fp);
  CHECK(d.values == NameAssignment{V4::B(), V4::T()});
  CHECK(dual(d).values == fp.values);
  // dual of the least fixed point is a fixed point (enumeration oracle)
  auto sys = liar_tt();
  auto lfp = least_fixed_point(sys);
  auto dd = dual(lfp);
  CHECK(is_jump_fixed_point(dd.values, sys));
  CHECK(dd.values == NameAssignment{V4::B(), V4::B()});
  // dual is a bijection between the consistent and complete fixed points
  for (const auto& f : enumerate_fixed_points(sys)) {
    if (f.flags.consistent) CHECK(dual(f).flags.complete);
    if (f.flags.complete) CHECK(dual(f).flags.consistent);
  }
}

TEST_CASE("fixed-point transparency and class lifting over the pool") {
  auto sys = generate_pools(liar_tt(), 1);
  for (const auto& fp : enumerate_fixed_points(sys)) {
    Evaluator ev(sys, fp.values);
    for (const auto& s : sys.sentence_pool) {
      if (language(s) != Lang::LT) continue;
      CHECK(ev.value(f_truth(t_quote(s))) == ev.value(s));
      if (fp.flags.consistent) CHECK(ev.value(s) != V4::B());
      if (fp.flags.complete) CHECK(ev.value(s) != V4::N());
    }
  }
}

TEST_CASE("determinate sets by variant") {
  auto sys = liar_tt();
  auto lfp = least_fixed_point(sys);
  auto lambda = sys.names.at("L");
  auto zz = f_eq(t_base("0"), t_base("0"));
  CHECK(!is_determinate(lambda, lfp, DetVariant::Cons, sys));
  CHECK(is_determinate(zz, lfp, DetVariant::Cons, sys));
  FixedPoint glut = dual(lfp);
  CHECK(!is_determinate(lambda, glut, DetVariant::Comp, sys));
  CHECK(!is_determinate(lambda, glut, DetVariant::Sym, sys));
  CHECK(is_determinate(lambda, glut, DetVariant::Cons, sys));
}
