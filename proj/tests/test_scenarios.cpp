#include <fstream>
#include <sstream>

#include "doctest.h"
#include "truthlab/scenarios.hpp"

using namespace truthlab;

TEST_CASE("scenario listing is stable and covers the required ids") {
  auto ids = list_scenarios();
  auto has = [&](const std::string& id) {
    for (const auto& s : ids)
      if (s.id == id) return true;
    return false;
  };
  CHECK(has("ncat"));
  CHECK(has("fh-construction"));
  CHECK(has("duality"));
  CHECK(has("mixed-failure"));
  CHECK(has("cd-irregular"));
  CHECK(has("cons-equiv"));
  CHECK(has("soundness-cons"));
  CHECK(has("internal-deep"));
  CHECK(has("translations"));
  CHECK_THROWS_AS(run_scenario("nope"), UnknownScenario);
}

TEST_CASE("scenario reports serialize with the scenario envelope") {
  auto rep = run_scenario("internal-deep");
  CHECK(rep.pass);
  auto j = rep.to_json();
  CHECK(j.find("\"scenario\"") != std::string::npos);
  CHECK(j.find("\"steps\"") != std::string::npos);
  CHECK(j.find("\"verdict\"") != std::string::npos);
  // deterministic across runs
  CHECK(run_scenario("internal-deep").to_json() == j);
}

TEST_CASE("light scenarios pass") {
  for (const char* id : {"mixed-failure", "duality", "facts", "ckf-theorems", "cons-equiv",
                         "typed", "translations", "fh-construction"}) {
    auto rep = run_scenario(id);
    if (!rep.pass) MESSAGE(rep.to_text());
    CHECK(rep.pass);
  }
}

TEST_CASE("bundled system files match the embedded sources") {
  for (const auto& [id, src] : bundled_systems()) {
    std::ifstream in("systems/" + id + ".tl");
    if (!in.is_open()) in.open("../systems/" + id + ".tl");
    REQUIRE_MESSAGE(in.is_open(), ("missing systems/" + id + ".tl").c_str());
    std::ostringstream os;
    os << in.rdbuf();
    CHECK(os.str() == src);
  }
}
