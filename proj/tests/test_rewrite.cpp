#include "doctest.h"

#include "poly/report.hpp"
#include "poly/rewrite.hpp"
#include "poly/translation.hpp"
#include "support/gen.hpp"

using namespace poly;

namespace {

Polygraph rds() { return build_rdelta_sigma(Signature({{"mu", 2, 1}, {"eta", 0, 1}})); }

const char *kToy = R"(
# three unary operators
op f : 1 -> 1
op g : 1 -> 1
op h : 1 -> 1
[toy] one : f ; g => h
[toy] two : f ; g => g
)";

} // namespace

TEST_SUITE("rewrite") {

TEST_CASE("tau ; tau normalises to id(2) in one step") {
  auto p = rds();
  auto t = normalize(p, parse_circuit("tau ; tau", p.sig), 100);
  CHECK(t.normal);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].rule == "invol");
  CHECK(t.last() == identity(2));
}

TEST_CASE("fuel exhaustion is reported, not thrown") {
  auto p = rds();
  auto c = parse_circuit("tau ; tau ; tau ; tau", p.sig);
  auto t = normalize(p, c, 1);
  CHECK_FALSE(t.normal);
  CHECK(t.steps.size() == 1);
  CHECK(normalize(p, c, 2).normal);
  CHECK_THROWS_AS(normalize(p, c, 0), Error);
}

TEST_CASE("leftmost picks the first rule in declaration order") {
  Polygraph p = parse_polygraph(kToy);
  auto c = parse_circuit("f ; g", p.sig);
  auto r = rewrite_step(p, c, Strategy::Leftmost);
  REQUIRE(r.size() == 1);
  CHECK(p.rules[r[0].rule].name == "one");
  CHECK(rewrite_step(p, c, Strategy::All).size() == 2);
}

TEST_CASE("random strategy is reproducible from its seed") {
  auto p = rds();
  gen::Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    Circuit c = gen::circuit(rng, gen::monoid_c_ops(), 8, 2);
    auto a = normalize(p, c, 10000, Strategy::Random, 99);
    auto b = normalize(p, c, 10000, Strategy::Random, 99);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t k = 0; k < a.steps.size(); ++k)
      CHECK(a.steps[k].result == b.steps[k].result);
  }
}

TEST_CASE("every step preserves the projection to terms") {
  auto p = rds();
  gen::Rng rng(23);
  for (int i = 0; i < 60; ++i) {
    Circuit c = gen::circuit(rng, gen::monoid_c_ops(), 10, gen::pick(rng, 1, 3));
    auto before = project_pi(c);
    auto t = normalize(p, c, 10000, Strategy::Random, i);
    CHECK(t.normal);
    for (auto &s : t.steps)
      CHECK(project_pi(s.result) == before);
  }
}

TEST_CASE("polygraph files: text round trip and JSON round trip") {
  auto p = rds();
  auto q = parse_polygraph(to_text(p));
  auto r = polygraph_from_json(polygraph_json(p));
  REQUIRE(q.rules.size() == p.rules.size());
  REQUIRE(r.rules.size() == p.rules.size());
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    CHECK(q.rules[i].name == p.rules[i].name);
    CHECK(q.rules[i].origin == p.rules[i].origin);
    CHECK(canonical_form(q.rules[i].lhs) == canonical_form(p.rules[i].lhs));
    CHECK(canonical_form(r.rules[i].rhs) == canonical_form(p.rules[i].rhs));
  }
}

TEST_CASE("polygraph files: malformed input is located") {
  try {
    parse_polygraph("op f : 1 -> 1\n\n[x] r : f ; => f\n");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
  }
  CHECK_THROWS_AS(parse_polygraph("op f : 1 -> 1\nr : f => id(2)\n"), Error);        // not parallel
  CHECK_THROWS_AS(parse_polygraph("op f : 1 -> 1\nr : f * f => f * f\n"), Error);    // disconnected
  CHECK_THROWS_AS(parse_polygraph("op f : 1 -> 1\nr : id(1) => id(1)\n"), Error);     // empty left side
  CHECK_THROWS_AS(parse_polygraph("op f : 1 -> 1\nop f : 1 -> 1\n"), Error);          // duplicate operator
}

TEST_CASE("critical pairs of the involution with itself") {
  Polygraph p;
  p.sig = Signature({{"tau", 2, 2}});
  p.rules = {make_rule("invol", "tau ; tau", "id(2)", p.sig)};
  auto cps = critical_pairs(p, 6);
  REQUIRE(cps.size() == 1);
  CHECK(to_string(cps[0].source) == "tau ; tau ; tau");
  CHECK(cps[0].left == generator({"tau", 2, 2}));
  CHECK(cps[0].right == generator({"tau", 2, 2}));
  CHECK(check_local_confluence(p, cps, 10).all_joined());
}

TEST_CASE("two rules with one left side give an unjoinable pair") {
  Polygraph p = parse_polygraph(kToy);
  auto cps = critical_pairs(p, 4);
  REQUIRE(cps.size() == 1);
  auto rep = check_local_confluence(p, cps, 10);
  CHECK_FALSE(rep.all_joined());
  CHECK(rep.verdicts[0].how == "distinct");
}

TEST_CASE("critical pairs respect the size bound") {
  auto p = rds();
  for (auto &cp : critical_pairs(p, 4))
    CHECK(cp.source.size() <= 4);
}

} // TEST_SUITE
