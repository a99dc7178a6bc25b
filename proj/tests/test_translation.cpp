#include "doctest.h"

#include "poly/presets.hpp"
#include "poly/translation.hpp"
#include "support/gen.hpp"

using namespace poly;

namespace {

Signature monoid() { return Signature({{"mu", 2, 1}, {"eta", 0, 1}}); }
Trs load(const char *name) { return parse_trs(read_file(std::string(POLY_TEST_DATA_DIR) + "/" + name)); }

TermFamily single(int m, const Term &u) { return {m, {u}}; }

} // namespace

TEST_SUITE("translation") {

TEST_CASE("derived resource circuits have the expected finite-set meaning") {
  for (int n = 0; n <= 5; ++n) {
    FinFun dup{n, 2 * n, {}}, rot_l{n + 1, n + 1, {}}, rot_r{n + 1, n + 1, {}};
    for (int k = 0; k < 2 * n; ++k)
      dup.mapping.push_back(k % n + 1);
    rot_l.mapping.push_back(n + 1);
    for (int k = 1; k <= n; ++k)
      rot_l.mapping.push_back(k);
    for (int k = 2; k <= n + 1; ++k)
      rot_r.mapping.push_back(k);
    rot_r.mapping.push_back(1);
    CHECK(finset_semantics(delta_n(n)) == dup);
    CHECK(finset_semantics(tau_n1(n)) == rot_l);
    CHECK(finset_semantics(tau_1n(n)) == rot_r);
    CHECK(finset_semantics(epsilon_n(n)) == FinFun{n, 0, {}});
  }
}

TEST_CASE("resource rules are sound for the projection to terms") {
  auto p = build_rdelta_sigma(monoid());
  CHECK(p.rules.size() == 20);
  for (auto &r : p.rules) {
    CAPTURE(r.name);
    CHECK(project_pi(r.lhs) == project_pi(r.rhs));
  }
}

TEST_CASE("reserved and non-algebraic operators are refused") {
  CHECK_THROWS_AS(build_sigma_c(Signature({{"tau", 1, 1}})), Error);
  CHECK_THROWS_AS(build_sigma_c(Signature({{"split", 1, 2}})), Error);
}

TEST_CASE("translation of terms: projection and normality") {
  auto rds = build_rdelta_sigma(monoid());
  gen::Rng rng(31);
  for (int i = 0; i < 150; ++i) {
    Term u = gen::term(rng, monoid(), 4, 3);
    int n = std::max(sharp(u), gen::pick(rng, 0, 4));
    Circuit c = phi(u, n, rds);
    CHECK(project_pi(c) == single(n, u));
    CHECK(rewrite_step(rds, c, Strategy::Leftmost).empty());
  }
  Term dup = parse_term("mu(x1,x1)", monoid());
  CHECK(to_string(phi(dup, 2, rds)) == "(delta * epsilon) ; mu");
  CHECK_THROWS_AS(phi(dup, 0, rds), Error);
}

TEST_CASE("translating R0 gives 23 rules") {
  auto tr = translate_trs(load("r0.trs"));
  CHECK(tr.poly.rules.size() == 23);
  CHECK(tr.resource.rules.size() == 20);
  REQUIRE(tr.phi_rules.size() == 3);
  CHECK(tr.poly.find("Phi(A)") != nullptr);
  CHECK(tr.poly.find("Phi(A)")->origin == "phi");
  CHECK(to_string(tr.poly.find("Phi(A)")->lhs) == "(mu * id(1)) ; mu");
  for (auto &t : tr.phi_rules)
    CHECK(t.left_linear);
}

TEST_CASE("R2 translation keeps S and flags it as not left-linear") {
  auto tr = translate_trs(load("r2.trs"));
  CHECK(tr.poly.rules.size() == 25);
  CHECK(to_string(tr.poly.find("Phi(S)")->lhs) == "delta ; mu");
  CHECK(to_string(tr.poly.find("Phi(S)")->rhs) == "epsilon ; eta");
  CHECK_FALSE(tr.phi_rules.back().left_linear);
}

TEST_CASE("simulation of a term step") {
  auto trs = load("r1.trs");
  auto tr = translate_trs(trs);
  Term u = parse_term("mu(x2,mu(mu(x1,x2),x3))", trs.sig);
  Term v = parse_term("mu(x2,mu(x1,mu(x2,x3)))", trs.sig);
  auto res = simulate_step(tr, trs.rules[0], u, v, 3);
  CHECK(res.ok);
  CHECK(res.tail.normal);
  CHECK(res.tail.last() == res.target);
  CHECK_THROWS_AS(simulate_step(tr, trs.rules[0], u, u, 3), Error);

  auto r2 = load("r2.trs");
  auto tr2 = translate_trs(r2);
  Term w = parse_term("mu(x1,x1)", r2.sig);
  CHECK_THROWS_AS(simulate_step(tr2, r2.rules[4], w, parse_term("eta", r2.sig), 1), Error);
}

} // TEST_SUITE
