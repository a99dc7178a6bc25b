#include "doctest.h"

#include <functional>
#include <map>

#include "poly/presets.hpp"
#include "poly/term.hpp"
#include "support/gen.hpp"

using namespace poly;

namespace {

Signature monoid() { return Signature({{"mu", 2, 1}, {"eta", 0, 1}}); }
Term T(const char *s) { return parse_term(s, monoid()); }

// Evaluation in (Z, +, 0): an independent model of the monoid signature.
long eval(const Term &t, const std::vector<long> &env) {
  if (t.is_var())
    return env[t.var - 1];
  if (t.op == "eta")
    return 0;
  return eval(t.args[0], env) * 3 + eval(t.args[1], env) * 7; // non-commutative, non-associative
}

Trs load(const char *name) { return parse_trs(read_file(std::string(POLY_TEST_DATA_DIR) + "/" + name)); }

} // namespace

TEST_SUITE("term") {

TEST_CASE("printing and parsing terms") {
  Term u = T("mu(mu(x1, x2), eta)");
  CHECK(to_string(u) == "mu(mu(x1,x2),eta)");
  CHECK(T(to_string(u).c_str()) == u);
  CHECK(sharp(u) == 2);
  CHECK(term_depth(u) == 3);
  CHECK(term_depth(T("x1")) == 1);
  CHECK(is_linear(u));
  CHECK_FALSE(is_linear(T("mu(x1,x1)")));
  CHECK(occurrences(T("mu(x3,mu(x1,x3))")) == std::vector<int>{3, 1, 3});
  CHECK_THROWS_AS(T("mu(x1)"), Error);
  CHECK_THROWS_AS(T("mu(x1,"), ParseError);
}

TEST_CASE("term universe size matches the recurrence") {
  // Depth-1 terms: 3 variables and eta; each extra level adds mu over pairs.
  long count = 4;
  for (int d = 2; d <= 3; ++d)
    count = 4 + count * count;
  CHECK(count == 404);
  CHECK(enumerate_terms(monoid(), 3, 3).size() == static_cast<std::size_t>(count));
  for (auto &u : enumerate_terms(monoid(), 3, 3)) {
    CHECK(term_depth(u) <= 3);
    CHECK(sharp(u) <= 3);
  }
}

TEST_CASE("family composition is substitution: checked in a model") {
  gen::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    TermFamily u{2, {gen::term(rng, monoid(), 3, 2), gen::term(rng, monoid(), 3, 2), gen::term(rng, monoid(), 2, 2)}};
    TermFamily v{3, {gen::term(rng, monoid(), 3, 3), gen::term(rng, monoid(), 3, 3)}};
    TermFamily w = family_compose(u, v);
    std::vector<long> env = {gen::pick(rng, -9, 9), gen::pick(rng, -9, 9)};
    std::vector<long> mid;
    for (auto &t : u.terms)
      mid.push_back(eval(t, env));
    for (int k = 0; k < v.n(); ++k)
      CHECK(eval(w.terms[k], env) == eval(v.terms[k], mid));
  }
}

TEST_CASE("theta and omega are inverse on finite functions") {
  gen::Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    int m = gen::pick(rng, 1, 4), n = gen::pick(rng, 0, 5);
    FinFun f{m, n, {}};
    for (int k = 0; k < n; ++k)
      f.mapping.push_back(gen::pick(rng, 1, m));
    CHECK(omega(theta(f)) == f);
  }
}

TEST_CASE("R0 rewriting") {
  Trs r0 = load("r0.trs");
  CHECK(r0.rules.size() == 3);
  auto out = trs_step(r0, T("mu(mu(x1,x2),x3)"));
  CHECK(out == std::vector<Term>{T("mu(x1,mu(x2,x3))")});
  CHECK(trs_step(r0, T("mu(eta,eta)")).size() == 2);
  CHECK(trs_step(r0, T("mu(x1,x2)")).empty());
}

TEST_CASE("R2: commutativity loops and S is not left-linear") {
  Trs r2 = load("r2.trs");
  CHECK(r2.rules.size() == 5);
  auto step = trs_step(r2, T("mu(x1,x2)"));
  CHECK(std::find(step.begin(), step.end(), T("mu(x2,x1)")) != step.end());
  auto back = trs_step(r2, T("mu(x2,x1)"));
  CHECK(std::find(back.begin(), back.end(), T("mu(x1,x2)")) != back.end());
  for (auto &r : r2.rules)
    CHECK(r.left_linear() == (r.name != "S"));
}

TEST_CASE("uniformisation numbers variables by first occurrence") {
  TrsRule r{"X", T("mu(x2,mu(x1,x2))"), T("x1")};
  TrsRule u = uniformize(r);
  CHECK(u.lhs == T("mu(x1,mu(x2,x1))"));
  CHECK(u.rhs == T("x2"));
}

TEST_CASE("TRS files: errors carry positions and bad rules are refused") {
  try {
    parse_trs("op mu : 2 -> 1\nA: mu(x1,x2) =>\n");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() >= 2);
  }
  CHECK_THROWS_AS(parse_trs("op mu : 2 -> 1\nB: mu(x1,x2) => x3\n"), Error);
  CHECK_THROWS_AS(parse_trs("op mu : 2 -> 1\nB: x1 => mu(x1,x1)\n"), Error);
}

TEST_CASE("finite-set semantics of the resource generators") {
  CHECK(finset_semantics(generator({"tau", 2, 2})) == FinFun{2, 2, {2, 1}});
  CHECK(finset_semantics(generator({"delta", 1, 2})) == FinFun{1, 2, {1, 1}});
  CHECK(finset_semantics(generator({"epsilon", 1, 0})) == FinFun{1, 0, {}});
}

TEST_CASE("semantics are functorial on random circuits") {
  gen::Rng rng(4);
  std::vector<Operator> delta_ops = {{"tau", 2, 2}, {"delta", 1, 2}, {"epsilon", 1, 0}};
  for (int i = 0; i < 200; ++i) {
    Circuit f = gen::circuit(rng, delta_ops, 5, gen::pick(rng, 1, 3));
    Circuit g = gen::circuit(rng, delta_ops, 5, f.n);
    CHECK(finset_semantics(compose(f, g)) == finfun_compose(finset_semantics(f), finset_semantics(g)));
    CHECK(project_pi(f) == theta(finset_semantics(f)));
    Circuit a = gen::circuit(rng, gen::monoid_c_ops(), 6, gen::pick(rng, 0, 3));
    Circuit b = gen::circuit(rng, gen::monoid_c_ops(), 6, a.n);
    CHECK(project_pi(compose(a, b)) == family_compose(project_pi(a), project_pi(b)));
    CHECK(project_pi(tensor(a, b)) == family_tensor(project_pi(a), project_pi(b)));
  }
}

TEST_CASE("projection refuses operators with several outputs") {
  CHECK_THROWS_AS(project_pi(generator({"kappa", 2, 2})), Error);
}

} // TEST_SUITE
