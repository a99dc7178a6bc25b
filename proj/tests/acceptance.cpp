// One PASS/FAIL line per acceptance criterion. Usage: acceptance CLI_PATH
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "poly/presets.hpp"
#include "poly/translation.hpp"
#include "support/gen.hpp"

using namespace poly;
namespace fs = std::filesystem;

namespace {

const std::string kData = POLY_TEST_DATA_DIR;
std::string g_cli;

Signature monoid() { return Signature({{"mu", 2, 1}, {"eta", 0, 1}}); }
Poly X(int i) { return Poly::var(xvar(i)); }
Poly Y(int i) { return Poly::var(yvar(i)); }

struct Outcome {
  bool ok = true;
  std::string note;
  void fail(const std::string &why) {
    if (ok)
      note = why;
    ok = false;
  }
};

int run_cli(const std::vector<std::string> &args, std::string &out) {
  int fd[2];
  if (pipe(fd) != 0)
    return -1;
  pid_t pid = fork();
  if (pid == 0) {
    dup2(fd[1], 1);
    dup2(fd[1], 2);
    close(fd[0]);
    std::vector<std::string> a = {g_cli};
    a.insert(a.end(), args.begin(), args.end());
    std::vector<char *> av;
    for (auto &s : a)
      av.push_back(s.data());
    av.push_back(nullptr);
    execv(av[0], av.data());
    _exit(127);
  }
  close(fd[1]);
  out.clear();
  char buf[4096];
  for (ssize_t n; (n = read(fd[0], buf, sizeof buf)) > 0;)
    out.append(buf, n);
  close(fd[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome c1_multiset_chain() {
  Outcome o;
  auto ms = [](std::initializer_list<std::pair<int, int>> items) {
    Multiset m;
    for (auto [a, k] : items)
      m[Poly(a)] = Poly(k);
    return m;
  };
  std::vector<Multiset> chain = {Multiset{}, ms({{1, 127}}), ms({{2, 1}}), ms({{1, 4}, {3, 2}}), ms({{4, 1}})};
  for (std::size_t k = 0; k + 1 < chain.size(); ++k)
    if (compare_multiset(chain[k + 1], chain[k], uniform_min(1)) != Cmp::GT)
      o.fail("link " + std::to_string(k) + " not certified");
  return o;
}

Outcome c2_coassoc() {
  Outcome o;
  auto rds = build_rdelta_sigma(monoid());
  auto rc = check_rule(builtin_f1(monoid()), *rds.find("coassoc"));
  if (rc.verdict != Verdict::Strict)
    o.fail("verdict " + std::string(to_string(rc.verdict)));
  Poly want = Y(1) + Y(2) + Y(3) + 2;
  if (rc.lhs.con != std::vector<Poly>{want} || rc.rhs.con != std::vector<Poly>{want})
    o.fail("contravariant maps " + (rc.lhs.con.at(0).str()) + " / " + (rc.rhs.con.at(0).str()));
  return o;
}

Outcome c3_alpha() {
  Outcome o;
  auto rds = build_rdelta_sigma(monoid());
  const Rule &alpha = *rds.find("alpha");
  if (check_rule(builtin_f1(monoid()), alpha).verdict != Verdict::Invariant)
    o.fail("not invariant under F1");
  auto g = check_rule(builtin_g(monoid()), alpha);
  if (g.verdict != Verdict::Strict)
    o.fail("not strict under G");
  if (g.lhs.heat.nat != X(1) * 2 + X(2) * 2 + X(3) * 2 + 2 || g.rhs.heat.nat != X(1) * 2 + X(2) * 2 + X(3) * 2 + 1)
    o.fail("heats " + (g.lhs.heat.nat).str() + " / " + (g.rhs.heat.nat).str());
  return o;
}

Outcome c4_layered() {
  Outcome o;
  auto rds = build_rdelta_sigma(monoid());
  auto cert = layered_termination(rds, {builtin_f1(monoid()), builtin_g(monoid())});
  if (!cert.ok)
    o.fail("not certified");
  for (auto &e : cert.entries) {
    int want = e.rule == "alpha" ? 1 : 0;
    if (e.layer != want)
      o.fail(e.rule + " in layer " + std::to_string(e.layer));
    if (e.rule == "alpha" && (e.checks.size() != 2 || e.checks[0].verdict != Verdict::Invariant))
      o.fail("alpha not invariant in layer 1");
  }
  return o;
}

Outcome c5_lz2() {
  Outcome o;
  auto lz = load_preset("LZ2", kData);
  const auto &sig = lz.polygraph.sig;
  const auto &F3 = lz.layers.at(0);
  auto kk = interpret(F3, parse_circuit("kappa ; kappa", sig));
  if (kk.cov != std::vector<Poly>{X(1) * 2 + X(2), X(1) + X(2)})
    o.fail("kappa;kappa covariant " + (kk.cov[0]).str() + ", " + (kk.cov[1]).str());
  auto rhs = interpret(F3, lz.polygraph.find("kappa_kappa")->rhs);
  if (rhs.cov != std::vector<Poly>{X(1) + X(2), X(1) + X(2)})
    o.fail("right-hand side covariant " + (rhs.cov[0]).str() + ", " + (rhs.cov[1]).str());
  for (auto &r : lz.polygraph.rules)
    if (check_rule(F3, r).verdict != Verdict::Strict)
      o.fail(r.name + " not strict");
  gen::Rng rng(2024);
  for (int k = 0; k < 200; ++k) {
    Circuit c = gen::circuit(rng, gen::lz2_ops(), 8, gen::pick(rng, 0, 3));
    if (interpret(F3, dualize(c, *lz.duality)) != dual_triple(interpret(F3, c)))
      o.fail("duality fails on " + to_string(c));
  }
  if (interpret(F3, parse_circuit("tau", sig)) != interpret(F3, parse_circuit("kappa", sig)))
    o.fail("tau and kappa differ");
  return o;
}

bool resource_only(const Circuit &c) {
  for (auto &n : c.nodes)
    if (!is_resource_op(n.op))
      return false;
  return true;
}

Outcome c6_convergence() {
  Outcome o;
  auto rds = build_rdelta_sigma(monoid());
  std::vector<Operator> resource = {tau_op(), delta_op(), epsilon_op()};
  gen::Rng rng(606);
  int delta_only = 0;
  for (int k = 0; k < 500; ++k) {
    bool res = k % 4 == 0;
    Circuit c = gen::circuit(rng, res ? resource : gen::monoid_c_ops(), 12, gen::pick(rng, 0, 4));
    auto ref = normalize(rds, c, 100000);
    if (!ref.normal) {
      o.fail("fuel exhausted on " + to_string(c));
      continue;
    }
    auto pi = project_pi(c);
    std::optional<FinFun> fs;
    if (resource_only(c)) {
      fs = finset_semantics(c);
      ++delta_only;
    }
    auto check_trace = [&](const ReductionTrace &t) {
      for (auto &s : t.steps) {
        if (project_pi(s.result) != pi)
          o.fail("projection changed by " + s.rule + " on " + to_string(c));
        if (fs && finset_semantics(s.result) != *fs)
          o.fail("finite-set meaning changed by " + s.rule);
      }
    };
    check_trace(ref);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto t = normalize(rds, c, 100000, Strategy::Random, seed * 7919 + k);
      if (!t.normal || t.last() != ref.last())
        o.fail("normal forms differ on " + to_string(c));
      check_trace(t);
    }
  }
  o.note = o.ok ? std::to_string(delta_only) + " resource-only circuits" : o.note;
  return o;
}

Outcome c7_phi() {
  Outcome o;
  auto rds = build_rdelta_sigma(monoid());
  auto universe = enumerate_terms(monoid(), 3, 3);
  for (auto &u : universe)
    for (int n : {3, sharp(u)}) {
      Circuit c = phi(u, n, rds);
      if (project_pi(c) != TermFamily{n, {u}})
        o.fail("projection of Phi^" + std::to_string(n) + "(" + to_string(u) + ")");
      if (!rewrite_step(rds, c, Strategy::Leftmost).empty())
        o.fail("Phi^" + std::to_string(n) + "(" + to_string(u) + ") not normal");
    }
  o.note = o.ok ? std::to_string(universe.size()) + " terms" : o.note;
  return o;
}

Outcome c8_simulation() {
  Outcome o;
  int steps = 0;
  for (const char *file : {"r0.trs", "r1.trs", "r2.trs"}) {
    Trs trs = parse_trs(read_file(kData + "/" + file));
    auto tr = translate_trs(trs);
    for (auto &u : enumerate_terms(trs.sig, 3, 3))
      for (auto &s : trs_steps(trs, u)) {
        const TrsRule &alpha = trs.rules[s.rule];
        if (!is_linear(alpha.lhs))
          continue;
        ++steps;
        try {
          if (!simulate_step(tr, alpha, u, s.result, 3).ok)
            o.fail(std::string(file) + ": " + alpha.name + " on " + to_string(u));
        } catch (const Error &e) {
          o.fail(std::string(file) + ": " + e.what());
        }
      }
  }
  o.note = o.ok ? std::to_string(steps) + " steps" : o.note;
  return o;
}

Outcome c9_negative() {
  Outcome o;
  std::string out;
  for (const char *t : {"R1c", "R2c"}) {
    int rc = run_cli({"check-term", "--theory", t, "--interp", "f1", "--interp", "g"}, out);
    if (rc != 3)
      o.fail(std::string(t) + ": check-term exit " + std::to_string(rc));
  }
  // The commutativity rule alone, translated.
  auto tr = translate_trs(parse_trs(read_file(kData + "/r1.trs")));
  Polygraph only{tr.poly.sig, {*tr.poly.find(phi_rule_name("C"))}};
  auto path = fs::temp_directory_path() / ("poly-acceptance-" + std::to_string(getpid()) + ".poly");
  std::ofstream(path) << to_text(only);
  std::string first;
  for (int k = 0; k < 2; ++k) {
    int rc = run_cli({"normalize", "--theory", path.string(), "--circuit", "mu", "--fuel", "64"}, out);
    if (rc != 2)
      o.fail("normalize exit " + std::to_string(rc) + ": " + out);
    if (k == 0)
      first = out;
    else if (out != first)
      o.fail("output not deterministic");
  }
  fs::remove(path);
  return o;
}

Outcome c10_critical_pairs() {
  Outcome o;
  auto rds = build_rdelta_sigma(monoid());
  auto cps = critical_pairs(rds, 6);
  auto rep = check_local_confluence(rds, cps, 200, 4, 1);
  if (!rep.all_joined())
    o.fail("some pairs not joined");
  if (cps.empty())
    o.fail("no pairs");
  o.note = o.ok ? std::to_string(cps.size()) + " pairs" : o.note;
  return o;
}

Outcome c11_sampled() {
  Outcome o;
  Trs r0 = parse_trs(read_file(kData + "/r0.trs"));
  auto tr = translate_trs(r0);
  PathMeasure measure(r0);
  auto universe = enumerate_terms(r0.sig, 3, 3);
  std::set<std::string> phi_names;
  for (auto &r : tr.phi_rules)
    phi_names.insert(r.name);
  gen::Rng rng(1111);
  for (auto &rule : tr.poly.rules) {
    bool strict = phi_names.count(rule.name);
    for (int p = 0; p < 100; ++p) {
      std::vector<TermCurrent> in;
      for (int k = 0; k < rule.lhs.m; ++k)
        in.push_back({universe[gen::pick(rng, 0, static_cast<int>(universe.size()) - 1)], gen::pick(rng, 1, 5)});
      auto l = interpret_terms(rule.lhs, in, measure);
      auto r = interpret_terms(rule.rhs, in, measure);
      for (std::size_t k = 0; k < l.cov.size(); ++k)
        if (!current_ge(l.cov[k], r.cov[k], measure)) {
          o.fail(rule.name + ": output current increases");
          break;
        }
      Cmp c = compare_concrete(l.heat, r.heat);
      if (strict ? c != Cmp::GT : (c != Cmp::GT && c != Cmp::EQ))
        o.fail(rule.name + (strict ? ": heat does not decrease" : ": heat increases"));
    }
  }
  return o;
}

} // namespace

int main(int argc, char **argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance CLI_PATH\n";
    return 2;
  }
  g_cli = argv[1];
  struct Criterion {
    const char *name;
    double limit; // seconds, 0 for none
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all = {
      {"multiset order chain", 1, c1_multiset_chain},
      {"coassociativity strict under F1", 0, c2_coassoc},
      {"alpha layering", 0, c3_alpha},
      {"layered certificate for the resource rules", 5, c4_layered},
      {"L(Z2) interpretation", 0, c5_lz2},
      {"convergence of the resource rules", 60, c6_convergence},
      {"translation of terms", 0, c7_phi},
      {"simulation of term steps", 0, c8_simulation},
      {"negative controls", 0, c9_negative},
      {"bounded critical pairs", 0, c10_critical_pairs},
      {"sampled interpretation over terms", 0, c11_sampled},
  };
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[k].run();
    } catch (const std::exception &e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (all[k].limit > 0 && secs > all[k].limit)
      o.fail("took longer than " + std::to_string(static_cast<int>(all[k].limit)) + " s");
    failed += !o.ok;
    std::printf("%s %2zu %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", k + 1, all[k].name, secs,
                o.note.empty() ? "" : ": ", o.note.c_str());
  }
  return failed ? 1 : 0;
}
