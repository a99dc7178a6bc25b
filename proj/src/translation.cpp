#include "poly/translation.hpp"

#include <algorithm>

namespace poly {

Operator tau_op() { return {kTau, 2, 2}; }
Operator delta_op() { return {kDelta, 1, 2}; }
Operator epsilon_op() { return {kEpsilon, 1, 0}; }

Signature build_sigma_c(const Signature &sig) {
  Signature out;
  for (auto &op : sig.operators()) {
    if (op.outputs != 1)
      throw Error(ErrorCode::Domain, "operator '" + op.name + "' is not algebraic");
    if (is_resource_op(op.name))
      throw Error(ErrorCode::Domain, "operator name '" + op.name + "' is reserved");
    out.add(op);
  }
  out.add(tau_op());
  out.add(delta_op());
  out.add(epsilon_op());
  return out;
}

Circuit tau_n1(int n) {
  Circuit c = identity(1);
  for (int k = 0; k < n; ++k)
    c = compose(tensor(identity(1), c), tensor(generator(tau_op()), identity(k)));
  return c;
}

Circuit tau_1n(int n) {
  Circuit c = identity(1);
  for (int k = 0; k < n; ++k)
    c = compose(tensor(c, identity(1)), tensor(identity(k), generator(tau_op())));
  return c;
}

Circuit delta_n(int n) {
  Circuit c = identity(0);
  for (int k = 0; k < n; ++k)
    c = compose(tensor(c, generator(delta_op())), tensor_all({identity(k), tau_n1(k), identity(1)}));
  return c;
}

Circuit epsilon_n(int n) {
  Circuit c = identity(0);
  for (int k = 0; k < n; ++k)
    c = tensor(c, generator(epsilon_op()));
  return c;
}

std::vector<Rule> build_rdelta(const Signature &s) {
  return {
      make_rule("coassoc", "delta ; (id(1) * delta)", "delta ; (delta * id(1))", s, "delta"),
      make_rule("cocomm", "delta ; tau", "delta", s, "delta"),
      make_rule("counit_l", "delta ; (epsilon * id(1))", "id(1)", s, "delta"),
      make_rule("counit_r", "delta ; (id(1) * epsilon)", "id(1)", s, "delta"),
      make_rule("invol", "tau ; tau", "id(2)", s, "delta"),
      make_rule("alpha", "(id(1) * tau) ; (tau * id(1)) ; (id(1) * tau)", "(tau * id(1)) ; (id(1) * tau) ; (tau * id(1))",
                s, "delta"),
      make_rule("tau_eps_r", "tau ; (id(1) * epsilon)", "epsilon * id(1)", s, "delta"),
      make_rule("tau_eps_l", "tau ; (epsilon * id(1))", "id(1) * epsilon", s, "delta"),
      make_rule("tau_delta_r", "(id(1) * delta) ; (tau * id(1)) ; (id(1) * tau)", "tau ; (delta * id(1))", s,
                "delta"),
      make_rule("tau_delta_l", "tau ; (id(1) * delta)", "(delta * id(1)) ; (id(1) * tau) ; (tau * id(1))", s,
                "delta"),
      // Completion of the set above: without these two, four critical pairs
      // between cocomm, coassoc, invol and the tau_delta rules do not join.
      make_rule("cocomm_2", "delta ; (delta * id(1)) ; (id(1) * tau)", "delta ; (delta * id(1))", s, "delta"),
      make_rule("tau_delta_m", "tau ; (delta * id(1)) ; (id(1) * tau)", "(id(1) * delta) ; (tau * id(1))", s,
                "delta"),
  };
}

std::vector<Rule> build_rsigma(const Operator &phi, const Signature &s) {
  const int n = phi.inputs;
  const Circuit g = generator(phi);
  const Circuit one = identity(1);
  auto rule = [&](std::string name, const Circuit &l, const Circuit &r) {
    Rule x{name + "_" + phi.name, canonical_form(l), canonical_form(r), "sigma"};
    validate_rule(x, s);
    return x;
  };
  return {
      rule("dup", compose(g, generator(delta_op())), compose(delta_n(n), tensor(g, g))),
      rule("erase", compose(g, generator(epsilon_op())), epsilon_n(n)),
      rule("perm_l", compose(tensor(g, one), generator(tau_op())), compose(tau_n1(n), tensor(one, g))),
      rule("perm_r", compose(tensor(one, g), generator(tau_op())), compose(tau_1n(n), tensor(g, one))),
  };
}

Polygraph build_rdelta_sigma(const Signature &sig) {
  Polygraph p;
  p.sig = build_sigma_c(sig);
  p.rules = build_rdelta(p.sig);
  for (auto &op : sig.operators())
    for (auto &r : build_rsigma(op, p.sig))
      p.rules.push_back(std::move(r));
  return p;
}

Circuit tree_circuit(const Term &u, const Signature &sig) {
  if (u.is_var())
    return identity(1);
  auto *op = sig.find(u.op);
  if (!op)
    throw Error(ErrorCode::Domain, "unknown operator '" + u.op + "'");
  std::vector<Circuit> parts;
  for (auto &a : u.args)
    parts.push_back(tree_circuit(a, sig));
  return compose(tensor_all(parts), generator(*op));
}

Circuit routing_circuit(const std::vector<int> &occ, int n) {
  const int k = static_cast<int>(occ.size());
  std::vector<Circuit> combs;
  std::vector<int> arrangement; // occurrence index carried by each wire
  for (int i = 1; i <= n; ++i) {
    int copies = 0;
    for (int j = 0; j < k; ++j)
      if (occ[j] == i) {
        arrangement.push_back(j);
        ++copies;
      }
    if (copies == 0) {
      combs.push_back(generator(epsilon_op()));
      continue;
    }
    Circuit c = identity(1);
    for (int t = 1; t < copies; ++t)
      c = compose(generator(delta_op()), tensor(c, identity(1)));
    combs.push_back(c);
  }
  Circuit r = tensor_all(combs);
  // Bubble sort the wires into occurrence order with adjacent swaps.
  for (int pass = 0; pass < k; ++pass)
    for (int p = 0; p + 1 < k; ++p)
      if (arrangement[p] > arrangement[p + 1]) {
        std::swap(arrangement[p], arrangement[p + 1]);
        r = compose(r, tensor_all({identity(p), generator(tau_op()), identity(k - p - 2)}));
      }
  return r;
}

Circuit phi(const Term &u, int n, const Polygraph &rds, std::uint64_t fuel) {
  if (n < sharp(u))
    throw Error(ErrorCode::Domain, "arity " + std::to_string(n) + " is below the variables of " + to_string(u));
  Circuit naive = compose(routing_circuit(occurrences(u), n), tree_circuit(u, rds.sig));
  auto t = normalize(rds, naive, fuel);
  if (!t.normal)
    throw Error(ErrorCode::Domain, "resource normalisation ran out of fuel for " + to_string(u));
  return t.last();
}

std::string phi_rule_name(const std::string &rule) { return "Phi(" + rule + ")"; }

Translation translate_trs(const Trs &trs, std::uint64_t fuel) {
  Translation tr;
  tr.resource = build_rdelta_sigma(trs.sig);
  tr.poly = tr.resource;
  for (auto &r : trs.rules) {
    check_rule(r, trs.sig);
    TrsRule u = uniformize(r);
    const int n = sharp(u.lhs);
    Rule c{phi_rule_name(r.name), phi(u.lhs, n, tr.resource, fuel), phi(u.rhs, n, tr.resource, fuel), "phi"};
    validate_rule(c, tr.poly.sig);
    tr.poly.rules.push_back(std::move(c));
    tr.phi_rules.push_back({phi_rule_name(r.name), u, u.left_linear()});
  }
  return tr;
}

SimulationResult simulate_step(const Translation &tr, const TrsRule &alpha, const Term &u, const Term &v, int n,
                               std::uint64_t fuel) {
  if (!alpha.left_linear())
    throw Error(ErrorCode::Domain, "rule " + alpha.name + " is not left-linear");
  if (n < sharp(u))
    throw Error(ErrorCode::Domain, "arity below the variables of the source term");
  Trs single{tr.resource.sig, {alpha}};
  auto reducts = trs_step(single, u);
  if (std::find(reducts.begin(), reducts.end(), v) == reducts.end())
    throw Error(ErrorCode::Domain, to_string(u) + " does not rewrite to " + to_string(v) + " with " + alpha.name);

  TrsRule ua = uniformize(alpha);
  const int k = sharp(ua.lhs);
  const Circuit lhs = phi(ua.lhs, k, tr.resource, fuel);
  const Circuit rhs = phi(ua.rhs, k, tr.resource, fuel);

  SimulationResult res;
  res.source = phi(u, n, tr.resource, fuel);
  res.target = phi(v, n, tr.resource, fuel);
  for (auto &ctx : find_matches(lhs, res.source)) {
    Circuit w = apply_context(ctx, rhs);
    auto tail = normalize(tr.resource, w, fuel);
    if (tail.normal && tail.last() == res.target) {
      res.ok = true;
      res.witness = w;
      res.tail = std::move(tail);
      return res;
    }
  }
  res.message = "no occurrence of the translated left side leads to the translated target";
  return res;
}

} // namespace poly
