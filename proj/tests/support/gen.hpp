#pragma once

#include <random>
#include <vector>

#include "poly/circuit.hpp"
#include "poly/term.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline int pick(Rng &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Stacks up to max_nodes generators one layer at a time, each placed at a
// random offset under the current wires.
inline poly::Circuit circuit(Rng &rng, const std::vector<poly::Operator> &ops, int max_nodes, int inputs) {
  poly::Circuit c = poly::identity(inputs);
  int w = inputs;
  const int k = pick(rng, 0, max_nodes);
  for (int step = 0; step < k; ++step) {
    std::vector<const poly::Operator *> fit;
    for (auto &op : ops)
      if (op.inputs <= w)
        fit.push_back(&op);
    if (fit.empty())
      break;
    const auto &op = *fit[pick(rng, 0, static_cast<int>(fit.size()) - 1)];
    int off = pick(rng, 0, w - op.inputs);
    c = poly::compose(c, poly::tensor_all({poly::identity(off), poly::generator(op),
                                           poly::identity(w - off - op.inputs)}));
    w += op.outputs - op.inputs;
  }
  return c;
}

inline poly::Term term(Rng &rng, const poly::Signature &sig, int depth, int nvars) {
  std::vector<const poly::Operator *> consts, apps;
  for (auto &op : sig.operators())
    (op.inputs == 0 ? consts : apps).push_back(&op);
  const int leaves = nvars + static_cast<int>(consts.size());
  if (depth <= 1 || pick(rng, 0, 3) == 0) {
    int r = pick(rng, 0, leaves - 1);
    return r < nvars ? poly::Term::variable(r + 1) : poly::Term::app(consts[r - nvars]->name);
  }
  const auto &op = *apps[pick(rng, 0, static_cast<int>(apps.size()) - 1)];
  std::vector<poly::Term> args;
  for (int i = 0; i < op.inputs; ++i)
    args.push_back(term(rng, sig, depth - 1, nvars));
  return poly::Term::app(op.name, args);
}

inline std::vector<poly::Operator> monoid_c_ops() {
  return {{"mu", 2, 1}, {"eta", 0, 1}, {"tau", 2, 2}, {"delta", 1, 2}, {"epsilon", 1, 0}};
}

inline std::vector<poly::Operator> lz2_ops() {
  return {{"mu", 2, 1}, {"eta", 0, 1}, {"tau", 2, 2}, {"delta", 1, 2}, {"epsilon", 1, 0}, {"kappa", 2, 2}};
}

} // namespace gen
