#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poly/rewrite.hpp"
#include "poly/term.hpp"

namespace poly {

Operator tau_op();
Operator delta_op();
Operator epsilon_op();

// sig plus tau, delta and epsilon. Throws on a non-algebraic operator or a
// clash with a reserved name.
Signature build_sigma_c(const Signature &sig);

Circuit delta_n(int n);  // n -> 2n, duplicates the input vector
Circuit tau_n1(int n);   // (n+1) -> (n+1), moves the last wire to the front
Circuit tau_1n(int n);   // (n+1) -> (n+1), moves the first wire to the back
Circuit epsilon_n(int n);

// Resource rules over tau, delta, epsilon.
std::vector<Rule> build_rdelta(const Signature &sigma_c);
// Four rules per algebraic operator phi.
std::vector<Rule> build_rsigma(const Operator &phi, const Signature &sigma_c);
Polygraph build_rdelta_sigma(const Signature &sig);

// Tree of u over sig with one input per variable occurrence.
Circuit tree_circuit(const Term &u, const Signature &sig);
// Resource layer n -> k wiring x_{occ[j]} to output j.
Circuit routing_circuit(const std::vector<int> &occ, int n);

// rds must be build_rdelta_sigma(sig) (or an equivalent set); it is used to
// normalise the naive circuit.
Circuit phi(const Term &u, int n, const Polygraph &rds, std::uint64_t fuel = 100000);

struct TranslatedRule {
  std::string name;
  TrsRule source; // after uniformisation
  bool left_linear = false;
};

struct Translation {
  Polygraph poly;
  Polygraph resource; // the resource rules alone
  std::vector<TranslatedRule> phi_rules;
};

Translation translate_trs(const Trs &trs, std::uint64_t fuel = 100000);
std::string phi_rule_name(const std::string &rule);

struct SimulationResult {
  bool ok = false;
  Circuit source; // Phi^n(u)
  Circuit target; // Phi^n(v)
  Circuit witness; // after the Phi(alpha) step
  ReductionTrace tail; // witness ->> target under the resource rules
  std::string message;
};

// Throws Error(Domain) if alpha is not left-linear or u does not rewrite to v
// with alpha.
SimulationResult simulate_step(const Translation &tr, const TrsRule &alpha, const Term &u, const Term &v, int n,
                               std::uint64_t fuel = 10000);

} // namespace poly
