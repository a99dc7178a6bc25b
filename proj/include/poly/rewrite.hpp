#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "poly/circuit.hpp"

namespace poly {

struct Rule {
  std::string name;
  Circuit lhs;
  Circuit rhs;
  std::string origin; // free-form provenance tag, e.g. "delta", "sigma", "phi"
};

struct Polygraph {
  Signature sig;
  std::vector<Rule> rules;

  const Rule *find(std::string_view name) const;
};

// Throws Error(Domain) when a rule is not parallel, has an empty or
// disconnected left side, or uses operators outside the signature.
void validate_rule(const Rule &r, const Signature &sig);
Rule make_rule(std::string name, std::string_view lhs, std::string_view rhs, const Signature &sig,
               std::string origin = {});

// Text format:
//   op NAME : IN -> OUT
//   [origin] NAME : CIRCUIT => CIRCUIT
// one declaration per line, '#' comments.
Polygraph parse_polygraph(std::string_view text);
std::string to_text(const Polygraph &p);

enum class Strategy { Leftmost, Random, All };
Strategy parse_strategy(std::string_view s);
const char *to_string(Strategy s);

struct Reduct {
  int rule = -1;
  Context context;
  Circuit result;
};

// Leftmost: first rule in declaration order, first match in canonical order.
std::vector<Reduct> rewrite_step(const Polygraph &p, const Circuit &c, Strategy s, std::uint64_t seed = 0);

struct TraceStep {
  std::string rule;
  std::string context;
  Circuit result;
};

struct ReductionTrace {
  Circuit start;
  std::vector<TraceStep> steps;
  bool normal = false; // false: fuel exhausted
  const Circuit &last() const { return steps.empty() ? start : steps.back().result; }
};

// Random strategy draws every choice from one generator seeded with seed.
ReductionTrace normalize(const Polygraph &p, const Circuit &c, std::uint64_t fuel,
                         Strategy s = Strategy::Leftmost, std::uint64_t seed = 0);

struct CriticalPair {
  int rule1 = -1;
  int rule2 = -1;
  Circuit source;
  Circuit left;  // rewritten with rule1
  Circuit right; // rewritten with rule2
};

// Superpositions of two left sides sharing at least one node, with at most
// max_nodes nodes. Incomplete by design beyond the bound.
std::vector<CriticalPair> critical_pairs(const Polygraph &p, int max_nodes);

struct PairVerdict {
  bool joined = false;
  Circuit left_nf;
  Circuit right_nf;
  std::string how; // "leftmost", "random(seed)" or "fuel"
};

struct ConfluenceReport {
  std::vector<PairVerdict> verdicts;
  bool all_joined() const;
};

ConfluenceReport check_local_confluence(const Polygraph &p, const std::vector<CriticalPair> &pairs,
                                        std::uint64_t fuel, int probes = 4, std::uint64_t seed = 1);

} // namespace poly
