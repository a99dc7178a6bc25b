#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "poly/circuit.hpp"

namespace poly {

// A classical term. Variables are ordinals: var == i >= 1 stands for x_i.
struct Term {
  int var = 0;
  std::string op;
  std::vector<Term> args;

  static Term variable(int i);
  static Term app(std::string op, std::vector<Term> args = {});
  bool is_var() const { return var > 0; }
  bool operator==(const Term &) const = default;
  auto operator<=>(const Term &o) const {
    if (auto c = var <=> o.var; c != 0)
      return c;
    if (auto c = op <=> o.op; c != 0)
      return c;
    return args <=> o.args;
  }
};

int sharp(const Term &u);
int term_size(const Term &u);
int term_depth(const Term &u); // a leaf has depth 1
bool is_linear(const Term &u);
// Variable indices in left-to-right leaf order.
std::vector<int> occurrences(const Term &u);
std::string to_string(const Term &u);
Term parse_term(std::string_view text, const Signature &sig);

// Arrow m -> n of the cartesian category of term families.
struct TermFamily {
  int m = 0;
  std::vector<Term> terms;
  int n() const { return static_cast<int>(terms.size()); }
  bool operator==(const TermFamily &) const = default;
};

TermFamily family_identity(int n);
TermFamily family_compose(const TermFamily &u, const TermFamily &v); // u then v
TermFamily family_tensor(const TermFamily &u, const TermFamily &v);
std::string to_string(const TermFamily &f);

// Simultaneous substitution x_j := sub[j-1].
Term substitute(const Term &t, const std::vector<Term> &sub);

struct TrsRule {
  std::string name;
  Term lhs;
  Term rhs;
  bool left_linear() const { return is_linear(lhs); }
};

struct Trs {
  Signature sig;
  std::vector<TrsRule> rules;
};

// Throws Error(Domain) if lhs is a variable or rhs uses variables absent from lhs.
void check_rule(const TrsRule &r, const Signature &sig);
Trs parse_trs(std::string_view text);
std::string to_text(const Trs &trs);

// One-step reduct together with the rule and position that produced it.
struct TermStep {
  int rule = -1;
  std::vector<int> position; // path of argument indices from the root
  Term result;
};

std::vector<TermStep> trs_steps(const Trs &trs, const Term &u);
std::vector<Term> trs_step(const Trs &trs, const Term &u);
// Matches pattern against t, extending sub (indexed by variable - 1).
bool match_term(const Term &pattern, const Term &t, std::vector<Term> &sub, std::vector<char> &bound);
const Term &subterm_at(const Term &t, const std::vector<int> &pos);
Term replace_at(const Term &t, const std::vector<int> &pos, const Term &by);

TrsRule uniformize(const TrsRule &r);

// All terms of depth <= depth over sig with variables among x1..x_nvars.
std::vector<Term> enumerate_terms(const Signature &sig, int depth, int nvars);

// Arrow m -> n in the opposite of finite sets: mapping[k] in 1..m is the input
// index copied to output k+1.
struct FinFun {
  int m = 0;
  int n = 0;
  std::vector<int> mapping;
  bool operator==(const FinFun &) const = default;
};

FinFun finfun_compose(const FinFun &f, const FinFun &g); // f then g
TermFamily theta(const FinFun &f);
FinFun omega(const TermFamily &u); // requires a family of variables
std::string to_string(const FinFun &f);

inline constexpr const char *kTau = "tau";
inline constexpr const char *kDelta = "delta";
inline constexpr const char *kEpsilon = "epsilon";
bool is_resource_op(std::string_view name);

TermFamily project_pi(const Circuit &c);
FinFun finset_semantics(const Circuit &c);

} // namespace poly
