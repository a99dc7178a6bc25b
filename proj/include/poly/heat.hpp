#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "poly/rewrite.hpp"
#include "poly/term.hpp"

namespace poly {

// ---------------------------------------------------------------------------
// Polynomials with integer coefficients over named variables.

using Monomial = std::map<std::string, int>; // variable -> exponent

class Poly {
public:
  Poly() = default;
  Poly(std::int64_t c); // NOLINT: constants convert implicitly
  static Poly var(const std::string &name);

  const std::map<Monomial, std::int64_t> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::int64_t constant() const;
  bool nonnegative_coefficients() const;
  std::vector<std::string> variables() const;

  Poly operator+(const Poly &o) const;
  Poly operator-(const Poly &o) const;
  Poly operator*(const Poly &o) const;
  Poly &operator+=(const Poly &o) { return *this = *this + o; }
  bool operator==(const Poly &) const = default;
  bool operator<(const Poly &o) const { return terms_ < o.terms_; }

  // Simultaneous substitution; variables missing from the map stay.
  Poly substitute(const std::map<std::string, Poly> &sub) const;
  std::int64_t eval(const std::map<std::string, std::int64_t> &at) const;
  std::string str() const;

private:
  void add_term(const Monomial &m, std::int64_t c);
  std::map<Monomial, std::int64_t> terms_;
};

// Formal sum of coeff * ul(arg) in the free commutative monoid over N*.
using Multiset = std::map<Poly, Poly>; // arg -> coefficient

enum class HeatKind { Nat, Multiset };

struct Heat {
  HeatKind kind = HeatKind::Nat;
  Poly nat;
  Multiset ms;

  static Heat zero(HeatKind k) { return Heat{k, {}, {}}; }
  static Heat ul(const Poly &arg, const Poly &coeff = 1);
  Heat operator+(const Heat &o) const;
  bool operator==(const Heat &o) const;
  Heat substitute(const std::map<std::string, Poly> &sub) const;
  std::string str() const;
};

// Concrete multisets: value -> multiplicity.
using ConcreteMultiset = std::map<std::int64_t, std::int64_t>;
ConcreteMultiset eval_multiset(const Multiset &ms, const std::map<std::string, std::int64_t> &at);

// ---------------------------------------------------------------------------
// Interpretation triples. Covariant maps use x1..xm, contravariant maps use
// y1..yn, the heat uses both.

struct InterpTriple {
  int m = 0;
  int n = 0;
  std::vector<Poly> cov; // n entries
  std::vector<Poly> con; // m entries
  Heat heat;
  bool operator==(const InterpTriple &o) const {
    return m == o.m && n == o.n && cov == o.cov && con == o.con && heat == o.heat;
  }
};

std::string xvar(int i); // "x<i>", 1-based
std::string yvar(int i);

InterpTriple identity_triple(int n, HeatKind k);
InterpTriple o_compose(const InterpTriple &f, const InterpTriple &g); // f then g
InterpTriple o_tensor(const InterpTriple &f, const InterpTriple &g);
// Swaps the roles of the two maps and of x/y in the heat.
InterpTriple dual_triple(const InterpTriple &f);
std::string to_string(const InterpTriple &t);

struct Carriers {
  int xmin = 1;
  int ymin = 1;
  HeatKind heat = HeatKind::Multiset;
};

struct Interpretation {
  std::string name;
  Carriers carriers;
  std::map<std::string, InterpTriple> table;
  const InterpTriple &at(const Operator &op) const;
};

// Tables over the resource operators plus every algebraic operator of sig.
Interpretation builtin_f1(const Signature &sig);
Interpretation builtin_g(const Signature &sig);
// Text format, one operator per line:
//   interp NAME
//   carriers N* N* multiset
//   mu : cov(i,j) = (i+j) ; con(k) = (k,k) ; heat = ul(i) + ul(j)
Interpretation parse_interpretation(std::string_view text);
std::string to_text(const Interpretation &I);

InterpTriple interpret(const Interpretation &I, const Circuit &c);

// ---------------------------------------------------------------------------
// Comparison

enum class Cmp { GT, GE, EQ, UNKNOWN };
const char *to_string(Cmp c);
using VarMin = std::function<std::int64_t(const std::string &)>;
VarMin carrier_min(const Carriers &c); // x* -> xmin, y* -> ymin, others -> xmin
VarMin uniform_min(std::int64_t m);

Cmp compare_sym(const Poly &a, const Poly &b, const VarMin &vm);
// Exhaustive search over {min..min+3}^vars for a point where a < b (or a <= b
// when strict). Returns the point found.
std::optional<std::map<std::string, std::int64_t>> refute(const Poly &a, const Poly &b, bool strict,
                                                          const VarMin &vm);
Cmp compare_multiset(const Multiset &a, const Multiset &b, const VarMin &vm);
Cmp compare_heat(const Heat &a, const Heat &b, const VarMin &vm);

enum class Monotone { Pass, Unknown };
Monotone monotonicity_check(const InterpTriple &t);

enum class Verdict { Strict, Invariant, NonStrict, Unknown };
const char *to_string(Verdict v);

struct RuleCheck {
  Verdict verdict = Verdict::Unknown;
  InterpTriple lhs;
  InterpTriple rhs;
  std::vector<Cmp> cov;
  std::vector<Cmp> con;
  Cmp heat = Cmp::UNKNOWN;
};

RuleCheck check_rule(const Interpretation &I, const Rule &r);

struct CertificateEntry {
  std::string rule;
  int layer = -1; // index of the decreasing layer, -1 if none
  std::vector<RuleCheck> checks; // one per layer examined
};

struct Certificate {
  bool ok = false;
  std::vector<std::string> layers;
  std::vector<CertificateEntry> entries;
  std::vector<std::string> failing() const;
};

// Each rule must be Strict in some layer and Invariant in all earlier ones.
Certificate layered_termination(const Polygraph &p, const std::vector<Interpretation> &layers);

// ---------------------------------------------------------------------------
// Interpretation over terms paired with currents, evaluated at concrete points.

// |u| = 1 + length of the longest reduction path from u. Throws Error(Domain)
// on a reduction cycle or when fuel runs out.
class PathMeasure {
public:
  explicit PathMeasure(Trs trs, std::uint64_t fuel = 1000000) : trs_(std::move(trs)), fuel_(fuel) {}
  std::int64_t operator()(const Term &u);
  // u ->+ v
  bool reaches(const Term &u, const Term &v);
  const Trs &trs() const { return trs_; }

private:
  Trs trs_;
  std::uint64_t fuel_;
  std::map<Term, std::int64_t> memo_;
  std::map<Term, std::vector<Term>> succ_;
  std::set<Term> active_;
  const std::vector<Term> &successors(const Term &u);
};

struct TermCurrent {
  Term u;
  std::int64_t i = 1;
  bool operator==(const TermCurrent &) const = default;
};

struct ConcreteTriple {
  std::vector<TermCurrent> cov;
  ConcreteMultiset heat;
};

ConcreteTriple interpret_terms(const Circuit &c, const std::vector<TermCurrent> &inputs, PathMeasure &measure);
// (u,i) >= (v,j) iff u ->+ v, or u == v and i >= j.
bool current_ge(const TermCurrent &a, const TermCurrent &b, PathMeasure &measure);
// Multiset extension of the order on N*: GT, EQ, or UNKNOWN when neither a > b nor a == b.
Cmp compare_concrete(const ConcreteMultiset &a, const ConcreteMultiset &b);

} // namespace poly
