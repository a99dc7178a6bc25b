#include "poly/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace poly {

Term Term::variable(int i) {
  if (i < 1)
    throw Error(ErrorCode::Domain, "variable index must be positive");
  Term t;
  t.var = i;
  return t;
}

Term Term::app(std::string op, std::vector<Term> args) {
  Term t;
  t.op = std::move(op);
  t.args = std::move(args);
  return t;
}

int sharp(const Term &u) {
  if (u.is_var())
    return u.var;
  int s = 0;
  for (auto &a : u.args)
    s = std::max(s, sharp(a));
  return s;
}

int term_size(const Term &u) {
  int s = 1;
  for (auto &a : u.args)
    s += term_size(a);
  return s;
}

int term_depth(const Term &u) {
  int d = 0;
  for (auto &a : u.args)
    d = std::max(d, term_depth(a));
  return d + 1;
}

static void collect_occ(const Term &u, std::vector<int> &out) {
  if (u.is_var()) {
    out.push_back(u.var);
    return;
  }
  for (auto &a : u.args)
    collect_occ(a, out);
}

std::vector<int> occurrences(const Term &u) {
  std::vector<int> out;
  collect_occ(u, out);
  return out;
}

bool is_linear(const Term &u) {
  auto occ = occurrences(u);
  std::sort(occ.begin(), occ.end());
  return std::adjacent_find(occ.begin(), occ.end()) == occ.end();
}

std::string to_string(const Term &u) {
  if (u.is_var())
    return "x" + std::to_string(u.var);
  if (u.args.empty())
    return u.op;
  std::string s = u.op + "(";
  for (std::size_t i = 0; i < u.args.size(); ++i)
    s += (i ? "," : "") + to_string(u.args[i]);
  return s + ")";
}

namespace {

bool variable_name(const std::string &s, int &idx) {
  if (s.size() < 2 || s[0] != 'x')
    return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  idx = std::stoi(s.substr(1));
  return idx >= 1;
}

Term parse_term_at(text::Lexer &lx, const Signature &sig) {
  auto t = lx.expect_ident("a term");
  int idx = 0;
  if (variable_name(t.text, idx) && !sig.contains(t.text))
    return Term::variable(idx);
  auto *op = sig.find(t.text);
  if (!op)
    lx.fail(t, "unknown operator '" + t.text + "'");
  if (op->outputs != 1)
    lx.fail(t, "operator '" + t.text + "' is not algebraic");
  std::vector<Term> args;
  if (lx.accept("(")) {
    if (!lx.accept(")")) {
      do {
        args.push_back(parse_term_at(lx, sig));
      } while (lx.accept(","));
      lx.expect(")");
    }
  }
  if (static_cast<int>(args.size()) != op->inputs)
    lx.fail(t, "operator '" + t.text + "' expects " + std::to_string(op->inputs) + " arguments, got " +
                   std::to_string(args.size()));
  return Term::app(t.text, std::move(args));
}

} // namespace

Term parse_term(std::string_view src, const Signature &sig) {
  text::Lexer lx(src);
  Term t = parse_term_at(lx, sig);
  lx.expect_end();
  return t;
}

TermFamily family_identity(int n) {
  TermFamily f;
  f.m = n;
  for (int i = 1; i <= n; ++i)
    f.terms.push_back(Term::variable(i));
  return f;
}

Term substitute(const Term &t, const std::vector<Term> &sub) {
  if (t.is_var()) {
    if (t.var > static_cast<int>(sub.size()))
      throw Error(ErrorCode::Arity, "substitution does not cover x" + std::to_string(t.var));
    return sub[t.var - 1];
  }
  Term r = Term::app(t.op);
  for (auto &a : t.args)
    r.args.push_back(substitute(a, sub));
  return r;
}

TermFamily family_compose(const TermFamily &u, const TermFamily &v) {
  if (u.n() != v.m)
    throw Error(ErrorCode::Arity, "family arities do not match");
  TermFamily r;
  r.m = u.m;
  for (auto &t : v.terms)
    r.terms.push_back(substitute(t, u.terms));
  return r;
}

TermFamily family_tensor(const TermFamily &u, const TermFamily &v) {
  TermFamily r;
  r.m = u.m + v.m;
  r.terms = u.terms;
  std::vector<Term> shift;
  for (int j = 1; j <= v.m; ++j)
    shift.push_back(Term::variable(j + u.m));
  for (auto &t : v.terms)
    r.terms.push_back(substitute(t, shift));
  return r;
}

std::string to_string(const TermFamily &f) {
  std::string s = "(";
  for (std::size_t i = 0; i < f.terms.size(); ++i)
    s += (i ? ", " : "") + to_string(f.terms[i]);
  return s + ") : " + std::to_string(f.m) + " -> " + std::to_string(f.n());
}

// ---------------------------------------------------------------------------
// Rewriting

void check_rule(const TrsRule &r, const Signature &sig) {
  if (r.lhs.is_var())
    throw Error(ErrorCode::Domain, "rule " + r.name + ": left side is a variable");
  auto lv = occurrences(r.lhs);
  std::set<int> ls(lv.begin(), lv.end());
  for (int v : occurrences(r.rhs))
    if (!ls.count(v))
      throw Error(ErrorCode::Domain, "rule " + r.name + ": x" + std::to_string(v) + " not bound by the left side");
  std::function<void(const Term &)> check = [&](const Term &t) {
    if (t.is_var())
      return;
    auto *op = sig.find(t.op);
    if (!op || op->outputs != 1 || op->inputs != static_cast<int>(t.args.size()))
      throw Error(ErrorCode::Domain, "rule " + r.name + ": bad use of operator " + t.op);
    for (auto &a : t.args)
      check(a);
  };
  check(r.lhs);
  check(r.rhs);
}

Trs parse_trs(std::string_view src) {
  Trs trs;
  text::Lexer lx(src);
  while (!lx.at_end()) {
    auto head = lx.expect_ident("'op' or a rule name");
    if (head.text == "op" && lx.peek().text != ":") {
      auto name = lx.expect_ident("an operator name");
      lx.expect(":");
      int in = lx.expect_int();
      lx.expect("->");
      int out = lx.expect_int();
      if (out != 1)
        lx.fail(name, "term signatures are algebraic: '" + name.text + "' must have one output");
      if (trs.sig.contains(name.text))
        lx.fail(name, "duplicate operator '" + name.text + "'");
      trs.sig.add({name.text, in, out});
      continue;
    }
    lx.expect(":");
    TrsRule r;
    r.name = head.text;
    r.lhs = parse_term_at(lx, trs.sig);
    lx.expect("=>");
    r.rhs = parse_term_at(lx, trs.sig);
    try {
      check_rule(r, trs.sig);
    } catch (const Error &e) {
      lx.fail(head, e.what());
    }
    trs.rules.push_back(std::move(r));
  }
  return trs;
}

std::string to_text(const Trs &trs) {
  std::ostringstream os;
  for (auto &op : trs.sig.operators())
    os << "op " << op.name << " : " << op.inputs << " -> " << op.outputs << "\n";
  for (auto &r : trs.rules)
    os << r.name << ": " << to_string(r.lhs) << " => " << to_string(r.rhs) << "\n";
  return os.str();
}

bool match_term(const Term &p, const Term &t, std::vector<Term> &sub, std::vector<char> &bound) {
  if (p.is_var()) {
    if (static_cast<int>(sub.size()) < p.var) {
      sub.resize(p.var);
      bound.resize(p.var, 0);
    }
    if (bound[p.var - 1])
      return sub[p.var - 1] == t;
    sub[p.var - 1] = t;
    bound[p.var - 1] = 1;
    return true;
  }
  if (t.is_var() || t.op != p.op || t.args.size() != p.args.size())
    return false;
  for (std::size_t i = 0; i < p.args.size(); ++i)
    if (!match_term(p.args[i], t.args[i], sub, bound))
      return false;
  return true;
}

const Term &subterm_at(const Term &t, const std::vector<int> &pos) {
  const Term *cur = &t;
  for (int i : pos)
    cur = &cur->args.at(i);
  return *cur;
}

Term replace_at(const Term &t, const std::vector<int> &pos, const Term &by) {
  if (pos.empty())
    return by;
  Term r = t;
  Term *cur = &r;
  for (int i : pos)
    cur = &cur->args.at(i);
  *cur = by;
  return r;
}

static void steps_at(const Trs &trs, const Term &root, const Term &t, std::vector<int> &pos,
                     std::vector<TermStep> &out) {
  for (int k = 0; k < static_cast<int>(trs.rules.size()); ++k) {
    std::vector<Term> sub;
    std::vector<char> bound;
    if (match_term(trs.rules[k].lhs, t, sub, bound)) {
      // rhs variables are bound by lhs, so unbound slots are never read
      out.push_back({k, pos, replace_at(root, pos, substitute(trs.rules[k].rhs, sub))});
    }
  }
  for (int i = 0; i < static_cast<int>(t.args.size()); ++i) {
    pos.push_back(i);
    steps_at(trs, root, t.args[i], pos, out);
    pos.pop_back();
  }
}

std::vector<TermStep> trs_steps(const Trs &trs, const Term &u) {
  std::vector<TermStep> out;
  std::vector<int> pos;
  steps_at(trs, u, u, pos, out);
  return out;
}

std::vector<Term> trs_step(const Trs &trs, const Term &u) {
  std::vector<Term> out;
  for (auto &s : trs_steps(trs, u))
    out.push_back(std::move(s.result));
  return out;
}

TrsRule uniformize(const TrsRule &r) {
  std::map<int, int> ren;
  for (int v : occurrences(r.lhs))
    if (!ren.count(v)) {
      int next = static_cast<int>(ren.size()) + 1;
      ren[v] = next;
    }
  std::vector<Term> sub;
  int top = std::max(sharp(r.lhs), sharp(r.rhs));
  for (int v = 1; v <= top; ++v)
    sub.push_back(ren.count(v) ? Term::variable(ren[v]) : Term::variable(v));
  return {r.name, substitute(r.lhs, sub), substitute(r.rhs, sub)};
}

std::vector<Term> enumerate_terms(const Signature &sig, int depth, int nvars) {
  std::vector<Term> level; // all terms of depth <= d
  for (int i = 1; i <= nvars; ++i)
    level.push_back(Term::variable(i));
  for (auto &op : sig.operators())
    if (op.outputs == 1 && op.inputs == 0)
      level.push_back(Term::app(op.name));
  for (int d = 2; d <= depth; ++d) {
    std::vector<Term> next = level;
    for (auto &op : sig.operators()) {
      if (op.outputs != 1 || op.inputs == 0)
        continue;
      std::vector<std::size_t> idx(op.inputs, 0);
      while (true) {
        bool deep = false;
        std::vector<Term> args;
        for (auto i : idx) {
          args.push_back(level[i]);
          deep = deep || term_depth(level[i]) == d - 1;
        }
        if (deep)
          next.push_back(Term::app(op.name, std::move(args)));
        int k = op.inputs - 1;
        while (k >= 0 && ++idx[k] == level.size())
          idx[k--] = 0;
        if (k < 0)
          break;
      }
    }
    level = std::move(next);
  }
  if (depth < 1)
    level.clear();
  return level;
}

// ---------------------------------------------------------------------------
// Finite functions

FinFun finfun_compose(const FinFun &f, const FinFun &g) {
  if (f.n != g.m)
    throw Error(ErrorCode::Arity, "finite function arities do not match");
  FinFun r{f.m, g.n, {}};
  for (int k : g.mapping)
    r.mapping.push_back(f.mapping[k - 1]);
  return r;
}

TermFamily theta(const FinFun &f) {
  TermFamily u;
  u.m = f.m;
  for (int k : f.mapping)
    u.terms.push_back(Term::variable(k));
  return u;
}

FinFun omega(const TermFamily &u) {
  FinFun f{u.m, u.n(), {}};
  for (auto &t : u.terms) {
    if (!t.is_var() || t.var > u.m)
      throw Error(ErrorCode::Domain, "family is not made of variables");
    f.mapping.push_back(t.var);
  }
  return f;
}

std::string to_string(const FinFun &f) {
  std::string s = "[" + std::to_string(f.n) + "] -> [" + std::to_string(f.m) + "] {";
  for (int k = 0; k < f.n; ++k)
    s += (k ? ", " : "") + std::to_string(k + 1) + "->" + std::to_string(f.mapping[k]);
  return s + "}";
}

bool is_resource_op(std::string_view name) { return name == kTau || name == kDelta || name == kEpsilon; }

namespace {

std::vector<int> topo_order(const Circuit &c) {
  const int N = static_cast<int>(c.nodes.size());
  std::vector<int> order, state(N, 0);
  std::function<void(int)> visit = [&](int v) {
    if (state[v] == 2)
      return;
    if (state[v] == 1)
      throw Error(ErrorCode::Domain, "circuit has a cycle");
    state[v] = 1;
    for (auto &s : c.nodes[v].in)
      if (s.node >= 0)
        visit(s.node);
    state[v] = 2;
    order.push_back(v);
  };
  for (int v = 0; v < N; ++v)
    visit(v);
  return order;
}

} // namespace

TermFamily project_pi(const Circuit &c) {
  std::vector<std::vector<Term>> val(c.nodes.size());
  auto value = [&](Port s) -> const Term & {
    static thread_local Term tmp;
    if (s.node < 0) {
      tmp = Term::variable(s.port + 1);
      return tmp;
    }
    return val[s.node][s.port];
  };
  for (int v : topo_order(c)) {
    const Node &nd = c.nodes[v];
    std::vector<Term> in;
    for (auto &s : nd.in)
      in.push_back(value(s));
    if (nd.op == kTau && nd.nin == 2 && nd.nout == 2)
      val[v] = {in[1], in[0]};
    else if (nd.op == kDelta && nd.nin == 1 && nd.nout == 2)
      val[v] = {in[0], in[0]};
    else if (nd.op == kEpsilon && nd.nin == 1 && nd.nout == 0)
      val[v] = {};
    else if (nd.nout == 1 && !is_resource_op(nd.op))
      val[v] = {Term::app(nd.op, std::move(in))};
    else
      throw Error(ErrorCode::Domain, "operator '" + nd.op + "' has no term projection");
  }
  TermFamily f;
  f.m = c.m;
  for (auto &s : c.out)
    f.terms.push_back(value(s));
  return f;
}

FinFun finset_semantics(const Circuit &c) {
  for (auto &nd : c.nodes)
    if (!is_resource_op(nd.op))
      throw Error(ErrorCode::Domain, "operator '" + nd.op + "' is not a resource operator");
  // Follow each output wire upwards until it reaches a circuit input.
  FinFun f{c.m, c.n, {}};
  for (auto s : c.out) {
    while (s.node >= 0) {
      const Node &nd = c.nodes[s.node];
      if (nd.op == kTau)
        s = nd.in[1 - s.port];
      else if (nd.op == kDelta)
        s = nd.in[0];
      else
        throw Error(ErrorCode::Domain, "malformed resource circuit");
    }
    f.mapping.push_back(s.port + 1);
  }
  return f;
}

} // namespace poly
