#include "poly/heat.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace poly {

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::int64_t c) {
  if (c != 0)
    terms_[{}] = c;
}

Poly Poly::var(const std::string &name) {
  Poly p;
  p.terms_[{{name, 1}}] = 1;
  return p;
}

void Poly::add_term(const Monomial &m, std::int64_t c) {
  if (c == 0)
    return;
  auto &slot = terms_[m];
  slot += c;
  if (slot == 0)
    terms_.erase(m);
}

std::int64_t Poly::constant() const {
  auto it = terms_.find({});
  return it == terms_.end() ? 0 : it->second;
}

bool Poly::nonnegative_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(), [](auto &t) { return t.second >= 0; });
}

std::vector<std::string> Poly::variables() const {
  std::set<std::string> vs;
  for (auto &[m, c] : terms_)
    for (auto &[v, e] : m)
      vs.insert(v);
  return {vs.begin(), vs.end()};
}

Poly Poly::operator+(const Poly &o) const {
  Poly r = *this;
  for (auto &[m, c] : o.terms_)
    r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly &o) const {
  Poly r = *this;
  for (auto &[m, c] : o.terms_)
    r.add_term(m, -c);
  return r;
}

Poly Poly::operator*(const Poly &o) const {
  Poly r;
  for (auto &[m1, c1] : terms_)
    for (auto &[m2, c2] : o.terms_) {
      Monomial m = m1;
      for (auto &[v, e] : m2)
        m[v] += e;
      r.add_term(m, c1 * c2);
    }
  return r;
}

Poly Poly::substitute(const std::map<std::string, Poly> &sub) const {
  Poly r;
  for (auto &[m, c] : terms_) {
    Poly t(c);
    for (auto &[v, e] : m) {
      auto it = sub.find(v);
      Poly base = it == sub.end() ? Poly::var(v) : it->second;
      for (int k = 0; k < e; ++k)
        t = t * base;
    }
    r += t;
  }
  return r;
}

std::int64_t Poly::eval(const std::map<std::string, std::int64_t> &at) const {
  std::int64_t s = 0;
  for (auto &[m, c] : terms_) {
    std::int64_t t = c;
    for (auto &[v, e] : m) {
      auto it = at.find(v);
      if (it == at.end())
        throw Error(ErrorCode::Domain, "no value for variable " + v);
      for (int k = 0; k < e; ++k)
        t *= it->second;
    }
    s += t;
  }
  return s;
}

std::string Poly::str() const {
  if (terms_.empty())
    return "0";
  // Highest degree first, constant last.
  std::vector<std::pair<Monomial, std::int64_t>> ts(terms_.begin(), terms_.end());
  auto degree = [](const Monomial &m) {
    int d = 0;
    for (auto &[v, e] : m)
      d += e;
    return d;
  };
  std::stable_sort(ts.begin(), ts.end(), [&](auto &a, auto &b) { return degree(a.first) > degree(b.first); });
  std::string s;
  for (auto &[m, c] : ts) {
    std::string mono;
    for (auto &[v, e] : m) {
      if (!mono.empty())
        mono += "*";
      mono += v;
      if (e > 1)
        mono += "^" + std::to_string(e);
    }
    std::int64_t a = c < 0 ? -c : c;
    std::string t = mono.empty() ? std::to_string(a) : (a == 1 ? mono : std::to_string(a) + "*" + mono);
    if (s.empty())
      s = c < 0 ? "-" + t : t;
    else
      s += (c < 0 ? " - " : " + ") + t;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Heat

Heat Heat::ul(const Poly &arg, const Poly &coeff) {
  Heat h{HeatKind::Multiset, {}, {}};
  if (!coeff.is_zero())
    h.ms[arg] = coeff;
  return h;
}

static void ms_add(Multiset &a, const Poly &arg, const Poly &coeff) {
  Poly c = a[arg] + coeff;
  if (c.is_zero())
    a.erase(arg);
  else
    a[arg] = c;
}

Heat Heat::operator+(const Heat &o) const {
  if (kind != o.kind)
    throw Error(ErrorCode::Domain, "adding heats of different kinds");
  Heat r = *this;
  r.nat += o.nat;
  for (auto &[arg, c] : o.ms)
    ms_add(r.ms, arg, c);
  return r;
}

bool Heat::operator==(const Heat &o) const { return kind == o.kind && nat == o.nat && ms == o.ms; }

Heat Heat::substitute(const std::map<std::string, Poly> &sub) const {
  Heat r{kind, nat.substitute(sub), {}};
  for (auto &[arg, c] : ms)
    ms_add(r.ms, arg.substitute(sub), c.substitute(sub));
  return r;
}

std::string Heat::str() const {
  if (kind == HeatKind::Nat)
    return nat.str();
  if (ms.empty())
    return "0";
  std::string s;
  for (auto &[arg, c] : ms) {
    if (!s.empty())
      s += " + ";
    std::string cs = c.str();
    if (c.terms().size() > 1)
      cs = "(" + cs + ")";
    s += (c == Poly(1) ? "" : cs + "*") + "ul(" + arg.str() + ")";
  }
  return s;
}

ConcreteMultiset eval_multiset(const Multiset &ms, const std::map<std::string, std::int64_t> &at) {
  ConcreteMultiset r;
  for (auto &[arg, c] : ms) {
    auto k = c.eval(at);
    if (k != 0)
      r[arg.eval(at)] += k;
  }
  for (auto it = r.begin(); it != r.end();)
    it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

// ---------------------------------------------------------------------------
// Triples

std::string xvar(int i) { return "x" + std::to_string(i); }
std::string yvar(int i) { return "y" + std::to_string(i); }

InterpTriple identity_triple(int n, HeatKind k) {
  InterpTriple t{n, n, {}, {}, Heat::zero(k)};
  for (int i = 1; i <= n; ++i) {
    t.cov.push_back(Poly::var(xvar(i)));
    t.con.push_back(Poly::var(yvar(i)));
  }
  return t;
}

InterpTriple o_compose(const InterpTriple &f, const InterpTriple &g) {
  if (f.n != g.m)
    throw Error(ErrorCode::Arity, "triple arities do not match");
  std::map<std::string, Poly> xs, ys;
  for (int k = 0; k < f.n; ++k) {
    xs[xvar(k + 1)] = f.cov[k];
    ys[yvar(k + 1)] = g.con[k];
  }
  InterpTriple r{f.m, g.n, {}, {}, {}};
  for (auto &p : g.cov)
    r.cov.push_back(p.substitute(xs));
  for (auto &p : f.con)
    r.con.push_back(p.substitute(ys));
  r.heat = f.heat.substitute(ys) + g.heat.substitute(xs);
  return r;
}

InterpTriple o_tensor(const InterpTriple &f, const InterpTriple &g) {
  std::map<std::string, Poly> shift;
  for (int i = 1; i <= g.m; ++i)
    shift[xvar(i)] = Poly::var(xvar(i + f.m));
  for (int i = 1; i <= g.n; ++i)
    shift[yvar(i)] = Poly::var(yvar(i + f.n));
  InterpTriple r{f.m + g.m, f.n + g.n, f.cov, f.con, {}};
  for (auto &p : g.cov)
    r.cov.push_back(p.substitute(shift));
  for (auto &p : g.con)
    r.con.push_back(p.substitute(shift));
  r.heat = f.heat + g.heat.substitute(shift);
  return r;
}

InterpTriple dual_triple(const InterpTriple &f) {
  std::map<std::string, Poly> swap;
  for (int i = 1; i <= f.m; ++i)
    swap[xvar(i)] = Poly::var(yvar(i));
  for (int i = 1; i <= f.n; ++i)
    swap[yvar(i)] = Poly::var(xvar(i));
  InterpTriple r{f.n, f.m, {}, {}, f.heat.substitute(swap)};
  for (auto &p : f.con)
    r.cov.push_back(p.substitute(swap));
  for (auto &p : f.cov)
    r.con.push_back(p.substitute(swap));
  return r;
}

static std::string join(const std::vector<Poly> &ps) {
  std::string s = "(";
  for (std::size_t i = 0; i < ps.size(); ++i)
    s += (i ? ", " : "") + ps[i].str();
  return s + ")";
}

std::string to_string(const InterpTriple &t) {
  return "cov = " + join(t.cov) + " ; con = " + join(t.con) + " ; heat = " + t.heat.str();
}

const InterpTriple &Interpretation::at(const Operator &op) const {
  auto it = table.find(op.name);
  if (it == table.end())
    throw Error(ErrorCode::NotFound, "interpretation " + name + " has no entry for '" + op.name + "'");
  if (it->second.m != op.inputs || it->second.n != op.outputs)
    throw Error(ErrorCode::Arity, "interpretation " + name + ": wrong arity for '" + op.name + "'");
  return it->second;
}

namespace {

Poly X(int i) { return Poly::var(xvar(i)); }
Poly Y(int i) { return Poly::var(yvar(i)); }

template <class F> void for_algebraic(const Signature &sig, F f) {
  for (auto &op : sig.operators()) {
    if (is_resource_op(op.name))
      continue;
    if (op.outputs != 1)
      throw Error(ErrorCode::Domain, "builtin interpretations cover algebraic operators only: " + op.name);
    f(op);
  }
}

} // namespace

Interpretation builtin_f1(const Signature &sig) {
  Interpretation I{"f1", {1, 1, HeatKind::Multiset}, {}};
  I.table[kTau] = {2, 2, {X(2), X(1)}, {Y(2), Y(1)}, Heat::ul(X(1) + X(2), Y(2)) + Heat::ul(Y(2), X(1) * X(2))};
  I.table[kDelta] = {1, 2, {X(1), X(1)}, {Y(1) + Y(2) + 1}, Heat::ul(X(1)) + Heat::ul(Y(2))};
  I.table[kEpsilon] = {1, 0, {}, {Poly(1)}, Heat::zero(HeatKind::Multiset)};
  for_algebraic(sig, [&](const Operator &op) {
    Poly sum = 1;
    std::vector<Poly> con;
    for (int i = 1; i <= op.inputs; ++i) {
      sum += X(i);
      con.push_back(Y(1));
    }
    I.table[op.name] = {op.inputs, 1, {sum}, con, Heat::ul(Y(1))};
  });
  return I;
}

Interpretation builtin_g(const Signature &sig) {
  Interpretation I{"g", {0, 0, HeatKind::Nat}, {}};
  auto nat = [](Poly p) { return Heat{HeatKind::Nat, std::move(p), {}}; };
  I.table[kTau] = {2, 2, {X(2), X(1) + 1}, {Y(2), Y(1)}, nat(X(1) + X(2))};
  I.table[kDelta] = {1, 2, {X(1), X(1)}, {Y(1) + Y(2)}, nat(0)};
  I.table[kEpsilon] = {1, 0, {}, {Poly(1)}, nat(0)};
  for_algebraic(sig, [&](const Operator &op) {
    Poly sum;
    std::vector<Poly> con;
    for (int i = 1; i <= op.inputs; ++i) {
      sum += X(i);
      con.push_back(Y(1));
    }
    I.table[op.name] = {op.inputs, 1, {sum}, con, nat(0)};
  });
  return I;
}

// ---------------------------------------------------------------------------
// Interpretation files

namespace {

struct Val {
  Poly p;
  Multiset ms;
  bool is_ms = false;
};

class ExprParser {
public:
  ExprParser(text::Lexer &lx, const std::map<std::string, std::string> &names) : lx_(lx), names_(names) {}

  Val expr() {
    Val v = term();
    while (lx_.accept("+")) {
      Val w = term();
      if (v.is_ms || w.is_ms) {
        Val r{{}, {}, true};
        auto absorb = [&](const Val &a) {
          if (a.is_ms) {
            for (auto &[arg, c] : a.ms)
              ms_add(r.ms, arg, c);
          } else if (!a.p.is_zero()) {
            lx_.fail(lx_.peek(), "cannot add a number to a multiset");
          }
        };
        absorb(v);
        absorb(w);
        v = r;
      } else {
        v.p += w.p;
      }
    }
    return v;
  }

private:
  text::Lexer &lx_;
  const std::map<std::string, std::string> &names_;

  Val term() {
    Val v = factor();
    while (lx_.accept("*")) {
      Val w = factor();
      if (v.is_ms && w.is_ms)
        lx_.fail(lx_.peek(), "product of two multisets");
      if (w.is_ms)
        std::swap(v, w);
      if (v.is_ms) {
        Multiset r;
        for (auto &[arg, c] : v.ms)
          ms_add(r, arg, c * w.p);
        v.ms = r;
      } else {
        v.p = v.p * w.p;
      }
    }
    return v;
  }

  Val factor() {
    const auto &t = lx_.peek();
    if (t.kind == text::Tok::Int) {
      lx_.next();
      return {Poly(std::stoll(t.text)), {}, false};
    }
    if (lx_.accept("(")) {
      Val v = expr();
      lx_.expect(")");
      return v;
    }
    auto id = lx_.expect_ident("a number, a variable or ul(...)");
    if (id.text == "ul" && lx_.accept("(")) {
      Val arg = expr();
      if (arg.is_ms)
        lx_.fail(id, "nested ul(...)");
      lx_.expect(")");
      Val r{{}, {}, true};
      r.ms[arg.p] = 1;
      return r;
    }
    auto it = names_.find(id.text);
    if (it == names_.end())
      lx_.fail(id, "unknown variable '" + id.text + "'");
    Poly p = Poly::var(it->second);
    if (lx_.accept("^")) {
      int e = lx_.expect_int();
      Poly base = p;
      p = 1;
      for (int k = 0; k < e; ++k)
        p = p * base;
    }
    return {p, {}, false};
  }
};

std::vector<std::string> binder(text::Lexer &lx, const char *kw, std::map<std::string, std::string> &names,
                                const char *prefix) {
  lx.accept_word(kw) || (lx.fail(lx.peek(), std::string("expected '") + kw + "'"), false);
  lx.expect("(");
  std::vector<std::string> vs;
  if (!lx.accept(")")) {
    do {
      auto id = lx.expect_ident("a variable name");
      if (names.count(id.text))
        lx.fail(id, "variable '" + id.text + "' bound twice");
      names[id.text] = prefix + std::to_string(vs.size() + 1);
      vs.push_back(id.text);
    } while (lx.accept(","));
    lx.expect(")");
  }
  return vs;
}

std::vector<Poly> tuple(text::Lexer &lx, ExprParser &ep) {
  std::vector<Poly> out;
  lx.expect("(");
  if (lx.accept(")"))
    return out;
  do {
    auto at = lx.peek();
    Val v = ep.expr();
    if (v.is_ms)
      lx.fail(at, "a current cannot be a multiset");
    out.push_back(v.p);
  } while (lx.accept(","));
  lx.expect(")");
  return out;
}

int parse_carrier(text::Lexer &lx) {
  auto id = lx.expect_ident("N or N*");
  if (id.text != "N")
    lx.fail(id, "expected N or N*");
  return lx.accept("*") ? 1 : 0;
}

} // namespace

Interpretation parse_interpretation(std::string_view src) {
  text::Lexer lx(src);
  Interpretation I;
  I.name = "interp";
  if (lx.accept_word("interp"))
    I.name = lx.expect_ident("a name").text;
  if (lx.accept_word("carriers")) {
    I.carriers.xmin = parse_carrier(lx);
    I.carriers.ymin = parse_carrier(lx);
    auto k = lx.expect_ident("'nat' or 'multiset'");
    if (k.text == "nat")
      I.carriers.heat = HeatKind::Nat;
    else if (k.text == "multiset")
      I.carriers.heat = HeatKind::Multiset;
    else
      lx.fail(k, "expected 'nat' or 'multiset'");
  }
  while (!lx.at_end()) {
    auto op = lx.expect_ident("an operator name");
    if (I.table.count(op.text))
      lx.fail(op, "operator '" + op.text + "' given twice");
    lx.expect(":");
    std::map<std::string, std::string> names;
    auto xs = binder(lx, "cov", names, "x");
    lx.expect("=");
    std::map<std::string, std::string> xnames = names;
    ExprParser px(lx, xnames);
    auto cov = tuple(lx, px);
    lx.expect(";");
    auto ys = binder(lx, "con", names, "y");
    lx.expect("=");
    std::map<std::string, std::string> ynames;
    for (auto &y : ys)
      ynames[y] = names[y];
    ExprParser py(lx, ynames);
    auto con = tuple(lx, py);
    lx.expect(";");
    if (!lx.accept_word("heat"))
      lx.fail(lx.peek(), "expected 'heat'");
    lx.expect("=");
    auto hat = lx.peek();
    ExprParser ph(lx, names);
    Val h = ph.expr();
    InterpTriple t{static_cast<int>(xs.size()), static_cast<int>(ys.size()), cov, con, {}};
    if (static_cast<int>(cov.size()) != t.n)
      lx.fail(op, "covariant map of '" + op.text + "' has " + std::to_string(cov.size()) + " components, expected " +
                      std::to_string(t.n));
    if (static_cast<int>(con.size()) != t.m)
      lx.fail(op, "contravariant map of '" + op.text + "' has " + std::to_string(con.size()) +
                      " components, expected " + std::to_string(t.m));
    if (I.carriers.heat == HeatKind::Multiset) {
      if (!h.is_ms && !h.p.is_zero())
        lx.fail(hat, "heat must be a multiset expression");
      t.heat = Heat{HeatKind::Multiset, {}, h.ms};
    } else {
      if (h.is_ms)
        lx.fail(hat, "heat must be a number for carriers with nat heat");
      t.heat = Heat{HeatKind::Nat, h.p, {}};
    }
    if (monotonicity_check(t) != Monotone::Pass)
      lx.fail(op, "triple for '" + op.text + "' is not monotone");
    I.table[op.text] = std::move(t);
    lx.accept(";");
  }
  return I;
}

std::string to_text(const Interpretation &I) {
  std::ostringstream os;
  auto carrier = [](int m) { return m ? "N*" : "N"; };
  os << "interp " << I.name << "\n";
  os << "carriers " << carrier(I.carriers.xmin) << " " << carrier(I.carriers.ymin) << " "
     << (I.carriers.heat == HeatKind::Nat ? "nat" : "multiset") << "\n";
  for (auto &[name, t] : I.table) {
    os << name << " : cov(";
    for (int i = 1; i <= t.m; ++i)
      os << (i > 1 ? "," : "") << xvar(i);
    os << ") = " << join(t.cov) << " ; con(";
    for (int i = 1; i <= t.n; ++i)
      os << (i > 1 ? "," : "") << yvar(i);
    os << ") = " << join(t.con) << " ; heat = " << t.heat.str() << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Functor

InterpTriple interpret(const Interpretation &I, const Circuit &c) {
  const int N = static_cast<int>(c.nodes.size());
  std::vector<const InterpTriple *> tri(N);
  for (int v = 0; v < N; ++v)
    tri[v] = &I.at(Operator{c.nodes[v].op, c.nodes[v].nin, c.nodes[v].nout});
  // Topological order.
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

  std::vector<std::vector<Poly>> down(N);
  auto cov_of = [&](Port s) { return s.node < 0 ? Poly::var(xvar(s.port + 1)) : down[s.node][s.port]; };
  std::vector<std::map<std::string, Poly>> xsub(N);
  for (int v : order) {
    for (int j = 0; j < c.nodes[v].nin; ++j)
      xsub[v][xvar(j + 1)] = cov_of(c.nodes[v].in[j]);
    for (auto &p : tri[v]->cov)
      down[v].push_back(p.substitute(xsub[v]));
  }

  auto tg = wire_targets(c);
  std::vector<std::vector<Poly>> up(N); // contravariant value at each node input
  std::vector<std::map<std::string, Poly>> ysub(N);
  auto con_at = [&](Port t) { return t.node < 0 ? Poly::var(yvar(t.port + 1)) : up[t.node][t.port]; };
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    for (int k = 0; k < c.nodes[v].nout; ++k)
      ysub[v][yvar(k + 1)] = con_at(tg[v][k]);
    for (auto &p : tri[v]->con)
      up[v].push_back(p.substitute(ysub[v]));
  }

  InterpTriple r{c.m, c.n, {}, {}, Heat::zero(I.carriers.heat)};
  for (auto &s : c.out)
    r.cov.push_back(cov_of(s));
  for (int i = 0; i < c.m; ++i)
    r.con.push_back(con_at(tg[N][i]));
  for (int v = 0; v < N; ++v) {
    auto sub = xsub[v];
    sub.insert(ysub[v].begin(), ysub[v].end());
    r.heat = r.heat + tri[v]->heat.substitute(sub);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Comparison

const char *to_string(Cmp c) {
  switch (c) {
  case Cmp::GT: return "GT";
  case Cmp::GE: return "GE";
  case Cmp::EQ: return "EQ";
  case Cmp::UNKNOWN: return "UNKNOWN";
  }
  return "?";
}

VarMin carrier_min(const Carriers &c) {
  return [c](const std::string &v) -> std::int64_t { return !v.empty() && v[0] == 'y' ? c.ymin : c.xmin; };
}

VarMin uniform_min(std::int64_t m) {
  return [m](const std::string &) { return m; };
}

static Poly shifted(const Poly &p, const VarMin &vm) {
  std::map<std::string, Poly> sub;
  for (auto &v : p.variables())
    if (auto m = vm(v); m != 0)
      sub[v] = Poly::var(v) + m;
  return p.substitute(sub);
}

Cmp compare_sym(const Poly &a, const Poly &b, const VarMin &vm) {
  if (a == b)
    return Cmp::EQ;
  Poly d = shifted(a - b, vm);
  if (!d.nonnegative_coefficients())
    return Cmp::UNKNOWN;
  return d.constant() > 0 ? Cmp::GT : Cmp::GE;
}

std::optional<std::map<std::string, std::int64_t>> refute(const Poly &a, const Poly &b, bool strict,
                                                          const VarMin &vm) {
  std::set<std::string> vs;
  for (auto &v : a.variables())
    vs.insert(v);
  for (auto &v : b.variables())
    vs.insert(v);
  std::vector<std::string> vars(vs.begin(), vs.end());
  std::map<std::string, std::int64_t> at;
  for (auto &v : vars)
    at[v] = vm(v);
  while (true) {
    auto x = a.eval(at), y = b.eval(at);
    if (x < y || (strict && x == y))
      return at;
    std::size_t k = 0;
    for (; k < vars.size(); ++k) {
      if (++at[vars[k]] <= vm(vars[k]) + 3)
        break;
      at[vars[k]] = vm(vars[k]);
    }
    if (k == vars.size())
      return std::nullopt;
  }
}

Cmp compare_multiset(const Multiset &a0, const Multiset &b0, const VarMin &vm) {
  if (a0 == b0)
    return Cmp::EQ;
  Multiset a = a0, b = b0;
  // Cancel the common part generator by generator, monomial by monomial.
  for (auto &[arg, ca] : a0) {
    auto it = b.find(arg);
    if (it == b.end())
      continue;
    const Poly cb = it->second;
    if (compare_sym(ca, cb, vm) != Cmp::UNKNOWN) {
      ms_add(a, arg, Poly(0) - cb);
      b.erase(arg);
      continue;
    }
    if (compare_sym(cb, ca, vm) != Cmp::UNKNOWN) {
      a.erase(arg);
      ms_add(b, arg, Poly(0) - ca);
      continue;
    }
    Poly common;
    for (auto &[m, c] : ca.terms()) {
      auto jt = it->second.terms().find(m);
      if (jt != it->second.terms().end() && c > 0 && jt->second > 0) {
        Poly t(std::min(c, jt->second));
        for (auto &[v, e] : m)
          for (int k = 0; k < e; ++k)
            t = t * Poly::var(v);
        common += t;
      }
    }
    ms_add(a, arg, Poly(0) - common);
    ms_add(b, arg, Poly(0) - common);
  }
  auto surely_present = [&](const Poly &coeff) { return compare_sym(coeff, 0, vm) == Cmp::GT; };
  if (b.empty()) {
    if (a.empty())
      return Cmp::EQ;
    for (auto &[arg, c] : a)
      if (surely_present(c))
        return Cmp::GT;
    return Cmp::GE;
  }
  for (auto &[barg, bc] : b) {
    bool covered = false;
    for (auto &[aarg, ac] : a)
      if (surely_present(ac) && compare_sym(aarg, barg, vm) == Cmp::GT) {
        covered = true;
        break;
      }
    if (!covered)
      return Cmp::UNKNOWN;
  }
  return Cmp::GT;
}

Cmp compare_heat(const Heat &a, const Heat &b, const VarMin &vm) {
  if (a.kind != b.kind)
    throw Error(ErrorCode::Domain, "comparing heats of different kinds");
  return a.kind == HeatKind::Nat ? compare_sym(a.nat, b.nat, vm) : compare_multiset(a.ms, b.ms, vm);
}

Monotone monotonicity_check(const InterpTriple &t) {
  auto ok = [](const Poly &p) { return p.nonnegative_coefficients(); };
  for (auto &p : t.cov)
    if (!ok(p))
      return Monotone::Unknown;
  for (auto &p : t.con)
    if (!ok(p))
      return Monotone::Unknown;
  if (!ok(t.heat.nat))
    return Monotone::Unknown;
  for (auto &[arg, c] : t.heat.ms)
    if (!ok(arg) || !ok(c))
      return Monotone::Unknown;
  return Monotone::Pass;
}

const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::Strict: return "Strict";
  case Verdict::Invariant: return "Invariant";
  case Verdict::NonStrict: return "NonStrict";
  case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

RuleCheck check_rule(const Interpretation &I, const Rule &r) {
  RuleCheck rc;
  rc.lhs = interpret(I, r.lhs);
  rc.rhs = interpret(I, r.rhs);
  auto vm = carrier_min(I.carriers);
  bool maps_ok = true, all_eq = true;
  for (int k = 0; k < rc.lhs.n; ++k) {
    rc.cov.push_back(compare_sym(rc.lhs.cov[k], rc.rhs.cov[k], vm));
    maps_ok = maps_ok && rc.cov.back() != Cmp::UNKNOWN;
    all_eq = all_eq && rc.cov.back() == Cmp::EQ;
  }
  for (int k = 0; k < rc.lhs.m; ++k) {
    rc.con.push_back(compare_sym(rc.lhs.con[k], rc.rhs.con[k], vm));
    maps_ok = maps_ok && rc.con.back() != Cmp::UNKNOWN;
    all_eq = all_eq && rc.con.back() == Cmp::EQ;
  }
  rc.heat = compare_heat(rc.lhs.heat, rc.rhs.heat, vm);
  if (all_eq && rc.heat == Cmp::EQ)
    rc.verdict = Verdict::Invariant;
  else if (maps_ok && rc.heat == Cmp::GT)
    rc.verdict = Verdict::Strict;
  else if (maps_ok && rc.heat != Cmp::UNKNOWN)
    rc.verdict = Verdict::NonStrict;
  else
    rc.verdict = Verdict::Unknown;
  return rc;
}

std::vector<std::string> Certificate::failing() const {
  std::vector<std::string> out;
  for (auto &e : entries)
    if (e.layer < 0)
      out.push_back(e.rule);
  return out;
}

Certificate layered_termination(const Polygraph &p, const std::vector<Interpretation> &layers) {
  if (layers.empty())
    throw Error(ErrorCode::Domain, "at least one interpretation layer is required");
  Certificate cert;
  for (auto &I : layers)
    cert.layers.push_back(I.name);
  cert.ok = true;
  for (auto &r : p.rules) {
    CertificateEntry e{r.name, -1, {}};
    for (int k = 0; k < static_cast<int>(layers.size()); ++k) {
      e.checks.push_back(check_rule(layers[k], r));
      auto v = e.checks.back().verdict;
      if (v == Verdict::Strict) {
        e.layer = k;
        break;
      }
      if (v != Verdict::Invariant)
        break;
    }
    cert.ok = cert.ok && e.layer >= 0;
    cert.entries.push_back(std::move(e));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Terms with currents

const std::vector<Term> &PathMeasure::successors(const Term &u) {
  auto it = succ_.find(u);
  if (it != succ_.end())
    return it->second;
  if (fuel_ == 0)
    throw Error(ErrorCode::Domain, "path measure ran out of fuel");
  --fuel_;
  return succ_[u] = trs_step(trs_, u);
}

std::int64_t PathMeasure::operator()(const Term &u) {
  if (auto it = memo_.find(u); it != memo_.end())
    return it->second;
  if (!active_.insert(u).second)
    throw Error(ErrorCode::Domain, "reduction cycle through " + to_string(u));
  std::int64_t best = 1;
  auto next = successors(u);
  for (auto &v : next)
    best = std::max(best, (*this)(v) + 1);
  active_.erase(u);
  return memo_[u] = best;
}

bool PathMeasure::reaches(const Term &u, const Term &v) {
  std::set<Term> seen;
  std::vector<Term> stack = successors(u);
  while (!stack.empty()) {
    Term t = std::move(stack.back());
    stack.pop_back();
    if (t == v)
      return true;
    if (!seen.insert(t).second)
      continue;
    for (auto &w : successors(t))
      stack.push_back(w);
  }
  return false;
}

ConcreteTriple interpret_terms(const Circuit &c, const std::vector<TermCurrent> &inputs, PathMeasure &measure) {
  if (static_cast<int>(inputs.size()) != c.m)
    throw Error(ErrorCode::Arity, "wrong number of input currents");
  const int N = static_cast<int>(c.nodes.size());
  std::vector<std::vector<TermCurrent>> val(N);
  std::vector<char> done(N, 0);
  ConcreteTriple r;
  auto value = [&](Port s) -> const TermCurrent & { return s.node < 0 ? inputs[s.port] : val[s.node][s.port]; };
  std::function<void(int)> eval = [&](int v) {
    if (done[v])
      return;
    for (auto &s : c.nodes[v].in)
      if (s.node >= 0)
        eval(s.node);
    const Node &nd = c.nodes[v];
    std::vector<TermCurrent> in;
    for (auto &s : nd.in)
      in.push_back(value(s));
    if (nd.op == kTau) {
      val[v] = {in[1], in[0]};
    } else if (nd.op == kDelta) {
      val[v] = {in[0], in[0]};
      r.heat[measure(in[0].u)] += in[0].i;
    } else if (nd.op == kEpsilon) {
      val[v] = {};
    } else if (nd.nout == 1) {
      Term t = Term::app(nd.op);
      std::int64_t sum = 0;
      for (auto &x : in) {
        t.args.push_back(x.u);
        sum += x.i;
      }
      if (nd.nin == 0) {
        val[v] = {{t, 1}};
      } else {
        r.heat[measure(t)] += sum;
        val[v] = {{t, 2 * sum}};
      }
    } else {
      throw Error(ErrorCode::Domain, "operator '" + nd.op + "' has no term interpretation");
    }
    done[v] = 1;
  };
  for (int v = 0; v < N; ++v)
    eval(v);
  for (auto &s : c.out)
    r.cov.push_back(value(s));
  return r;
}

bool current_ge(const TermCurrent &a, const TermCurrent &b, PathMeasure &measure) {
  if (a.u == b.u)
    return a.i >= b.i;
  return measure.reaches(a.u, b.u);
}

Cmp compare_concrete(const ConcreteMultiset &a0, const ConcreteMultiset &b0) {
  auto clean = [](ConcreteMultiset m) {
    for (auto it = m.begin(); it != m.end();)
      it = it->second == 0 ? m.erase(it) : std::next(it);
    return m;
  };
  auto a = clean(a0), b = clean(b0);
  if (a == b)
    return Cmp::EQ;
  for (auto &[x, k] : b) {
    auto ak = a.count(x) ? a.at(x) : 0;
    if (k <= ak)
      continue;
    bool dominated = false;
    for (auto it = a.upper_bound(x); it != a.end() && !dominated; ++it) {
      auto bk = b.count(it->first) ? b.at(it->first) : 0;
      dominated = it->second > bk;
    }
    if (!dominated)
      return Cmp::UNKNOWN;
  }
  return Cmp::GT;
}

} // namespace poly
