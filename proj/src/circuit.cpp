#include "poly/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

namespace poly {

Signature::Signature(std::vector<Operator> ops) {
  for (auto &op : ops)
    add(op);
}

void Signature::add(const Operator &op) {
  if (op.inputs < 0 || op.outputs < 0)
    throw Error(ErrorCode::Arity, "negative arity for operator " + op.name);
  if (contains(op.name))
    throw Error(ErrorCode::Domain, "duplicate operator name: " + op.name);
  ops_.push_back(op);
}

const Operator *Signature::find(std::string_view name) const {
  for (auto &op : ops_)
    if (op.name == name)
      return &op;
  return nullptr;
}

std::vector<std::vector<Port>> wire_targets(const Circuit &c) {
  const int N = static_cast<int>(c.nodes.size());
  std::vector<std::vector<Port>> tg(N + 1);
  for (int v = 0; v < N; ++v)
    tg[v].assign(c.nodes[v].nout, Port{-2, 0});
  tg[N].assign(c.m, Port{-2, 0});
  auto set = [&](Port src, Port dst) {
    auto &row = src.node < 0 ? tg[N] : tg[src.node];
    if (src.port < 0 || src.port >= static_cast<int>(row.size()))
      throw Error(ErrorCode::Domain, "wire source out of range");
    if (row[src.port].node != -2)
      throw Error(ErrorCode::Domain, "source port used twice");
    row[src.port] = dst;
  };
  for (int v = 0; v < N; ++v)
    for (int j = 0; j < c.nodes[v].nin; ++j)
      set(c.nodes[v].in[j], Port{v, j});
  for (int k = 0; k < c.n; ++k)
    set(c.out[k], Port{-1, k});
  for (auto &row : tg)
    for (auto &p : row)
      if (p.node == -2)
        throw Error(ErrorCode::Domain, "dangling source port");
  return tg;
}

Circuit identity(int n) {
  if (n < 0)
    throw Error(ErrorCode::Arity, "negative identity width");
  Circuit c;
  c.m = c.n = n;
  for (int i = 0; i < n; ++i)
    c.out.push_back(Port{-1, i});
  return c;
}

Circuit generator(const Operator &op) {
  Circuit c;
  c.m = op.inputs;
  c.n = op.outputs;
  Node nd{op.name, op.inputs, op.outputs, {}};
  for (int j = 0; j < op.inputs; ++j)
    nd.in.push_back(Port{-1, j});
  c.nodes.push_back(nd);
  for (int k = 0; k < op.outputs; ++k)
    c.out.push_back(Port{0, k});
  return c;
}

Circuit compose(const Circuit &f, const Circuit &g) {
  if (f.n != g.m)
    throw Error(ErrorCode::Arity, "cannot compose: " + std::to_string(f.n) + " outputs against " +
                                      std::to_string(g.m) + " inputs");
  Circuit c;
  c.m = f.m;
  c.n = g.n;
  c.nodes = f.nodes;
  const int F = static_cast<int>(f.nodes.size());
  auto remap = [&](Port s) { return s.node < 0 ? f.out[s.port] : Port{s.node + F, s.port}; };
  for (auto nd : g.nodes) {
    for (auto &s : nd.in)
      s = remap(s);
    c.nodes.push_back(std::move(nd));
  }
  for (auto s : g.out)
    c.out.push_back(remap(s));
  return c;
}

Circuit tensor(const Circuit &f, const Circuit &g) {
  Circuit c;
  c.m = f.m + g.m;
  c.n = f.n + g.n;
  c.nodes = f.nodes;
  c.out = f.out;
  const int F = static_cast<int>(f.nodes.size());
  auto remap = [&](Port s) {
    return s.node < 0 ? Port{-1, s.port + f.m} : Port{s.node + F, s.port};
  };
  for (auto nd : g.nodes) {
    for (auto &s : nd.in)
      s = remap(s);
    c.nodes.push_back(std::move(nd));
  }
  for (auto s : g.out)
    c.out.push_back(remap(s));
  return c;
}

Circuit tensor_all(const std::vector<Circuit> &parts) {
  Circuit c = identity(0);
  for (auto &p : parts)
    c = tensor(c, p);
  return c;
}

bool is_acyclic(const Circuit &c) {
  const int N = static_cast<int>(c.nodes.size());
  std::vector<int> indeg(N, 0);
  std::vector<std::vector<int>> succ(N);
  for (int v = 0; v < N; ++v)
    for (auto &s : c.nodes[v].in)
      if (s.node >= 0) {
        ++indeg[v];
        succ[s.node].push_back(v);
      }
  std::vector<int> stack;
  for (int v = 0; v < N; ++v)
    if (!indeg[v])
      stack.push_back(v);
  int seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int w : succ[v])
      if (--indeg[w] == 0)
        stack.push_back(w);
  }
  return seen == N;
}

void validate(const Circuit &c) {
  if (c.m < 0 || c.n < 0 || static_cast<int>(c.out.size()) != c.n)
    throw Error(ErrorCode::Domain, "interface size mismatch");
  const int N = static_cast<int>(c.nodes.size());
  for (auto &nd : c.nodes) {
    if (static_cast<int>(nd.in.size()) != nd.nin)
      throw Error(ErrorCode::Domain, "node " + nd.op + " has wrong input count");
    for (auto &s : nd.in)
      if (s.node >= N || s.node < -1)
        throw Error(ErrorCode::Domain, "wire from unknown node");
  }
  for (auto &s : c.out)
    if (s.node >= N || s.node < -1)
      throw Error(ErrorCode::Domain, "wire from unknown node");
  wire_targets(c); // linearity
  if (!is_acyclic(c))
    throw Error(ErrorCode::Domain, "circuit has a cycle");
}

namespace {

// Breadth-first labelling from a list of seed nodes, following wires in port order.
void bfs_label(const Circuit &c, const std::vector<std::vector<Port>> &tg, std::vector<int> &label,
               int &next, int seed) {
  if (seed < 0 || label[seed] >= 0)
    return;
  std::deque<int> q;
  label[seed] = next++;
  q.push_back(seed);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    auto visit = [&](int w) {
      if (w >= 0 && label[w] < 0) {
        label[w] = next++;
        q.push_back(w);
      }
    };
    for (auto &s : c.nodes[v].in)
      visit(s.node);
    for (auto &t : tg[v])
      visit(t.node);
  }
}

std::string component_code(const Circuit &c, const std::vector<std::vector<Port>> &tg,
                           const std::vector<int> &label, int root) {
  std::vector<int> local(c.nodes.size(), -1);
  std::vector<int> order;
  std::deque<int> q{root};
  local[root] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    order.push_back(v);
    auto visit = [&](int w) {
      if (w >= 0 && label[w] < 0 && local[w] < 0) {
        local[w] = static_cast<int>(order.size() + q.size());
        q.push_back(w);
      }
    };
    for (auto &s : c.nodes[v].in)
      visit(s.node);
    for (auto &t : tg[v])
      visit(t.node);
  }
  std::ostringstream os;
  for (int v : order) {
    os << c.nodes[v].op << '(';
    for (auto &s : c.nodes[v].in)
      os << local[s.node] << '.' << s.port << ',';
    os << '|';
    for (auto &t : tg[v])
      os << local[t.node] << '.' << t.port << ',';
    os << ')';
  }
  return os.str();
}

} // namespace

std::vector<int> canonical_order(const Circuit &c) {
  const int N = static_cast<int>(c.nodes.size());
  auto tg = wire_targets(c);

  std::vector<int> label(N, -1);
  int next = 0;
  for (int i = 0; i < c.m; ++i)
    bfs_label(c, tg, label, next, tg[N][i].node);
  for (int k = 0; k < c.n; ++k)
    bfs_label(c, tg, label, next, c.out[k].node);

  // Closed components: pick the root giving the smallest code, then order
  // components by that code.
  if (next < N) {
    std::vector<int> comp(N, -1);
    std::vector<std::vector<int>> comps;
    for (int v = 0; v < N; ++v) {
      if (label[v] >= 0 || comp[v] >= 0)
        continue;
      std::vector<int> members{v};
      comp[v] = static_cast<int>(comps.size());
      for (std::size_t i = 0; i < members.size(); ++i) {
        int u = members[i];
        auto add = [&](int w) {
          if (w >= 0 && comp[w] < 0) {
            comp[w] = comp[v];
            members.push_back(w);
          }
        };
        for (auto &s : c.nodes[u].in)
          add(s.node);
        for (auto &t : tg[u])
          add(t.node);
      }
      comps.push_back(members);
    }
    std::vector<std::pair<std::string, int>> keyed;
    for (auto &members : comps) {
      std::string best;
      int best_root = -1;
      for (int r : members) {
        auto code = component_code(c, tg, label, r);
        if (best_root < 0 || code < best) {
          best = code;
          best_root = r;
        }
      }
      keyed.emplace_back(best, best_root);
    }
    std::sort(keyed.begin(), keyed.end());
    for (auto &[code, root] : keyed)
      bfs_label(c, tg, label, next, root);
  }

  std::vector<int> depth(N, -1);
  std::function<int(int)> get_depth = [&](int v) -> int {
    if (depth[v] >= 0)
      return depth[v];
    int d = 0;
    for (auto &s : c.nodes[v].in)
      if (s.node >= 0)
        d = std::max(d, get_depth(s.node) + 1);
    return depth[v] = d;
  };
  int max_depth = -1;
  for (int v = 0; v < N; ++v)
    max_depth = std::max(max_depth, get_depth(v));

  std::vector<int> base(N, 0);
  std::vector<int> order;
  int next_base = c.m;
  auto source_id = [&](Port s) { return s.node < 0 ? s.port : base[s.node] + s.port; };
  for (int d = 0; d <= max_depth; ++d) {
    std::vector<std::tuple<std::string, int, int, int>> keys;
    for (int v = 0; v < N; ++v)
      if (depth[v] == d) {
        int first = c.nodes[v].nin > 0 ? source_id(c.nodes[v].in[0]) : INT_MAX;
        keys.emplace_back(c.nodes[v].op, first, label[v], v);
      }
    std::sort(keys.begin(), keys.end());
    for (auto &k : keys) {
      int v = std::get<3>(k);
      order.push_back(v);
      base[v] = next_base;
      next_base += c.nodes[v].nout;
    }
  }

  return order;
}

Circuit canonical_form(const Circuit &c) {
  const auto order = canonical_order(c);
  std::vector<int> newidx(c.nodes.size(), -1);
  for (int i = 0; i < static_cast<int>(order.size()); ++i)
    newidx[order[i]] = i;
  Circuit r;
  r.m = c.m;
  r.n = c.n;
  auto remap = [&](Port s) { return s.node < 0 ? s : Port{newidx[s.node], s.port}; };
  for (int v : order) {
    Node nd = c.nodes[v];
    for (auto &s : nd.in)
      s = remap(s);
    r.nodes.push_back(std::move(nd));
  }
  for (auto s : c.out)
    r.out.push_back(remap(s));
  return r;
}

bool equal_mod_exchange(const Circuit &a, const Circuit &b) {
  if (a.m != b.m || a.n != b.n || a.nodes.size() != b.nodes.size())
    return false;
  return canonical_form(a) == canonical_form(b);
}

std::string fingerprint(const Circuit &c) {
  std::string s = std::to_string(c.m) + ":" + std::to_string(c.n) + "|";
  for (auto &nd : c.nodes) {
    s += nd.op + "/" + std::to_string(nd.nin) + "/" + std::to_string(nd.nout) + "(";
    for (auto &p : nd.in)
      s += std::to_string(p.node) + "." + std::to_string(p.port) + ",";
    s += ")";
  }
  s += "|";
  for (auto &p : c.out)
    s += std::to_string(p.node) + "." + std::to_string(p.port) + ",";
  return s;
}

bool uses_only(const Circuit &c, const Signature &sig) {
  for (auto &nd : c.nodes) {
    auto *op = sig.find(nd.op);
    if (!op || op->inputs != nd.nin || op->outputs != nd.nout)
      return false;
  }
  return true;
}

bool is_connected(const Circuit &c) {
  const int N = static_cast<int>(c.nodes.size());
  if (N == 0)
    return false;
  auto tg = wire_targets(c);
  std::vector<int> label(N, -1);
  int next = 0;
  bfs_label(c, tg, label, next, 0);
  return next == N;
}

bool has_pass_through(const Circuit &c) {
  for (auto &s : c.out)
    if (s.node < 0)
      return true;
  return false;
}

// ---------------------------------------------------------------------------
// Layering

namespace {

struct SliceState {
  std::vector<Port> top;    // sources of the wires crossing the upper cut
  std::vector<Port> bottom; // targets of the wires crossing the lower cut
  std::vector<char> done;
  std::vector<Layer> upper; // in top-down order
  std::vector<Layer> lower; // in bottom-up order
  int remaining = 0;
};

class Slicer {
public:
  explicit Slicer(const Circuit &c) : c_(c), tg_(wire_targets(c)) {}

  std::optional<std::vector<Layer>> run() {
    SliceState s;
    for (int i = 0; i < c_.m; ++i)
      s.top.push_back(Port{-1, i});
    for (int k = 0; k < c_.n; ++k)
      s.bottom.push_back(Port{-1, k});
    s.done.assign(c_.nodes.size(), 0);
    s.remaining = static_cast<int>(c_.nodes.size());
    return search(s);
  }

private:
  const Circuit &c_;
  std::vector<std::vector<Port>> tg_;
  long budget_ = 200000;

  Port source_of(Port target) const {
    return target.node < 0 ? c_.out[target.port] : c_.nodes[target.node].in[target.port];
  }

  bool step_top(SliceState &s) {
    std::map<Port, int> pos;
    for (int i = 0; i < static_cast<int>(s.top.size()); ++i)
      pos[s.top[i]] = i;
    std::vector<std::pair<int, int>> ready;
    for (int v = 0; v < static_cast<int>(c_.nodes.size()); ++v) {
      const auto &nd = c_.nodes[v];
      if (s.done[v] || nd.nin == 0)
        continue;
      auto it = pos.find(nd.in[0]);
      if (it == pos.end())
        continue;
      bool ok = true;
      for (int j = 1; j < nd.nin && ok; ++j) {
        auto jt = pos.find(nd.in[j]);
        ok = jt != pos.end() && jt->second == it->second + j;
      }
      if (ok)
        ready.emplace_back(it->second, v);
    }
    if (ready.empty())
      return false;
    std::sort(ready.begin(), ready.end());
    Layer layer;
    layer.width = static_cast<int>(s.top.size());
    std::vector<Port> next;
    int cursor = 0;
    for (auto [p, v] : ready) {
      for (; cursor < p; ++cursor)
        next.push_back(s.top[cursor]);
      for (int k = 0; k < c_.nodes[v].nout; ++k)
        next.push_back(Port{v, k});
      cursor = p + c_.nodes[v].nin;
      layer.items.emplace_back(p, v);
      s.done[v] = 1;
      --s.remaining;
    }
    for (; cursor < static_cast<int>(s.top.size()); ++cursor)
      next.push_back(s.top[cursor]);
    s.top = std::move(next);
    s.upper.push_back(std::move(layer));
    return true;
  }

  bool step_bottom(SliceState &s) {
    std::map<Port, int> pos;
    for (int i = 0; i < static_cast<int>(s.bottom.size()); ++i)
      pos[s.bottom[i]] = i;
    std::vector<std::pair<int, int>> ready;
    for (int v = 0; v < static_cast<int>(c_.nodes.size()); ++v) {
      const auto &nd = c_.nodes[v];
      if (s.done[v] || nd.nout == 0)
        continue;
      auto it = pos.find(tg_[v][0]);
      if (it == pos.end())
        continue;
      bool ok = true;
      for (int k = 1; k < nd.nout && ok; ++k) {
        auto jt = pos.find(tg_[v][k]);
        ok = jt != pos.end() && jt->second == it->second + k;
      }
      if (ok)
        ready.emplace_back(it->second, v);
    }
    if (ready.empty())
      return false;
    std::sort(ready.begin(), ready.end());
    Layer layer;
    std::vector<Port> next;
    int cursor = 0;
    for (auto [p, v] : ready) {
      for (; cursor < p; ++cursor)
        next.push_back(s.bottom[cursor]);
      layer.items.emplace_back(static_cast<int>(next.size()), v);
      for (int j = 0; j < c_.nodes[v].nin; ++j)
        next.push_back(Port{v, j});
      cursor = p + c_.nodes[v].nout;
      s.done[v] = 1;
      --s.remaining;
    }
    for (; cursor < static_cast<int>(s.bottom.size()); ++cursor)
      next.push_back(s.bottom[cursor]);
    s.bottom = std::move(next);
    layer.width = static_cast<int>(s.bottom.size());
    s.lower.push_back(std::move(layer));
    return true;
  }

  bool junction_ok(const SliceState &s) const {
    if (s.top.size() != s.bottom.size())
      return false;
    for (std::size_t i = 0; i < s.top.size(); ++i)
      if (!(source_of(s.bottom[i]) == s.top[i]))
        return false;
    return true;
  }

  std::optional<std::vector<Layer>> search(SliceState s) {
    if (--budget_ < 0)
      return std::nullopt;
    while (step_top(s) || step_bottom(s)) {
    }
    if (s.remaining == 0) {
      if (!junction_ok(s))
        return std::nullopt;
      std::vector<Layer> out = s.upper;
      for (auto it = s.lower.rbegin(); it != s.lower.rend(); ++it)
        out.push_back(*it);
      return out;
    }
    // Stuck: place a source node (no inputs) somewhere in the upper cut.
    for (int v = 0; v < static_cast<int>(c_.nodes.size()); ++v) {
      if (s.done[v] || c_.nodes[v].nin != 0)
        continue;
      for (int p = 0; p <= static_cast<int>(s.top.size()); ++p) {
        SliceState t = s;
        Layer layer;
        layer.width = static_cast<int>(t.top.size());
        layer.items.emplace_back(p, v);
        std::vector<Port> outs;
        for (int k = 0; k < c_.nodes[v].nout; ++k)
          outs.push_back(Port{v, k});
        t.top.insert(t.top.begin() + p, outs.begin(), outs.end());
        t.done[v] = 1;
        --t.remaining;
        t.upper.push_back(layer);
        if (auto r = search(std::move(t)))
          return r;
        if (budget_ < 0)
          return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

} // namespace

std::optional<std::vector<Layer>> layers(const Circuit &c) {
  if (!is_acyclic(c))
    return std::nullopt;
  return Slicer(c).run();
}

std::string to_string(const Circuit &c) {
  if (c.nodes.empty())
    return "id(" + std::to_string(c.m) + ")";
  auto ls = layers(c);
  if (!ls)
    throw Error(ErrorCode::Domain, "circuit has no planar layout");
  std::vector<std::string> rows;
  for (auto &layer : *ls) {
    std::vector<std::string> parts;
    int cursor = 0;
    for (auto [p, v] : layer.items) {
      if (p > cursor)
        parts.push_back("id(" + std::to_string(p - cursor) + ")");
      parts.push_back(c.nodes[v].op);
      cursor = p + c.nodes[v].nin;
    }
    if (layer.width > cursor)
      parts.push_back("id(" + std::to_string(layer.width - cursor) + ")");
    std::string row;
    for (std::size_t i = 0; i < parts.size(); ++i)
      row += (i ? " * " : "") + parts[i];
    if (parts.size() > 1 && ls->size() > 1)
      row = "(" + row + ")";
    rows.push_back(row);
  }
  std::string s;
  for (std::size_t i = 0; i < rows.size(); ++i)
    s += (i ? " ; " : "") + rows[i];
  return s;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum Kind { Ident, Int, LParen, RParen, Semi, Star, End } kind;
  std::string text;
  int line, col;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t k) {
    for (std::size_t t = 0; t < k; ++t, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      adv(1);
      continue;
    }
    int l = line, c0 = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Token::Ident, std::string(s.substr(i, j - i)), l, c0});
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      out.push_back({Token::Int, std::string(s.substr(i, j - i)), l, c0});
      adv(j - i);
    } else {
      Token::Kind k;
      switch (ch) {
      case '(': k = Token::LParen; break;
      case ')': k = Token::RParen; break;
      case ';': k = Token::Semi; break;
      case '*': k = Token::Star; break;
      default: throw ParseError(l, c0, std::string("unexpected character '") + ch + "'");
      }
      out.push_back({k, std::string(1, ch), l, c0});
      adv(1);
    }
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

class CircuitParser {
public:
  CircuitParser(std::string_view text, const Signature &sig) : toks_(tokenize(text)), sig_(sig) {}

  Circuit parse() {
    Circuit c = expr();
    if (peek().kind != Token::End)
      fail(peek(), "unexpected '" + peek().text + "'");
    return c;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature &sig_;

  const Token &peek() const { return toks_[pos_]; }
  const Token &take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const Token &t, const std::string &msg) { throw ParseError(t.line, t.col, msg); }
  const Token &expect(Token::Kind k, const char *what) {
    if (peek().kind != k)
      fail(peek(), std::string("expected ") + what);
    return take();
  }

  Circuit expr() {
    Circuit c = term();
    while (peek().kind == Token::Semi) {
      const Token &t = take();
      Circuit d = term();
      if (c.n != d.m)
        fail(t, "cannot compose " + std::to_string(c.n) + " outputs with " + std::to_string(d.m) +
                    " inputs");
      c = compose(c, d);
    }
    return c;
  }

  Circuit term() {
    Circuit c = factor();
    while (peek().kind == Token::Star) {
      take();
      c = tensor(c, factor());
    }
    return c;
  }

  Circuit factor() {
    const Token &t = peek();
    if (t.kind == Token::LParen) {
      take();
      Circuit c = expr();
      expect(Token::RParen, "')'");
      return c;
    }
    if (t.kind == Token::Ident) {
      take();
      if (t.text == "id" && peek().kind == Token::LParen) {
        take();
        const Token &n = expect(Token::Int, "an integer");
        expect(Token::RParen, "')'");
        return identity(std::stoi(n.text));
      }
      auto *op = sig_.find(t.text);
      if (!op)
        fail(t, "unknown operator '" + t.text + "'");
      return generator(*op);
    }
    fail(t, t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }
};

} // namespace

Circuit parse_circuit(std::string_view text, const Signature &sig) {
  return canonical_form(CircuitParser(text, sig).parse());
}

// ---------------------------------------------------------------------------
// Matching

std::string Context::describe() const {
  std::string s = "nodes[";
  for (std::size_t i = 0; i < matched.size(); ++i)
    s += (i ? "," : "") + std::to_string(matched[i]);
  return s + "]";
}

Context trivial_context(const Circuit &f) {
  Context ctx;
  ctx.host.m = f.m;
  ctx.host.n = f.n;
  Node hole{kHoleName, f.m, f.n, {}};
  for (int j = 0; j < f.m; ++j)
    hole.in.push_back(Port{-1, j});
  ctx.host.nodes.push_back(hole);
  for (int k = 0; k < f.n; ++k)
    ctx.host.out.push_back(Port{0, k});
  ctx.hole = 0;
  for (int v = 0; v < static_cast<int>(f.nodes.size()); ++v) {
    ctx.matched.push_back(v);
    ctx.mapping.push_back(v);
  }
  return ctx;
}

namespace {

struct Step {
  int node;     // pattern node discovered
  int from;     // already-mapped pattern node
  bool via_in;  // discovered through an input of `from`
  int from_port;
  int node_port;
};

// Discovery order over a connected pattern, starting at node 0.
std::vector<Step> discovery(const Circuit &p, const std::vector<std::vector<Port>> &tg) {
  std::vector<Step> steps;
  std::vector<char> seen(p.nodes.size(), 0);
  std::deque<int> q{0};
  seen[0] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int j = 0; j < p.nodes[v].nin; ++j) {
      Port s = p.nodes[v].in[j];
      if (s.node >= 0 && !seen[s.node]) {
        seen[s.node] = 1;
        steps.push_back({s.node, v, true, j, s.port});
        q.push_back(s.node);
      }
    }
    for (int k = 0; k < p.nodes[v].nout; ++k) {
      Port t = tg[v][k];
      if (t.node >= 0 && !seen[t.node]) {
        seen[t.node] = 1;
        steps.push_back({t.node, v, false, k, t.port});
        q.push_back(t.node);
      }
    }
  }
  return steps;
}

bool same_op(const Node &a, const Node &b) { return a.op == b.op && a.nin == b.nin && a.nout == b.nout; }

} // namespace

std::vector<Context> find_matches(const Circuit &pattern, const Circuit &host_in) {
  if (pattern.nodes.empty())
    throw Error(ErrorCode::Domain, "pattern without nodes has no finite set of matches");
  if (!is_connected(pattern) || has_pass_through(pattern))
    throw Error(ErrorCode::Domain, "pattern must be connected and free of pass-through wires");
  const Circuit host = canonical_form(host_in);
  const auto ptg = wire_targets(pattern);
  const auto htg = wire_targets(host);
  const auto steps = discovery(pattern, ptg);
  const int P = static_cast<int>(pattern.nodes.size());
  const int H = static_cast<int>(host.nodes.size());

  std::vector<Context> result;
  for (int root = 0; root < H; ++root) {
    if (!same_op(pattern.nodes[0], host.nodes[root]))
      continue;
    std::vector<int> map(P, -1);
    std::vector<int> inv(H, -1);
    map[0] = root;
    inv[root] = 0;
    bool ok = true;
    for (auto &st : steps) {
      int hf = map[st.from];
      Port hp = st.via_in ? host.nodes[hf].in[st.from_port] : htg[hf][st.from_port];
      if (hp.node < 0 || hp.port != st.node_port || inv[hp.node] >= 0 ||
          !same_op(pattern.nodes[st.node], host.nodes[hp.node])) {
        ok = false;
        break;
      }
      map[st.node] = hp.node;
      inv[hp.node] = st.node;
    }
    if (!ok)
      continue;
    // Every pattern wire must exist in the host; boundary wires must leave the match.
    for (int v = 0; v < P && ok; ++v)
      for (int j = 0; j < pattern.nodes[v].nin && ok; ++j) {
        Port s = pattern.nodes[v].in[j];
        Port hs = host.nodes[map[v]].in[j];
        if (s.node >= 0)
          ok = hs.node == map[s.node] && hs.port == s.port;
        else
          ok = hs.node < 0 || inv[hs.node] < 0;
      }
    for (int k = 0; k < pattern.n && ok; ++k) {
      Port s = pattern.out[k];
      Port ht = htg[map[s.node]][s.port];
      ok = ht.node < 0 || inv[ht.node] < 0;
    }
    if (!ok)
      continue;
    // Convexity: nothing reachable from the match's outputs leads back in.
    {
      std::vector<char> seen(H, 0);
      std::vector<int> stack;
      for (int k = 0; k < pattern.n; ++k) {
        Port s = pattern.out[k];
        Port ht = htg[map[s.node]][s.port];
        if (ht.node >= 0)
          stack.push_back(ht.node);
      }
      while (!stack.empty() && ok) {
        int v = stack.back();
        stack.pop_back();
        if (seen[v])
          continue;
        seen[v] = 1;
        if (inv[v] >= 0) {
          ok = false;
          break;
        }
        for (auto &t : htg[v])
          if (t.node >= 0)
            stack.push_back(t.node);
      }
    }
    if (!ok)
      continue;

    Context ctx;
    ctx.mapping = map;
    for (int v = 0; v < H; ++v)
      if (inv[v] >= 0)
        ctx.matched.push_back(v);
    // Build the context: unmatched nodes in host order, then the hole.
    std::vector<int> newidx(H, -1);
    int cnt = 0;
    for (int v = 0; v < H; ++v)
      if (inv[v] < 0)
        newidx[v] = cnt++;
    const int hole = cnt;
    // Source in the context of a wire that, in the host, leaves host port s.
    auto remap = [&](Port s) -> Port {
      if (s.node < 0)
        return s;
      if (inv[s.node] < 0)
        return Port{newidx[s.node], s.port};
      Port ps{inv[s.node], s.port};
      for (int k = 0; k < pattern.n; ++k)
        if (pattern.out[k] == ps)
          return Port{hole, k};
      throw Error(ErrorCode::Domain, "internal: match output not on the boundary");
    };
    ctx.host.m = host.m;
    ctx.host.n = host.n;
    for (int v = 0; v < H; ++v) {
      if (inv[v] >= 0)
        continue;
      Node nd = host.nodes[v];
      for (auto &s : nd.in)
        s = remap(s);
      ctx.host.nodes.push_back(std::move(nd));
    }
    Node hn{kHoleName, pattern.m, pattern.n, std::vector<Port>(pattern.m)};
    for (int v = 0; v < P; ++v)
      for (int j = 0; j < pattern.nodes[v].nin; ++j) {
        Port s = pattern.nodes[v].in[j];
        if (s.node < 0)
          hn.in[s.port] = remap(host.nodes[map[v]].in[j]);
      }
    ctx.host.nodes.push_back(hn);
    ctx.hole = hole;
    for (auto s : host.out)
      ctx.host.out.push_back(remap(s));
    result.push_back(std::move(ctx));
  }
  std::stable_sort(result.begin(), result.end(),
                   [](const Context &a, const Context &b) { return a.matched < b.matched; });
  return result;
}

Circuit apply_context(const Context &ctx, const Circuit &f) {
  const Circuit &h = ctx.host;
  const Node &hole = h.nodes[ctx.hole];
  if (f.m != hole.nin || f.n != hole.nout)
    throw Error(ErrorCode::Arity, "hole expects " + std::to_string(hole.nin) + " -> " +
                                      std::to_string(hole.nout) + ", got " + std::to_string(f.m) +
                                      " -> " + std::to_string(f.n));
  const int HN = static_cast<int>(h.nodes.size());
  const int F = static_cast<int>(f.nodes.size());
  // Layout: host nodes except the hole keep their order, then f's nodes.
  std::vector<int> newidx(HN, -1);
  int cnt = 0;
  for (int v = 0; v < HN; ++v)
    if (v != ctx.hole)
      newidx[v] = cnt++;
  const int base = cnt;
  std::function<Port(Port)> host_src;
  auto f_src = [&](Port s) -> Port {
    if (s.node < 0)
      return host_src(hole.in[s.port]);
    return Port{base + s.node, s.port};
  };
  host_src = [&](Port s) -> Port {
    if (s.node < 0)
      return s;
    if (s.node == ctx.hole)
      return f_src(f.out[s.port]);
    return Port{newidx[s.node], s.port};
  };
  Circuit r;
  r.m = h.m;
  r.n = h.n;
  for (int v = 0; v < HN; ++v) {
    if (v == ctx.hole)
      continue;
    Node nd = h.nodes[v];
    for (auto &s : nd.in)
      s = host_src(s);
    r.nodes.push_back(std::move(nd));
  }
  for (int v = 0; v < F; ++v) {
    Node nd = f.nodes[v];
    for (auto &s : nd.in)
      s = f_src(s);
    r.nodes.push_back(std::move(nd));
  }
  for (auto s : h.out)
    r.out.push_back(host_src(s));
  return canonical_form(r);
}

} // namespace poly
