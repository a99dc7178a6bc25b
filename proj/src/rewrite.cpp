#include "poly/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace poly {

const Rule *Polygraph::find(std::string_view name) const {
  for (auto &r : rules)
    if (r.name == name)
      return &r;
  return nullptr;
}

void validate_rule(const Rule &r, const Signature &sig) {
  validate(r.lhs);
  validate(r.rhs);
  if (r.lhs.m != r.rhs.m || r.lhs.n != r.rhs.n)
    throw Error(ErrorCode::Arity, "rule " + r.name + ": sides are not parallel");
  if (r.lhs.nodes.empty())
    throw Error(ErrorCode::Domain, "rule " + r.name + ": left side has no operator");
  if (!is_connected(r.lhs) || has_pass_through(r.lhs))
    throw Error(ErrorCode::Domain, "rule " + r.name + ": left side must be connected without bare wires");
  if (!uses_only(r.lhs, sig) || !uses_only(r.rhs, sig))
    throw Error(ErrorCode::Domain, "rule " + r.name + ": operator outside the signature");
}

Rule make_rule(std::string name, std::string_view lhs, std::string_view rhs, const Signature &sig,
               std::string origin) {
  Rule r{std::move(name), parse_circuit(lhs, sig), parse_circuit(rhs, sig), std::move(origin)};
  validate_rule(r, sig);
  return r;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

Circuit parse_at(std::string_view text, const Signature &sig, int line, int col) {
  try {
    return parse_circuit(text, sig);
  } catch (const ParseError &e) {
    throw ParseError(line + e.line() - 1, e.line() == 1 ? col + e.column() - 1 : e.column(), e.detail());
  }
}

} // namespace

Polygraph parse_polygraph(std::string_view src) {
  Polygraph p;
  std::size_t start = 0;
  int line = 0;
  std::set<std::string> names;
  while (start <= src.size()) {
    std::size_t end = src.find('\n', start);
    if (end == std::string_view::npos)
      end = src.size();
    std::string_view raw = src.substr(start, end - start);
    start = end + 1;
    ++line;
    if (auto h = raw.find('#'); h != std::string_view::npos)
      raw = raw.substr(0, h);
    if (trim(raw).empty())
      continue;
    std::size_t lead = 0;
    while (std::isspace(static_cast<unsigned char>(raw[lead])))
      ++lead;
    if (raw.substr(lead, 3) == "op " || raw.substr(lead, 3) == "op\t") {
      text::Lexer lx(raw, line, 1);
      lx.expect_ident("'op'");
      auto name = lx.expect_ident("an operator name");
      lx.expect(":");
      int in = lx.expect_int();
      lx.expect("->");
      int out = lx.expect_int();
      lx.expect_end();
      if (p.sig.contains(name.text))
        throw ParseError(name.line, name.col, "duplicate operator '" + name.text + "'");
      p.sig.add({name.text, in, out});
      continue;
    }
    std::size_t pos = lead;
    std::string origin;
    if (raw[pos] == '[') {
      auto close = raw.find(']', pos);
      if (close == std::string_view::npos)
        throw ParseError(line, static_cast<int>(pos) + 1, "unterminated origin tag");
      origin = trim(raw.substr(pos + 1, close - pos - 1));
      pos = close + 1;
    }
    auto colon = raw.find(':', pos);
    if (colon == std::string_view::npos)
      throw ParseError(line, static_cast<int>(pos) + 1, "expected 'NAME : LHS => RHS'");
    std::string name = trim(raw.substr(pos, colon - pos));
    if (name.empty() || name.find_first_of(" \t") != std::string::npos)
      throw ParseError(line, static_cast<int>(pos) + 1, "bad rule name '" + name + "'");
    if (!names.insert(name).second)
      throw ParseError(line, static_cast<int>(pos) + 1, "duplicate rule '" + name + "'");
    auto arrow = raw.find("=>", colon);
    if (arrow == std::string_view::npos)
      throw ParseError(line, static_cast<int>(colon) + 2, "expected '=>'");
    if (raw.find("=>", arrow + 2) != std::string_view::npos)
      throw ParseError(line, static_cast<int>(raw.find("=>", arrow + 2)) + 1, "more than one '=>'");
    const int lcol = static_cast<int>(colon) + 2;
    const int rcol = static_cast<int>(arrow) + 3;
    Rule r{name, parse_at(raw.substr(colon + 1, arrow - colon - 1), p.sig, line, lcol),
           parse_at(raw.substr(arrow + 2), p.sig, line, rcol), origin};
    try {
      validate_rule(r, p.sig);
    } catch (const Error &e) {
      throw ParseError(line, static_cast<int>(pos) + 1, e.what());
    }
    p.rules.push_back(std::move(r));
  }
  return p;
}

std::string to_text(const Polygraph &p) {
  std::ostringstream os;
  for (auto &op : p.sig.operators())
    os << "op " << op.name << " : " << op.inputs << " -> " << op.outputs << "\n";
  for (auto &r : p.rules) {
    if (!r.origin.empty())
      os << "[" << r.origin << "] ";
    os << r.name << " : " << to_string(r.lhs) << " => " << to_string(r.rhs) << "\n";
  }
  return os.str();
}

Strategy parse_strategy(std::string_view s) {
  if (s == "leftmost")
    return Strategy::Leftmost;
  if (s == "random")
    return Strategy::Random;
  if (s == "all")
    return Strategy::All;
  throw Error(ErrorCode::Domain, "unknown strategy '" + std::string(s) + "'");
}

const char *to_string(Strategy s) {
  switch (s) {
  case Strategy::Leftmost: return "leftmost";
  case Strategy::Random: return "random";
  case Strategy::All: return "all";
  }
  return "?";
}

namespace {

std::vector<Reduct> all_reducts(const Polygraph &p, const Circuit &c, bool first_only) {
  std::vector<Reduct> out;
  if (c.nodes.empty())
    return out;
  for (int k = 0; k < static_cast<int>(p.rules.size()); ++k) {
    const Rule &r = p.rules[k];
    if (r.lhs.nodes.size() > c.nodes.size())
      continue;
    for (auto &ctx : find_matches(r.lhs, c)) {
      Circuit res = apply_context(ctx, r.rhs);
      out.push_back({k, ctx, std::move(res)});
      if (first_only)
        return out;
    }
  }
  return out;
}

std::vector<Reduct> step_with(const Polygraph &p, const Circuit &c, Strategy s, std::mt19937_64 &rng) {
  switch (s) {
  case Strategy::Leftmost:
    return all_reducts(p, c, true);
  case Strategy::All:
    return all_reducts(p, c, false);
  case Strategy::Random: {
    auto all = all_reducts(p, c, false);
    if (all.size() <= 1)
      return all;
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    auto chosen = std::move(all[pick(rng)]);
    return {std::move(chosen)};
  }
  }
  return {};
}

} // namespace

std::vector<Reduct> rewrite_step(const Polygraph &p, const Circuit &c, Strategy s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return step_with(p, c, s, rng);
}

ReductionTrace normalize(const Polygraph &p, const Circuit &c, std::uint64_t fuel, Strategy s,
                         std::uint64_t seed) {
  if (fuel == 0)
    throw Error(ErrorCode::Domain, "fuel must be positive");
  if (s == Strategy::All)
    s = Strategy::Leftmost;
  std::mt19937_64 rng(seed);
  ReductionTrace t;
  t.start = canonical_form(c);
  Circuit cur = t.start;
  for (std::uint64_t used = 0;; ++used) {
    auto next = step_with(p, cur, s, rng);
    if (next.empty()) {
      t.normal = true;
      return t;
    }
    if (used == fuel)
      return t;
    auto &r = next.front();
    t.steps.push_back({p.rules[r.rule].name, r.context.describe(), r.result});
    cur = std::move(r.result);
  }
}

// ---------------------------------------------------------------------------
// Critical pairs

namespace {

struct Glue {
  int P1 = 0;
  std::vector<int> g2; // l2 node -> glued node
  std::vector<Node> nodes;
  std::vector<std::vector<Port>> src; // per glued node input; node == -2 means dangling
  std::vector<std::vector<Port>> tgt; // per glued node output; node == -2 means dangling
};

constexpr int kDangling = -2;

// Merges one pattern into the glue; false on a port conflict.
bool merge(Glue &g, const Circuit &l, const std::vector<int> &to_glued) {
  auto tg = wire_targets(l);
  for (int v = 0; v < static_cast<int>(l.nodes.size()); ++v) {
    int w = to_glued[v];
    for (int j = 0; j < l.nodes[v].nin; ++j) {
      Port s = l.nodes[v].in[j];
      if (s.node < 0)
        continue;
      Port gs{to_glued[s.node], s.port};
      Port &cur = g.src[w][j];
      if (cur.node != kDangling && !(cur == gs))
        return false;
      cur = gs;
    }
    for (int k = 0; k < l.nodes[v].nout; ++k) {
      Port t = tg[v][k];
      if (t.node < 0)
        continue;
      Port gt{to_glued[t.node], t.port};
      Port &cur = g.tgt[w][k];
      if (cur.node != kDangling && !(cur == gt))
        return false;
      cur = gt;
    }
  }
  return true;
}

// Cyclic order of dangling ends around the outer face, found by face tracing
// on the rotation system given by port order. Empty optional if the glue has
// no planar embedding with every dangling end on one face.
struct Leaf {
  bool input;
  int node;
  int port;
};

std::optional<std::vector<Leaf>> outer_leaves(const Glue &g) {
  const int N = static_cast<int>(g.nodes.size());
  // Slot numbering per node, clockwise: inputs left to right, outputs right to left.
  auto deg = [&](int v) { return g.nodes[v].nin + g.nodes[v].nout; };
  auto in_slot = [&](int, int j) { return j; };
  auto out_slot = [&](int v, int k) { return g.nodes[v].nin + (g.nodes[v].nout - 1 - k); };
  std::vector<Leaf> leaves;
  std::map<std::pair<int, int>, int> leaf_of; // (node, slot) -> leaf index
  for (int v = 0; v < N; ++v) {
    for (int j = 0; j < g.nodes[v].nin; ++j)
      if (g.src[v][j].node == kDangling) {
        leaf_of[{v, in_slot(v, j)}] = static_cast<int>(leaves.size());
        leaves.push_back({true, v, j});
      }
    for (int k = 0; k < g.nodes[v].nout; ++k)
      if (g.tgt[v][k].node == kDangling) {
        leaf_of[{v, out_slot(v, k)}] = static_cast<int>(leaves.size());
        leaves.push_back({false, v, k});
      }
  }
  // A dart is (vertex, slot); leaf vertices are numbered N + leaf index.
  auto across = [&](int v, int s) -> std::pair<int, int> {
    if (v >= N) {
      const Leaf &l = leaves[v - N];
      return {l.node, l.input ? in_slot(l.node, l.port) : out_slot(l.node, l.port)};
    }
    if (auto it = leaf_of.find({v, s}); it != leaf_of.end())
      return {N + it->second, 0};
    if (s < g.nodes[v].nin) {
      Port p = g.src[v][s];
      return {p.node, out_slot(p.node, p.port)};
    }
    int k = g.nodes[v].nout - 1 - (s - g.nodes[v].nin);
    Port p = g.tgt[v][k];
    return {p.node, in_slot(p.node, p.port)};
  };
  auto vdeg = [&](int v) { return v >= N ? 1 : deg(v); };
  std::set<std::pair<int, int>> seen;
  int faces = 0, darts = 0;
  int leaf_face = -1;
  std::vector<int> order;
  for (int v = 0; v < N + static_cast<int>(leaves.size()); ++v)
    for (int s = 0; s < vdeg(v); ++s) {
      ++darts;
      if (seen.count({v, s}))
        continue;
      std::vector<int> face_leaves;
      int cv = v, cs = s;
      while (!seen.count({cv, cs})) {
        seen.insert({cv, cs});
        if (cv >= N)
          face_leaves.push_back(cv - N);
        auto [nv, ns] = across(cv, cs);
        cv = nv;
        cs = (ns + 1) % vdeg(nv);
      }
      if (!face_leaves.empty()) {
        if (leaf_face >= 0)
          return std::nullopt;
        leaf_face = faces;
        order = face_leaves;
      }
      ++faces;
    }
  const int V = N + static_cast<int>(leaves.size());
  const int E = darts / 2;
  if (V - E + faces != 2)
    return std::nullopt;
  std::vector<Leaf> out;
  for (int i : order)
    out.push_back(leaves[i]);
  return out;
}

Circuit build_from_glue(const Glue &g, const std::vector<Leaf> &ins, const std::vector<Leaf> &outs) {
  Circuit c;
  c.m = static_cast<int>(ins.size());
  c.n = static_cast<int>(outs.size());
  c.nodes = g.nodes;
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v)
    c.nodes[v].in = g.src[v];
  for (int i = 0; i < c.m; ++i)
    c.nodes[ins[i].node].in[ins[i].port] = Port{-1, i};
  for (auto &l : outs)
    c.out.push_back(Port{l.node, l.port});
  return c;
}

// Finds the context of `pattern` whose mapping is exactly `want` (pattern node
// -> node of canonical host).
std::optional<Context> context_with(const Circuit &pattern, const Circuit &host, const std::vector<int> &want) {
  for (auto &ctx : find_matches(pattern, host))
    if (ctx.mapping == want)
      return ctx;
  return std::nullopt;
}

} // namespace

std::vector<CriticalPair> critical_pairs(const Polygraph &p, int max_nodes) {
  std::vector<CriticalPair> out;
  std::set<std::string> seen;
  const int R = static_cast<int>(p.rules.size());
  for (int a = 0; a < R; ++a)
    for (int b = a; b < R; ++b) {
      const Circuit l1 = canonical_form(p.rules[a].lhs);
      const Circuit l2 = canonical_form(p.rules[b].lhs);
      const int P1 = static_cast<int>(l1.nodes.size());
      const int P2 = static_cast<int>(l2.nodes.size());
      std::vector<int> sigma(P1, -1);
      std::vector<char> used(P2, 0);
      std::function<void(int, int)> rec = [&](int u, int shared) {
        if (u == P1) {
          if (shared == 0 || P1 + P2 - shared > max_nodes)
            return;
          if (a == b && shared == P1) {
            bool ident = true;
            for (int v = 0; v < P1; ++v)
              ident = ident && sigma[v] == v;
            if (ident)
              return;
          }
          Glue g;
          g.P1 = P1;
          g.nodes = l1.nodes;
          g.g2.assign(P2, -1);
          for (int v = 0; v < P1; ++v)
            if (sigma[v] >= 0)
              g.g2[sigma[v]] = v;
          for (int w = 0; w < P2; ++w)
            if (g.g2[w] < 0) {
              g.g2[w] = static_cast<int>(g.nodes.size());
              g.nodes.push_back(l2.nodes[w]);
            }
          for (auto &nd : g.nodes) {
            g.src.emplace_back(nd.nin, Port{kDangling, 0});
            g.tgt.emplace_back(nd.nout, Port{kDangling, 0});
          }
          std::vector<int> g1(P1);
          for (int v = 0; v < P1; ++v)
            g1[v] = v;
          if (!merge(g, l1, g1) || !merge(g, l2, g.g2))
            return;
          auto cyc = outer_leaves(g);
          if (!cyc)
            return;
          const int L = static_cast<int>(cyc->size());
          for (int dir = 0; dir < 2; ++dir) {
            std::vector<Leaf> seq = *cyc;
            if (dir)
              std::reverse(seq.begin(), seq.end());
            for (int rot = 0; rot < std::max(L, 1); ++rot) {
              std::vector<Leaf> ins, outs;
              bool ok = true, seen_out = false;
              for (int i = 0; i < L && ok; ++i) {
                const Leaf &l = seq[(rot + i) % L];
                if (l.input) {
                  ok = !seen_out;
                  ins.push_back(l);
                } else {
                  seen_out = true;
                  outs.push_back(l);
                }
              }
              if (!ok)
                continue;
              std::reverse(outs.begin(), outs.end());
              Circuit s = build_from_glue(g, ins, outs);
              if (!is_acyclic(s) || !layers(s))
                continue;
              auto order = canonical_order(s);
              std::vector<int> pos(order.size());
              for (int i = 0; i < static_cast<int>(order.size()); ++i)
                pos[order[i]] = i;
              std::vector<int> want1(P1), want2(P2);
              for (int v = 0; v < P1; ++v)
                want1[v] = pos[v];
              for (int w = 0; w < P2; ++w)
                want2[w] = pos[g.g2[w]];
              Circuit cs = canonical_form(s);
              auto c1 = context_with(l1, cs, want1);
              auto c2 = context_with(l2, cs, want2);
              if (!c1 || !c2)
                continue;
              CriticalPair cp{a, b, cs, apply_context(*c1, p.rules[a].rhs), apply_context(*c2, p.rules[b].rhs)};
              auto fl = fingerprint(cp.left), fr = fingerprint(cp.right);
              if (a == b && fr < fl)
                std::swap(fl, fr);
              std::string key = std::to_string(a) + "/" + std::to_string(b) + "/" + fingerprint(cp.source) +
                                "/" + fl + "/" + fr;
              if (seen.insert(key).second)
                out.push_back(std::move(cp));
              return;
            }
          }
          return;
        }
        rec(u + 1, shared);
        for (int w = 0; w < P2; ++w)
          if (!used[w] && l1.nodes[u].op == l2.nodes[w].op && l1.nodes[u].nin == l2.nodes[w].nin &&
              l1.nodes[u].nout == l2.nodes[w].nout) {
            used[w] = 1;
            sigma[u] = w;
            rec(u + 1, shared + 1);
            sigma[u] = -1;
            used[w] = 0;
          }
      };
      rec(0, 0);
    }
  return out;
}

bool ConfluenceReport::all_joined() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const PairVerdict &v) { return v.joined; });
}

ConfluenceReport check_local_confluence(const Polygraph &p, const std::vector<CriticalPair> &pairs,
                                        std::uint64_t fuel, int probes, std::uint64_t seed) {
  ConfluenceReport rep;
  for (auto &cp : pairs) {
    PairVerdict v;
    auto l = normalize(p, cp.left, fuel);
    auto r = normalize(p, cp.right, fuel);
    v.left_nf = l.last();
    v.right_nf = r.last();
    if (l.normal && r.normal && l.last() == r.last()) {
      v.joined = true;
      v.how = "leftmost";
    }
    for (int k = 0; k < probes && !v.joined; ++k) {
      auto lr = normalize(p, cp.left, fuel, Strategy::Random, seed + k);
      auto rr = normalize(p, cp.right, fuel, Strategy::Random, seed + k);
      if (lr.normal && rr.normal && lr.last() == rr.last()) {
        v.joined = true;
        v.how = "random(" + std::to_string(seed + k) + ")";
        v.left_nf = lr.last();
        v.right_nf = rr.last();
      }
    }
    if (!v.joined)
      v.how = (l.normal && r.normal) ? "distinct" : "fuel";
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

} // namespace poly
