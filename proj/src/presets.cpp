#include "poly/presets.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "poly/translation.hpp"

#ifndef POLY_DEFAULT_DATA_DIR
#define POLY_DEFAULT_DATA_DIR "data"
#endif

namespace poly {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string default_data_dir() {
  if (const char *env = std::getenv("POLY_DATA_DIR"); env && *env)
    return env;
  return POLY_DEFAULT_DATA_DIR;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------
// Duality

const std::string &Duality::dual(const std::string &op) const {
  auto it = table.find(op);
  if (it == table.end())
    throw Error(ErrorCode::Domain, "operator '" + op + "' has no dual");
  return it->second;
}

Duality lz2_duality() {
  return {{{"mu", "delta"},
           {"delta", "mu"},
           {"eta", "epsilon"},
           {"epsilon", "eta"},
           {"tau", "tau"},
           {"kappa", "kappa"}}};
}

Circuit dualize(const Circuit &c, const Duality &d) {
  const int N = static_cast<int>(c.nodes.size());
  auto tg = wire_targets(c);
  Circuit r;
  r.m = c.n;
  r.n = c.m;
  r.nodes.resize(N);
  for (int v = 0; v < N; ++v) {
    Node &x = r.nodes[v];
    x.op = d.dual(c.nodes[v].op);
    x.nin = c.nodes[v].nout;
    x.nout = c.nodes[v].nin;
    // An old target (w, q) becomes the new source (w, q): output q of the
    // mirrored node; an old circuit output k becomes new circuit input k.
    for (auto &t : tg[v])
      x.in.push_back(t);
  }
  for (auto &t : tg[N])
    r.out.push_back(t);
  return canonical_form(r);
}

void check_duality_compatible(const Interpretation &I, const Signature &sig, const Duality &d) {
  for (auto &op : sig.operators()) {
    const auto *dop = sig.find(d.dual(op.name));
    if (!dop || dop->inputs != op.outputs || dop->outputs != op.inputs)
      throw Error(ErrorCode::Domain, "dual of '" + op.name + "' is not an operator of matching arity");
    Circuit g = generator(op);
    if (interpret(I, dualize(g, d)) != dual_triple(interpret(I, g)))
      throw Error(ErrorCode::Domain, "interpretation " + I.name + " is not compatible with the duality at '" +
                                         op.name + "'");
  }
}

DedupResult dedup_rules_for_checking(const Polygraph &p, const Interpretation &I, const Duality &d) {
  if (!d.empty())
    check_duality_compatible(I, p.sig, d);
  struct Kept {
    const Rule *rule;
    Circuit lhs, rhs;
    InterpTriple fl, fr;
  };
  std::vector<Kept> kept;
  DedupResult res;
  for (auto &r : p.rules) {
    Circuit l = canonical_form(r.lhs), rr = canonical_form(r.rhs);
    InterpTriple fl = interpret(I, l), fr = interpret(I, rr);
    DedupEntry e{r.name, r.name, "kept", false};
    std::optional<Circuit> dl, dr;
    if (!d.empty()) {
      dl = dualize(l, d);
      dr = dualize(rr, d);
      e.self_dual = *dl == l && *dr == rr;
    }
    for (auto &k : kept) {
      if (dl && *dl == k.lhs && *dr == k.rhs) {
        e.representative = k.rule->name;
        e.reason = "dual";
        break;
      }
      if (fl == k.fl && fr == k.fr) {
        e.representative = k.rule->name;
        e.reason = "same-image";
        break;
      }
    }
    if (e.reason == "kept") {
      kept.push_back({&r, l, rr, fl, fr});
      res.reduced.push_back(r);
    }
    res.entries.push_back(e);
  }
  return res;
}

// ---------------------------------------------------------------------------
// GF(2) semantics

Gf2Map gf2_semantics(const Circuit &c) {
  const int N = static_cast<int>(c.nodes.size());
  using Vec = std::vector<int>;
  std::vector<std::vector<Vec>> val(N);
  std::vector<char> done(N, 0);
  auto unit = [&](int i) {
    Vec v(c.m, 0);
    v[i] = 1;
    return v;
  };
  auto add = [](Vec a, const Vec &b) {
    for (std::size_t k = 0; k < a.size(); ++k)
      a[k] ^= b[k];
    return a;
  };
  std::function<const Vec &(Port)> value;
  std::vector<Vec> inputs;
  for (int i = 0; i < c.m; ++i)
    inputs.push_back(unit(i));
  std::function<void(int)> eval = [&](int v) {
    if (done[v])
      return;
    std::vector<Vec> in;
    for (auto &s : c.nodes[v].in)
      in.push_back(value(s));
    const std::string &op = c.nodes[v].op;
    if (op == "mu")
      val[v] = {add(in[0], in[1])};
    else if (op == "eta")
      val[v] = {Vec(c.m, 0)};
    else if (op == kDelta)
      val[v] = {in[0], in[0]};
    else if (op == kEpsilon)
      val[v] = {};
    else if (op == kTau)
      val[v] = {in[1], in[0]};
    else if (op == "kappa")
      val[v] = {add(in[0], in[1]), in[0]};
    else
      throw Error(ErrorCode::Domain, "no GF(2) meaning for '" + op + "'");
    done[v] = 1;
  };
  value = [&](Port s) -> const Vec & {
    if (s.node < 0)
      return inputs[s.port];
    eval(s.node);
    return val[s.node][s.port];
  };
  Gf2Map f{c.m, {}};
  for (int v = 0; v < N; ++v)
    eval(v);
  for (auto &s : c.out)
    f.rows.push_back(value(s));
  return f;
}

std::string to_string(const Gf2Map &f) {
  std::string s = "[";
  for (std::size_t k = 0; k < f.rows.size(); ++k) {
    s += k ? "; " : "";
    for (int b : f.rows[k])
      s += b ? '1' : '0';
  }
  return s + "] : " + std::to_string(f.m) + " -> " + std::to_string(f.rows.size());
}

// ---------------------------------------------------------------------------
// Interpretations and presets

Interpretation load_interpretation(const std::string &name, const Signature &sig, const std::string &data_dir) {
  Signature algebraic;
  for (auto &op : sig.operators())
    if (!is_resource_op(op.name))
      algebraic.add(op);
  Interpretation I;
  if (name == "f1") {
    I = builtin_f1(algebraic);
  } else if (name == "g") {
    I = builtin_g(algebraic);
  } else {
    fs::path p = fs::path(data_dir) / (name + ".interp");
    I = parse_interpretation(read_file(fs::exists(p) ? p.string() : name));
  }
  for (auto &op : sig.operators())
    I.at(op);
  return I;
}

namespace {

json manifest(const std::string &data_dir) {
  auto path = (fs::path(data_dir) / "presets.json").string();
  try {
    return json::parse(read_file(path));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

const json &entry(const json &all, const std::string &name) {
  if (!all.contains(name))
    throw Error(ErrorCode::NotFound, "unknown preset '" + name + "'");
  return all.at(name);
}

struct Loaded {
  Preset preset;
  std::optional<Translation> translation;
};

Loaded load_unchecked(const std::string &name, const std::string &data_dir) {
  const json all = manifest(data_dir);
  const json &e = entry(all, name);
  auto file = [&](const std::string &key) { return (fs::path(data_dir) / e.at(key).get<std::string>()).string(); };
  Loaded out;
  Preset &p = out.preset;
  p.name = name;
  p.description = e.value("description", "");
  if (e.contains("trs")) {
    p.trs = parse_trs(read_file(file("trs")));
    out.translation = translate_trs(*p.trs);
    p.polygraph = out.translation->poly;
  } else {
    p.polygraph = parse_polygraph(read_file(file("polygraph")));
  }
  for (auto &l : e.value("layers", json::array()))
    p.layers.push_back(load_interpretation(l.get<std::string>(), p.polygraph.sig, data_dir));
  if (e.contains("duality")) {
    if (e.at("duality") != "lz2")
      throw Error(ErrorCode::NotFound, "unknown duality " + e.at("duality").dump());
    p.duality = lz2_duality();
  }
  const json ex = e.value("expect", json::object());
  p.expect_certified = ex.value("certified", false);
  if (!p.layers.empty()) {
    const int def = ex.value("default_layer", 0);
    for (auto &r : p.polygraph.rules)
      p.expected_layer[r.name] = def;
    const json overrides = ex.value("layer", json::object());
    for (auto &[rule, layer] : overrides.items()) {
      if (!p.expected_layer.count(rule))
        throw Error(ErrorCode::Domain, "preset " + name + " names an unknown rule '" + rule + "'");
      p.expected_layer[rule] = layer.get<int>();
    }
  }
  return out;
}

std::string certificate_diff(const Preset &p, const Certificate &cert) {
  std::string diff;
  for (auto &e : cert.entries) {
    int want = p.expected_layer.at(e.rule);
    if (want != e.layer)
      diff += "  " + e.rule + ": expected layer " + std::to_string(want) + ", got " + std::to_string(e.layer) + "\n";
  }
  if (cert.ok != p.expect_certified)
    diff += std::string("  certificate: expected ") + (p.expect_certified ? "certified" : "not certified") + "\n";
  return diff;
}

} // namespace

std::vector<std::string> preset_names(const std::string &data_dir) {
  std::vector<std::string> names;
  for (auto &[k, v] : manifest(data_dir).items())
    names.push_back(k);
  return names;
}

Preset load_preset(const std::string &name, const std::string &data_dir) {
  Preset p = load_unchecked(name, data_dir).preset;
  if (!p.layers.empty()) {
    auto diff = certificate_diff(p, layered_termination(p.polygraph, p.layers));
    if (!diff.empty())
      throw Error(ErrorCode::Domain, "preset " + name + " does not match its expected verdicts:\n" + diff);
  }
  return p;
}

bool PresetReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](auto &c) { return c.ok; });
}

namespace {

bool only_ops(const Circuit &c, std::initializer_list<const char *> ops) {
  return std::all_of(c.nodes.begin(), c.nodes.end(), [&](const Node &n) {
    return std::any_of(ops.begin(), ops.end(), [&](const char *o) { return n.op == o; });
  });
}

bool algebraic_with_resources(const Signature &sig) {
  return std::all_of(sig.operators().begin(), sig.operators().end(),
                     [](const Operator &op) { return is_resource_op(op.name) || op.outputs == 1; });
}

} // namespace

PresetReport verify_preset(const std::string &name, const std::string &data_dir) {
  PresetReport rep{name, {}};
  auto add = [&](std::string check, bool ok, std::string detail) {
    rep.checks.push_back({std::move(check), ok, std::move(detail)});
  };
  Loaded L;
  json ex;
  try {
    L = load_unchecked(name, data_dir);
    ex = entry(manifest(data_dir), name).value("expect", json::object());
  } catch (const Error &e) {
    add("load", false, e.what());
    return rep;
  }
  const Preset &p = L.preset;
  const bool trs_only = p.trs && p.layers.empty();

  if (ex.contains("rules")) {
    std::size_t got = trs_only ? p.trs->rules.size() : p.polygraph.rules.size();
    add("rule count", got == ex["rules"].get<std::size_t>(),
        std::to_string(got) + " rules, expected " + ex["rules"].dump());
  }
  if (ex.contains("operators")) {
    std::size_t got = p.polygraph.sig.size();
    add("operator count", got == ex["operators"].get<std::size_t>(), std::to_string(got) + " operators");
  }

  if (p.trs) {
    for (const char *key : {"left_linear", "not_left_linear"}) {
      const bool want = std::string(key) == "left_linear";
      for (auto &n : ex.value(key, json::array())) {
        auto it = std::find_if(p.trs->rules.begin(), p.trs->rules.end(),
                               [&](const TrsRule &r) { return r.name == n.get<std::string>(); });
        bool ok = it != p.trs->rules.end() && it->left_linear() == want;
        add(std::string(key) + " " + n.get<std::string>(), ok,
            it == p.trs->rules.end() ? "no such rule" : (it->left_linear() ? "left-linear" : "not left-linear"));
      }
    }
    if (ex.contains("terminating")) {
      auto universe = enumerate_terms(p.trs->sig, 3, 3);
      PathMeasure measure(*p.trs);
      if (ex["terminating"].get<bool>()) {
        std::int64_t longest = 0;
        std::string err;
        try {
          for (auto &u : universe)
            longest = std::max(longest, measure(u));
        } catch (const Error &e) {
          err = e.what();
        }
        add("terminating", err.empty(),
            err.empty() ? "no cycle over " + std::to_string(universe.size()) +
                              " terms of depth <= 3, longest path " + std::to_string(longest - 1)
                        : err);
      } else {
        std::string witness;
        for (auto &u : universe)
          if (measure.reaches(u, u)) {
            witness = to_string(u);
            break;
          }
        add("non-terminating", !witness.empty(),
            witness.empty() ? "no cycle found among terms of depth <= 3" : "reduction cycle through " + witness);
      }
    }
  }

  if (!p.layers.empty()) {
    auto cert = layered_termination(p.polygraph, p.layers);
    auto diff = certificate_diff(p, cert);
    std::string detail = cert.ok ? "certified" : "not certified";
    if (!cert.ok) {
      detail += "; failing:";
      for (auto &f : cert.failing())
        detail += " " + f;
    }
    add("termination certificate", diff.empty(), diff.empty() ? detail : detail + "\n" + diff);
  }

  if (ex.contains("builtin")) {
    Signature sig;
    for (auto &n : ex["builtin"]) {
      const auto *op = p.polygraph.sig.find(n.get<std::string>());
      if (op)
        sig.add(*op);
    }
    auto ref = build_rdelta_sigma(sig);
    bool same = ref.rules.size() == p.polygraph.rules.size();
    for (std::size_t i = 0; same && i < ref.rules.size(); ++i)
      same = ref.rules[i].name == p.polygraph.rules[i].name &&
             canonical_form(ref.rules[i].lhs) == canonical_form(p.polygraph.rules[i].lhs) &&
             canonical_form(ref.rules[i].rhs) == canonical_form(p.polygraph.rules[i].rhs);
    add("matches built-in rules", same, same ? "identical" : "rule files and built-in rules differ");
  }

  if (ex.contains("cps_max_nodes")) {
    int max_nodes = ex["cps_max_nodes"].get<int>();
    auto cps = critical_pairs(p.polygraph, max_nodes);
    auto conf = check_local_confluence(p.polygraph, cps, ex.value("cps_fuel", 200));
    std::size_t joined = std::count_if(conf.verdicts.begin(), conf.verdicts.end(), [](auto &v) { return v.joined; });
    add("critical pairs joinable", conf.all_joined() == ex.value("cps_joined", true),
        std::to_string(joined) + " of " + std::to_string(cps.size()) + " pairs joined (max " +
            std::to_string(max_nodes) + " nodes)");
  }

  // Semantic soundness of every rule.
  {
    int checked = 0;
    std::string bad;
    std::map<std::string, const TranslatedRule *> sources;
    if (L.translation)
      for (auto &t : L.translation->phi_rules)
        sources[t.name] = &t;
    const bool terms = algebraic_with_resources(p.polygraph.sig);
    for (auto &r : p.polygraph.rules) {
      bool ok = true;
      if (p.duality) {
        ok = gf2_semantics(r.lhs) == gf2_semantics(r.rhs);
      } else if (terms && sources.count(r.name)) {
        const auto &src = sources[r.name]->source;
        ok = project_pi(r.lhs) == TermFamily{r.lhs.m, {src.lhs}} && project_pi(r.rhs) == TermFamily{r.rhs.m, {src.rhs}};
      } else if (terms) {
        ok = project_pi(r.lhs) == project_pi(r.rhs);
        if (ok && only_ops(r.lhs, {kTau, kDelta, kEpsilon}) && only_ops(r.rhs, {kTau, kDelta, kEpsilon}))
          ok = finset_semantics(r.lhs) == finset_semantics(r.rhs);
      } else {
        continue;
      }
      ++checked;
      if (!ok)
        bad += " " + r.name;
    }
    if (checked > 0)
      add("rule semantics", bad.empty(),
          bad.empty() ? std::to_string(checked) + " rules sound" : "unsound:" + bad);
  }

  if (p.duality && !p.layers.empty()) {
    const Interpretation &I = p.layers.front();
    try {
      auto dd = dedup_rules_for_checking(p.polygraph, I, *p.duality);
      int self_dual = 0;
      for (auto &e : dd.entries)
        self_dual += e.self_dual;
      add("duality compatible", true,
          std::to_string(dd.reduced.size()) + " of " + std::to_string(p.polygraph.rules.size()) +
              " rules need checking, " + std::to_string(self_dual) + " self-dual");
    } catch (const Error &e) {
      add("duality compatible", false, e.what());
    }
    if (p.polygraph.sig.contains("kappa") && p.polygraph.sig.contains(kTau)) {
      bool same = interpret(I, generator(*p.polygraph.sig.find(kTau))) ==
                  interpret(I, generator(*p.polygraph.sig.find("kappa")));
      add("tau and kappa identified", same, same ? "equal triples" : "triples differ");
    }
  }
  return rep;
}

} // namespace poly
