#include "poly/report.hpp"

namespace poly {

json to_json(const ReductionTrace &t) {
  json steps = json::array();
  for (auto &s : t.steps)
    steps.push_back({{"rule", s.rule}, {"context", s.context}, {"result", to_string(s.result)}});
  return {{"start", to_string(t.start)},
          {"normal_form", to_string(t.last())},
          {"status", t.normal ? "normal" : "fuel-exhausted"},
          {"steps", steps}};
}

json to_json(const InterpTriple &t) {
  json cov = json::array(), con = json::array();
  for (auto &p : t.cov)
    cov.push_back(p.str());
  for (auto &p : t.con)
    con.push_back(p.str());
  return {{"cov", cov}, {"con", con}, {"heat", t.heat.str()}};
}

static json cmp_list(const std::vector<Cmp> &cs) {
  json a = json::array();
  for (auto c : cs)
    a.push_back(to_string(c));
  return a;
}

json to_json(const Certificate &c) {
  json entries = json::array();
  for (auto &e : c.entries) {
    json checks = json::array();
    for (std::size_t k = 0; k < e.checks.size(); ++k) {
      auto &rc = e.checks[k];
      checks.push_back({{"layer", c.layers[k]},
                        {"verdict", to_string(rc.verdict)},
                        {"cov", cmp_list(rc.cov)},
                        {"con", cmp_list(rc.con)},
                        {"heat", to_string(rc.heat)},
                        {"lhs", to_json(rc.lhs)},
                        {"rhs", to_json(rc.rhs)}});
    }
    entries.push_back({{"rule", e.rule}, {"layer", e.layer}, {"checks", checks}});
  }
  return {{"certified", c.ok}, {"layers", c.layers}, {"failing", c.failing()}, {"rules", entries}};
}

json to_json(const PresetReport &r) {
  json checks = json::array();
  for (auto &c : r.checks)
    checks.push_back({{"check", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return {{"preset", r.preset}, {"ok", r.ok()}, {"checks", checks}};
}

json to_json(const DedupResult &d) {
  json entries = json::array();
  for (auto &e : d.entries)
    entries.push_back(
        {{"rule", e.rule}, {"representative", e.representative}, {"reason", e.reason}, {"self_dual", e.self_dual}});
  return {{"obligations", d.reduced.size()}, {"rules", entries}};
}

json critical_pairs_json(const Polygraph &p, const std::vector<CriticalPair> &pairs, const ConfluenceReport &rep) {
  json out = json::array();
  std::size_t joined = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto &cp = pairs[i];
    auto &v = rep.verdicts[i];
    joined += v.joined;
    out.push_back({{"rule", {p.rules[cp.rule1].name, p.rules[cp.rule2].name}},
                   {"source", to_string(cp.source)},
                   {"left", to_string(cp.left)},
                   {"right", to_string(cp.right)},
                   {"status", v.joined ? "joined" : "not-joined"},
                   {"how", v.how},
                   {"left_nf", to_string(v.left_nf)},
                   {"right_nf", to_string(v.right_nf)}});
  }
  return {{"pairs", out}, {"total", pairs.size()}, {"joined", joined}, {"all_joined", rep.all_joined()}};
}

json polygraph_json(const Polygraph &p) {
  json ops = json::array(), rules = json::array();
  for (auto &op : p.sig.operators())
    ops.push_back({{"name", op.name}, {"inputs", op.inputs}, {"outputs", op.outputs}});
  for (auto &r : p.rules)
    rules.push_back({{"name", r.name}, {"origin", r.origin}, {"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)}});
  return {{"operators", ops}, {"rules", rules}};
}

Polygraph polygraph_from_json(const json &j) {
  try {
    Polygraph p;
    for (auto &op : j.at("operators"))
      p.sig.add({op.at("name").get<std::string>(), op.at("inputs").get<int>(), op.at("outputs").get<int>()});
    for (auto &r : j.at("rules"))
      p.rules.push_back(make_rule(r.at("name").get<std::string>(), r.at("lhs").get<std::string>(),
                                  r.at("rhs").get<std::string>(), p.sig, r.value("origin", "")));
    return p;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::Parse, std::string("malformed polygraph JSON: ") + e.what());
  }
}

json translation_manifest(const Translation &tr) {
  json rules = json::array();
  for (auto &r : tr.poly.rules) {
    json e = {{"name", r.name}, {"origin", r.origin}};
    for (auto &t : tr.phi_rules)
      if (t.name == r.name) {
        e["source"] = to_string(t.source.lhs) + " => " + to_string(t.source.rhs);
        e["left_linear"] = t.left_linear;
      }
    rules.push_back(e);
  }
  return {{"rules", rules}, {"polygraph", polygraph_json(tr.poly)}};
}

} // namespace poly
