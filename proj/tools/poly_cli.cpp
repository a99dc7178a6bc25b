// Command-line front end. Talks to the library through the C API only.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "poly/poly.h"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitFuel = 2;
constexpr int kExitRefuted = 3;

struct Failure {
  int code;
  std::string message;
};

void check(poly_status s) {
  if (s != POLY_OK)
    throw Failure{kExitInput, poly_last_error()};
}

std::string take(char *s) {
  std::string out = s ? s : "";
  poly_string_free(s);
  return out;
}

using Graph = std::unique_ptr<poly_polygraph, decltype(&poly_polygraph_free)>;
using Interp = std::unique_ptr<poly_interp, decltype(&poly_interp_free)>;

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw Failure{kExitInput, "cannot read " + p.string()};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string data_dir() {
  if (const char *env = std::getenv("POLY_DATA_DIR"); env && *env)
    return env;
  return POLY_DEFAULT_DATA_DIR;
}

// A path as given, else relative to the data directory.
std::optional<fs::path> find_file(const std::string &arg) {
  if (fs::is_regular_file(arg))
    return fs::path(arg);
  fs::path in_data = fs::path(data_dir()) / arg;
  if (fs::is_regular_file(in_data))
    return in_data;
  return std::nullopt;
}

// Preset name, polygraph file, or TRS file (translated).
Graph load_theory(const std::string &arg) {
  poly_polygraph *p = nullptr;
  if (auto f = find_file(arg)) {
    std::string text = slurp(*f);
    if (f->extension() == ".trs")
      check(poly_polygraph_translate(text.c_str(), &p, nullptr));
    else
      check(poly_polygraph_parse(text.c_str(), &p));
  } else {
    check(poly_polygraph_preset(arg.c_str(), nullptr, &p));
  }
  return Graph(p, poly_polygraph_free);
}

Graph default_signature() {
  static const char *text = "op mu : 2 -> 1\nop eta : 0 -> 1\nop tau : 2 -> 2\n"
                            "op delta : 1 -> 2\nop epsilon : 1 -> 0\nop kappa : 2 -> 2\n";
  poly_polygraph *p = nullptr;
  check(poly_polygraph_parse(text, &p));
  return Graph(p, poly_polygraph_free);
}

struct Config {
  std::string theory;
  std::string trs;
  std::string circuit;
  std::vector<std::string> interps;
  std::uint64_t fuel = 10000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string strategy = "leftmost";
  int max_nodes = 8;
  bool json = false;
  std::string output;
  std::string preset;
};

int cmd_normalize(const Config &cfg) {
  if (cfg.strategy == "random" && !cfg.seed_given)
    throw Failure{kExitInput, "--seed is required with --strategy random"};
  auto p = load_theory(cfg.theory);
  int normal = 0;
  char *out = nullptr;
  check(poly_normalize(p.get(), cfg.circuit.c_str(), cfg.fuel, cfg.strategy.c_str(), cfg.seed, &normal, &out));
  json j = json::parse(take(out));
  if (cfg.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << j["start"].get<std::string>() << "\n";
    for (auto &s : j["steps"])
      std::cout << "  -> " << s["result"].get<std::string>() << "    [" << s["rule"].get<std::string>() << " at "
                << s["context"].get<std::string>() << "]\n";
    if (normal)
      std::cout << "normal form: " << j["normal_form"].get<std::string>() << "\n";
    else
      std::cout << "fuel exhausted after " << j["steps"].size() << " steps\n";
  }
  return normal ? kExitOk : kExitFuel;
}

int cmd_translate(const Config &cfg) {
  auto f = find_file(cfg.trs);
  if (!f)
    throw Failure{kExitInput, "cannot find TRS file " + cfg.trs};
  std::string text = slurp(*f);
  poly_polygraph *raw = nullptr;
  char *manifest = nullptr;
  check(poly_polygraph_translate(text.c_str(), &raw, &manifest));
  Graph p(raw, poly_polygraph_free);
  std::string man = take(manifest);
  char *poly_text = nullptr;
  check(poly_polygraph_text(p.get(), &poly_text));
  std::string out = take(poly_text);
  if (!cfg.output.empty()) {
    std::ofstream(cfg.output) << out;
    std::ofstream(cfg.output + ".manifest.json") << man << "\n";
    std::cout << "wrote " << cfg.output << " and " << cfg.output << ".manifest.json ("
              << poly_polygraph_rule_count(p.get()) << " rules)\n";
  } else if (cfg.json) {
    std::cout << man << "\n";
  } else {
    std::cout << out;
  }
  return kExitOk;
}

int cmd_check_term(const Config &cfg) {
  if (cfg.interps.empty())
    throw Failure{kExitInput, "at least one --interp is required"};
  auto p = load_theory(cfg.theory);
  std::vector<Interp> owned;
  std::vector<const poly_interp *> layers;
  for (auto &name : cfg.interps) {
    poly_interp *i = nullptr;
    check(poly_interp_load(name.c_str(), p.get(), nullptr, &i));
    owned.emplace_back(i, poly_interp_free);
    layers.push_back(i);
  }
  int certified = 0;
  char *out = nullptr;
  check(poly_check_termination(p.get(), layers.data(), layers.size(), &certified, &out));
  json j = json::parse(take(out));
  if (cfg.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto &r : j["rules"]) {
      std::cout << r["rule"].get<std::string>() << ":";
      for (auto &c : r["checks"])
        std::cout << " " << c["layer"].get<std::string>() << "=" << c["verdict"].get<std::string>();
      std::cout << "\n";
    }
    if (certified) {
      std::cout << "terminating: certified\n";
    } else {
      std::cout << "not certified; offending rules:";
      for (auto &f : j["failing"])
        std::cout << " " << f.get<std::string>();
      std::cout << "\n";
    }
  }
  return certified ? kExitOk : kExitRefuted;
}

int cmd_cps(const Config &cfg) {
  auto p = load_theory(cfg.theory);
  int joined = 0;
  char *out = nullptr;
  check(poly_critical_pairs(p.get(), cfg.max_nodes, cfg.fuel, cfg.seed_given ? cfg.seed : 1, &joined, &out));
  json j = json::parse(take(out));
  if (cfg.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto &cp : j["pairs"])
      if (cp["status"] != "joined")
        std::cout << "not joined: " << cp["rule"][0].get<std::string>() << " / " << cp["rule"][1].get<std::string>()
                  << " on " << cp["source"].get<std::string>() << "\n  " << cp["left_nf"].get<std::string>()
                  << "\n  " << cp["right_nf"].get<std::string>() << "\n";
    std::cout << j["joined"] << " of " << j["total"] << " critical pairs joined (max " << cfg.max_nodes
              << " nodes)\n";
  }
  return joined ? kExitOk : kExitRefuted;
}

int cmd_semantics(const Config &cfg) {
  auto p = cfg.theory.empty() ? default_signature() : load_theory(cfg.theory);
  char *out = nullptr;
  check(poly_semantics(p.get(), cfg.circuit.c_str(), &out));
  json j = json::parse(take(out));
  if (cfg.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << j["circuit"].get<std::string>() << " : " << j["inputs"] << " -> " << j["outputs"] << "\n";
    for (const char *k : {"terms", "finset", "gf2"})
      if (j.contains(k))
        std::cout << "  " << k << ": " << j[k].get<std::string>() << "\n";
  }
  return kExitOk;
}

int cmd_verify_preset(const Config &cfg) {
  std::string name = cfg.preset.empty() ? cfg.theory : cfg.preset;
  if (name.empty())
    throw Failure{kExitInput, "name a preset"};
  int ok = 0;
  char *out = nullptr;
  check(poly_verify_preset(name.c_str(), nullptr, &ok, &out));
  json j = json::parse(take(out));
  if (cfg.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto &c : j["checks"])
      std::cout << (c["ok"].get<bool>() ? "pass " : "FAIL ") << c["check"].get<std::string>() << ": "
                << c["detail"].get<std::string>() << "\n";
    std::cout << name << (ok ? ": all checks pass\n" : ": some checks failed\n");
  }
  return ok ? kExitOk : kExitRefuted;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Rewriting of circuits: normalisation, translation of term rewriting systems, termination "
               "certificates and critical pairs."};
  app.name("poly");
  app.require_subcommand(1);
  Config cfg;

  auto fuel = [&](CLI::App *s) {
    s->add_option("--fuel", cfg.fuel, "rewrite step budget")->check(CLI::PositiveNumber);
  };
  auto seed = [&](CLI::App *s) {
    s->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t &v) { cfg.seed = v, cfg.seed_given = true; }, "random seed");
  };
  auto as_json = [&](CLI::App *s) { s->add_flag("--json", cfg.json, "machine-readable output"); };
  auto theory = [&](CLI::App *s, bool required) {
    auto *o = s->add_option("--theory", cfg.theory, "preset name, polygraph file or TRS file");
    if (required)
      o->required();
  };

  auto *norm = app.add_subcommand("normalize", "rewrite a circuit to normal form");
  theory(norm, true);
  norm->add_option("--circuit", cfg.circuit, "circuit text")->required();
  norm->add_option("--strategy", cfg.strategy, "leftmost, random or all")
      ->check(CLI::IsMember({"leftmost", "random", "all"}));
  fuel(norm);
  seed(norm);
  as_json(norm);

  auto *tr = app.add_subcommand("translate", "translate a term rewriting system into a polygraph");
  tr->add_option("--trs", cfg.trs, "TRS file")->required();
  tr->add_option("-o,--output", cfg.output, "write the polygraph here and the manifest next to it");
  as_json(tr);

  auto *ct = app.add_subcommand("check-term", "certify termination with layered interpretations");
  theory(ct, true);
  ct->add_option("--interp", cfg.interps, "interpretation layer, in order (f1, g, lz2 or a file)");
  as_json(ct);

  auto *cps = app.add_subcommand("cps", "enumerate and test critical pairs");
  theory(cps, true);
  cps->add_option("--max-nodes", cfg.max_nodes, "size bound for overlaps")->check(CLI::PositiveNumber);
  fuel(cps);
  seed(cps);
  as_json(cps);

  auto *sem = app.add_subcommand("semantics", "projection to terms, finite sets and GF(2)");
  sem->add_option("--circuit", cfg.circuit, "circuit text")->required();
  theory(sem, false);
  as_json(sem);

  auto *vp = app.add_subcommand("verify-preset", "run the checks recorded for a preset");
  vp->add_option("name", cfg.preset, "preset name");
  theory(vp, false);
  as_json(vp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (norm->parsed())
      return cmd_normalize(cfg);
    if (tr->parsed())
      return cmd_translate(cfg);
    if (ct->parsed())
      return cmd_check_term(cfg);
    if (cps->parsed())
      return cmd_cps(cfg);
    if (sem->parsed())
      return cmd_semantics(cfg);
    if (vp->parsed())
      return cmd_verify_preset(cfg);
  } catch (const Failure &f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const json::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
