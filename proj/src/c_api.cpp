#include "poly/poly.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>

#include "poly/presets.hpp"
#include "poly/report.hpp"

struct poly_polygraph {
  poly::Polygraph p;
};

struct poly_interp {
  poly::Interpretation i;
};

namespace {

thread_local std::string g_error;
thread_local int g_line = 0;
thread_local int g_col = 0;

poly_status fail(poly_status s, const std::string &msg) {
  g_error = msg;
  return s;
}

char *dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out)
    std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F> poly_status guard(F &&f) {
  g_error.clear();
  g_line = g_col = 0;
  try {
    f();
    return POLY_OK;
  } catch (const poly::ParseError &e) {
    g_line = e.line();
    g_col = e.column();
    return fail(POLY_ERR_PARSE, e.what());
  } catch (const poly::Error &e) {
    return fail(static_cast<poly_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc &) {
    return fail(POLY_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(POLY_ERR_INTERNAL, e.what());
  }
}

std::string data_dir_or_default(const char *d) { return d ? std::string(d) : poly::default_data_dir(); }

} // namespace

#define POLY_REQUIRE(cond)                                                                                       \
  do {                                                                                                           \
    if (!(cond))                                                                                                 \
      return fail(POLY_ERR_INVALID_ARGUMENT, "invalid argument: " #cond);                                        \
  } while (0)

extern "C" {

const char *poly_last_error(void) { return g_error.c_str(); }
int poly_last_error_line(void) { return g_line; }
int poly_last_error_column(void) { return g_col; }

void poly_string_free(char *s) { std::free(s); }

poly_status poly_polygraph_parse(const char *text, poly_polygraph **out) {
  POLY_REQUIRE(text && out);
  return guard([&] { *out = new poly_polygraph{poly::parse_polygraph(text)}; });
}

poly_status poly_polygraph_load(const char *path, poly_polygraph **out) {
  POLY_REQUIRE(path && out);
  return guard([&] { *out = new poly_polygraph{poly::parse_polygraph(poly::read_file(path))}; });
}

poly_status poly_polygraph_preset(const char *name, const char *data_dir, poly_polygraph **out) {
  POLY_REQUIRE(name && out);
  return guard([&] { *out = new poly_polygraph{poly::load_preset(name, data_dir_or_default(data_dir)).polygraph}; });
}

poly_status poly_polygraph_translate(const char *trs_text, poly_polygraph **out, char **manifest_json) {
  POLY_REQUIRE(trs_text && out);
  return guard([&] {
    auto tr = poly::translate_trs(poly::parse_trs(trs_text));
    auto owned = std::make_unique<poly_polygraph>(poly_polygraph{tr.poly});
    if (manifest_json)
      *manifest_json = dup(poly::translation_manifest(tr).dump(2));
    *out = owned.release();
  });
}

void poly_polygraph_free(poly_polygraph *p) { delete p; }

size_t poly_polygraph_rule_count(const poly_polygraph *p) { return p ? p->p.rules.size() : 0; }

poly_status poly_polygraph_text(const poly_polygraph *p, char **out) {
  POLY_REQUIRE(p && out);
  return guard([&] { *out = dup(poly::to_text(p->p)); });
}

poly_status poly_polygraph_json(const poly_polygraph *p, char **out) {
  POLY_REQUIRE(p && out);
  return guard([&] { *out = dup(poly::polygraph_json(p->p).dump(2)); });
}

poly_status poly_circuit_canonical(const poly_polygraph *p, const char *circuit, char **out) {
  POLY_REQUIRE(p && circuit && out);
  return guard([&] { *out = dup(poly::to_string(poly::parse_circuit(circuit, p->p.sig))); });
}

poly_status poly_normalize(const poly_polygraph *p, const char *circuit, uint64_t fuel, const char *strategy,
                           uint64_t seed, int *normal, char **trace_json) {
  POLY_REQUIRE(p && circuit && fuel > 0);
  return guard([&] {
    auto s = poly::parse_strategy(strategy ? strategy : "leftmost");
    auto c = poly::parse_circuit(circuit, p->p.sig);
    auto t = poly::normalize(p->p, c, fuel, s, seed);
    if (normal)
      *normal = t.normal;
    if (trace_json) {
      auto j = poly::to_json(t);
      j["strategy"] = poly::to_string(s);
      j["seed"] = seed;
      j["fuel"] = fuel;
      *trace_json = dup(j.dump(2));
    }
  });
}

poly_status poly_interp_load(const char *name_or_path, const poly_polygraph *p, const char *data_dir,
                             poly_interp **out) {
  POLY_REQUIRE(name_or_path && p && out);
  return guard([&] {
    *out = new poly_interp{poly::load_interpretation(name_or_path, p->p.sig, data_dir_or_default(data_dir))};
  });
}

void poly_interp_free(poly_interp *i) { delete i; }

poly_status poly_check_termination(const poly_polygraph *p, const poly_interp *const *layers, size_t nlayers,
                                   int *certified, char **certificate_json) {
  POLY_REQUIRE(p && layers && nlayers > 0);
  return guard([&] {
    std::vector<poly::Interpretation> ls;
    for (size_t k = 0; k < nlayers; ++k) {
      if (!layers[k])
        throw poly::Error(poly::ErrorCode::Domain, "null interpretation layer");
      ls.push_back(layers[k]->i);
    }
    auto cert = poly::layered_termination(p->p, ls);
    if (certified)
      *certified = cert.ok;
    if (certificate_json)
      *certificate_json = dup(poly::to_json(cert).dump(2));
  });
}

poly_status poly_critical_pairs(const poly_polygraph *p, int max_nodes, uint64_t fuel, uint64_t seed,
                                int *all_joined, char **report_json) {
  POLY_REQUIRE(p && max_nodes > 0 && fuel > 0);
  return guard([&] {
    auto cps = poly::critical_pairs(p->p, max_nodes);
    auto rep = poly::check_local_confluence(p->p, cps, fuel, 4, seed);
    if (all_joined)
      *all_joined = rep.all_joined();
    if (report_json) {
      auto j = poly::critical_pairs_json(p->p, cps, rep);
      j["max_nodes"] = max_nodes;
      j["fuel"] = fuel;
      j["seed"] = seed;
      *report_json = dup(j.dump(2));
    }
  });
}

poly_status poly_semantics(const poly_polygraph *p, const char *circuit, char **json_out) {
  POLY_REQUIRE(p && circuit && json_out);
  return guard([&] {
    auto c = poly::parse_circuit(circuit, p->p.sig);
    poly::json j = {{"circuit", poly::to_string(c)}, {"inputs", c.m}, {"outputs", c.n}};
    bool any = false;
    try {
      j["terms"] = poly::to_string(poly::project_pi(c));
      any = true;
    } catch (const poly::Error &) {
    }
    try {
      j["finset"] = poly::to_string(poly::finset_semantics(c));
      any = true;
    } catch (const poly::Error &) {
    }
    try {
      j["gf2"] = poly::to_string(poly::gf2_semantics(c));
      any = true;
    } catch (const poly::Error &) {
    }
    if (!any)
      throw poly::Error(poly::ErrorCode::Domain, "no semantics applies to this circuit");
    *json_out = dup(j.dump(2));
  });
}

poly_status poly_verify_preset(const char *name, const char *data_dir, int *ok, char **report_json) {
  POLY_REQUIRE(name);
  return guard([&] {
    auto dir = data_dir_or_default(data_dir);
    auto names = poly::preset_names(dir);
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw poly::Error(poly::ErrorCode::NotFound, std::string("unknown preset '") + name + "'");
    auto rep = poly::verify_preset(name, dir);
    if (ok)
      *ok = rep.ok();
    if (report_json)
      *report_json = dup(poly::to_json(rep).dump(2));
  });
}

} // extern "C"
