/* Exercises the shared library through its C header only. */
#include <stdio.h>
#include <string.h>

#include "poly/poly.h"

static int failures = 0;

#define EXPECT(cond)                                                                                             \
  do {                                                                                                           \
    if (!(cond)) {                                                                                               \
      fprintf(stderr, "%s:%d: failed: %s (last error: %s)\n", __FILE__, __LINE__, #cond, poly_last_error());    \
      ++failures;                                                                                                \
    }                                                                                                            \
  } while (0)

static const char *kData = POLY_TEST_DATA_DIR;

static void test_normalize(void) {
  poly_polygraph *p = NULL;
  EXPECT(poly_polygraph_parse("op tau : 2 -> 2\n[x] invol : tau ; tau => id(2)\n", &p) == POLY_OK);
  EXPECT(poly_polygraph_rule_count(p) == 1);

  int normal = -1;
  char *trace = NULL;
  EXPECT(poly_normalize(p, "tau ; tau ; tau", 100, "leftmost", 0, &normal, &trace) == POLY_OK);
  EXPECT(normal == 1);
  EXPECT(trace && strstr(trace, "\"normal_form\": \"tau\""));
  poly_string_free(trace);

  EXPECT(poly_normalize(p, "tau ; tau ; tau ; tau", 1, "random", 7, &normal, NULL) == POLY_OK);
  EXPECT(normal == 0);

  EXPECT(poly_normalize(p, "tau ; (tau", 10, NULL, 0, &normal, NULL) == POLY_ERR_PARSE);
  EXPECT(poly_last_error_line() == 1);
  EXPECT(poly_last_error_column() == 11);
  EXPECT(poly_normalize(p, "tau", 10, "sideways", 0, &normal, NULL) != POLY_OK);
  EXPECT(poly_normalize(p, "tau", 0, NULL, 0, &normal, NULL) == POLY_ERR_INVALID_ARGUMENT);

  char *canon = NULL;
  EXPECT(poly_circuit_canonical(p, "(id(1) * id(1)) ; tau", &canon) == POLY_OK);
  EXPECT(canon && strcmp(canon, "tau") == 0);
  poly_string_free(canon);
  poly_polygraph_free(p);
}

static void test_parse_errors(void) {
  poly_polygraph *p = NULL;
  EXPECT(poly_polygraph_parse("op mu : 2 -> 1\n[x] r : mu => mu ; mu\n", &p) != POLY_OK);
  EXPECT(p == NULL);
  EXPECT(strlen(poly_last_error()) > 0);
  EXPECT(poly_polygraph_load("/nonexistent/file.poly", &p) == POLY_ERR_IO);
  EXPECT(poly_polygraph_preset("NoSuchPreset", kData, &p) == POLY_ERR_NOT_FOUND);
  EXPECT(poly_polygraph_parse(NULL, &p) == POLY_ERR_INVALID_ARGUMENT);
}

static void test_translate_and_check(void) {
  const char *r1 = "op mu : 2 -> 1\nop eta : 0 -> 1\n"
                   "A: mu(mu(x1,x2),x3) => mu(x1,mu(x2,x3))\n"
                   "L: mu(eta,x1) => x1\nR: mu(x1,eta) => x1\nC: mu(x1,x2) => mu(x2,x1)\n";
  poly_polygraph *p = NULL;
  char *manifest = NULL;
  EXPECT(poly_polygraph_translate(r1, &p, &manifest) == POLY_OK);
  EXPECT(poly_polygraph_rule_count(p) == 24);
  EXPECT(manifest && strstr(manifest, "Phi(C)"));
  poly_string_free(manifest);

  poly_interp *f1 = NULL, *g = NULL;
  EXPECT(poly_interp_load("f1", p, kData, &f1) == POLY_OK);
  EXPECT(poly_interp_load("g", p, kData, &g) == POLY_OK);
  const poly_interp *layers[2] = {f1, g};
  int certified = -1;
  char *cert = NULL;
  EXPECT(poly_check_termination(p, layers, 2, &certified, &cert) == POLY_OK);
  EXPECT(certified == 0);
  EXPECT(cert && strstr(cert, "\"failing\""));
  poly_string_free(cert);
  poly_interp_free(f1);
  poly_interp_free(g);

  char *text = NULL, *json = NULL;
  EXPECT(poly_polygraph_text(p, &text) == POLY_OK);
  EXPECT(poly_polygraph_json(p, &json) == POLY_OK);
  poly_polygraph *back = NULL;
  EXPECT(poly_polygraph_parse(text, &back) == POLY_OK);
  EXPECT(poly_polygraph_rule_count(back) == 24);
  poly_polygraph_free(back);
  poly_string_free(text);
  poly_string_free(json);
  poly_polygraph_free(p);
}

static void test_presets(void) {
  poly_polygraph *p = NULL;
  EXPECT(poly_polygraph_preset("RDS", kData, &p) == POLY_OK);
  int joined = -1;
  char *rep = NULL;
  EXPECT(poly_critical_pairs(p, 4, 200, 1, &joined, &rep) == POLY_OK);
  EXPECT(joined == 1);
  EXPECT(rep && strstr(rep, "\"all_joined\": true"));
  poly_string_free(rep);

  char *sem = NULL;
  EXPECT(poly_semantics(p, "delta ; mu", &sem) == POLY_OK);
  EXPECT(sem && strstr(sem, "\"gf2\""));
  poly_string_free(sem);
  poly_polygraph_free(p);

  int ok = -1;
  EXPECT(poly_verify_preset("LZ2", kData, &ok, NULL) == POLY_OK);
  EXPECT(ok == 1);
  EXPECT(poly_verify_preset("nope", kData, &ok, NULL) == POLY_ERR_NOT_FOUND);
}

int main(void) {
  test_normalize();
  test_parse_errors();
  test_translate_and_check();
  test_presets();
  if (failures)
    fprintf(stderr, "%d failures\n", failures);
  else
    printf("c api: all checks passed\n");
  return failures ? 1 : 0;
}
