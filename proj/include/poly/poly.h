#ifndef POLY_POLY_H
#define POLY_POLY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define POLY_API __declspec(dllexport)
#else
#define POLY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum poly_status {
  POLY_OK = 0,
  POLY_ERR_PARSE = 1,
  POLY_ERR_ARITY = 2,
  POLY_ERR_DOMAIN = 3,
  POLY_ERR_NOT_FOUND = 4,
  POLY_ERR_IO = 5,
  POLY_ERR_INVALID_ARGUMENT = 6,
  POLY_ERR_INTERNAL = 7
} poly_status;

typedef struct poly_polygraph poly_polygraph;
typedef struct poly_interp poly_interp;

/* Message of the last failed call on this thread; never NULL. */
POLY_API const char *poly_last_error(void);
/* For parse errors: 1-based position, 0 when unknown. */
POLY_API int poly_last_error_line(void);
POLY_API int poly_last_error_column(void);

/* Every char** result is owned by the caller. */
POLY_API void poly_string_free(char *s);

POLY_API poly_status poly_polygraph_parse(const char *text, poly_polygraph **out);
POLY_API poly_status poly_polygraph_load(const char *path, poly_polygraph **out);
/* data_dir may be NULL for the default (POLY_DATA_DIR or the build tree). */
POLY_API poly_status poly_polygraph_preset(const char *name, const char *data_dir, poly_polygraph **out);
/* Translates a TRS text; manifest_json (optional) receives rule provenance. */
POLY_API poly_status poly_polygraph_translate(const char *trs_text, poly_polygraph **out, char **manifest_json);
POLY_API void poly_polygraph_free(poly_polygraph *p);
POLY_API size_t poly_polygraph_rule_count(const poly_polygraph *p);
POLY_API poly_status poly_polygraph_text(const poly_polygraph *p, char **out);
POLY_API poly_status poly_polygraph_json(const poly_polygraph *p, char **out);

/* Canonical printed form of a circuit over the polygraph's signature. */
POLY_API poly_status poly_circuit_canonical(const poly_polygraph *p, const char *circuit, char **out);

/* strategy: "leftmost", "random" or "all"; *normal is 0 when fuel ran out. */
POLY_API poly_status poly_normalize(const poly_polygraph *p, const char *circuit, uint64_t fuel,
                                    const char *strategy, uint64_t seed, int *normal, char **trace_json);

/* name_or_path: "f1", "g", a preset interpretation name, or a file. */
POLY_API poly_status poly_interp_load(const char *name_or_path, const poly_polygraph *p, const char *data_dir,
                                      poly_interp **out);
POLY_API void poly_interp_free(poly_interp *i);

POLY_API poly_status poly_check_termination(const poly_polygraph *p, const poly_interp *const *layers,
                                            size_t nlayers, int *certified, char **certificate_json);

POLY_API poly_status poly_critical_pairs(const poly_polygraph *p, int max_nodes, uint64_t fuel, uint64_t seed,
                                         int *all_joined, char **report_json);

/* Projection to terms, finite-set and GF(2) meanings where they apply. */
POLY_API poly_status poly_semantics(const poly_polygraph *p, const char *circuit, char **json_out);

POLY_API poly_status poly_verify_preset(const char *name, const char *data_dir, int *ok, char **report_json);

#ifdef __cplusplus
}
#endif

#endif
