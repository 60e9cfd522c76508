/* C ABI for the statesum library.
 *
 * Handles are opaque and owned by the library; every constructor has a
 * matching _free.  Functions return a status code and write results through
 * out-pointers.  ss_last_error returns a thread-local message for the most
 * recent failure, valid until the next failing call on the same thread.
 */

#ifndef STATESUM_H
#define STATESUM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  SS_OK = 0,
  SS_ERR_NULL = 1,       /* a required pointer was NULL */
  SS_ERR_PARSE = 2,      /* malformed JSON or unknown name */
  SS_ERR_VALIDATION = 3, /* input parsed but failed validation */
  SS_ERR_SELF_CHECK = 4, /* reduced-mode coboundary self-check failed */
  SS_ERR_UTF8 = 5        /* string argument was not UTF-8 */
};

typedef struct SsComplex SsComplex;
typedef struct SsCategory SsCategory;

const char *ss_last_error(void);

/* Parse and validate a triangulation from JSON text:
 * {"vertices": [...], "facets": [[...]], "order": optional}. */
int32_t ss_complex_parse(const char *json, SsComplex **out);
void ss_complex_free(SsComplex *handle);

/* Parse and validate a category from JSON text, generator reference or
 * explicit tables. */
int32_t ss_category_parse(const char *json, SsCategory **out);

/* Build a named preset category, e.g. "dw_z2" or "semion". */
int32_t ss_category_preset(const char *name, SsCategory **out);
void ss_category_free(SsCategory *handle);

/* Evaluate the invariant.  mode: 0 full enumeration, 1 reduced
 * cohomology-class sum (pointed and 2-group categories only).  seed drives
 * the reduced-mode self-check.  On success *out holds the exact value as a
 * cyclotomic polynomial string such as "1/2 + 1/2*z4"; free it with
 * ss_string_free. */
int32_t ss_compute(const SsComplex *complex, const SsCategory *category,
                   int32_t mode, uint64_t seed, char **out);
void ss_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* STATESUM_H */
