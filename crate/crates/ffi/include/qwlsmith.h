/* C interface for the qwlsmith Smith-equivalence toolkit. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Parse and internal codes match the CLI exit-code contract.
typedef enum QwlStatus {
  QWL_STATUS_OK = 0,
  QWL_STATUS_NULL_ARGUMENT = 1,
  QWL_STATUS_PARSE_ERROR = 2,
  QWL_STATUS_INTERNAL_ERROR = 3,
  QWL_STATUS_INVALID_INPUT = 4,
} QwlStatus;

// Decision verdicts, numbered like the CLI exit codes.
typedef enum QwlVerdict {
  QWL_VERDICT_EQUIVALENT = 0,
  QWL_VERDICT_NOT_EQUIVALENT = 1,
  QWL_VERDICT_OUT_OF_SCOPE = 4,
} QwlVerdict;

// Opaque decision handle.
typedef struct QwlDecision QwlDecision;

// Opaque matrix handle.
typedef struct QwlMatrix QwlMatrix;

// Message for the most recent failure on this thread. Never NULL; the
// buffer is only valid until the next failing call on the same thread.
const char *qwl_last_error_message(void);

// Parses a matrix document (the JSON schema with `variables` and `rows`)
// into a fresh handle.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum QwlStatus qwl_matrix_parse(const char *json, struct QwlMatrix **out);

// # Safety
// `m` must come from `qwl_matrix_parse` and not have been freed.
void qwl_matrix_free(struct QwlMatrix *m);

// # Safety
// `m` must be a valid handle.
size_t qwl_matrix_rows(const struct QwlMatrix *m);

// # Safety
// `m` must be a valid handle.
size_t qwl_matrix_cols(const struct QwlMatrix *m);

// # Safety
// `m` must be a valid handle.
size_t qwl_matrix_normal_rank(const struct QwlMatrix *m);

// Canonical serialization of the matrix document.
//
// # Safety
// `m` must be a valid handle and `out` a valid pointer.
enum QwlStatus qwl_matrix_write(const struct QwlMatrix *m, char **out);

// Runs the equivalence decision.
//
// # Safety
// `m` must be a valid handle and `out` a valid pointer.
enum QwlStatus qwl_decide(const struct QwlMatrix *m, struct QwlDecision **out);

// # Safety
// `d` must come from `qwl_decide` and not have been freed.
void qwl_decision_free(struct QwlDecision *d);

// # Safety
// `d` must be a valid handle.
enum QwlVerdict qwl_decision_verdict(const struct QwlDecision *d);

// # Safety
// `d` must be a valid handle.
size_t qwl_decision_rank(const struct QwlDecision *d);

// Full decision report as JSON (rank, d_k chain, J_k verdicts, shape,
// verdict, Smith diagonal).
//
// # Safety
// `d` must be a valid handle and `out` a valid pointer.
enum QwlStatus qwl_decision_to_json(const struct QwlDecision *d, char **out);

// Checks the witness `F = U * D * V`. Writes 1 (accepted) or 0 into
// `out_accepted`.
//
// # Safety
// All handles must be valid and `out_accepted` a valid pointer.
enum QwlStatus qwl_verify(const struct QwlMatrix *f,
                          const struct QwlMatrix *u,
                          const struct QwlMatrix *d,
                          const struct QwlMatrix *v,
                          int32_t *out_accepted);

// Monic gcd of two expressions; the variable context is inferred from the
// identifiers, first variable first.
//
// # Safety
// `p1`/`p2` must be valid NUL-terminated strings and `out` a valid pointer.
enum QwlStatus qwl_gcd(const char *p1, const char *p2, char **out);

// Frees a string produced by this library.
//
// # Safety
// `s` must come from this library and not have been freed.
void qwl_string_free(char *s);
