#ifndef ACNUM_H
#define ACNUM_H

/*
 * C API for the acnum library: rational numbers represented as straight-line
 * arithmetic circuits, with exact and modular evaluation, basis-lowering
 * passes, a randomized equality test, a residue-arithmetic sign/comparison
 * procedure, and semidefinite-feasibility emission.
 *
 * Conventions:
 *   - every function returns an acnum_status; ACNUM_OK means success
 *   - on failure, acnum_last_error() returns a thread-local message
 *   - strings returned through char** are heap-allocated; release them
 *     with acnum_string_free()
 *   - circuits are opaque handles released with acnum_circuit_free()
 *   - structured reports are JSON and byte-stable for identical inputs
 *     and seeds
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum acnum_status {
  ACNUM_OK = 0,
  ACNUM_ERR_PARSE = 1,
  ACNUM_ERR_INVALID = 2,
  ACNUM_ERR_UNDEFINED = 3, /* circuit value undefined: promise violation */
  ACNUM_ERR_UNSUPPORTED = 4,
  ACNUM_ERR_BUDGET = 5,
  ACNUM_ERR_INTERNAL = 6,
  ACNUM_ERR_IO = 7
} acnum_status;

typedef enum acnum_basis {
  ACNUM_BASIS_ARITHMETIC = 0,
  ACNUM_BASIS_DIVISION_FREE = 1,
  ACNUM_BASIS_MONOTONE = 2,
  ACNUM_BASIS_PLUS_HSQ = 3
} acnum_basis;

typedef enum acnum_format { ACNUM_FORMAT_TEXT = 0, ACNUM_FORMAT_JSON = 1 } acnum_format;

typedef enum acnum_prime_mode { ACNUM_MODE_TIGHT = 0, ACNUM_MODE_PAPER = 1 } acnum_prime_mode;

typedef struct acnum_circuit acnum_circuit;

const char* acnum_version(void);

/* Thread-local message describing the most recent failure in this thread. */
const char* acnum_last_error(void);

void acnum_string_free(char* s);
void acnum_circuit_free(acnum_circuit* c);

acnum_status acnum_circuit_parse(const char* text, acnum_format format, acnum_circuit** out);
acnum_status acnum_circuit_serialize(const acnum_circuit* c, acnum_format format, char** out);
int acnum_circuit_size(const acnum_circuit* c);
acnum_basis acnum_circuit_basis(const acnum_circuit* c);

/*
 * Exact value as "<num>/<den>" (or "<num>" for integers). When the value is
 * undefined, returns ACNUM_OK with *value = NULL and *undefined_gate set to
 * the 1-based index of the first division by zero; otherwise
 * *undefined_gate = -1.
 */
acnum_status acnum_eval_exact(const acnum_circuit* c, char** value, long* undefined_gate);

/* Least non-negative residue; requires an integer-valued (division-free)
 * circuit and modulus >= 1 in decimal. */
acnum_status acnum_eval_mod(const acnum_circuit* c, const char* modulus, char** residue);

/*
 * Lowers to the target basis. The result JSON carries either
 * {"circuit": ...} or {"pair": {"program": ..., "pos_out": i, "neg_out": j}}
 * plus a "reports" array with per-pass sizes and expansion factors.
 */
acnum_status acnum_lower(const acnum_circuit* c, acnum_basis target, int cleanup,
                         char** result_json);

/*
 * Randomized equality test. rounds = 0 derives the round count from
 * target_error. *equal is 1/0. The report records bound bits, rounds,
 * witness and error bound; with_census additionally runs the exhaustive
 * single-round detection census (bounded inputs only).
 */
acnum_status acnum_eq(const acnum_circuit* s1, const acnum_circuit* s2, double target_error,
                      unsigned long long seed, unsigned long long rounds, int with_census,
                      int* equal, char** report_json);

/*
 * Sign-based comparison: *geq = 1 iff v(s1) >= v(s2). strict != 0 refines a
 * GEQ verdict into GT/EQ with the randomized equality test (one-sided error
 * 2^-40, recorded in the report). trace != 0 embeds the residue trace.
 */
acnum_status acnum_cmp(const acnum_circuit* s1, const acnum_circuit* s2, acnum_prime_mode mode,
                       int strict, int trace, unsigned long long seed, int* geq,
                       char** report_json);

/*
 * Emits the value program (threshold = NULL) or a threshold feasibility
 * instance (threshold = "p/q": feasible iff v(c) <= p/q) for a {+, x^2/2}
 * circuit. format selects SDPA sparse text (.dat-s) or exact JSON. certify
 * != 0 adds an exact certificate/infeasibility report.
 */
acnum_status acnum_sdp(const acnum_circuit* c, const char* threshold, int keep_x0,
                       acnum_format format, int certify, int precision, char** out,
                       char** report_json);

/* Deterministic random circuit; weights like "add=1,mul=2" (NULL = uniform). */
acnum_status acnum_generate(acnum_basis basis, int size, unsigned long long seed,
                            const char* weights, acnum_circuit** out);

/* Built-in worked vectors; *passed is 1 when every check holds. */
acnum_status acnum_selftest(int* passed, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* ACNUM_H */
