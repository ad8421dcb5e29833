#ifndef STRATSCOPE_H
#define STRATSCOPE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StratscopeStatus {
  STRATSCOPE_STATUS_OK = 0,
  STRATSCOPE_STATUS_NULL_ARGUMENT = 1,
  STRATSCOPE_STATUS_INVALID_UTF8 = 2,
  STRATSCOPE_STATUS_MISSING_FILE = 3,
  STRATSCOPE_STATUS_IO = 4,
  STRATSCOPE_STATUS_INVALID_DATA = 5,
  STRATSCOPE_STATUS_INVALID_CONFIG = 6,
  STRATSCOPE_STATUS_ANALYSIS_FAILED = 7,
  STRATSCOPE_STATUS_MALFORMED_CODE = 8,
  STRATSCOPE_STATUS_PANIC = 9,
} StratscopeStatus;

/*
 Results of every stage over one bundle.
 */
typedef struct StratscopeAnalysis StratscopeAnalysis;

/*
 A loaded, validated dataset.
 */
typedef struct StratscopeBundle StratscopeBundle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Loads and validates the dataset in `data_dir`.

 # Safety
 `data_dir` must be a NUL-terminated string and `out` a valid pointer.
 */
enum StratscopeStatus stratscope_bundle_load(const char *data_dir, struct StratscopeBundle **out);

/*
 # Safety
 `bundle` must come from [`stratscope_bundle_load`] and not be used again.
 */
void stratscope_bundle_free(struct StratscopeBundle *bundle);

/*
 Number of problems found in `data_dir`: 0 for a valid dataset. Missing
 files and unreadable configuration are errors, not problems.

 # Safety
 `data_dir` must be a NUL-terminated string and `problems` a valid pointer.
 */
enum StratscopeStatus stratscope_validate(const char *data_dir, size_t *problems);

/*
 Runs every stage with the bundle's own configuration.

 # Safety
 `bundle` must be a live handle and `out` a valid pointer.
 */
enum StratscopeStatus stratscope_analyze(const struct StratscopeBundle *bundle,
                                         struct StratscopeAnalysis **out);

/*
 # Safety
 `analysis` must come from [`stratscope_analyze`] and not be used again.
 */
void stratscope_analysis_free(struct StratscopeAnalysis *analysis);

/*
 The full results as JSON (the `report.json` document).

 # Safety
 `analysis` must be a live handle and `out` a valid pointer.
 */
enum StratscopeStatus stratscope_analysis_json(const struct StratscopeAnalysis *analysis,
                                               char **out);

/*
 Overflow-column entries against all other entries.

 # Safety
 `analysis` must be a live handle; `outside` and `inside` valid pointers.
 */
enum StratscopeStatus stratscope_vertical_overflow(const struct StratscopeAnalysis *analysis,
                                                   size_t *outside,
                                                   size_t *inside);

/*
 Overflow-row entries (corner excluded) against interior entries.

 # Safety
 `analysis` must be a live handle; `outside` and `inside` valid pointers.
 */
enum StratscopeStatus stratscope_transversal_overflow(const struct StratscopeAnalysis *analysis,
                                                      size_t *outside,
                                                      size_t *inside);

/*
 Blind-spot codes as a comma-separated string, and their share of the
 consolidated set.

 # Safety
 `analysis` must be a live handle; `codes` and `share` valid pointers.
 */
enum StratscopeStatus stratscope_blind_spot(const struct StratscopeAnalysis *analysis,
                                            char **codes,
                                            double *share);

/*
 Writes the report files and manifest into `out_dir`.

 # Safety
 `analysis` must be a live handle and `out_dir` a NUL-terminated string.
 */
enum StratscopeStatus stratscope_report_write(const struct StratscopeAnalysis *analysis,
                                              const char *out_dir);

/*
 Canonical form of an indicator code, written with its NUL terminator
 into `out`, which must hold at least 4 bytes.

 # Safety
 `raw` must be a NUL-terminated string and `out` point to 4 writable bytes.
 */
enum StratscopeStatus stratscope_normalize_code(const char *raw, char *out);

/*
 # Safety
 `s` must come from this library and not be used again.
 */
void stratscope_string_free(char *s);

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next call into this library on the
 same thread.
 */
const char *stratscope_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRATSCOPE_H */
