#ifndef PERIODS_PERIODS_H
#define PERIODS_PERIODS_H

/* C interface to the periods library. Handles are opaque; every fallible
 * call returns a pp_status and leaves a message for pp_last_error() on the
 * calling thread. Strings returned by the library stay valid until the next
 * call on the same thread (or until the owning handle is freed). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PP_API __declspec(dllexport)
#else
#define PP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pp_status {
  PP_OK = 0,
  PP_INVALID_INPUT = 1,
  PP_INVALID_CONFIG = 2,
  PP_NUMERIC = 3,
  PP_NOT_PROXIMAL = 4,
  PP_TRANSVERSALITY = 5,
  PP_EMPTY_CLASS = 6,
  PP_RESOURCE_LIMIT = 7,
  PP_IO = 8,
  PP_DUAL_CONE = 9,
  PP_INSUFFICIENT_DATA = 10,
  PP_DEGENERATE = 11,
  PP_SUITE_FAILURE = 12,
  PP_INTERNAL = 99
} pp_status;

typedef struct pp_config pp_config;
typedef struct pp_rep pp_rep;
typedef struct pp_dataset pp_dataset;

PP_API const char* pp_version(void);
PP_API const char* pp_status_name(pp_status status);
PP_API const char* pp_last_error(void);
/* Process exit code for a status: 0 ok, 1 io/internal, 2 config or input,
 * 3 numeric or suite failure, 4 resource limit, 5 degenerate observable. */
PP_API int pp_exit_code(pp_status status);

/* Run configuration. */
PP_API pp_status pp_config_default(pp_config** out);
PP_API pp_status pp_config_load(const char* path, pp_config** out);
/* Same keys as the config file, e.g. ("run", "seed", "7"). */
PP_API pp_status pp_config_set(pp_config* cfg, const char* section, const char* key, const char* value);
/* Hex SHA-256 of the canonical config (excludes workers and out). */
PP_API pp_status pp_config_hash(const pp_config* cfg, const char** out);
PP_API void pp_config_free(pp_config* cfg);

/* Runs "enumerate", "spectra", "verify" or "clt"; pp_last_summary() then
 * holds the JSON summary of the run. */
PP_API pp_status pp_run(const pp_config* cfg, const char* command);
PP_API const char* pp_last_summary(void);

/* Representations. */
PP_API pp_status pp_rep_schottky_sl2(double multiplier, double angle, pp_rep** out);
PP_API pp_status pp_rep_load(const char* path, pp_rep** out);
PP_API pp_status pp_rep_sym_power(const pp_rep* rep2, int k, pp_rep** out);
PP_API int pp_rep_dim(const pp_rep* rep);
PP_API void pp_rep_free(pp_rep* rep);

/* Dataset over all classes up to max_len with the functionals "length" and
 * "chi1"; mode is "all" or "primitive". */
PP_API pp_status pp_collect(const pp_rep* rep, int max_len, const char* mode, int workers, pp_dataset** out);
PP_API size_t pp_dataset_size(const pp_dataset* data);
/* Jordan period of record i under functional f (0 = length, 1 = chi1). */
PP_API pp_status pp_dataset_period(const pp_dataset* data, size_t i, size_t f, double* out);
PP_API pp_status pp_dataset_word(const pp_dataset* data, size_t i, const char** out);
PP_API void pp_dataset_free(pp_dataset* data);

/* Standard normal mass of [a, b]; infinities allowed. */
PP_API pp_status pp_gaussian_cdf_interval(double a, double b, double* out);

#ifdef __cplusplus
}
#endif

#endif /* PERIODS_PERIODS_H */
