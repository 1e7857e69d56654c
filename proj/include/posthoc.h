/* C interface to the research-selection simulation engine.
 *
 * All state lives behind opaque handles; every call returns a ph_status and
 * the failing call's message is available from ph_last_error() on the same
 * thread. Strings returned through char** are heap-allocated and must be
 * released with ph_string_free().
 */

#ifndef POSTHOC_H
#define POSTHOC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ph_status {
  PH_OK = 0,
  PH_ERR_CONFIG = 1,            /* malformed or out-of-range configuration */
  PH_ERR_PRECONDITION = 2,      /* operation precondition violated */
  PH_ERR_INSUFFICIENT_DATA = 3, /* an estimator cell has no published trials */
  PH_ERR_BUDGET = 4,            /* exact enumeration would exceed the budget */
  PH_ERR_IO = 5,                /* file system failure (path in the message) */
  PH_ERR_INTERNAL = 6
} ph_status;

typedef enum ph_config_kind {
  PH_CONFIG_MODEL = 0,     /* single model run */
  PH_CONFIG_SWEEP = 1,     /* parameter sweep */
  PH_CONFIG_SCATTER = 2,   /* paired selected-idea scatter study */
  PH_CONFIG_HISTOGRAM = 3, /* measured-quality histogram study */
  PH_CONFIG_ORACLE = 4     /* exact enumeration instance */
} ph_config_kind;

/* bitmask for ph_result_emit */
enum { PH_FORMAT_CSV = 1, PH_FORMAT_JSON = 2 };

typedef struct ph_config ph_config;
typedef struct ph_result ph_result;

const char* ph_engine_version(void);

/* Message of the most recent failure on the calling thread. */
const char* ph_last_error(void);

void ph_string_free(char* s);

/* --- configuration ------------------------------------------------------ */

ph_status ph_config_parse(const char* json_text, ph_config** out);
ph_status ph_config_load(const char* path, ph_config** out);

/* Built-in studies: "fig1" (scatter), "fig2" (histograms),
 * "fig3" (heterogeneity sweep), "fig4" (quality-spread sweep). */
ph_status ph_config_preset(const char* name, ph_config** out);

ph_status ph_oracle_config_parse(const char* json_text, ph_config** out);
ph_status ph_oracle_config_load(const char* path, ph_config** out);

void ph_config_free(ph_config* config);

ph_status ph_config_kind_of(const ph_config* config, ph_config_kind* out);
ph_status ph_config_set_seed(ph_config* config, uint64_t seed);
ph_status ph_config_set_trials(ph_config* config, int64_t trials);

/* Hex digest of the canonical resolved configuration. */
ph_status ph_config_digest(const ph_config* config, char** out_hex);

/* Canonical JSON of the resolved configuration. */
ph_status ph_config_to_json(const ph_config* config, char** out_json);

/* --- execution ------------------------------------------------------------ */

/* Runs the configured job on up to `workers` threads (results do not depend
 * on the worker count). */
ph_status ph_run(const ph_config* config, int workers, ph_result** out);

ph_status ph_result_to_json(const ph_result* result, char** out);
ph_status ph_result_to_csv(const ph_result* result, char** out);

/* Writes <stem>.csv / <stem>.json (per the formats bitmask), chart SVGs when
 * with_plots is nonzero and the result kind has charts, and always
 * <stem>_manifest.json, into out_dir (created if missing). `command` is
 * echoed into the manifest; *manifest_path_out receives the manifest path. */
ph_status ph_result_emit(const ph_result* result, const char* out_dir, const char* stem,
                         int formats, int with_plots, const char* command,
                         char** manifest_path_out);

void ph_result_free(ph_result* result);

/* --- self-checks ----------------------------------------------------------- */

/* Runs the invariant suite. Returns PH_OK even when checks fail;
 * *out_n_failed carries the failure count and *out_report the printable
 * per-check report. */
ph_status ph_validate(int quick, uint64_t seed, int workers, char** out_report,
                      int* out_n_failed);

#ifdef __cplusplus
}
#endif

#endif /* POSTHOC_H */
