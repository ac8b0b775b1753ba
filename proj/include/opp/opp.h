#ifndef OPP_OPP_H
#define OPP_OPP_H

/* C interface to the online-pricing playground: scenario execution,
 * instance generation, property verification, and the demos.
 *
 * Conventions:
 *   - every function returns an opp_status; OPP_OK is 0
 *   - output strings are heap-allocated; release them with opp_string_free
 *   - opp_last_error() describes the most recent failure on this thread
 *   - handles are opaque; release them with their matching *_free call
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum opp_status {
  OPP_OK = 0,
  OPP_EINVAL = 1,       /* bad argument or bad instance data */
  OPP_ECONFIG = 2,      /* bad scenario or configuration field */
  OPP_EPARSE = 3,       /* malformed scenario or instance text */
  OPP_EIO = 4,          /* file system failure */
  OPP_EUNSUPPORTED = 5, /* well-formed input outside the supported range */
  OPP_EINTERNAL = 6     /* internal invariant failure */
} opp_status;

typedef struct opp_scenario opp_scenario;
typedef struct opp_report opp_report;

typedef struct opp_trial_row {
  int trial;
  double cost;
  double opt;
  double ratio;
  uint64_t seed;
} opp_trial_row;

/* Library version, static storage. */
const char* opp_version(void);

/* Message for the last failure on the calling thread; empty string if none.
 * Valid until the next opp_* call on the same thread. */
const char* opp_last_error(void);

/* Releases a string returned through a char** output parameter. */
void opp_string_free(char* s);

/* ---- scenarios -------------------------------------------------------- */

opp_status opp_scenario_parse(const char* text, opp_scenario** out);
opp_status opp_scenario_load(const char* path, opp_scenario** out);
/* Sets a top-level key (seed, trials, jobs, tie_policy, format, out, ...)
 * and re-validates the scenario. */
opp_status opp_scenario_set(opp_scenario* s, const char* key, const char* value);
/* Effective value of a structured field (family, algorithm, pricing,
 * generator, seed, trials, jobs, tie_policy, format, out, instance),
 * defaults applied. */
opp_status opp_scenario_get(const opp_scenario* s, const char* key, char** out_value);
/* Canonical text form of the scenario document. */
opp_status opp_scenario_text(const opp_scenario* s, char** out_text);
void opp_scenario_free(opp_scenario* s);

/* ---- execution -------------------------------------------------------- */

/* Runs every trial of the scenario (serially or on `jobs` threads). */
opp_status opp_run(const opp_scenario* s, opp_report** out);

opp_status opp_report_trials(const opp_report* r, int* out_count);
opp_status opp_report_row(const opp_report* r, int index, opp_trial_row* out_row);
/* Aggregates over the per-trial cost/opt ratios. */
opp_status opp_report_max_ratio(const opp_report* r, double* out);
opp_status opp_report_mean_ratio(const opp_report* r, double* out);
opp_status opp_report_std_ratio(const opp_report* r, double* out);
/* Full table; format is "csv" or "tsv". */
opp_status opp_report_text(const opp_report* r, const char* format, char** out_text);
/* Short key = value block with the aggregate ratios. */
opp_status opp_report_summary(const opp_report* r, char** out_text);
opp_status opp_report_write(const opp_report* r, const char* path, const char* format);
void opp_report_free(opp_report* r);

/* ---- instances -------------------------------------------------------- */

/* Generates an instance and returns its text form. `params_text` is a
 * scenario-style document whose [params] section (or top level) holds the
 * generator parameters; NULL or "" means all defaults. */
opp_status opp_generate(const char* family, const char* generator, const char* params_text,
                        uint64_t seed, char** out_text);

/* ---- verification ----------------------------------------------------- */

/* Newline-separated list of the property suite names. */
opp_status opp_verify_names(char** out_text);

/* Runs one suite by name, or all of them for "all". Failing suites write a
 * witness file under witness_dir (NULL means the current directory). The
 * report has one line per suite: SUITE <name> PASS|FAIL witness=<path>.
 * *out_all_passed is 1 iff every executed suite passed. */
opp_status opp_verify(const char* suite, const char* witness_dir, char** out_report,
                      int* out_all_passed);

/* ---- demos ------------------------------------------------------------ */

/* Named walkthrough with byte-stable output; `args` holds space-separated
 * key=value overrides, NULL or "" for defaults. */
opp_status opp_demo(const char* name, const char* args, char** out_text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OPP_OPP_H */
