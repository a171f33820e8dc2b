/* sdglens: SDG tagging, climate-sentiment scoring and interlinkage extraction
 * for policy documents. C interface.
 *
 * Conventions:
 *   - Every function returning sdgl_status reports failures through it and,
 *     for handle-less calls, through sdgl_last_error() on the same thread.
 *   - Strings returned through char** are heap-allocated UTF-8; release them
 *     with sdgl_string_free().
 *   - Handles are not thread-safe; use one handle per thread.
 */
#ifndef SDGLENS_SDGLENS_H
#define SDGLENS_SDGLENS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SDGL_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SDGL_API __attribute__((visibility("default")))
#else
#define SDGL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdgl_status {
  SDGL_OK = 0,
  SDGL_E_VALIDATION = 1,
  SDGL_E_BACKEND = 2,
  SDGL_E_PARSE = 3,
  SDGL_E_IO = 4,
  SDGL_E_EMPTY_DOCUMENT = 5,
  SDGL_E_INTERNAL = 6,
  SDGL_E_INVALID_ARGUMENT = 7
} sdgl_status;

SDGL_API const char* sdgl_version(void);
SDGL_API const char* sdgl_status_name(sdgl_status status);
/* Message of the last failed handle-less call on this thread ("" if none). */
SDGL_API const char* sdgl_last_error(void);
SDGL_API void sdgl_string_free(char* s);

/* ---- pipeline ---------------------------------------------------------- */

typedef struct sdgl_pipeline sdgl_pipeline;

/* One JSON log line per call, without trailing newline. */
typedef void (*sdgl_log_fn)(const char* line, void* user);

SDGL_API sdgl_status sdgl_pipeline_open(const char* config_path, sdgl_pipeline** out);
SDGL_API void sdgl_pipeline_close(sdgl_pipeline* p);

/* Keys: "strategy" (similarity|llm), "backend" (mock|http), "seed", "out",
 * "gold". Overrides are validated when the next stage runs. */
SDGL_API sdgl_status sdgl_pipeline_set_option(sdgl_pipeline* p, const char* key, const char* value);

/* NULL restores logging to stderr. */
SDGL_API void sdgl_pipeline_set_log(sdgl_pipeline* p, sdgl_log_fn fn, void* user);

/* Stages: ingest, clean, tag, sentiment, interlink, robustness, eval, report.
 * *exit_code receives the process exit code for the outcome: 0 success,
 * 1 validation or other local failure, 2 backend or network failure, 3 parse
 * failures above the configured tolerance. */
SDGL_API sdgl_status sdgl_pipeline_run(sdgl_pipeline* p, const char* stage, int* exit_code);

SDGL_API const char* sdgl_pipeline_last_error(const sdgl_pipeline* p);

/* Counters of the most recent stage: "requests", "cache_hits",
 * "network_calls", "retries", "failures". Unknown names give 0. */
SDGL_API uint64_t sdgl_pipeline_stat(const sdgl_pipeline* p, const char* name);

/* ---- parsers ------------------------------------------------------------- */

/* mode: 0 strict, 1 lenient. Results are JSON:
 *   assignment:   {"main", "main_reason", "secondaries":[{"sdg","reason"}], "warnings":[...]}
 *   interlinkage: {"records":[{"sdg_a","sdg_b","relationship","directionality","explanation"}], "warnings":[...]}
 *   sdg set:      {"sdgs":[...], "warnings":[...]} */
SDGL_API sdgl_status sdgl_parse_assignment(const char* raw, int mode, char** out_json);
SDGL_API sdgl_status sdgl_parse_interlinkage(const char* raw, int mode, char** out_json);
SDGL_API sdgl_status sdgl_parse_sdg_set(const char* raw, int mode, char** out_json);
SDGL_API sdgl_status sdgl_parse_sentiment(const char* raw, int* label);

/* Canonical text for a JSON record of the shapes above. */
SDGL_API sdgl_status sdgl_serialize_assignment(const char* json, char** out_text);
SDGL_API sdgl_status sdgl_serialize_interlinkage(const char* json, char** out_text);

/* ---- analytics ----------------------------------------------------------- */

SDGL_API sdgl_status sdgl_expected_sentiment(double p0, double p1, double p2, double* out);

/* ---- similarity tagger --------------------------------------------------- */

typedef struct sdgl_tagger sdgl_tagger;

/* NULL path loads the bundled descriptions. */
SDGL_API sdgl_status sdgl_tagger_open(const char* descriptions_path, sdgl_tagger** out);
SDGL_API void sdgl_tagger_close(sdgl_tagger* t);
/* scores[i] is the similarity to SDG i+1; *best is 0 when every score is 0. */
SDGL_API sdgl_status sdgl_tagger_score(sdgl_tagger* t, const char* text, double scores[17], int* best);
SDGL_API const char* sdgl_tagger_last_error(const sdgl_tagger* t);

#ifdef __cplusplus
}
#endif

#endif /* SDGLENS_SDGLENS_H */
