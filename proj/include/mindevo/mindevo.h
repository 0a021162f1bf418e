/* C interface to the mindevo search library.
 *
 * Every call returns an me_status. On failure, me_last_error() gives a
 * message for the calling thread. Strings handed out through char** are
 * heap-allocated JSON (or plain text) and must be released with
 * me_string_free. Handles are opaque and released with their _free call;
 * passing NULL to a _free call is allowed.
 */
#ifndef MINDEVO_MINDEVO_H
#define MINDEVO_MINDEVO_H

#include <stdint.h>

#if defined(_WIN32)
#define MINDEVO_API __declspec(dllexport)
#else
#define MINDEVO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum me_status {
  ME_OK = 0,
  ME_ERR_INVALID_ARGUMENT = 1, /* NULL pointer, bad JSON, unsupported request */
  ME_ERR_CONFIG = 2,           /* malformed config, instance or corpus */
  ME_ERR_BACKEND = 3,          /* generator transport failure or exhausted script */
  ME_ERR_REFUSED = 4,          /* size bound exceeded (brute-force oracles, generators) */
  ME_ERR_UNKNOWN_MODEL = 5,    /* model missing from the price table */
  ME_ERR_INTERNAL = 6
} me_status;

typedef struct me_task me_task;
typedef struct me_generator me_generator;

MINDEVO_API const char* me_version(void);
/* Message of the last failed call on this thread; "" if none. */
MINDEVO_API const char* me_last_error(void);
MINDEVO_API void me_string_free(char* s);

/* Tasks: instance documents with "kind" trip, meeting or steg. */
MINDEVO_API me_status me_task_load(const char* path, me_task** out);
MINDEVO_API me_status me_task_from_json(const char* instance_json, me_task** out);
MINDEVO_API void me_task_free(me_task* task);
/* {"kind", "id", "level", "description"} */
MINDEVO_API me_status me_task_describe(const me_task* task, char** out_json);
/* {"score", "normalized", "solved", "well_formed", "violations": [{"category", "message"}],
 *  "notes": [...], "feedback": [...]} */
MINDEVO_API me_status me_task_evaluate(const me_task* task, const char* plan_text, char** out_json);
/* Trip: {"feasible", "witness"}; meeting: {"max_meetings", "witness", "order"}.
 * Steg tasks have no oracle (ME_ERR_INVALID_ARGUMENT). */
MINDEVO_API me_status me_task_oracle(const me_task* task, char** out_json);

/* Generators. backend_json: {"name": "synthetic"|"scripted"|"http", "model", "script",
 * "base_url", "path", "api_key_env", "timeout_seconds", "transport_retries"}.
 * The synthetic backend needs the task it will plan for; others ignore it. */
MINDEVO_API me_status me_generator_create(const char* backend_json, const me_task* task, uint64_t seed,
                                          me_generator** out);
MINDEVO_API void me_generator_free(me_generator* generator);

/* One search on one task. strategy: "mind-evolution", "best-of-n", "one-pass" or "seq-rev+".
 * options_json (may be NULL): {"hyperparameters": {...}, "n_max", "threads", "turns"}.
 * Result: outcome counters, best candidate and every candidate in evaluation order. */
MINDEVO_API me_status me_search(const me_task* task, me_generator* generator, const char* strategy,
                                const char* options_json, uint64_t seed, char** out_json);

/* spec_json: {"task", "levels": [...], "per_level", "validation_per_level", "seed",
 * "decoy_density", "words_between", "repetition_rate", "repeat_window"}. Writes the
 * corpus under out_dir and returns the manifest. */
MINDEVO_API me_status me_generate_corpus(const char* spec_json, const char* out_dir, char** out_manifest_json);

/* Runs an experiment config (relative paths resolve against base_dir, may be NULL).
 * verbose != 0 prints progress to stderr. Returns the report. */
MINDEVO_API me_status me_run_experiment(const char* config_json, const char* base_dir, int verbose,
                                        char** out_report_json);
/* Rewrites the curve tables and summary.json of an output directory. */
MINDEVO_API me_status me_summarize(const char* output_dir, char** out_report_json);

/* usage_json: [{"input_tokens", "output_tokens", "model"}, ...]; prices_json may be NULL
 * for the built-in table. Result: {"llm_calls", "input_tokens", "output_tokens",
 * "total_cost", "per_model": {...}}. */
MINDEVO_API me_status me_accumulate_cost(const char* usage_json, const char* prices_json, char** out_json);
MINDEVO_API me_status me_default_prices(char** out_json);

#ifdef __cplusplus
}
#endif

#endif
