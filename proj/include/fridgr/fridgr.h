/* C interface to the fridgr library.
 *
 * Every fallible call returns a fridgr_status. On failure a description is available from
 * fridgr_last_error() on the calling thread until the next call on that thread.
 * Strings returned through char** out-parameters are owned by the caller and must be
 * released with fridgr_string_free().
 */
#ifndef FRIDGR_H
#define FRIDGR_H

#include <stddef.h>
#include <stdint.h>

#if defined(FRIDGR_BUILDING_LIBRARY)
#define FRIDGR_API __attribute__((visibility("default")))
#else
#define FRIDGR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match fridgr::Errc. */
typedef enum fridgr_status {
    FRIDGR_OK = 0,
    FRIDGR_INVALID_ARGUMENT = 1,
    FRIDGR_INVALID_CONFIG = 2,
    FRIDGR_PLACEMENT_EXHAUSTED = 3,
    FRIDGR_TEMPLATE_SYNTAX = 4,
    FRIDGR_DUPLICATE_TEMPLATE_ID = 5,
    FRIDGR_UNSATISFIABLE_MASK = 6,
    FRIDGR_OUT_OF_GRAMMAR = 7,
    FRIDGR_UNKNOWN_TOKEN = 8,
    FRIDGR_INCONSISTENT_FILTERS = 9,
    FRIDGR_EMPTY_QUERY = 10,
    FRIDGR_QUEUE_FULL = 11,
    FRIDGR_UNKNOWN_REQUEST_ID = 12,
    FRIDGR_SCHEMA = 13,
    FRIDGR_MISSING_SCENE = 14,
    FRIDGR_IO = 15,
    FRIDGR_SOUNDNESS_VIOLATION = 16,
    FRIDGR_SERVICE_STOPPED = 17,
    FRIDGR_INTERNAL = 99
} fridgr_status;

typedef enum fridgr_grammar { FRIDGR_GRAMMAR_ORIGINAL = 0, FRIDGR_GRAMMAR_EXTENDED = 1 } fridgr_grammar;

typedef struct fridgr_scene fridgr_scene;
typedef struct fridgr_language fridgr_language;
typedef struct fridgr_service fridgr_service;

FRIDGR_API const char* fridgr_version(void);
FRIDGR_API const char* fridgr_status_name(fridgr_status status);
FRIDGR_API const char* fridgr_last_error(void);
FRIDGR_API void fridgr_string_free(char* s);

/* Scenes */
FRIDGR_API fridgr_status fridgr_scene_generate(uint64_t seed, int64_t scene_id, fridgr_scene** out);
FRIDGR_API fridgr_status fridgr_scene_from_json(const char* json, fridgr_scene** out);
FRIDGR_API fridgr_status fridgr_scene_to_json(const fridgr_scene* scene, char** out);
FRIDGR_API fridgr_status fridgr_scene_render_svg(const fridgr_scene* scene, char** out);
FRIDGR_API size_t fridgr_scene_object_count(const fridgr_scene* scene);
FRIDGR_API void fridgr_scene_free(fridgr_scene* scene);

/* Templates and lexicon. Either path may be NULL to use the built-in file. */
FRIDGR_API fridgr_status fridgr_language_default(fridgr_language** out);
FRIDGR_API fridgr_status fridgr_language_load(const char* templates_path, const char* lexicon_path,
                                              fridgr_language** out);
FRIDGR_API void fridgr_language_free(fridgr_language* language);

/* Parses a question into canonical program text, e.g. "count size=large class=banana". */
FRIDGR_API fridgr_status fridgr_parse(const fridgr_language* language, const char* question,
                                      fridgr_grammar grammar, char** program_out);
/* Parses and evaluates against a scene; the answer is "yes", "no" or a count. */
FRIDGR_API fridgr_status fridgr_ask(const fridgr_language* language, const fridgr_scene* scene,
                                    const char* question, fridgr_grammar grammar, char** answer_out);

/* Datasets */
typedef struct fridgr_dataset_options {
    uint64_t master_seed;
    const char* profile;    /* "original" | "modified" */
    const char* scale;      /* "desk" | "paper" */
    const char* output_dir;
    uint32_t qa_per_scene;  /* 0: default (30) */
    uint32_t threads;       /* 0: hardware concurrency */
} fridgr_dataset_options;

FRIDGR_API void fridgr_dataset_options_init(fridgr_dataset_options* options);
FRIDGR_API fridgr_status fridgr_dataset_generate(const fridgr_language* language,
                                                 const fridgr_dataset_options* options, char** manifest_json);

/* Reports. Either output pointer may be NULL. */
FRIDGR_API fridgr_status fridgr_corpus_stats(const char* questions_path, char** json_out, char** table_out);
FRIDGR_API fridgr_status fridgr_eval(const fridgr_language* language, const char* questions_path,
                                     const char* scenes_path, fridgr_grammar grammar, char** json_out,
                                     char** table_out);
FRIDGR_API fridgr_status fridgr_shift_experiment(const fridgr_language* language, uint64_t master_seed,
                                                 int64_t scenes_per_set, uint32_t qa_per_scene, char** json_out,
                                                 char** table_out);

/* Question answering service */
typedef struct fridgr_service_options {
    size_t queue_bound;
    size_t max_batch;
    uint32_t batch_window_us;
    size_t snapshot_retention;
    const char* scene_source;  /* "fixed" | "rotating" | "live" */
    uint64_t scene_seed;
    uint32_t rotate_period_ms;
    const char* feedback_log;  /* NULL: do not persist */
    const char* static_dir;    /* NULL: no static files */
    size_t http_threads;
} fridgr_service_options;

FRIDGR_API void fridgr_service_options_init(fridgr_service_options* options);
FRIDGR_API fridgr_status fridgr_service_create(const fridgr_language* language,
                                               const fridgr_service_options* options, fridgr_service** out);
/* Binds host:port (0 picks a free port) and serves on a background thread. */
FRIDGR_API fridgr_status fridgr_service_start(fridgr_service* service, const char* host, int port,
                                              int* bound_port);
/* Blocks until fridgr_service_stop() is called from another thread. */
FRIDGR_API fridgr_status fridgr_service_wait(fridgr_service* service);
FRIDGR_API fridgr_status fridgr_service_stop(fridgr_service* service);
FRIDGR_API fridgr_status fridgr_service_stats(const fridgr_service* service, char** json_out);
FRIDGR_API void fridgr_service_free(fridgr_service* service);

#ifdef __cplusplus
}
#endif

#endif
