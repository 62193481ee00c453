/* facepipe C API: scenario-driven simulation of a multi-stage real-time
 * face-analysis pipeline, plus trace evaluation.
 *
 * All functions return fp_status; on failure fp_last_error() carries a
 * human-readable diagnostic for the calling thread. Objects are opaque
 * handles released with their matching *_free function (NULL is a no-op).
 * Strings returned through char** out-parameters are heap-allocated and
 * must be released with fp_string_free.
 */
#ifndef FACEPIPE_H
#define FACEPIPE_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FP_API __declspec(dllexport)
#else
#define FP_API __attribute__((visibility("default")))
#endif

typedef enum fp_status {
    FP_OK = 0,
    FP_ERROR_INVALID_ARGUMENT = 1,
    FP_ERROR_PARSE = 2,
    FP_ERROR_IO = 3,
    FP_ERROR_MISMATCH = 4,
    FP_ERROR_INTERNAL = 5
} fp_status;

typedef struct fp_scenario fp_scenario;
typedef struct fp_result fp_result;
typedef struct fp_report fp_report;

/* Run options. Zero/negative values mean "use the scenario's value or the
 * built-in default"; fp_run_options_init fills the struct accordingly. */
typedef struct fp_run_options {
    int realtime;                      /* 0 = deterministic virtual clock */
    long long seed;                    /* >= 0 overrides the scenario seed */
    double frame_rate;                 /* > 0 overrides the scenario rate */
    double visualization_rate;         /* > 0 overrides the default 25 */
    int buffer_capacity;               /* > 0 overrides the default 32 */
    int aggregation_window;            /* > 0 overrides the default 8 */
    double tracker_max_match_distance; /* > 0 overrides the default 0.10 */
    int tracker_expiry_misses;         /* > 0 overrides the default 10 */
    int expression_every;              /* > 0 overrides the cadence */
    int age_every;
    int gender_every;
    const char* face_template_path;    /* NULL = built-in 68-point layout */
} fp_run_options;

FP_API const char* fp_version(void);
FP_API const char* fp_status_name(fp_status status);
/* Message for the most recent failure on this thread; never NULL. */
FP_API const char* fp_last_error(void);
FP_API void fp_string_free(char* s);

FP_API fp_status fp_scenario_load(const char* path, fp_scenario** out);
FP_API fp_status fp_scenario_parse(const char* json_text, fp_scenario** out);
FP_API void fp_scenario_free(fp_scenario* scenario);

FP_API void fp_run_options_init(fp_run_options* options);

/* Executes the scenario; options may be NULL for all defaults. */
FP_API fp_status fp_run(const fp_scenario* scenario, const fp_run_options* options,
                        fp_result** out);
FP_API void fp_result_free(fp_result* result);

FP_API fp_status fp_result_write_trace(const fp_result* result, const char* path);
FP_API fp_status fp_result_write_annotated(const fp_result* result, const char* path);
FP_API fp_status fp_result_write_metrics(const fp_result* result, const char* path);
/* One PPM image per visualization tick, written into dir. */
FP_API fp_status fp_result_dump_frames(const fp_result* result, const char* dir);
/* One-line run summary (fps, tracks, drops, mean per-face latency). */
FP_API fp_status fp_result_summary(const fp_result* result, char** out);

/* Replays a trace file against its scenario and computes the metrics
 * table. A trace that does not belong to the scenario (or is truncated/
 * corrupt) yields FP_ERROR_MISMATCH. */
FP_API fp_status fp_evaluate(const char* trace_path, const char* scenario_path,
                             fp_report** out);
FP_API void fp_report_free(fp_report* report);

FP_API fp_status fp_report_write_json(const fp_report* report, const char* path);
FP_API fp_status fp_report_write_csv(const fp_report* report, const char* path);
FP_API fp_status fp_report_summary(const fp_report* report, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FACEPIPE_H */
