/* eccbench — energy-efficiency graph benchmarking, C API.
 *
 * All functions return ecc_status; ECC_OK means success. On failure a
 * human-readable message is available from ecc_last_error() (thread-local).
 * Strings returned through char** out parameters are heap-allocated and
 * must be released with ecc_string_free(). Graph handles are opaque and
 * released with ecc_graph_free().
 */
#ifndef ECCBENCH_H
#define ECCBENCH_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef ECCBENCH_BUILD
#    define ECC_API __declspec(dllexport)
#  else
#    define ECC_API __declspec(dllimport)
#  endif
#else
#  define ECC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ecc_status {
    ECC_OK = 0,
    ECC_ERR_IO = 1,
    ECC_ERR_PARSE = 2,
    ECC_ERR_SCHEMA = 3,
    ECC_ERR_VALIDATION = 4,
    ECC_ERR_ANALYSIS = 5,
    ECC_ERR_INVALID_ARGUMENT = 6,
    ECC_ERR_INTERNAL = 7
} ecc_status;

/* Opaque state-graph handle. */
typedef struct ecc_graph ecc_graph;

typedef struct ecc_analyze_options {
    long long window_seconds; /* > 0 */
    const char* aggregation;  /* "mean" | "p95" | "max" */
    double threshold_a;       /* benchmark cut a, 0 <= a <= b <= 1 */
    double threshold_b;       /* benchmark cut b */
    const char* curve_mode;   /* "rederive" | "average" */
} ecc_analyze_options;

/* Fill with the defaults: 3600 s mean windows, thresholds 0.1/0.3,
 * rederive curve mode. */
ECC_API void ecc_analyze_options_init(ecc_analyze_options* options);

typedef struct ecc_simulate_overrides {
    int has_seed; /* nonzero: seed replaces the config's */
    unsigned long long seed;
    int days;            /* <= 0 keeps the config value */
    int iterations;      /* < 0 keeps the config value */
    int grid_resolution; /* <= 0 keeps the config value */
} ecc_simulate_overrides;

ECC_API const char* ecc_version(void);
ECC_API const char* ecc_status_name(ecc_status status);
ECC_API const char* ecc_last_error(void);
ECC_API void ecc_string_free(char* text);

/* Parse and schema-check a graph file; validation findings are reported by
 * ecc_graph_validate, not here. */
ECC_API ecc_status ecc_graph_load(const char* path, ecc_graph** out_graph);
ECC_API ecc_status ecc_graph_parse(const char* json_text, ecc_graph** out_graph);
ECC_API ecc_status ecc_graph_to_json(const ecc_graph* graph, char** out_json);
ECC_API ecc_status ecc_graph_save(const ecc_graph* graph, const char* path);
ECC_API ecc_status ecc_graph_node_count(const ecc_graph* graph, size_t* out_count);

/* Structural validation; returns the report as JSON plus the finding count.
 * A graph with findings still returns ECC_OK here. */
ECC_API ecc_status ecc_graph_validate(const ecc_graph* graph, char** out_report_json,
                                      size_t* out_violation_count);

/* Derive composite curves; returns the annotated graph as JSON. */
ECC_API ecc_status ecc_graph_derive(const ecc_graph* graph, char** out_annotated_json);

ECC_API void ecc_graph_free(ecc_graph* graph);

/* Merge state-graph files into one aggregate; returns the merged graph
 * (renormalized weights, raw weights retained) as JSON. */
ECC_API ecc_status ecc_merge_files(const char* const* graph_paths, size_t count,
                                   const char* curve_mode, char** out_merged_json);

/* Full analysis: ingest traces, build per-window states, merge, derive,
 * compute gaps, benchmark and rank. Writes gaps.json, gaps.csv and
 * curves/<id>.csv under out_dir; returns the gaps.json content. */
ECC_API ecc_status ecc_analyze(const char* graph_path, const char* traces_path,
                               const ecc_analyze_options* options, const char* out_dir,
                               char** out_summary_json);

/* Single-component efficiency gap over the same pipeline. */
ECC_API ecc_status ecc_gap(const char* graph_path, const char* traces_path,
                           const char* component, const ecc_analyze_options* options,
                           char** out_record_json);

/* Model-fitness recommendation for `target` against the variance band
 * [variance_min, variance_max]. variance_at selects where the target's
 * variance is read: "current" | "optimal" | "integrated". */
ECC_API ecc_status ecc_fitness(const char* graph_path, const char* traces_path,
                               const char* target, double variance_min, double variance_max,
                               const char* variance_at, const ecc_analyze_options* options,
                               char** out_recommendation_json);

/* Generate the synthetic intra-logistics scenario. config_json may be NULL
 * for the built-in defaults. Writes graph.json, traces_iter<k>.csv and
 * summary.json under out_dir; returns the summary.json content. */
ECC_API ecc_status ecc_simulate(const char* config_json,
                                const ecc_simulate_overrides* overrides, const char* out_dir,
                                char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* ECCBENCH_H */
