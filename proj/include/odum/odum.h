/*
 * odum - open government data portal usability workbench.
 *
 * C API over the scoring, sampling, clustering and probing engine. All
 * functions return odum_status; failure details are available through
 * odum_last_error() on the calling thread. Objects are opaque handles
 * released with their matching _free function. Strings returned through
 * char** out-parameters are heap-allocated; release them with
 * odum_string_free().
 */

#ifndef ODUM_H
#define ODUM_H

#include <stddef.h>

#if defined(_WIN32)
#define ODUM_API __declspec(dllexport)
#else
#define ODUM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum odum_status {
    ODUM_OK = 0,
    ODUM_ERROR_IO = 1,
    ODUM_ERROR_PARSE = 2,
    ODUM_ERROR_INVALID = 3,
    ODUM_ERROR_NETWORK = 4,
    ODUM_ERROR_INTERNAL = 5
} odum_status;

typedef struct odum_schema odum_schema;
typedef struct odum_corpus odum_corpus;
typedef struct odum_results odum_results;
typedef struct odum_clustering odum_clustering;

ODUM_API const char* odum_status_name(odum_status status);

/* Message for the most recent failure on this thread; empty when none. */
ODUM_API const char* odum_last_error(void);

ODUM_API void odum_string_free(char* text);

/* -- schema ------------------------------------------------------------- */

ODUM_API odum_status odum_schema_load_builtin(odum_schema** out);
ODUM_API odum_status odum_schema_load_file(const char* path, odum_schema** out);
ODUM_API void odum_schema_free(odum_schema* schema);

ODUM_API int odum_schema_dimension_count(const odum_schema* schema);
ODUM_API int odum_schema_sub_dimension_count(const odum_schema* schema);
ODUM_API int odum_schema_total_max(const odum_schema* schema);

/* Text validation report plus issue counts. */
ODUM_API odum_status odum_schema_validate(const odum_schema* schema, int* error_count,
                                          int* warning_count, char** text_report);

ODUM_API odum_status odum_schema_to_json(const odum_schema* schema, char** json_text);

/* -- assessments -------------------------------------------------------- */

ODUM_API odum_status odum_corpus_load_dir(const odum_schema* schema, const char* dir,
                                          odum_corpus** out);
ODUM_API int odum_corpus_size(const odum_corpus* corpus);
ODUM_API void odum_corpus_free(odum_corpus* corpus);

/* -- scoring ------------------------------------------------------------ */

ODUM_API odum_status odum_results_compute(const odum_schema* schema, const odum_corpus* corpus,
                                          odum_results** out);
ODUM_API void odum_results_free(odum_results* results);

/* Total score of one portal; -1 when the portal is unknown. */
ODUM_API int odum_results_total(const odum_results* results, const char* portal);

/* scorecards/<portal>.json and matrix.csv under out_dir. */
ODUM_API odum_status odum_results_write(const odum_results* results, const char* out_dir);

/* ranking.csv / ranking.md under out_dir; format is "csv", "md" or "" (both). */
ODUM_API odum_status odum_results_write_ranking(const odum_results* results, const char* out_dir,
                                                const char* format);

/* -- clustering ---------------------------------------------------------- */

/* k = 0 selects k by the elbow suggestion. features: "binary" | "weighted". */
ODUM_API odum_status odum_clustering_run(const odum_results* results, int k, const char* features,
                                         unsigned long long seed, odum_clustering** out);
ODUM_API int odum_clustering_k(const odum_clustering* clustering);
ODUM_API void odum_clustering_free(odum_clustering* clustering);

/* clusters/{partition,linkage,elbow,profiles}.csv + dendrogram.json. */
ODUM_API odum_status odum_clustering_write(const odum_clustering* clustering,
                                           const char* out_dir);

/* -- probing ------------------------------------------------------------- */

/* Probes every portal in the corpus (load time, endpoints, accessibility,
 * catalog harvest). Writes probes/<portal>.json logs and
 * fragments/<portal>.json merged assessment records under out_dir.
 * checker_url may be NULL. Returns ODUM_ERROR_NETWORK when no portal was
 * reachable. reachable_count may be NULL. */
ODUM_API odum_status odum_probe_corpus(const odum_schema* schema, const odum_corpus* corpus,
                                       const char* out_dir, int trials, const char* checker_url,
                                       int* reachable_count);

/* -- report --------------------------------------------------------------- */

/* report.md under out_dir; clustering may be NULL (section marked not
 * computed). */
ODUM_API odum_status odum_report_write(const odum_schema* schema, const odum_results* results,
                                       const odum_clustering* clustering, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ODUM_H */
