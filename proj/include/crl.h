/*
 * crl — credit-risk learning toolkit, public C API.
 *
 * The library is consumed through opaque handles and integer status codes.
 * Structured results come back as heap-allocated UTF-8 JSON documents that
 * the caller releases with crl_free(). Handles are not thread-safe for
 * concurrent mutation but may be shared read-only across threads.
 */
#ifndef CRL_H
#define CRL_H

#include <stdint.h>

#if defined(_WIN32)
#  if defined(CRL_BUILD)
#    define CRL_API __declspec(dllexport)
#  else
#    define CRL_API __declspec(dllimport)
#  endif
#else
#  define CRL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crl_status {
    CRL_OK = 0,
    CRL_ERROR_IO = 1,       /* file missing or unreadable */
    CRL_ERROR_SCHEMA = 2,   /* schema, validation or data-contract failure */
    CRL_ERROR_ARGUMENT = 3, /* bad option value or null argument */
    CRL_ERROR_INTERNAL = 4
} crl_status;

typedef struct crl_dataset crl_dataset; /* parsed credit-risk CSV table */
typedef struct crl_model crl_model;     /* trained model document */

CRL_API const char* crl_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
CRL_API const char* crl_last_error(void);

/* Release a string returned by any crl_* call. NULL is a no-op. */
CRL_API void crl_free(char* text);

/* ---- datasets -------------------------------------------------------- */

/* Parse a CSV with the 12-column credit-risk schema. */
CRL_API crl_status crl_dataset_open(const char* csv_path, crl_dataset** out);
CRL_API void crl_dataset_close(crl_dataset* dataset);
CRL_API int64_t crl_dataset_row_count(const crl_dataset* dataset);

/* {"column": missing_count, ...} in schema order. */
CRL_API crl_status crl_dataset_missing_summary(const crl_dataset* dataset, char** out_json);

/* Write a deterministic synthetic dataset with the same schema. */
CRL_API crl_status crl_write_synthetic_csv(const char* path, int64_t rows, uint64_t seed);

/* ---- pipeline runs ---------------------------------------------------
 *
 * Each call runs one subcommand of the toolkit against `config_json` and
 * returns a summary JSON (artifact paths, key figures, warnings). Pass NULL
 * or "{}" for defaults. Recognized keys mirror the CLI flags:
 *
 *   input, out, seed, train-frac, threshold, drop (array or "a,b"),
 *   model, models, roc ("scores"|"hard-labels"), svg (bool), threads,
 *   model-file, split ("test"|"all"), and hyperparameter overrides:
 *   lr, epochs, l2, svm-c, svm-kernel, svm-gamma, n-trees, max-depth,
 *   min-samples-split, features-per-split, no-bootstrap (bool).
 */
CRL_API crl_status crl_run_eda(const char* config_json, char** out_summary_json);
CRL_API crl_status crl_run_train(const char* config_json, char** out_summary_json);
CRL_API crl_status crl_run_evaluate(const char* config_json, char** out_summary_json);
CRL_API crl_status crl_run_compare(const char* config_json, char** out_summary_json);

/* ---- models ----------------------------------------------------------- */

CRL_API crl_status crl_model_open(const char* path, crl_model** out);
CRL_API void crl_model_close(crl_model* model);

/* Model kind, selected features and training metadata as JSON. */
CRL_API crl_status crl_model_summary(const crl_model* model, char** out_json);

/* Score every row of a dataset: [{"label":0|1,"score":s}, ...]. */
CRL_API crl_status crl_model_predict(const crl_model* model, const crl_dataset* dataset,
                                     char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CRL_H */
