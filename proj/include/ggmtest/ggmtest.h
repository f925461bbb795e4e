/*
 * ggmtest C API.
 *
 * Gaussian graphical model edge identification by multiple testing of
 * partial correlations, and the Monte Carlo harness that compares the
 * identification procedures.
 *
 * Objects are opaque handles created by ggm_*_create/generate/load calls and
 * released with the matching ggm_*_free. Every fallible call returns a
 * ggm_status; on failure ggm_last_error() describes the problem for the
 * calling thread until its next failing call. Vertex indices are 1-based.
 */
#ifndef GGMTEST_H
#define GGMTEST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GGMTEST_BUILDING)
#    define GGM_API __declspec(dllexport)
#  else
#    define GGM_API __declspec(dllimport)
#  endif
#else
#  define GGM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ggm_status {
  GGM_OK = 0,
  GGM_ERR_INVALID_ARGUMENT = 1,
  GGM_ERR_INSUFFICIENT_SAMPLE = 2, /* n < p + 2 */
  GGM_ERR_DEGENERATE_SAMPLE = 3,   /* singular sample covariance */
  GGM_ERR_GENERATION_FAILURE = 4,  /* positive definiteness not reached */
  GGM_ERR_IO = 5,
  GGM_ERR_PARSE = 6,               /* malformed model, data or results file */
  GGM_ERR_CONFIG = 7,              /* experiment config violations */
  GGM_ERR_INTERNAL = 8
} ggm_status;

typedef enum ggm_df_rule {
  GGM_DF_N_MINUS_P = 0,
  GGM_DF_N_MINUS_P_MINUS_2 = 1
} ggm_df_rule;

typedef struct ggm_model ggm_model;
typedef struct ggm_data ggm_data;
typedef struct ggm_inference ggm_inference;

typedef struct ggm_generator_spec {
  size_t p;
  int use_density;     /* nonzero: edge count is round(density * C(p,2)) */
  size_t edges;
  double density;
  double rho_min;
  double rho_max;
  uint64_t seed;
  int random_sign;
} ggm_generator_spec;

typedef struct ggm_confusion {
  size_t tp;
  size_t fp;
  size_t tn;
  size_t fn;
} ggm_confusion;

GGM_API const char* ggm_version(void);
GGM_API const char* ggm_last_error(void);
GGM_API const char* ggm_status_name(ggm_status status);

/* Defaults: p = 2, no edges, rho in [0.2, 0.55], seed 0. */
GGM_API void ggm_generator_spec_init(ggm_generator_spec* spec);

/* ---- models ---------------------------------------------------------- */

GGM_API ggm_status ggm_model_generate(const ggm_generator_spec* spec, ggm_model** out);
GGM_API ggm_status ggm_model_load(const char* path, ggm_model** out);
/* p x p symmetric positive definite concentration matrix, row-major. */
GGM_API ggm_status ggm_model_from_matrix(size_t p, const double* row_major, ggm_model** out);
GGM_API ggm_status ggm_model_save(const ggm_model* model, const char* path);
GGM_API void ggm_model_free(ggm_model* model);

GGM_API size_t ggm_model_dim(const ggm_model* model);
GGM_API size_t ggm_model_edge_count(const ggm_model* model);
GGM_API int ggm_model_repaired(const ggm_model* model);
GGM_API double ggm_model_delta(const ggm_model* model);
/* Copies the concentration matrix (len >= p * p). */
GGM_API ggm_status ggm_model_concentration(const ggm_model* model, double* out, size_t len);

/* ---- data ------------------------------------------------------------ */

GGM_API ggm_status ggm_simulate(const ggm_model* model, size_t n, uint64_t seed, ggm_data** out);
GGM_API ggm_status ggm_data_from_array(size_t n, size_t p, const double* row_major, ggm_data** out);
GGM_API ggm_status ggm_data_load_csv(const char* path, ggm_data** out);
GGM_API ggm_status ggm_data_save_csv(const ggm_data* data, const char* path);
GGM_API void ggm_data_free(ggm_data* data);
GGM_API size_t ggm_data_rows(const ggm_data* data);
GGM_API size_t ggm_data_cols(const ggm_data* data);

/* ---- procedures ------------------------------------------------------ */

/* Names: simultaneous, bonferroni, sidak, holm-bonferroni, holm-sidak. */
GGM_API int ggm_procedure_valid(const char* name);
GGM_API ggm_status ggm_parse_df_rule(const char* text, ggm_df_rule* out);

/* Adjusts a family of len p-values (family size = len). out may alias raw. */
GGM_API ggm_status ggm_adjust(const char* procedure, const double* raw, size_t len, double* out);

/* Raw two-sided p-values for the C(p,2) pairs in order (1,2), (1,3), ... */
GGM_API ggm_status ggm_raw_pvalues(const ggm_data* data, ggm_df_rule df_rule, double* out, size_t len);

GGM_API ggm_status ggm_infer(const ggm_data* data, const char* procedure, double alpha, ggm_df_rule df_rule,
                             ggm_inference** out);
GGM_API void ggm_inference_free(ggm_inference* inference);
GGM_API size_t ggm_inference_edge_count(const ggm_inference* inference);
GGM_API ggm_status ggm_inference_edge(const ggm_inference* inference, size_t k, size_t* i, size_t* j);
GGM_API ggm_status ggm_inference_adjusted_pvalues(const ggm_inference* inference, double* out, size_t len);
GGM_API ggm_status ggm_inference_save_json(const ggm_inference* inference, const char* path);
GGM_API ggm_status ggm_inference_confusion(const ggm_inference* inference, const ggm_model* truth,
                                           ggm_confusion* out);

/* ---- experiments and plots ------------------------------------------- */

/* Runs the experiment described by a JSON config and writes results.csv,
 * risk.csv, roc.csv and manifest.json into out_dir (created if missing).
 * threads = 0 uses the hardware concurrency. decouple_risk_weight < 0 keeps
 * the config value. Nothing is written when the config is invalid. */
GGM_API ggm_status ggm_experiment_run(const char* config_path, const char* out_dir, unsigned threads,
                                      int decouple_risk_weight, size_t* failed_trials);

/* kind: "roc", "risk" or "fn-vs-n". n_filter = 0 keeps every n. The output
 * file is only created on success. */
GGM_API ggm_status ggm_plot(const char* results_path, const char* kind, size_t n_filter, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* GGMTEST_H */
