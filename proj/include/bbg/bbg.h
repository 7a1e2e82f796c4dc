/*
 * C interface to the black-box greedy library.
 *
 * Every function returns a bbg_status; on failure a description of the most
 * recent error on the calling thread is available from bbg_last_error().
 * Handles are opaque and owned by the caller, who releases them with the
 * matching *_destroy function.
 */
#ifndef BBG_BBG_H
#define BBG_BBG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BBG_BUILDING_LIBRARY)
#    define BBG_API __declspec(dllexport)
#  else
#    define BBG_API __declspec(dllimport)
#  endif
#else
#  define BBG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define BBG_ABI_VERSION 1u

typedef enum bbg_status {
  BBG_OK = 0,
  BBG_ERR_ARGUMENT = 1,   /* bad argument, dimension mismatch, null pointer */
  BBG_ERR_CONFIG = 2,     /* malformed config or data file */
  BBG_ERR_RUNTIME = 3,    /* a run failed; see bbg_last_error() */
  BBG_ERR_DOMAIN = 4,     /* query or radius outside the domain */
  BBG_ERR_INFEASIBLE = 5, /* empty transformed constraint or infeasible point */
  BBG_ERR_CAPACITY = 6,   /* exhaustive routine refused a large instance */
  BBG_ERR_NUMERIC = 7,    /* factorization failure, non-finite value */
  BBG_ERR_BUFFER = 8      /* caller buffer too small; required size reported */
} bbg_status;

typedef struct bbg_experiment bbg_experiment;
typedef struct bbg_constraint bbg_constraint;

BBG_API uint32_t bbg_abi_version(void);
BBG_API const char* bbg_version_string(void);
BBG_API const char* bbg_status_name(bbg_status status);

/* Thread-local; valid until the next failing call on the same thread. */
BBG_API const char* bbg_last_error(void);

/* ---- experiments ------------------------------------------------------- */

BBG_API bbg_status bbg_experiment_load(const char* config_path, bbg_experiment** out);
BBG_API bbg_status bbg_experiment_parse(const char* config_text, const char* base_dir,
                                        bbg_experiment** out);
BBG_API void bbg_experiment_destroy(bbg_experiment* experiment);

BBG_API bbg_status bbg_experiment_set_seed_override(bbg_experiment* experiment, uint64_t seed);
BBG_API bbg_status bbg_experiment_set_out_dir(bbg_experiment* experiment, const char* out_dir);
BBG_API bbg_status bbg_experiment_set_jobs(bbg_experiment* experiment, unsigned jobs);

/* Runs every (algorithm, seed) cell and writes the trace and summary CSVs.
 * Returns BBG_ERR_RUNTIME if any cell failed; the CSVs are still written. */
BBG_API bbg_status bbg_experiment_run(bbg_experiment* experiment);

/* Paths written by the last successful bbg_experiment_run (empty before). */
BBG_API const char* bbg_experiment_trace_path(const bbg_experiment* experiment);
BBG_API const char* bbg_experiment_summary_path(const bbg_experiment* experiment);
BBG_API size_t bbg_experiment_failure_count(const bbg_experiment* experiment);

/* Optimum of the configured instance. Set functions: exhaustive search over
 * the partition matroid (exact = 1); members receives the optimal set.
 * Continuous objectives: best of projected exact-gradient ascent restarts
 * (exact = 0) and members receives nothing. If capacity is too small,
 * returns BBG_ERR_BUFFER with *count set to the required size. */
BBG_API bbg_status bbg_experiment_opt(bbg_experiment* experiment, double* value, size_t* members,
                                      size_t capacity, size_t* count, int* exact);

BBG_API size_t bbg_experiment_dim(const bbg_experiment* experiment);

/* ---- plotting ---------------------------------------------------------- */

BBG_API bbg_status bbg_plot_trace(const char* trace_csv, const char* svg_path);

/* ---- constraint sets --------------------------------------------------- */

/* {0 <= x <= cap, block budgets}; blocks are consecutive runs of
 * block_sizes[k] coordinates. nblocks may be 0 for a box. */
BBG_API bbg_status bbg_constraint_block_budget(size_t dim, const size_t* block_sizes,
                                               const double* budgets, size_t nblocks, double cap,
                                               bbg_constraint** out);
BBG_API bbg_status bbg_constraint_partition_matroid(size_t dim, const size_t* block_sizes,
                                                    const int* limits, size_t nblocks,
                                                    bbg_constraint** out);
/* K' = [0, 1 - 2 delta]^d ∩ (K - delta 1) with D = [0, max cap]^d. */
BBG_API bbg_status bbg_constraint_transform(const bbg_constraint* constraint, double delta,
                                            bbg_constraint** out);
BBG_API void bbg_constraint_destroy(bbg_constraint* constraint);

BBG_API size_t bbg_constraint_dim(const bbg_constraint* constraint);
BBG_API bbg_status bbg_constraint_contains(const bbg_constraint* constraint, const double* x,
                                           double tol, int* result);
BBG_API bbg_status bbg_constraint_lmo(const bbg_constraint* constraint, const double* g, double* out);
BBG_API bbg_status bbg_constraint_project(const bbg_constraint* constraint, const double* y,
                                          double* out);

/* ---- schedules --------------------------------------------------------- */

BBG_API bbg_status bbg_rho_schedule(uint64_t t, double* out);

#ifdef __cplusplus
}
#endif

#endif /* BBG_BBG_H */
