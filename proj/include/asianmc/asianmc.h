/*
 * C interface of the asianmc shared library.
 *
 * Every function returns an asianmc_status. On failure the message of the most
 * recent error on the calling thread is available from asianmc_last_error().
 * Handles (asianmc_batch, asianmc_greek_report, asianmc_sweep,
 * asianmc_sweep_result) are owned by the caller and released with the
 * matching *_destroy function; destroying NULL is a no-op.
 *
 * Doubles reported as NaN in output structs mean "not applicable".
 */
#ifndef ASIANMC_H
#define ASIANMC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ASIANMC_BUILDING)
#    define ASIANMC_API __declspec(dllexport)
#  else
#    define ASIANMC_API __declspec(dllimport)
#  endif
#else
#  define ASIANMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    ASIANMC_OK = 0,
    ASIANMC_ERR_DOMAIN = 1,      /* argument outside the operation's domain */
    ASIANMC_ERR_NUMERIC = 2,     /* non-finite value produced during estimation */
    ASIANMC_ERR_NULL = 3,        /* required pointer argument was NULL */
    ASIANMC_ERR_BUFFER = 4,      /* output buffer too small; see `needed` */
    ASIANMC_ERR_INTERNAL = 5
} asianmc_status;

typedef enum {
    ASIANMC_NAIVE = 0,
    ASIANMC_IDENTITY = 1,
    ASIANMC_FD = 2
} asianmc_method;

#define ASIANMC_FLAG_CLOSED_FORM 1u
#define ASIANMC_FLAG_TAIL_UNDERFLOW 2u

typedef struct {
    uint64_t n_paths;
    uint64_t n_steps;
    uint64_t master_seed;
    int antithetic;
    unsigned threads; /* 0 = hardware concurrency; never changes results */
} asianmc_mc_config;

typedef struct {
    double mean;
    double std_error;
    uint64_t n_paths;
    int method; /* asianmc_method */
    double wall_time_ms;
    unsigned flags; /* ASIANMC_FLAG_* */
} asianmc_estimate;

typedef struct {
    double s0;
    double strike;
    double sigma;
    double rate;
    double expiry;
} asianmc_option;

ASIANMC_API const char* asianmc_version(void);
ASIANMC_API const char* asianmc_last_error(void);
ASIANMC_API const char* asianmc_method_name(int method);
ASIANMC_API asianmc_status asianmc_parse_method(const char* name, int* method);

/* 100000 paths, 1024 steps, seed 42, no antithetic, hardware threads. */
ASIANMC_API void asianmc_default_config(asianmc_mc_config* cfg);
/* max(min_steps, ceil(steps_per_unit * t)) */
ASIANMC_API uint64_t asianmc_default_steps(double t, uint64_t steps_per_unit, uint64_t min_steps);

/* ---- paths ------------------------------------------------------------ */

typedef struct asianmc_batch asianmc_batch;

ASIANMC_API asianmc_status asianmc_sample_path(double t, double nu, const asianmc_mc_config* cfg,
                                               uint64_t path_index, double* terminal,
                                               double* integral);
ASIANMC_API asianmc_status asianmc_batch_create(double t, double nu, const asianmc_mc_config* cfg,
                                                asianmc_batch** out);
ASIANMC_API void asianmc_batch_destroy(asianmc_batch* batch);
ASIANMC_API uint64_t asianmc_batch_size(const asianmc_batch* batch);
ASIANMC_API asianmc_status asianmc_batch_get(const asianmc_batch* batch, uint64_t i,
                                             double* terminal, double* integral);

/* ---- law of the time integral ------------------------------------------ */

/* f(w, z, user) evaluated at the transformed terminal value and integral. */
typedef double (*asianmc_path_fn)(double w, double z, void* user);

ASIANMC_API asianmc_status asianmc_transform_expectation(asianmc_path_fn f, void* user, double a,
                                                         double t, const asianmc_mc_config* cfg,
                                                         asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_cdf(double a, double t, double nu, const asianmc_mc_config* cfg,
                                       int method, asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_cdf_drift_change(double a, double t, double nu,
                                                    const asianmc_mc_config* cfg,
                                                    asianmc_estimate* out);
/* bandwidth <= 0 selects the default 0.05 a. */
ASIANMC_API asianmc_status asianmc_density(double a, double t, const asianmc_mc_config* cfg,
                                           int method, double bandwidth, asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_joint_cdf(double b, double a, double t,
                                             const asianmc_mc_config* cfg, int method,
                                             asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_call_kernel(double a, double t, double nu,
                                               const asianmc_mc_config* cfg, int method,
                                               asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_call_kernel_d1(double a, double t, const asianmc_mc_config* cfg,
                                                  int method, asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_call_kernel_d2(double a, double t, const asianmc_mc_config* cfg,
                                                  int method, double bandwidth,
                                                  asianmc_estimate* out);

/* ---- option price and Greeks ------------------------------------------- */

ASIANMC_API asianmc_status asianmc_price(const asianmc_option* opt, const asianmc_mc_config* cfg,
                                         int method, asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_delta(const asianmc_option* opt, const asianmc_mc_config* cfg,
                                         int method, asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_gamma(const asianmc_option* opt, const asianmc_mc_config* cfg,
                                         int method, asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_theta(const asianmc_option* opt, const asianmc_mc_config* cfg,
                                         int method, asianmc_estimate* out);
ASIANMC_API asianmc_status asianmc_vega(const asianmc_option* opt, const asianmc_mc_config* cfg,
                                        int method, asianmc_estimate* out);

typedef struct asianmc_greek_report asianmc_greek_report;

ASIANMC_API asianmc_status asianmc_greeks_compute(const asianmc_option* opt,
                                                  const asianmc_mc_config* cfg, int method,
                                                  int fd_check, asianmc_greek_report** out);
ASIANMC_API void asianmc_greeks_destroy(asianmc_greek_report* report);
/* name: "price", "delta", "gamma", "theta" or "vega". */
ASIANMC_API asianmc_status asianmc_greeks_get(const asianmc_greek_report* report, const char* name,
                                              asianmc_estimate* out);
/* Finite-difference cross-check; ASIANMC_ERR_DOMAIN when not computed. */
ASIANMC_API asianmc_status asianmc_greeks_get_fd(const asianmc_greek_report* report,
                                                 const char* name, asianmc_estimate* out);
/* Vega with undiscounted strike term; ASIANMC_ERR_DOMAIN when rate == 0. */
ASIANMC_API asianmc_status asianmc_greeks_get_vega_undiscounted(const asianmc_greek_report* report,
                                                                asianmc_estimate* out);

/* ---- sweeps ------------------------------------------------------------ */

typedef struct asianmc_sweep asianmc_sweep;
typedef struct asianmc_sweep_result asianmc_sweep_result;

typedef struct {
    double a, t, nu, b;
    double s0, strike, sigma, rate, expiry;
    uint64_t n_paths;
    int method;
    uint64_t seed;
    uint64_t n_steps;
    int has_estimate;
    asianmc_estimate estimate;
    const char* error; /* "" when has_estimate; valid while the result lives */
} asianmc_sweep_row;

typedef struct {
    double a, t, nu, b;
    double s0, strike, sigma, rate, expiry;
    uint64_t n_paths;
    double naive_mean, naive_stderr;       /* NaN when naive was not run */
    double identity_mean, identity_stderr; /* NaN when identity was not run */
    double stderr_ratio;                   /* naive / identity, NaN unless both ran */
    uint64_t identity_wins;
    uint64_t seeds;
} asianmc_point_summary;

/* quantity: cdf, density, joint_cdf, call_kernel, call_kernel_d1,
 * call_kernel_d2, price, delta, gamma, theta, vega. */
ASIANMC_API asianmc_status asianmc_sweep_create(const char* quantity, asianmc_sweep** out);
ASIANMC_API void asianmc_sweep_destroy(asianmc_sweep* sweep);
/* field: a, t, nu, b, s0, strike, sigma, rate, expiry. */
ASIANMC_API asianmc_status asianmc_sweep_set_grid(asianmc_sweep* sweep, const char* field,
                                                  const double* values, size_t n);
ASIANMC_API asianmc_status asianmc_sweep_set_paths(asianmc_sweep* sweep, const uint64_t* n_paths,
                                                   size_t n);
ASIANMC_API asianmc_status asianmc_sweep_set_seeds(asianmc_sweep* sweep, const uint64_t* seeds,
                                                   size_t n);
ASIANMC_API asianmc_status asianmc_sweep_set_methods(asianmc_sweep* sweep, const int* methods,
                                                     size_t n);
/* bandwidth <= 0 keeps the grid-derived default. */
ASIANMC_API asianmc_status asianmc_sweep_set_options(asianmc_sweep* sweep, uint64_t steps_per_unit,
                                                     int antithetic, unsigned threads,
                                                     double bandwidth);
ASIANMC_API asianmc_status asianmc_sweep_run(const asianmc_sweep* sweep, asianmc_sweep_result** out);

ASIANMC_API void asianmc_sweep_result_destroy(asianmc_sweep_result* result);
ASIANMC_API size_t asianmc_sweep_result_rows(const asianmc_sweep_result* result);
ASIANMC_API asianmc_status asianmc_sweep_result_row(const asianmc_sweep_result* result, size_t i,
                                                    asianmc_sweep_row* out);
ASIANMC_API size_t asianmc_sweep_result_summaries(const asianmc_sweep_result* result);
ASIANMC_API asianmc_status asianmc_sweep_result_summary(const asianmc_sweep_result* result,
                                                        size_t i, asianmc_point_summary* out);
/* CSV line (no newline) of row i. */
ASIANMC_API asianmc_status asianmc_sweep_result_csv_row(const asianmc_sweep_result* result,
                                                        size_t i, int include_timing, char* buf,
                                                        size_t cap, size_t* needed);

/* ---- quadrature bias --------------------------------------------------- */

typedef struct {
    uint64_t n_steps;
    double mean_integral;
    double std_error;
    double closed_form;
    double gap;
} asianmc_bias_row;

/* out_rows must hold n entries; cfg->n_steps is ignored. */
ASIANMC_API asianmc_status asianmc_quadrature_bias(double t, double nu, const uint64_t* steps,
                                                   size_t n, const asianmc_mc_config* cfg,
                                                   asianmc_bias_row* out_rows);

/* ---- CSV rows ------------------------------------------------------------ */

/* Absent doubles are NaN, absent integers are -1. */
typedef struct {
    const char* quantity;
    const char* method;
    double a, t, nu, s0, strike, sigma, rate, expiry;
    int64_t n_paths, n_steps;
    int has_seed;
    uint64_t seed;
    double estimate, std_error, wall_ms;
    const char* flags; /* extra flags joined after the estimate flags; may be NULL */
    unsigned estimate_flags;
} asianmc_record;

ASIANMC_API const char* asianmc_csv_header(void);
/* Sets every field to absent. */
ASIANMC_API void asianmc_record_init(asianmc_record* r);
ASIANMC_API void asianmc_record_attach(asianmc_record* r, const asianmc_estimate* e);
ASIANMC_API asianmc_status asianmc_format_record(const asianmc_record* r, int include_timing,
                                                 char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* ASIANMC_H */
