/* C interface to the anisotropic nonlocal-operator toolkit.
 *
 * Every function returns am_status; AM_OK means the outputs were written.
 * On failure am_last_error_message() returns a thread-local description of
 * the most recent error on the calling thread. Handles are created by the
 * am_*_create / factory calls and released by the matching am_*_free; strings
 * returned through char** out parameters are heap-allocated and must be
 * released with am_string_free.
 */
#ifndef ANISOMEAN_H
#define ANISOMEAN_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum am_status {
  AM_OK = 0,
  AM_ERR_NON_UNIT_DIRECTION = 1,
  AM_ERR_NEGATIVE_WEIGHT = 2,
  AM_ERR_DIMENSION_MISMATCH = 3,
  AM_ERR_NULL_MEASURE = 4,
  AM_ERR_QUADRATURE_UNDER_RESOLVED = 5,
  AM_ERR_UNSUPPORTED_DIMENSION = 6,
  AM_ERR_UNKNOWN_FUNCTION = 7,
  AM_ERR_BAD_PARAMETER = 8,
  AM_ERR_BAD_EXPONENT = 9,
  AM_ERR_OVERFLOW = 10,
  AM_ERR_NOT_C2_AT_POINT = 11,
  AM_ERR_NONFINITE_VALUE = 12,
  AM_ERR_DOMAIN = 13,
  AM_ERR_UNBOUNDED_SUPPORT = 14,
  AM_ERR_START_OUTSIDE_DOMAIN = 15,
  AM_ERR_DEGENERATE_RADIUS = 16,
  AM_ERR_TOLERANCE_EXCEEDED = 17,
  AM_ERR_PARSE = 18,
  AM_ERR_IO = 19,
  AM_ERR_INTERNAL = 100
} am_status;

/* Stable identifier for a status value, e.g. "NonUnitDirection". */
const char* am_status_name(am_status status);

/* Description of the most recent failure on this thread. Never NULL. */
const char* am_last_error_message(void);

/* Releases a string returned through a char** out parameter. NULL is ok. */
void am_string_free(char* s);

typedef struct am_measure am_measure;
typedef struct am_function am_function;
typedef struct am_domain am_domain;

/* ---- spectral measures ------------------------------------------------- */

/* Parses the measure JSON format; unknown fields are rejected. */
am_status am_measure_from_json(const char* text, am_measure** out);
am_status am_measure_from_file(const char* path, am_measure** out);
am_status am_measure_uniform(int n, am_measure** out);
/* dirs: count*n row-major unit directions. */
am_status am_measure_atomic(int n, long long count, const double* dirs,
                            const double* weights, am_measure** out);
am_status am_measure_to_json(const am_measure* m, char** out_json);
void am_measure_free(am_measure* m);

am_status am_measure_dim(const am_measure* m, int* out);
/* "atomic", "density-grid" or "uniform" (static string). */
am_status am_measure_kind(const am_measure* m, const char** out);
am_status am_measure_total_mass(const am_measure* m, double* out);
/* out: n*n row-major second-moment matrix. */
am_status am_measure_second_moment(const am_measure* m, double* out);
/* Infimum over unit directions of the 2s-th directional moment. */
am_status am_measure_ellipticity(const am_measure* m, double s, double* out);
/* Re-runs construction checks; s may be NULL to skip the ellipticity check.
 * out_json: {"pass", "total_mass", "ellipticity"?, "issues": [{code, detail}]} */
am_status am_measure_validate(const am_measure* m, const double* s, double lambda_min,
                              char** out_json);

/* ---- test functions ----------------------------------------------------- */

/* Catalog names: gaussian [width]; plane-wave-cos [k_1..k_n];
 * bump [radius]; cutoff-quadratic [radius, A row-major n*n];
 * indicator [radius] (no derivatives). */
am_status am_function_create(const char* name, int n, const double* params,
                             long long n_params, am_function** out);
am_status am_function_translate(const am_function* f, const double* shift, am_function** out);
am_status am_function_dilate(const am_function* f, double lambda, am_function** out);
am_status am_function_dim(const am_function* f, int* out);
am_status am_function_eval(const am_function* f, const double* x, double* out);
void am_function_free(am_function* f);

/* ---- quadrature controls ------------------------------------------------ */

typedef struct am_quad_spec {
  int radial_nodes;      /* 0 = default (64) */
  int sphere_resolution; /* 0 = default (64) */
  double rho0;           /* radial split point; 0 = default (1) */
  double tail_cap;       /* truncate the tail at this radius; 0 = none */
} am_quad_spec;

/* ---- the nonlocal operator ---------------------------------------------- */

/* L u(x); spec may be NULL for defaults. pieces and bound may be NULL. */
am_status am_eval_operator(const am_function* u, const am_measure* a, double s,
                           const double* x, const am_quad_spec* spec, double* value,
                           double* error_estimate, double* inner, double* tail,
                           double* truncation_bound);
/* Fourier symbol K(s) * integral |k.omega|^{2s} da. */
am_status am_symbol(const am_measure* a, double s, const double* k, double* out);
/* The radial constant K(s) alone; K(0.5) = pi. */
am_status am_symbol_constant(double s, double* out);

/* ---- the mean kernel ----------------------------------------------------- */

am_status am_mean_value(const am_function* u, const am_measure* a, double s, double r,
                        const double* x, const am_quad_spec* spec, double* value,
                        double* error_estimate);
/* count draws: rho[count], omega[count*n] row-major, sign[count] = +-1. */
am_status am_sample_jumps(const am_measure* a, double s, double r, long long count,
                          unsigned long long seed, double* rho, double* omega, int* sign);
am_status am_mc_mean_value(const am_function* u, const am_measure* a, double s, double r,
                           const double* x, long long count, unsigned long long seed,
                           double* value, double* std_error);

/* ---- asymptotics: expansion, local limits, seminorms --------------------- */

am_status am_expansion_residual(const am_function* u, const am_measure* a, double s,
                                const double* x, double r, const am_quad_spec* spec,
                                double* out);
/* out_json: {"radii", "residuals", "slope", "fit_rms", "vacuous"} */
am_status am_fit_expansion_order(const am_function* u, const am_measure* a, double s,
                                 const double* x, const double* radii, long long n_radii,
                                 const am_quad_spec* spec, char** out_json);
/* out_json: {"target", "rows": [{"s", "value", "abs_err", "rel_err"}],
 *            "errors_strictly_decreasing", "final_rel_err"} */
am_status am_limit_operator(const am_function* u, const am_measure* a, const double* x,
                            const double* s_ladder, long long n_s, const am_quad_spec* spec,
                            char** out_json);
am_status am_limit_mean(const am_function* u, const am_measure* a, const double* x, double r,
                        const double* s_ladder, long long n_s, const am_quad_spec* spec,
                        char** out_json);

am_status am_hs_seminorm(const am_function* u, const am_measure* a, double s,
                         const am_quad_spec* spec, double* squared, double* error_estimate,
                         double* truncation_bound);
am_status am_hs_seminorm_mc(const am_function* u, const am_measure* a, double s,
                            long long count, unsigned long long seed,
                            const am_quad_spec* spec, double* squared, double* std_error);
am_status am_h1_seminorm(const am_function* u, const am_measure* a, const am_quad_spec* spec,
                         double* squared);
am_status am_l2_norm_sq(const am_function* u, const am_quad_spec* spec, double* out);
am_status am_energy(const am_function* u, const am_measure* a, double s,
                    const am_quad_spec* spec, double* out);
/* out_json: {"h1_sq", "l2_sq", "rows": [{"s", "hs_sq", "scaled", "abs_err",
 *            "rel_err", "ineq_ratio"}], "errors_strictly_decreasing",
 *            "final_rel_err", "ratio_min", "ratio_max"} */
am_status am_bbm_check(const am_function* u, const am_measure* a, const double* s_ladder,
                       long long n_s, const am_quad_spec* spec, char** out_json);

/* ---- walk-on-spheres solver ---------------------------------------------- */

am_status am_domain_ball(int n, const double* center, double radius, am_domain** out);
am_status am_domain_box(int n, const double* lo, const double* hi, am_domain** out);
am_status am_domain_signed_distance(const am_domain* d, const double* x, double* out);
void am_domain_free(am_domain* d);

typedef struct am_walk_config {
  long long walks;         /* >= 1 */
  long long max_steps;     /* >= 1 */
  double theta;            /* step radius fraction, in (0,1] */
  double hmax;             /* step radius cap; <= 0 = uncapped */
  unsigned long long seed; /* walk i uses substream (seed, i) */
  int workers;             /* 0 = hardware concurrency */
} am_walk_config;

am_status am_wos_run(const am_function* g, const am_measure* a, const am_domain* omega,
                     double s, const double* x0, const am_walk_config* cfg, double* estimate,
                     double* std_error, double* mean_steps, double* truncated_fraction);
/* caps must be strictly decreasing; all runs share cfg->seed.
 * out_json: {"rows": [{"cap", "estimate", "std_error", "diff_prev"}]} */
am_status am_wos_bias_scan(const am_function* g, const am_measure* a, const am_domain* omega,
                           double s, const double* x0, const am_walk_config* cfg,
                           const double* caps, long long n_caps, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* ANISOMEAN_H */
