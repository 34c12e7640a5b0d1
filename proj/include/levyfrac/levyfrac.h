// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#ifndef LEVYFRAC_LEVYFRAC_H_
#define LEVYFRAC_LEVYFRAC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LEVYFRAC_BUILDING)
#define LF_API __attribute__((visibility("default")))
#else
#define LF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lf_status {
  LF_OK = 0,
  LF_ERR_INVALID_ARGUMENT = 1,
  LF_ERR_DOMAIN = 2,
  LF_ERR_NUMERIC = 3,
  LF_ERR_CONVERGENCE = 4,
  LF_ERR_IO = 5,
  LF_ERR_INTERNAL = 6
} lf_status;

/* Message of the last failed call on this thread; empty after a successful call. */
LF_API const char* lf_last_error(void);
LF_API const char* lf_version(void);
LF_API const char* lf_status_name(lf_status status);

/* ---- operators ---------------------------------------------------------------------------- */

typedef enum lf_operator_kind { LF_FRACTIONAL = 0, LF_TEMPERED = 1 } lf_operator_kind;

typedef struct lf_operator_spec {
  lf_operator_kind kind;
  double beta;
  double lambda; /* ignored for LF_FRACTIONAL */
} lf_operator_spec;

LF_API lf_status lf_symbol(lf_operator_spec spec, double k, double* out);
LF_API lf_status lf_coefficient(lf_operator_spec spec, double* out);

/* Exterior data and forcing terms from the built-in registry. */
typedef struct lf_data lf_data;

LF_API size_t lf_data_name_count(void);
LF_API const char* lf_data_name(size_t i);
LF_API lf_status lf_data_create(const char* name, const char* const* keys, const double* values, size_t count,
                                lf_data** out);
/* Sum of several data; the parts may be destroyed afterwards. */
LF_API lf_status lf_data_sum(const lf_data* const* parts, size_t count, lf_data** out);
LF_API lf_status lf_data_eval(const lf_data* data, double x, double y, double t, double* out);
LF_API void lf_data_destroy(lf_data* data);

typedef struct lf_operator lf_operator;

LF_API lf_status lf_operator_assemble(lf_operator_spec spec, double a, double b, size_t n, lf_operator** out);
LF_API lf_status lf_operator_assemble_hv(lf_operator_spec sx, lf_operator_spec sy, double ax, double bx, size_t nx,
                                         double ay, double by, size_t ny, lf_operator** out);
LF_API void lf_operator_destroy(lf_operator* op);
LF_API size_t lf_operator_size(const lf_operator* op);
/* Node coordinates; y is written only when non-null. */
LF_API lf_status lf_operator_nodes(const lf_operator* op, double* x, double* y);
LF_API lf_status lf_operator_apply(const lf_operator* op, const double* p, const lf_data* g, double t, double* out);
LF_API lf_status lf_operator_write_csv(const lf_operator* op, const char* path);
LF_API size_t lf_operator_warning_count(const lf_operator* op);
LF_API const char* lf_operator_warning(const lf_operator* op, size_t i);

/* ---- solvers ------------------------------------------------------------------------------ */

typedef struct lf_solver_options {
  double tolerance;      /* relative CG residual */
  size_t max_iterations; /* 0: 10 * unknowns */
  double tau_max;
} lf_solver_options;

LF_API lf_solver_options lf_solver_options_default(void);

typedef struct lf_report lf_report;

typedef enum lf_report_field {
  LF_REPORT_SOLUTION = 0,
  LF_REPORT_NODES = 1,
  LF_REPORT_TIMES = 2,
  LF_REPORT_MASS = 3,
  LF_REPORT_ENERGY = 4,
  LF_REPORT_DISSIPATION = 5,
  LF_REPORT_FLUX_POSITIONS = 6, /* Neumann runs only */
  LF_REPORT_FLUX = 7,
  LF_REPORT_EXTENDED_SOLUTION = 8,
  LF_REPORT_EXTENDED_NODES = 9
} lf_report_field;

typedef struct lf_report_info {
  double residual_norm;
  size_t iterations;
  int converged;
  double source_error_estimate;
  int reflecting;
  double flux_at_a;
  double flux_at_b;
} lf_report_info;

/* f and p0 may be null (zero). */
LF_API lf_status lf_solve_steady_dirichlet(const lf_operator* op, const lf_data* g, const lf_data* f,
                                           const lf_solver_options* opt, lf_report** out);
LF_API lf_status lf_solve_transient_dirichlet(const lf_operator* op, const lf_data* g, const lf_data* f,
                                              const lf_data* p0, double t_end, double tau,
                                              const lf_solver_options* opt, lf_report** out);
/* collar_width 0: b - a. g_ext null: reflecting. */
LF_API lf_status lf_solve_transient_neumann(lf_operator_spec spec, double a, double b, size_t n, const lf_data* g_ext,
                                            const lf_data* f, const lf_data* p0, double collar_width, double t_end,
                                            double tau, const lf_solver_options* opt, lf_report** out);
/* Escape probability into the union of the half-open cells [lo_i, hi_i). */
LF_API lf_status lf_escape_probability(lf_operator_spec spec, double a, double b, size_t n, const double* lo,
                                       const double* hi, size_t cells, const lf_solver_options* opt, lf_report** out);

LF_API void lf_report_destroy(lf_report* report);
LF_API lf_status lf_report_info_get(const lf_report* report, lf_report_info* info);
/* Borrowed view, valid until the report is destroyed. */
LF_API lf_status lf_report_vector(const lf_report* report, lf_report_field field, const double** data, size_t* len);
LF_API size_t lf_report_warning_count(const lf_report* report);
LF_API const char* lf_report_warning(const lf_report* report, size_t i);

/* ---- stochastic --------------------------------------------------------------------------- */

typedef enum lf_jump_kind { LF_JUMP_POWER_LAW = 0, LF_JUMP_TEMPERED = 1, LF_JUMP_GAUSSIAN = 2 } lf_jump_kind;

typedef struct lf_jump_law {
  lf_jump_kind kind;
  double beta;
  double lambda;
  double r_min;
  double sigma; /* Gaussian only */
} lf_jump_law;

/* Normalization constant C and the rejection acceptance rate. */
LF_API lf_status lf_jump_law_info(lf_jump_law law, double* c, double* acceptance);
LF_API lf_status lf_moment(lf_jump_law law, int order, int full_support, double* out);
LF_API lf_status lf_berry_esseen_bound(double beta, double lambda, double c, double m, double* out);
LF_API lf_status lf_flight_cf(lf_jump_law law, double zeta, double t, double k, double* out);
LF_API lf_status lf_empirical_cf(const double* x, size_t n, double k, double* re, double* im);

typedef struct lf_escape_config {
  double a, b, x0;
  const double* cell_lo;
  const double* cell_hi;
  size_t cells;
  lf_jump_law law;
  double zeta;
  size_t walkers;
  uint64_t seed;
  unsigned threads;
  size_t jump_cap; /* 0: 10^7 */
} lf_escape_config;

typedef struct lf_escape_summary {
  size_t walkers, other, capped, landed_on_a, landed_on_b;
  double mean_exit_time, mean_jumps;
  int flagged;
} lf_escape_summary;

/* counts, estimate and std_err hold `cells` entries each; any may be null. */
LF_API lf_status lf_mc_escape(const lf_escape_config* cfg, size_t* counts, double* estimate, double* std_err,
                              lf_escape_summary* summary);

typedef struct lf_flights lf_flights;

LF_API lf_status lf_simulate_flights(lf_jump_law law, double zeta, double t_end, size_t walkers, uint64_t seed,
                                     unsigned threads, size_t dump, lf_flights** out);
LF_API void lf_flights_destroy(lf_flights* f);
LF_API lf_status lf_flights_endpoints(const lf_flights* f, const double** x, size_t* len);
LF_API lf_status lf_flights_jump_count(const lf_flights* f, size_t walker, size_t* out);
LF_API size_t lf_flights_dump_count(const lf_flights* f);
LF_API lf_status lf_flights_dump(const lf_flights* f, size_t i, const double** t, const double** x, size_t* len);

typedef struct lf_crossover_config {
  double beta;
  const double* lambdas; /* null: 0.05, 0.1, 0.2, 0.4 */
  size_t lambda_count;
  double threshold;
  size_t samples;
  double r_min;
  size_t m_cap;
  double checkpoint_ratio;
  uint64_t seed;
  unsigned threads;
  int gaussian_control;
} lf_crossover_config;

LF_API lf_crossover_config lf_crossover_config_default(void);

typedef struct lf_crossover lf_crossover;

LF_API lf_status lf_crossover_run(const lf_crossover_config* cfg, lf_crossover** out);
LF_API void lf_crossover_destroy(lf_crossover* c);
LF_API size_t lf_crossover_count(const lf_crossover* c);
/* m_star is NaN when unresolved. */
LF_API lf_status lf_crossover_entry(const lf_crossover* c, size_t i, double* lambda, double* m_star, int* resolved);
LF_API double lf_crossover_slope(const lf_crossover* c);
LF_API lf_status lf_crossover_curve(const lf_crossover* c, size_t i, const double** m, const double** ks,
                                    size_t* len);

/* ---- spectral ----------------------------------------------------------------------------- */

/* Output arrays hold nk entries each; any may be null. */
LF_API lf_status lf_verify_tempered_identity(int n, double beta, double lambda, const double* k, size_t nk,
                                             double* quadrature, double* closed_form, double* rel_error,
                                             double* max_rel_error);
/* values: m samples on a periodic grid of the given length, m a power of two. */
LF_API lf_status lf_energy_equivalence(const double* values, size_t m, double length, double* half_energy,
                                       double* grad_energy);
LF_API lf_status lf_symbol_apply(lf_operator_spec spec, const double* values, size_t m, double length, double* out);

#ifdef __cplusplus
}
#endif

#endif  // LEVYFRAC_LEVYFRAC_H_
