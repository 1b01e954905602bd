/* C interface to the stars library.
 *
 * All objects are opaque handles created by stars_*_create and released by
 * the matching stars_*_destroy (destroy accepts NULL). Functions return a
 * stars_status; on failure stars_last_error() gives a message that stays
 * valid until the next failing call on the same thread.
 */
#ifndef STARS_C_H
#define STARS_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(STARS_BUILDING_LIBRARY)
#    define STARS_API __declspec(dllexport)
#  else
#    define STARS_API __declspec(dllimport)
#  endif
#else
#  define STARS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stars_status {
  STARS_OK = 0,
  STARS_E_INVALID_ARGUMENT = 1,
  STARS_E_CONFIG_REJECTED = 2,
  STARS_E_SIGNAL_DOMINATED = 3,
  STARS_E_ESTIMATION_FAILED = 4,
  STARS_E_TRIAL_ABORTED = 5,
  STARS_E_IO = 6,
  STARS_E_INTERNAL = 7
} stars_status;

typedef enum stars_noise_kind {
  STARS_NOISE_ADDITIVE = 0,
  STARS_NOISE_MULTIPLICATIVE = 1
} stars_noise_kind;

typedef enum stars_solver_kind {
  STARS_SOLVER_STARS = 0,
  STARS_SOLVER_RG = 1,
  STARS_SOLVER_SS = 2,
  STARS_SOLVER_RSGF = 3,
  STARS_SOLVER_RP = 4,
  STARS_SOLVER_ES = 5
} stars_solver_kind;

typedef enum stars_figure {
  STARS_FIGURE_1 = 1,
  STARS_FIGURE_2 = 2,
  STARS_FIGURE_3 = 3
} stars_figure;

STARS_API const char* stars_last_error(void);
STARS_API const char* stars_status_name(stars_status status);

/* Name lookups; return STARS_E_INVALID_ARGUMENT for unknown names. */
STARS_API stars_status stars_parse_noise_kind(const char* text, stars_noise_kind* out);
STARS_API stars_status stars_parse_solver_kind(const char* text, stars_solver_kind* out);
STARS_API const char* stars_solver_name(stars_solver_kind kind);

/* Problems ---------------------------------------------------------------- */

typedef struct stars_problem stars_problem;

typedef struct stars_problem_info {
  int n;
  double f_star;
  double L0;
  double L1;
  double R2;
} stars_problem_info;

/* name: "f1" or "sphere". */
STARS_API stars_status stars_problem_create(const char* name, int n, stars_problem** out);
STARS_API void stars_problem_destroy(stars_problem* problem);
STARS_API stars_status stars_problem_info_get(const stars_problem* problem, stars_problem_info* out);
/* True (noise-free) value. */
STARS_API stars_status stars_problem_eval(const stars_problem* problem, const double* x, size_t n,
                                          double* out);

/* Copies the problem's starting point into out[0..n). */
STARS_API stars_status stars_problem_start(const stars_problem* problem, double* out, size_t n);

/* Noisy oracle ------------------------------------------------------------ */

typedef struct stars_oracle stars_oracle;

/* The oracle keeps a reference to `problem`, which must outlive it. */
STARS_API stars_status stars_oracle_create(const stars_problem* problem, stars_noise_kind kind,
                                           double sigma, uint64_t seed, uint64_t stream,
                                           stars_oracle** out);
STARS_API void stars_oracle_destroy(stars_oracle* oracle);
STARS_API stars_status stars_oracle_eval(stars_oracle* oracle, const double* x, size_t n,
                                         double* out);
STARS_API int64_t stars_oracle_eval_count(const stars_oracle* oracle);

/* Theory bounds ----------------------------------------------------------- */

typedef struct stars_bounds {
  stars_noise_kind kind;
  int n;
  double sigma;
  double mu_star; /* additive */
  double c4;      /* multiplicative */
  double h;
  double eps_pred;
  int64_t N;
  double b; /* multiplicative */
  double M; /* multiplicative */
} stars_bounds;

typedef enum stars_bounds_format {
  STARS_BOUNDS_TEXT = 0,
  STARS_BOUNDS_RECORD = 1
} stars_bounds_format;

/* Computes the bounds and renders them into buf (snprintf semantics: the
 * return value in *needed is the full length excluding the terminator). */
STARS_API stars_status stars_bounds_compute(const stars_problem* problem, stars_noise_kind kind,
                                            double sigma, stars_bounds* out);
STARS_API stars_status stars_bounds_render(const stars_problem* problem, stars_noise_kind kind,
                                           double sigma, stars_bounds_format format, char* buf,
                                           size_t cap, size_t* needed);

/* Single runs ------------------------------------------------------------- */

typedef struct stars_solver_options {
  stars_solver_kind solver;
  int64_t iteration_limit; /* < 0: unset */
  int64_t eval_budget;     /* < 0: unset */
  int record_every;
  double ss_epsilon;
  double es_sigma0; /* 0: derived from the problem */
  double rp_span;
  double mu_min;
} stars_solver_options;

typedef struct stars_record {
  int64_t k;
  int64_t nevals;
  double f_true;
  double acc;
} stars_record;

typedef struct stars_trajectory stars_trajectory;

STARS_API void stars_solver_options_init(stars_solver_options* options);
STARS_API stars_status stars_run(const stars_problem* problem, stars_noise_kind kind, double sigma,
                                 const stars_solver_options* options, uint64_t seed,
                                 uint64_t stream, stars_trajectory** out);
STARS_API void stars_trajectory_destroy(stars_trajectory* trajectory);
STARS_API size_t stars_trajectory_size(const stars_trajectory* trajectory);
STARS_API stars_status stars_trajectory_record(const stars_trajectory* trajectory, size_t index,
                                               stars_record* out);
STARS_API int stars_trajectory_aborted(const stars_trajectory* trajectory);
STARS_API int64_t stars_trajectory_evaluations(const stars_trajectory* trajectory);
STARS_API stars_status stars_trajectory_write_csv(const stars_trajectory* trajectory,
                                                  const char* path);

/* Experiments ------------------------------------------------------------- */

typedef struct stars_experiment_config {
  const char* problem;
  int n;
  stars_noise_kind noise;
  const double* sigmas;
  size_t sigma_count;
  const stars_solver_kind* solvers;
  size_t solver_count;
  int seeds;
  uint64_t seed0;
  int64_t eval_budget;     /* < 0: unset */
  int64_t iteration_limit; /* < 0: unset */
  int workers;
  const char* out_dir;
} stars_experiment_config;

typedef struct stars_experiment_summary {
  size_t cells;
  int aborted_trials;
} stars_experiment_summary;

/* Runs the experiment and writes CSVs and plot scripts under out_dir. */
STARS_API stars_status stars_experiment_run(const stars_experiment_config* config,
                                            stars_experiment_summary* summary);

typedef struct stars_figure_options {
  const char* out_dir;
  uint64_t seed0;
  int workers;
  int seeds;      /* 0: protocol default */
  int64_t budget; /* 0: protocol default */
} stars_figure_options;

STARS_API void stars_figure_options_init(stars_figure_options* options);
/* Runs a fixed figure protocol and writes its artifacts under out_dir/figN. */
STARS_API stars_status stars_figure_run(stars_figure figure, const stars_figure_options* options);

/* Estimators -------------------------------------------------------------- */

typedef struct stars_estimate {
  double value;
  int64_t sample_count;
  double dispersion;
} stars_estimate;

STARS_API stars_status stars_estimate_sigma(stars_oracle* oracle, stars_noise_kind kind,
                                            const double* x, size_t n, int m, stars_estimate* out);
STARS_API stars_status stars_estimate_L1(stars_oracle* oracle, const double* x0, size_t n,
                                         int samples, double fd_step, stars_estimate* out);
/* points: point_count * n values, row-major. */
STARS_API stars_status stars_estimate_grad_var(stars_oracle* oracle, const double* points,
                                               size_t point_count, size_t n, double mu, int m,
                                               uint64_t seed, stars_estimate* out);
STARS_API int64_t stars_saa_hessian_cost(int n, int samples);

#ifdef __cplusplus
}
#endif

#endif /* STARS_C_H */
