/* C interface to the weighted-norm inequality laboratory.
 *
 * Every entry returns a wnil_status; WNIL_OK means the outputs were written.
 * On failure wnil_last_error() describes the problem for the calling thread.
 * Objects returned through out-parameters are owned by the caller and are
 * released with the matching *_free function; strings returned as char** are
 * released with wnil_string_free.
 */
#ifndef WNIL_H
#define WNIL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wnil_status {
  WNIL_OK = 0,
  WNIL_ERR_INVALID_ARGUMENT = 1,
  WNIL_ERR_EMPTY_BALL = 2,
  WNIL_ERR_DEGENERATE_BALL = 3,
  WNIL_ERR_NON_FINITE_WEIGHT = 4,
  WNIL_ERR_BAD_POLICY = 5,
  WNIL_ERR_ZERO_AVERAGE = 6,
  WNIL_ERR_ZERO_MASS = 7,
  WNIL_ERR_NO_CONVERGENCE = 8,
  WNIL_ERR_GRID_MISMATCH = 9,
  WNIL_ERR_UNCOVERED_POINT = 10,
  WNIL_ERR_HYPOTHESIS_FAILED = 11,
  WNIL_ERR_NOT_PROPER = 12,
  WNIL_ERR_EMPTY_SET = 13,
  WNIL_ERR_EMPTY_SWEEP = 14,
  WNIL_ERR_CONFIG_INVALID = 15,
  WNIL_ERR_IO_FAILURE = 16,
  WNIL_ERR_PARSE_ERROR = 17,
  WNIL_ERR_UNKNOWN = 100
} wnil_status;

/* Message for the most recent failure on this thread; empty string if none. */
const char* wnil_last_error(void);
void wnil_string_free(char* text);

typedef struct wnil_grid wnil_grid;
typedef struct wnil_weight wnil_weight;
typedef struct wnil_young wnil_young;
typedef struct wnil_balls wnil_balls;

/* ---- grids: scalar samples on a uniform cell-centered box grid ---- */

wnil_status wnil_grid_create(int dim, const double* lo, const double* hi, double h,
                             const double* values, size_t count, wnil_grid** out);
wnil_status wnil_grid_load_csv(const char* path, wnil_grid** out);
wnil_status wnil_grid_save_csv(const wnil_grid* grid, const char* path);
wnil_status wnil_grid_load_json(const char* path, wnil_grid** out);
wnil_status wnil_grid_save_json(const wnil_grid* grid, const char* path);
wnil_status wnil_grid_info(const wnil_grid* grid, int* dim, double* lo, double* hi, double* h,
                           size_t* count);
/* Copies all cell values into buffer (room for wnil_grid_info count). */
wnil_status wnil_grid_values(const wnil_grid* grid, double* buffer, size_t count);
void wnil_grid_free(wnil_grid* grid);

/* ---- weights and Young functions, both described by JSON ---- */

wnil_status wnil_weight_parse(const char* json, wnil_weight** out);
wnil_status wnil_weight_eval(const wnil_weight* weight, const double* x, int dim, double clamp_h,
                             double* out);
void wnil_weight_free(wnil_weight* weight);

wnil_status wnil_young_parse(const char* json, wnil_young** out);
wnil_status wnil_young_eval(const wnil_young* phi, double t, double* out);
wnil_status wnil_young_doubling(const wnil_young* phi, double* out);
/* Tail integral dichotomy for the bump at exponent p: diverged is 1 when the
 * per-decade increments stay level instead of dying out. */
wnil_status wnil_young_bump_integral(const wnil_young* phi, double p, double* value,
                                     int* diverged);
void wnil_young_free(wnil_young* phi);

/* ---- ball families ---- */

wnil_status wnil_balls_create(int dim, const double* lo, const double* hi, double h,
                              int center_stride, int center_offset, int radii_per_octave,
                              double max_radius_factor, wnil_balls** out);
wnil_status wnil_balls_count(const wnil_balls* balls, size_t* out);
void wnil_balls_free(wnil_balls* balls);

/* ---- weight class constants over a family ---- */
/* is_infinite is set to 1 when the discrete constant blew up (value then
 * carries +inf); the status stays WNIL_OK because the question was answered. */

wnil_status wnil_ap_constant(const wnil_weight* w, double q, const wnil_balls* balls,
                             double* value, int* is_infinite);
wnil_status wnil_rh_constant(const wnil_weight* w, double s, const wnil_balls* balls,
                             double* value, int* is_infinite);
wnil_status wnil_two_weight_constant(const wnil_weight* w, const wnil_weight* v, double p,
                                     const wnil_balls* balls, double* value, int* is_infinite);
wnil_status wnil_sawyer_constant(const wnil_weight* w, const wnil_weight* v, double p,
                                 const wnil_balls* balls, double* value, int* is_infinite);

/* ---- norms ---- */

wnil_status wnil_lebesgue_norm(const wnil_grid* f, double p, double* out);
wnil_status wnil_lorentz_norm(const wnil_grid* f, double q, double t, double* out);
wnil_status wnil_lorentz_morrey_norm(const wnil_grid* f, double q, double t, double theta,
                                     const wnil_balls* balls, double* out);
wnil_status wnil_luxembourg_norm(const wnil_grid* f, const wnil_young* phi, double* out);
/* exponents: grid of the same layout holding p(x) per cell */
wnil_status wnil_variable_norm(const wnil_grid* f, const wnil_grid* exponents, double* out);

/* ---- operators ---- */

wnil_status wnil_maximal(const wnil_grid* f, const wnil_balls* balls, wnil_grid** out);
wnil_status wnil_fractional_maximal(const wnil_grid* f, double gamma, const wnil_balls* balls,
                                    wnil_grid** out);
/* kernel_json: {"kind":"hilbert"} or {"kind":"riesz","component":1|2},
 * optional "constant" and "epsilon" */
wnil_status wnil_cz_apply(const char* kernel_json, const wnil_grid* f, wnil_grid** out);
wnil_status wnil_fractional_integral(const wnil_grid* f, double alpha, wnil_grid** out);
/* Square function outputs live on a zero-padded copy of f's box. */
wnil_status wnil_lp_g(const wnil_grid* f, wnil_grid** out);
wnil_status wnil_lusin_area(const wnil_grid* f, double aperture, wnil_grid** out);

/* sup over levels of level * |{|g| > level}| / denom */
wnil_status wnil_weak_type_ratio(const wnil_grid* g, double denom, double* out);

/* ---- covers ---- */

/* Decomposes the nonzero cells of mask, writes the balls to csv_path when it
 * is non-NULL, and reports the audit: proper is 1 when the cover passes all
 * three containment checks. */
wnil_status wnil_whitney_cover(const wnil_grid* mask, const char* csv_path, size_t* ball_count,
                               int* max_overlap, int* proper);

/* ---- level comparison certificate ---- */

wnil_status wnil_good_lambda(const wnil_grid* tf, const wnil_grid* f, const wnil_weight* omega,
                             const wnil_balls* balls, double p1, double p2, double gamma,
                             double a, double s, double* minimal_beta, double* kappa, int* found,
                             int* upward_closed);

/* ---- coarse experiment entries ---- */

/* Runs one configured experiment, writing report.csv and report.json under
 * the config's out_dir. exit_code: 0 clean, 2 finished with flagged rows. */
wnil_status wnil_run_config_json(const char* config_json, int* exit_code);
wnil_status wnil_run_config_file(const char* path, int* exit_code);

/* Writes corpus_<k>.csv files under out_dir and returns a JSON manifest. */
wnil_status wnil_corpus_generate(const char* kind, int count, uint64_t seed, int dim,
                                 const double* lo, const double* hi, double h,
                                 const char* out_dir, char** manifest_json);

/* Digest of a report.csv produced by a run. */
wnil_status wnil_report_summarize(const char* csv_path, char** summary_text);

#ifdef __cplusplus
}
#endif

#endif /* WNIL_H */
