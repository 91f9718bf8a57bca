#ifndef PW_C_H
#define PW_C_H

/* C interface to the bandlimited-signal toolkit. Signals are opaque
 * handles; every function returns a pw_status (or a process-style exit
 * code where noted) and leaves a message for pw_last_error() on failure.
 * The last-error buffer is thread-local. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pw_signal pw_signal;

typedef enum pw_status {
  PW_OK = 0,
  PW_ERR_DOMAIN = 1,
  PW_ERR_INDEX = 2,
  PW_ERR_DIMENSION = 3,
  PW_ERR_SINGULAR = 4,
  PW_ERR_NOT_INJECTIVE = 5,
  PW_ERR_UNSUPPORTED_REP = 6,
  PW_ERR_RESOURCE = 7,
  PW_ERR_UNDEFINED_BANDWIDTH = 8,
  PW_ERR_DEGENERATE_LINE = 9,
  PW_ERR_RESOLUTION = 10,
  PW_ERR_WRONG_REGIME = 11,
  PW_ERR_PRECONDITION = 12,
  PW_ERR_IO = 13,
  PW_ERR_PARSE = 14,
  PW_ERR_INVALID_ARGUMENT = 100,
  PW_ERR_INTERNAL = 101
} pw_status;

const char* pw_last_error(void);
const char* pw_version(void);

/* kind is 'K', 'P' or 'Q'; axis is 1-based (ignored for 'K'). */
pw_status pw_signal_catalog(int dim, char kind, int axis, pw_signal** out);
pw_status pw_signal_load(const char* json_path, pw_signal** out);
pw_status pw_signal_save(const pw_signal* sig, const char* json_path);
void pw_signal_free(pw_signal* sig);

int pw_signal_dim(const pw_signal* sig);
double pw_signal_band_radius(const pw_signal* sig);

/* t points at dim doubles. */
pw_status pw_signal_eval(const pw_signal* sig, const double* t, double* re,
                         double* im);

/* Entire extension of x -> f(anchor + x direction) at z = z_re + i z_im. */
pw_status pw_signal_eval_line(const pw_signal* sig, const double* anchor,
                              const double* direction, double z_re,
                              double z_im, double* re, double* im);

/* a_rowmajor is rows x cols; offset points at rows doubles (NULL = 0).
 * Fails with PW_ERR_NOT_INJECTIVE when the matrix has a kernel. */
pw_status pw_signal_compose_affine(const pw_signal* sig,
                                   const double* a_rowmajor, int rows,
                                   int cols, const double* offset,
                                   pw_signal** out);

/* Writes up to cols orthonormal kernel vectors (each of length cols,
 * row-major) into basis_out and their number into count. */
pw_status pw_kernel_basis(const double* a_rowmajor, int rows, int cols,
                          double* basis_out, int* count);

typedef enum pw_identity {
  PW_IDENTITY_MODULATION = 1, /* Q_j(t) = e^{i t_j} K(t) */
  PW_IDENTITY_PRODUCT = 2     /* 2i P_j(t) Q_j(t) t_j = Q_j(t)^2 - K(t)^2 */
} pw_identity;

/* t points at dim doubles. */
pw_status pw_identity_residual(const double* t, int dim, int axis,
                               pw_identity which, double* residual);

pw_status pw_describe_catalog(int dim, char kind, int axis, char* buffer,
                              size_t buffer_len);

/* Runs an experiment config file. Returns the process exit status:
 * 0 pass, 1 usage/operational error, 2 mathematical verification failed. */
int pw_run_experiment(const char* config_path, const char* out_dir,
                      int has_seed, uint64_t seed, int has_tol, double tol,
                      int emit_plots);

#ifdef __cplusplus
}
#endif

#endif /* PW_C_H */
