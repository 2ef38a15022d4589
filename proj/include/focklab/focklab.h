/* C interface to the focklab numerical core. All handles are opaque and
   owned by the caller; free them with the matching *_free function. */
#ifndef FOCKLAB_H
#define FOCKLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(FOCKLAB_BUILDING_LIBRARY)
#define FL_API __attribute__((visibility("default")))
#else
#define FL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fl_status {
  FL_OK = 0,
  FL_INVALID_ARGUMENT = 1,
  FL_VALIDATION = 2,
  FL_CAPABILITY = 3,
  FL_DEGREE_CAP = 4,
  FL_EVALUATION = 5,
  FL_WINDOW = 6,
  FL_CAPACITY = 7,
  FL_CONVENTION = 8,
  FL_UNCALIBRATED = 9,
  FL_NUMERICAL_CONSISTENCY = 10,
  FL_REFUSAL = 11,
  FL_IO = 12,
  FL_INTERNAL = 99
} fl_status;

typedef struct fl_config fl_config;
typedef struct fl_basis fl_basis;
typedef struct fl_symbol fl_symbol;

FL_API const char* fl_version(void);
/* Message of the last failing call on this thread; empty after success. */
FL_API const char* fl_last_error(void);
FL_API const char* fl_status_name(fl_status s);
FL_API fl_status fl_set_workers(int workers);

FL_API fl_status fl_config_new(fl_config** out);
FL_API fl_status fl_config_load(const char* path, fl_config** out);
FL_API fl_status fl_config_set(fl_config* cfg, const char* key, const char* value);
/* Writes the canonical key=value text; *needed receives the size including the terminator. */
FL_API fl_status fl_config_serialize(const fl_config* cfg, char* buf, size_t cap, size_t* needed);
FL_API fl_status fl_config_hash(const fl_config* cfg, char* buf, size_t cap);
FL_API void fl_config_free(fl_config* cfg);

/* Runs a subcommand; the output directory is written into dir_buf. */
FL_API fl_status fl_run(const char* subcommand, const fl_config* cfg, char* dir_buf, size_t cap);
FL_API fl_status fl_verify_manifest(const char* directory);
FL_API size_t fl_subcommand_count(void);
FL_API const char* fl_subcommand_name(size_t index);

/* Orthonormal monomial basis of degree D for the weight (alpha/2)|z|^2 + epsilon sin(Re z). */
FL_API fl_status fl_basis_new(double alpha, double epsilon, int degree, int margin, fl_basis** out);
FL_API fl_status fl_basis_kernel(const fl_basis* b, double zr, double zi, double wr, double wi, double* re, double* im);
FL_API void fl_basis_free(fl_basis* b);

/* Symbol families: holo-poly, conj-linear, conj-gaussian, bump, step, mixed, zero. */
FL_API fl_status fl_symbol_new(const char* family, double beta, double radius, fl_symbol** out);
FL_API fl_status fl_symbol_eval(const fl_symbol* s, double zr, double zi, double* re, double* im);
FL_API void fl_symbol_free(fl_symbol* s);

/* Normalized L^q distance from the symbol to degree-d polynomials on B(z, r). */
FL_API fl_status fl_ida_distance(const fl_symbol* s, double zr, double zi, double r, double q, int d, double* out);

/* Singular values of the truncated Hankel operator, non-increasing. *count receives D + 1. */
FL_API fl_status fl_hankel_spectrum(const fl_symbol* s, const fl_basis* b, double* values, size_t cap, size_t* count,
                                    double* certificate_shift);

#ifdef __cplusplus
}
#endif

#endif
