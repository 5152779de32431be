#ifndef DBAR_DBAR_H
#define DBAR_DBAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(DBAR_BUILDING_LIBRARY)
#define DBAR_API __attribute__((visibility("default")))
#else
#define DBAR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dbar_status {
  DBAR_OK = 0,
  DBAR_INVALID_ARGUMENT = 1,
  DBAR_UNSUPPORTED_KIND = 2,
  DBAR_INVALID_CENTER = 3,
  DBAR_NON_FINITE_INTEGRAND = 4,
  DBAR_DIVERGENT_EVALUATION = 5,
  DBAR_NOT_CONVERGED = 6,
  DBAR_INCONSISTENCY = 7,
  DBAR_OUT_OF_INTENDED_DOMAIN = 8,
  DBAR_STENCIL_OUT_OF_DOMAIN = 9,
  DBAR_INSUFFICIENT_SAMPLING = 10,
  DBAR_DEGENERATE_FIT = 11,
  DBAR_DIVERGENT_INTEGRAL = 12,
  DBAR_IO_ERROR = 13,
  DBAR_INTERNAL = 99
} dbar_status;

typedef enum dbar_op {
  DBAR_OP_T = 0,
  DBAR_OP_H_IDENTITY = 1,
  DBAR_OP_H_DIRECT = 2,
  DBAR_OP_2T = 3,
  DBAR_OP_PHI = 4,
  DBAR_OP_S = 5,
  DBAR_OP_NW = 6
} dbar_op;

typedef struct dbar_domain dbar_domain;
typedef struct dbar_field dbar_field;
typedef struct dbar_quad dbar_quad;

typedef struct dbar_result {
  double re;
  double im;
  double error_estimate;
  int refinements_used;
  int converged;
} dbar_result;

/* Message of the last failing call on this thread ("" if none). */
DBAR_API const char* dbar_last_error(void);
DBAR_API const char* dbar_status_name(dbar_status status);
DBAR_API const char* dbar_version(void);

/* "disk:r", "disk:cx,cy,r", "ellipse:a,b", "perturbed_disk:delta,mode[,radius]" */
DBAR_API dbar_status dbar_domain_parse(const char* spec, dbar_domain** out);
DBAR_API void dbar_domain_free(dbar_domain* domain);
DBAR_API dbar_status dbar_domain_contains(const dbar_domain* domain, double re, double im, int* out);
DBAR_API dbar_status dbar_domain_boundary_distance(const dbar_domain* domain, double re, double im, double* out);
/* nx*ny grid points at distance > margin from the boundary, as re,im pairs; free with dbar_free. */
DBAR_API dbar_status dbar_interior_grid(const dbar_domain* domain, int nx, int ny, double margin, double** points,
                                        size_t* count);

/* "f_nu:nu", "u_nu:nu", "du_nu:nu", "constant:re[,im]", "abs_power:a", "polynomial:p,q=re[,im];..." */
DBAR_API dbar_status dbar_field_parse(const char* spec, dbar_field** out);
DBAR_API void dbar_field_free(dbar_field* field);
DBAR_API dbar_status dbar_field_eval(const dbar_field* field, double re, double im, double* out_re, double* out_im);
/* Declared log order, or NaN when the field declares none. */
DBAR_API double dbar_field_log_order(const dbar_field* field);

/* Default settings with "key=value,..." overrides (NULL or "" for none). */
DBAR_API dbar_status dbar_quad_parse(const char* overrides, dbar_quad** out);
/* Same, from a JSON object. */
DBAR_API dbar_status dbar_quad_from_json(const char* json, dbar_quad** out);
/* Applies "key=value,..." overrides in place. */
DBAR_API dbar_status dbar_quad_apply(dbar_quad* quad, const char* overrides);
DBAR_API void dbar_quad_free(dbar_quad* quad);
/* JSON text of the settings; free with dbar_free. */
DBAR_API dbar_status dbar_quad_to_json(const dbar_quad* quad, char** json);

/* "T", "H" (identity), "H_identity", "H_direct", "2T", "Phi", "S", "NW" */
DBAR_API dbar_status dbar_op_parse(const char* name, dbar_op* out);

/* field may be NULL for PHI and NW; param is r for NW and ignored otherwise.
   Warnings (near-boundary evaluation) are left in dbar_last_error with DBAR_OK. */
DBAR_API dbar_status dbar_eval(dbar_op op, const dbar_domain* domain, const dbar_field* field, const dbar_quad* quad,
                               double re, double im, double param, dbar_result* out);

/* u = Tf on count points (re,im pairs). Outputs are caller-allocated:
   u and du_dz hold 2*count doubles, dbar_check holds count doubles. */
DBAR_API dbar_status dbar_solve(const dbar_domain* domain, const dbar_field* field, const dbar_quad* quad,
                                const double* points, size_t count, double nu, double* u, double* du_dz,
                                double* dbar_check);

/* config_json: {"domain", "field", "quad", "samples", "seed", "artifact_dir"}, all optional (NULL allowed).
   report_json receives the report; free with dbar_free. */
DBAR_API dbar_status dbar_verify(const char* suite, const char* config_json, char** report_json, int* passed);

/* Convergence table over `levels` resolutions halving from quad; exact may be NULL (re,im otherwise).
   csv receives the table; free with dbar_free. */
DBAR_API dbar_status dbar_converge(dbar_op op, const dbar_domain* domain, const dbar_field* field,
                                   const dbar_quad* quad, double re, double im, double param, int levels,
                                   const double* exact, char** csv);

DBAR_API void dbar_free(void* p);

#ifdef __cplusplus
}
#endif

#endif
