#ifndef CLARABEL_FFI_H
#define CLARABEL_FFI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct {
  uint32_t max_iter;
  double tol_gap_abs;
  double tol_gap_rel;
  double tol_feas;
  uint8_t verbose;
} ClarabelFfiSettings;

typedef struct {
  int32_t status;
  double obj_val;
  uint32_t iterations;
  double solve_time;
  double r_prim;
  double r_dual;
} ClarabelFfiResult;

enum {
  CLARABEL_FFI_CONE_ZERO = 0,
  CLARABEL_FFI_CONE_NONNEG = 1,
  CLARABEL_FFI_CONE_SOC = 2,
  CLARABEL_FFI_CONE_EXP = 3,
};

enum {
  CLARABEL_FFI_UNSOLVED = 0,
  CLARABEL_FFI_SOLVED = 1,
  CLARABEL_FFI_PRIMAL_INFEASIBLE = 2,
  CLARABEL_FFI_DUAL_INFEASIBLE = 3,
  CLARABEL_FFI_ALMOST_SOLVED = 4,
  CLARABEL_FFI_ALMOST_PRIMAL_INFEASIBLE = 5,
  CLARABEL_FFI_ALMOST_DUAL_INFEASIBLE = 6,
  CLARABEL_FFI_MAX_ITERATIONS = 7,
  CLARABEL_FFI_MAX_TIME = 8,
  CLARABEL_FFI_NUMERICAL_ERROR = 9,
  CLARABEL_FFI_INSUFFICIENT_PROGRESS = 10,
  CLARABEL_FFI_CALLBACK_TERMINATED = 11,
};

/* minimize q'x  s.t.  A x + s = b,  s in K.  A is CSC (m x n). */
int clarabel_ffi_solve(size_t n, size_t m, const double* q,
                       const size_t* a_colptr, const size_t* a_rowval,
                       const double* a_nzval, const double* b, size_t n_cones,
                       const uint8_t* cone_types, const size_t* cone_dims,
                       const ClarabelFfiSettings* settings, double* x_out,
                       double* z_out, ClarabelFfiResult* result);

#ifdef __cplusplus
}
#endif

#endif
