//! Minimal C ABI over the Clarabel interior-point solver.
//!
//! Only the linear-objective subset is exposed (P = 0): minimize q'x subject
//! to A x + s = b with s in a product of zero, nonnegative, second-order and
//! exponential cones.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use std::slice;

#[repr(C)]
pub struct ClarabelFfiSettings {
    pub max_iter: u32,
    pub tol_gap_abs: f64,
    pub tol_gap_rel: f64,
    pub tol_feas: f64,
    pub verbose: u8,
}

#[repr(C)]
pub struct ClarabelFfiResult {
    pub status: i32,
    pub obj_val: f64,
    pub iterations: u32,
    pub solve_time: f64,
    pub r_prim: f64,
    pub r_dual: f64,
}

pub const CONE_ZERO: u8 = 0;
pub const CONE_NONNEG: u8 = 1;
pub const CONE_SOC: u8 = 2;
pub const CONE_EXP: u8 = 3;

fn status_code(s: SolverStatus) -> i32 {
    match s {
        SolverStatus::Unsolved => 0,
        SolverStatus::Solved => 1,
        SolverStatus::PrimalInfeasible => 2,
        SolverStatus::DualInfeasible => 3,
        SolverStatus::AlmostSolved => 4,
        SolverStatus::AlmostPrimalInfeasible => 5,
        SolverStatus::AlmostDualInfeasible => 6,
        SolverStatus::MaxIterations => 7,
        SolverStatus::MaxTime => 8,
        SolverStatus::NumericalError => 9,
        SolverStatus::InsufficientProgress => 10,
        SolverStatus::CallbackTerminated => 11,
    }
}

/// Returns 0 when the solver ran (inspect `result.status`), negative on
/// malformed input.
///
/// # Safety
/// All pointers must reference arrays of the documented lengths:
/// `q[n]`, `a_colptr[n+1]`, `a_rowval[nnz]`, `a_nzval[nnz]`, `b[m]`,
/// `cone_types[n_cones]`, `cone_dims[n_cones]`, `x_out[n]`, `z_out[m]`,
/// where `nnz = a_colptr[n]`.
#[no_mangle]
pub unsafe extern "C" fn clarabel_ffi_solve(
    n: usize,
    m: usize,
    q: *const f64,
    a_colptr: *const usize,
    a_rowval: *const usize,
    a_nzval: *const f64,
    b: *const f64,
    n_cones: usize,
    cone_types: *const u8,
    cone_dims: *const usize,
    settings: *const ClarabelFfiSettings,
    x_out: *mut f64,
    z_out: *mut f64,
    result: *mut ClarabelFfiResult,
) -> i32 {
    if q.is_null() || a_colptr.is_null() || b.is_null() || settings.is_null() || result.is_null() {
        return -1;
    }
    let q = slice::from_raw_parts(q, n);
    let colptr = slice::from_raw_parts(a_colptr, n + 1);
    let nnz = colptr[n];
    let rowval = if nnz > 0 { slice::from_raw_parts(a_rowval, nnz) } else { &[][..] };
    let nzval = if nnz > 0 { slice::from_raw_parts(a_nzval, nnz) } else { &[][..] };
    let b = slice::from_raw_parts(b, m);
    let types = if n_cones > 0 { slice::from_raw_parts(cone_types, n_cones) } else { &[][..] };
    let dims = if n_cones > 0 { slice::from_raw_parts(cone_dims, n_cones) } else { &[][..] };

    let mut cones: Vec<SupportedConeT<f64>> = Vec::with_capacity(n_cones);
    let mut rows = 0usize;
    for (t, d) in types.iter().zip(dims.iter()) {
        let cone = match *t {
            CONE_ZERO => SupportedConeT::ZeroConeT(*d),
            CONE_NONNEG => SupportedConeT::NonnegativeConeT(*d),
            CONE_SOC => SupportedConeT::SecondOrderConeT(*d),
            CONE_EXP => SupportedConeT::ExponentialConeT(),
            _ => return -2,
        };
        rows += if *t == CONE_EXP { 3 } else { *d };
        cones.push(cone);
    }
    if rows != m {
        return -3;
    }

    let a = CscMatrix::new(m, n, colptr.to_vec(), rowval.to_vec(), nzval.to_vec());
    let p = CscMatrix::<f64>::zeros((n, n));

    let s = &*settings;
    let mut opts = DefaultSettings::<f64>::default();
    opts.max_iter = s.max_iter;
    opts.tol_gap_abs = s.tol_gap_abs;
    opts.tol_gap_rel = s.tol_gap_rel;
    opts.tol_feas = s.tol_feas;
    opts.verbose = s.verbose != 0;
    opts.max_threads = 1;

    let mut solver = match DefaultSolver::new(&p, q, &a, b, &cones, opts) {
        Ok(solver) => solver,
        Err(_) => return -4,
    };
    solver.solve();

    let sol = &solver.solution;
    if !x_out.is_null() {
        slice::from_raw_parts_mut(x_out, n).copy_from_slice(&sol.x);
    }
    if !z_out.is_null() {
        slice::from_raw_parts_mut(z_out, m).copy_from_slice(&sol.z);
    }
    let r = &mut *result;
    r.status = status_code(sol.status);
    r.obj_val = sol.obj_val;
    r.iterations = sol.iterations;
    r.solve_time = sol.solve_time;
    r.r_prim = sol.r_prim;
    r.r_dual = sol.r_dual;
    0
}
