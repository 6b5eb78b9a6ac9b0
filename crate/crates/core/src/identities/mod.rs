//! Evaluators of `L(Δ, k)` by independent methods, and the verification
//! drivers that compare them.

pub mod double;
pub mod lvalues;
pub mod verify;

pub use double::{
    corollary_kernel, corollary_l, reference_polynomial, theorem_constant, theorem_double, theorem_kernel,
    CorollaryConstants, DoubleKernel, Reduced, MAX_THEOREM_K,
};
pub use lvalues::{
    critical_l_integral, dirichlet_odd_partial, DEFAULT_DIRICHLET_TERMS, DEFAULT_MAX_LEVEL_2D, DEFAULT_TOLERANCE_2D, dirichlet_tail_bound, l12_integrand, l12_log_integral, l_dirichlet,
    l_dirichlet_with_table, l_mellin, odd_part_factor, EvalOptions, LValue, Method, L12_POLY,
};
pub use verify::{evaluate, run_suite, verify, IdentityId, Suite, VerifyParams};
