//! Exponential-polynomial kernels for solutions of prod_i (d/dt - lambda_i) I = psi on t <= 0,
//! their iterated compositions and grid checks of their decay.

pub mod bounds;
pub mod exppoly;
pub mod kernels;
pub mod lambda;
pub mod schedule;

pub use bounds::{verify_kernel_bounds, BoundReport, BoundRow, GridSpec, KernelSet};
pub use exppoly::{integrate_exp_poly, ExpPoly, ExpPoly2, ExpTerm, ExpTerm2, IntegralKind};
pub use kernels::{
    apply_ode, burger1_kernels, burger1_reconstruct, kernel_f, kernel_fi, ode_residual,
    vanishes_at_minus_infinity, Burger1Kernels, OdeResidual, PiecewiseKernel2,
};
pub use lambda::{order_lambda, LambdaSpec};
pub use schedule::{burger2_coefficients, Burger2Kernels, BurgerSchedule, ScheduleJson};
