//! Residual square-error functional and convergence-control optimization.

mod exprat;
mod functional;
mod minimize;
mod schedule;

pub use exprat::ExpRational;
pub use functional::{error_functional, ErrorFunctionalConfig, ErrorPolynomial, NumericPoly};
pub use minimize::{
    minimize_1d, minimize_2d, real_roots, MinimizerOptions, OptimizationResult, ParamBinding, SearchBox,
};
pub use schedule::{fixed_spec, functional_value, greedy_schedule};
