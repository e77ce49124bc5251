//! Exact semi-analytic iteration engine for the reaction-diffusion-advection
//! equation `u_t − u_xx + u·u_x + u(u+a) = 0` with `u(x,0) = e^{−x}`.
//!
//! Iterates of both the BLUES function method and the variational iteration
//! method stay inside the family `Σ_k e^{−kx} Σ_μ e^{μt}·p(t)`, so every
//! iterate is represented exactly ([`algebra`]). Control parameters of the
//! Mann, Krasnoselskii, Ishikawa and hybrid Picard-Krasnoselskii procedures
//! ([`procedure`]) can be symbolic; [`optimize`] builds the residual
//! square-error functional as an exact polynomial in them and minimizes it.
//! [`experiment`] drives the command-line workflows.

pub mod algebra;
pub mod error;
pub mod experiment;
pub mod model;
pub mod numeric;
pub mod optimize;
pub mod procedure;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
