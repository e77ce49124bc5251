//! The reaction-diffusion-advection problem `u_t − u_xx + u·u_x + u(u+a) = 0`
//! with initial condition `e^{−x}`, and the two method operators acting on
//! [`Field`]s.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{int, Exponomial, Field, ParamPoly, ParamSpace, Rational};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemConfig {
    /// Reaction parameter. The exact solution decays in `t` iff `a > 1`.
    pub a: Rational,
}

impl ProblemConfig {
    pub fn new(a: Rational) -> Self {
        Self { a }
    }
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self { a: int(2) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Blues,
    Vim,
}

impl MethodKind {
    pub const ALL: [MethodKind; 2] = [MethodKind::Vim, MethodKind::Blues];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::Blues => "blues",
            MethodKind::Vim => "vim",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "blues" => Ok(MethodKind::Blues),
            "vim" => Ok(MethodKind::Vim),
            other => Err(Error::Parse(format!("unknown method `{other}` (expected vim or blues)"))),
        }
    }
}

fn exp_field(space: &ParamSpace, rate: Rational) -> Field {
    Field::single(1, Exponomial::exp(space, rate))
}

/// `e^{−x}`.
pub fn initial_field() -> Field {
    initial_field_in(&ParamSpace::empty())
}

pub fn initial_field_in(space: &ParamSpace) -> Field {
    exp_field(space, Rational::from_integer(0.into()))
}

/// `e^{−x}·e^{−(a−1)t}`.
pub fn exact_solution(cfg: &ProblemConfig) -> Field {
    exp_field(&ParamSpace::empty(), -(&cfg.a - int(1)))
}

/// `N u = u_t − u_xx + u·u_x + u·u + a·u`, nonlinear terms computed in full.
pub fn pde_residual(u: &Field, cfg: &ProblemConfig) -> Field {
    let ux = u.diff_x();
    let uxx = ux.diff_x();
    let linear = &(&u.diff_t() - &uxx) + &u.scale_rational(&cfg.a);
    let nonlinear = &(u * &ux) + &(u * u);
    &linear + &nonlinear
}

/// `R u = L u − N u = u_xx − u·u_x − u·u` for `L u = u_t + a u`.
pub fn residual_operator(u: &Field) -> Field {
    let ux = u.diff_x();
    &(&ux.diff_x() - &(u * &ux)) - &(u * u)
}

/// `e^{−at−x}`: the initial condition propagated by the linear operator.
pub fn blues_zeroth(cfg: &ProblemConfig) -> Field {
    blues_zeroth_in(cfg, &ParamSpace::empty())
}

pub fn blues_zeroth_in(cfg: &ProblemConfig, space: &ParamSpace) -> Field {
    exp_field(space, -cfg.a.clone())
}

/// `T[u] = e^{−at−x} + G∗R[u]` with `G(t) = e^{−at}Θ(t)`.
pub fn blues_t(u: &Field, cfg: &ProblemConfig) -> Field {
    blues_t_with(u, cfg, |f, a| f.convolve_green(a))
}

/// [`blues_t`] with an injectable convolution, used by negative controls.
pub fn blues_t_with(u: &Field, cfg: &ProblemConfig, convolve: impl Fn(&Field, &Rational) -> Field) -> Field {
    &blues_zeroth_in(cfg, u.space()) + &convolve(&residual_operator(u), &cfg.a)
}

/// `T[u] = u − ∫₀ᵗ N u ds` (Lagrange multiplier −1).
pub fn vim_t(u: &Field, cfg: &ProblemConfig) -> Field {
    u - &pde_residual(u, cfg).integrate_0t()
}

/// A method operator bound to a problem configuration.
#[derive(Debug, Clone)]
pub struct Method {
    pub kind: MethodKind,
    pub cfg: ProblemConfig,
}

impl Method {
    pub fn new(kind: MethodKind, cfg: ProblemConfig) -> Self {
        Self { kind, cfg }
    }

    pub fn apply(&self, u: &Field) -> Field {
        match self.kind {
            MethodKind::Blues => blues_t(u, &self.cfg),
            MethodKind::Vim => vim_t(u, &self.cfg),
        }
    }

    /// `u_0`: `e^{−x}` for VIM, `e^{−at−x}` for BLUES.
    pub fn start(&self, space: &ParamSpace) -> Field {
        match self.kind {
            MethodKind::Blues => blues_zeroth_in(&self.cfg, space),
            MethodKind::Vim => initial_field_in(space),
        }
    }
}

/// The `n`-th Picard approximant in closed form:
/// VIM `e^{−x}Σ(−(a−1)t)^i/i!`, BLUES `e^{−at−x}Σ t^i/i!`.
pub fn picard_closed_form(kind: MethodKind, cfg: &ProblemConfig, n: usize) -> Field {
    let space = ParamSpace::empty();
    let (rate, base) = match kind {
        MethodKind::Vim => (int(0), -(&cfg.a - int(1))),
        MethodKind::Blues => (-cfg.a.clone(), int(1)),
    };
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = int(1);
    for i in 0..=n {
        if i > 0 {
            c = c * &base / int(i as i64);
        }
        coeffs.push(ParamPoly::constant(&space, c.clone()));
    }
    Field::single(1, Exponomial::from_groups(&space, [(rate, coeffs)]))
}
