//! The penalty family `gamma^eps(s) = gamma(s / eps)`.
//!
//! The reference penalty is
//!
//! ```text
//! gamma(s) = 0                     for s <= 0,
//! gamma(s) = s - 1 + exp(-s)       for s > 0.
//! ```
//!
//! It vanishes on `s <= 0`, is positive for `s > 0`, convex, nondecreasing,
//! grows linearly at infinity, and has `0 < gamma'(s) <= 1` for `s > 0`.
//! It is C^1 rather than C^infinity; that is enough for the damped Newton
//! solvers, which only consume `gamma` and `gamma'`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PenaltyError {
    #[error("penalty rescaling requires eps > 0, got {0}")]
    NonpositiveEpsilon(f64),
}

/// `gamma^eps(s)`, its derivative in `s`, and its derivative in `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyValues {
    /// `gamma^eps(s) = gamma(s / eps)`
    pub value: f64,
    /// `(gamma^eps)'(s) = gamma'(s / eps) / eps`
    pub prime: f64,
    /// `gamma^eps_eps(s) = -(s / eps^2) gamma'(s / eps)`
    pub eps_derivative: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PenaltyModel;

impl PenaltyModel {
    pub fn new() -> Self {
        PenaltyModel
    }

    /// The unrescaled `gamma`. `s + exp_m1(-s)` avoids the cancellation of
    /// `s - 1 + exp(-s)` near 0.
    pub fn gamma(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            s + (-s).exp_m1()
        }
    }

    /// `gamma'(s) = 1 - exp(-s)` for `s > 0`, zero otherwise.
    pub fn gamma_prime(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            -(-s).exp_m1()
        }
    }

    /// All three rescaled values at once; rejects `eps <= 0`.
    pub fn eval(&self, eps: f64, s: f64) -> Result<PenaltyValues, PenaltyError> {
        if !(eps > 0.0) {
            return Err(PenaltyError::NonpositiveEpsilon(eps));
        }
        let r = s / eps;
        let gp = self.gamma_prime(r);
        Ok(PenaltyValues {
            value: self.gamma(r),
            prime: gp / eps,
            eps_derivative: -(s / (eps * eps)) * gp,
        })
    }

    /// `gamma^eps(s)`; caller guarantees `eps > 0`.
    pub fn value(&self, eps: f64, s: f64) -> f64 {
        debug_assert!(eps > 0.0);
        self.gamma(s / eps)
    }

    /// `(gamma^eps)'(s)`; caller guarantees `eps > 0`.
    pub fn prime(&self, eps: f64, s: f64) -> f64 {
        debug_assert!(eps > 0.0);
        self.gamma_prime(s / eps) / eps
    }
}
