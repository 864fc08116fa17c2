//! The Hamiltonian catalog: closed-form `H(x, p)` with analytically coded
//! derivatives `D_p H` and `D_x H`, plus the structural flags the
//! hypothesis checkers consume.
//!
//! Coercivity-at-infinity conditions cannot be checked numerically; they
//! are asserted per catalog entry:
//!
//! * `quadratic` `H = |p|^2/2 + V(x) - c` is superlinear and uniformly
//!   convex in `p`;
//! * `double_well` `H = (|p|^2 - 1)^2/4 + V(x) - c` is superlinear but not
//!   convex;
//! * `linear_coercive` `H = a (sqrt(1 + |p|^2) - 1) + V(x) - c` is convex
//!   with asymptotically linear growth `a |p|` (coercive but not
//!   superlinear).
//!
//! All built-in potentials have bounded gradients, so `D_x H` is bounded
//! for every entry.

use crate::field::{ScalarField, VectorField};
use crate::ops;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CatalogError {
    #[error("unknown hamiltonian id {0:?} (expected quadratic, double_well, or linear_coercive)")]
    UnknownId(String),
    #[error("linear_coercive requires a positive slope, got {0}")]
    BadSlope(f64),
}

/// Additive potential `V(x)`.
#[derive(Debug, Clone)]
pub enum Potential {
    Zero,
    /// `V(x) = amplitude * cos(2 pi x_1)`
    Cosine { amplitude: f64 },
    /// `V` sampled on a grid; the gradient is the centered difference of
    /// the table, both interpolated multilinearly off-grid.
    Table {
        values: ScalarField,
        gradient: VectorField,
    },
}

impl Potential {
    pub fn table(values: ScalarField) -> Self {
        let gradient = ops::gradient_central(&values);
        Potential::Table { values, gradient }
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Cosine { amplitude } => amplitude * (2.0 * PI * x[0]).cos(),
            Potential::Table { values, .. } => ops::interpolate_scalar(values, x),
        }
    }

    pub fn grad(&self, x: [f64; 2]) -> [f64; 2] {
        match self {
            Potential::Zero => [0.0, 0.0],
            Potential::Cosine { amplitude } => {
                [-2.0 * PI * amplitude * (2.0 * PI * x[0]).sin(), 0.0]
            }
            Potential::Table { gradient, .. } => ops::interpolate_vector(gradient, x),
        }
    }

    fn grad_bound(&self) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Cosine { amplitude } => 2.0 * PI * amplitude.abs(),
            Potential::Table { gradient, .. } => {
                let gx = gradient.component(0).norm_inf();
                let gy = gradient.component(1).norm_inf();
                (gx * gx + gy * gy).sqrt()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Quadratic,
    DoubleWell,
    LinearCoercive,
}

#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    id: String,
    form: Form,
    /// Slope of the linear_coercive form; unused otherwise.
    slope: f64,
    /// Subtracted constant, `H = kinetic + V - offset`.
    offset: f64,
    potential: Potential,
    pub convex_in_p: bool,
    pub dx_bounded: bool,
    dx_bound: f64,
}

impl HamiltonianModel {
    /// `H(x, p) = |p|^2 / 2 + V(x) - c`
    pub fn quadratic(potential: Potential, c: f64) -> Self {
        let dx_bound = potential.grad_bound();
        HamiltonianModel {
            id: "quadratic".into(),
            form: Form::Quadratic,
            slope: 0.0,
            offset: c,
            potential,
            convex_in_p: true,
            dx_bounded: true,
            dx_bound,
        }
    }

    /// `H(x, p) = (|p|^2 - 1)^2 / 4 + V(x) - c`
    pub fn double_well(potential: Potential, c: f64) -> Self {
        let dx_bound = potential.grad_bound();
        HamiltonianModel {
            id: "double_well".into(),
            form: Form::DoubleWell,
            slope: 0.0,
            offset: c,
            potential,
            convex_in_p: false,
            dx_bounded: true,
            dx_bound,
        }
    }

    /// `H(x, p) = a (sqrt(1 + |p|^2) - 1) + V(x) - c`
    pub fn linear_coercive(slope: f64, potential: Potential, c: f64) -> Result<Self, CatalogError> {
        if !(slope > 0.0) {
            return Err(CatalogError::BadSlope(slope));
        }
        let dx_bound = potential.grad_bound();
        Ok(HamiltonianModel {
            id: "linear_coercive".into(),
            form: Form::LinearCoercive,
            slope,
            offset: c,
            potential,
            convex_in_p: true,
            dx_bounded: true,
            dx_bound,
        })
    }

    pub fn from_catalog(
        id: &str,
        potential: Potential,
        c: f64,
        slope: Option<f64>,
    ) -> Result<Self, CatalogError> {
        match id {
            "quadratic" => Ok(Self::quadratic(potential, c)),
            "double_well" => Ok(Self::double_well(potential, c)),
            "linear_coercive" => Self::linear_coercive(slope.unwrap_or(1.0), potential, c),
            other => Err(CatalogError::UnknownId(other.to_string())),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Stored bound on `|D_x H|` (the sup of `|DV|` for every catalog form).
    pub fn dx_bound(&self) -> f64 {
        self.dx_bound
    }

    pub fn eval(&self, x: [f64; 2], p: [f64; 2]) -> f64 {
        let p2 = p[0] * p[0] + p[1] * p[1];
        let kinetic = match self.form {
            Form::Quadratic => 0.5 * p2,
            Form::DoubleWell => 0.25 * (p2 - 1.0) * (p2 - 1.0),
            Form::LinearCoercive => self.slope * ((1.0 + p2).sqrt() - 1.0),
        };
        kinetic + self.potential.eval(x) - self.offset
    }

    pub fn grad_p(&self, _x: [f64; 2], p: [f64; 2]) -> [f64; 2] {
        let p2 = p[0] * p[0] + p[1] * p[1];
        let scale = match self.form {
            Form::Quadratic => 1.0,
            Form::DoubleWell => p2 - 1.0,
            Form::LinearCoercive => self.slope / (1.0 + p2).sqrt(),
        };
        [scale * p[0], scale * p[1]]
    }

    pub fn grad_x(&self, x: [f64; 2], _p: [f64; 2]) -> [f64; 2] {
        self.potential.grad(x)
    }
}
