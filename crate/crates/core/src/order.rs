//! Transform order `a` and its rotation angle `α = aπ/2`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angles with `|sin α|` below this are treated as singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-3;

/// Where an angle falls relative to the delta-function branches of the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleClass {
    /// `sin α ≠ 0`: the chirp kernel is pointwise defined.
    Generic,
    /// `α = 2πp`: kernel is `δ(u − t)`.
    Identity,
    /// `α + π = 2πp`: kernel is `δ(u + t)`.
    Parity,
}

/// A fractional order, stored as `a`; the angle is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FractionalOrder {
    a: f64,
}

impl FractionalOrder {
    pub fn new(a: f64) -> Self {
        Self { a }
    }

    pub fn from_angle(alpha: f64) -> Self {
        Self { a: alpha / FRAC_PI_2 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.a * FRAC_PI_2
    }

    pub fn negated(&self) -> Self {
        Self { a: -self.a }
    }

    /// The order whose angle is `α + δ`.
    pub fn shifted_by_angle(&self, delta: f64) -> Self {
        Self::from_angle(self.alpha() + delta)
    }

    pub fn classify(&self) -> AngleClass {
        let alpha = self.alpha();
        if alpha.sin().abs() >= SINGULAR_TOLERANCE {
            return AngleClass::Generic;
        }
        // Nearest multiple of π decides between the two delta branches.
        let p = (alpha / PI).round();
        if (p.rem_euclid(2.0)).abs() < 0.5 {
            AngleClass::Identity
        } else {
            AngleClass::Parity
        }
    }

    /// Returns `Ok(())` if the kernel is pointwise evaluable at this order.
    pub fn require_generic(&self) -> Result<()> {
        match self.classify() {
            AngleClass::Generic => Ok(()),
            AngleClass::Identity => Err(Error::SingularAngle {
                alpha: self.alpha(),
                reason: "kernel is δ(u − t) at α = 2πp",
            }),
            AngleClass::Parity => Err(Error::SingularAngle {
                alpha: self.alpha(),
                reason: "kernel is δ(u + t) at α = π + 2πp",
            }),
        }
    }

    /// Generic and additionally `cos α` bounded away from zero, so `tan α`
    /// and `sec α` are finite.
    pub fn require_finite_tangent(&self) -> Result<()> {
        self.require_generic()?;
        if self.alpha().cos().abs() < SINGULAR_TOLERANCE {
            return Err(Error::SingularAngle {
                alpha: self.alpha(),
                reason: "tan α is unbounded at α = π/2 + πp",
            });
        }
        Ok(())
    }

    pub fn cot(&self) -> f64 {
        let alpha = self.alpha();
        alpha.cos() / alpha.sin()
    }

    pub fn csc(&self) -> f64 {
        1.0 / self.alpha().sin()
    }

    pub fn tan(&self) -> f64 {
        self.alpha().tan()
    }

    pub fn sec(&self) -> f64 {
        1.0 / self.alpha().cos()
    }

    /// Angle reduced to `(−π, π]`.
    pub fn reduced_alpha(&self) -> f64 {
        let r = self.alpha().rem_euclid(TAU);
        if r > PI {
            r - TAU
        } else {
            r
        }
    }
}
