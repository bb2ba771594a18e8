//! Collar cutoff functions on the half-line.
//!
//! A cutoff is identically 1 on (0, plateau_end], drops to 0 across the
//! transition interval [plateau_end, support_end] through a quintic
//! smoothstep (C^2 across both junctions), and vanishes beyond.  Model
//! functions t^{-p} ln^k t carry such a cutoff so that only the conical
//! end contributes to transforms and norms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    plateau_end: f64,
    support_end: f64,
}

impl CutoffSpec {
    pub fn new(plateau_end: f64, support_end: f64) -> Result<Self> {
        if !(plateau_end > 0.0 && support_end > plateau_end && support_end.is_finite()) {
            return Err(Error::BadCutoff { plateau_end, support_end });
        }
        Ok(CutoffSpec { plateau_end, support_end })
    }

    /// Plateau on (0, 1], support ending at 2.
    pub fn standard() -> Self {
        CutoffSpec { plateau_end: 1.0, support_end: 2.0 }
    }

    #[inline]
    pub fn plateau_end(&self) -> f64 {
        self.plateau_end
    }

    #[inline]
    pub fn support_end(&self) -> f64 {
        self.support_end
    }

    /// Cutoff value at t.  Nonincreasing, with range [0, 1].
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.plateau_end {
            1.0
        } else if t >= self.support_end {
            0.0
        } else {
            let x = (t - self.plateau_end) / (self.support_end - self.plateau_end);
            // Quintic smoothstep 6x^5 - 15x^4 + 10x^3, flipped to run 1 -> 0.
            1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
        }
    }
}
