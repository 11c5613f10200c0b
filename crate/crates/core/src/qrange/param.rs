use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The constraint value `q = <x, y>` together with `|q|` and
/// `p = sqrt(1 - |q|^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QParameter {
    q: Complex64,
    modulus: f64,
    p: f64,
}

/// Slack allowed above `|q| = 1` before rejecting, to absorb rounding in
/// values such as `e^{i t}`.
const MODULUS_SLACK: f64 = 1e-12;

impl QParameter {
    pub fn new(q: Complex64) -> Result<Self> {
        let modulus = q.norm();
        if !modulus.is_finite() || modulus > 1.0 + MODULUS_SLACK {
            return Err(Error::QOutOfRange(modulus));
        }
        let (q, modulus) = if (modulus - 1.0).abs() <= MODULUS_SLACK { (q / modulus, 1.0) } else { (q, modulus) };
        Ok(Self {
            q,
            modulus,
            p: (1.0 - modulus * modulus).max(0.0).sqrt(),
        })
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `|q|` as a real parameter; `w_q` only depends on it.
    pub fn reduced(&self) -> Self {
        Self {
            q: Complex64::new(self.modulus, 0.0),
            ..*self
        }
    }

    pub fn is_classical(&self) -> bool {
        self.p == 0.0
    }
}
