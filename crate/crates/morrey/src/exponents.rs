//! Validated exponent pairs (p, q) with 1 <= p <= q <= infinity.
//!
//! The weight exponent `alpha = 1/q - 1/p` (with 1/inf = 0) drives every
//! window weight; validation guarantees `alpha <= 0`.

use crate::error::{MorreyError, Result};
use serde::{Deserialize, Serialize};

/// A validated exponent pair. `q` is stored as `f64::INFINITY` for the
/// `l^p_inf` case; `p` itself must be finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    p: f64,
    q: f64,
}

impl Exponents {
    /// Validates a raw pair. Rejects `p < 1`, `q < p`, non-finite `p`,
    /// and NaN anywhere. `q = f64::INFINITY` is accepted.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(MorreyError::InvalidExponents(format!(
                "p must be finite, got {p}"
            )));
        }
        if p < 1.0 {
            return Err(MorreyError::InvalidExponents(format!("p < 1: p={p}")));
        }
        if q.is_nan() {
            return Err(MorreyError::InvalidExponents("q is NaN".into()));
        }
        if q < p {
            return Err(MorreyError::InvalidExponents(format!("q < p: p={p}, q={q}")));
        }
        Ok(Exponents { p, q })
    }

    /// Shorthand for the `q = infinity` case.
    pub fn with_infinite_q(p: f64) -> Result<Self> {
        Self::new(p, f64::INFINITY)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `f64::INFINITY` when q is infinite.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn q_is_infinite(&self) -> bool {
        self.q.is_infinite()
    }

    /// Weight exponent `1/q - 1/p`, with `1/inf = 0`. Always `<= 0`.
    pub fn alpha(&self) -> f64 {
        let inv_q = if self.q.is_infinite() { 0.0 } else { 1.0 / self.q };
        inv_q - 1.0 / self.p
    }
}

impl std::fmt::Display for Exponents {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.q_is_infinite() {
            write!(f, "({}, inf)", self.p)
        } else {
            write!(f, "({}, {})", self.p, self.q)
        }
    }
}
