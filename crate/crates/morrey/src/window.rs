//! Symmetric index windows S_{m,N} = {m-N, ..., m+N} and the minimal
//! symmetric cover of an integer interval.

use crate::error::{MorreyError, Result};
use crate::exponents::Exponents;
use serde::{Deserialize, Serialize};

/// The window S_{m,N}: center `m`, radius `n`, cardinality `2n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub m: i64,
    pub n: u64,
}

impl Window {
    pub fn new(m: i64, n: u64) -> Self {
        Window { m, n }
    }

    pub fn cardinality(&self) -> u64 {
        2 * self.n + 1
    }

    /// First covered index, saturating at i64::MIN.
    pub fn start(&self) -> i64 {
        self.m.saturating_sub_unsigned(self.n)
    }

    /// Last covered index, saturating at i64::MAX.
    pub fn end(&self) -> i64 {
        self.m.saturating_add_unsigned(self.n)
    }

    pub fn contains(&self, j: i64) -> bool {
        self.start() <= j && j <= self.end()
    }

    /// Deterministic ordering used for tie-breaking among equal-score
    /// windows: smaller cardinality, then smaller |m|, then smaller m.
    pub fn tie_break_key(&self) -> (u64, u64, i64) {
        (self.n, self.m.unsigned_abs(), self.m)
    }
}

/// `(2N+1)^{1/q - 1/p}` evaluated in the log domain so huge radii never
/// overflow. Equals 1 when N = 0 or p = q.
pub fn window_weight(win: &Window, e: &Exponents) -> f64 {
    (e.alpha() * ln_cardinality(win.n)).exp()
}

/// ln(2N+1) without forming 2N+1 when it would overflow u64.
pub fn ln_cardinality(n: u64) -> f64 {
    match n.checked_mul(2).and_then(|d| d.checked_add(1)) {
        Some(card) => (card as f64).ln(),
        None => (2.0 * n as f64).ln(),
    }
}

/// Smallest window covering [a, b], ties in radius broken by smallest
/// |m|, then smallest m. Cardinality is b-a+1 for even spans, b-a+2 for
/// odd spans.
pub fn minimal_cover(a: i64, b: i64) -> Result<Window> {
    if a > b {
        return Err(MorreyError::EmptyRange { a, b });
    }
    let gap = b.abs_diff(a);
    if gap % 2 == 0 {
        let n = gap / 2;
        Ok(Window::new(a.wrapping_add_unsigned(n), n))
    } else {
        // two centers achieve the minimal radius; pick by (|m|, m)
        let n = gap / 2 + 1;
        let lo = b.saturating_sub_unsigned(n); // = a + n - 1
        let hi = lo + 1; // = a + n
        let pick = if (lo.unsigned_abs(), lo) <= (hi.unsigned_abs(), hi) {
            lo
        } else {
            hi
        };
        Ok(Window::new(pick, n))
    }
}
