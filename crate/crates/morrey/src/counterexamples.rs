//! Witness-sequence constructions: the lacunary 0/1 sequence whose
//! support clusters in arithmetic progressions near 2^{k(v+w)}, the
//! power-law sequence, constant blocks, and growth-rate fitting of
//! truncated norms.
//!
//! All parameter inequalities are decided in exact rational arithmetic;
//! floating point enters only when norms are evaluated.

use crate::error::{MorreyError, Result};
use crate::sequence::SparseSequence;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Which theorem's parameter inequality drives the construction: `Thm1`
/// diverges in the larger-p space, `Thm8` in the smaller-p space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    Thm1,
    Thm8,
}

/// Integer tuple driving the lacunary construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub p1: f64,
    pub p2: f64,
    pub q: f64,
    pub v: u64,
    pub w: u64,
    pub k0: u64,
    pub n_max: u64,
}

fn rational(x: f64, name: &str) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| MorreyError::Precondition(format!("{name} must be finite, got {x}")))
}

/// The open interval (lower(w), upper(w)) for v, in exact rationals:
/// lower = (q/p_hi - 1) w + 2 q/p_hi, upper = (q/p_lo - 1) w + 2,
/// where p_lo < p_hi are the two p-exponents.
fn v_bounds(p_lo: &BigRational, p_hi: &BigRational, q: &BigRational, w: u64) -> (BigRational, BigRational) {
    let wq = BigRational::from_integer(BigInt::from(w));
    let two = BigRational::from_integer(BigInt::from(2));
    let slope_hi = q / p_hi - BigRational::one();
    let slope_lo = q / p_lo - BigRational::one();
    let lower = &slope_hi * &wq + two.clone() * q / p_hi;
    let upper = &slope_lo * &wq + two;
    (lower, upper)
}

fn order_exponents(p1: f64, p2: f64, q: f64, mode: SolveMode) -> Result<(f64, f64)> {
    let (lo, hi) = match mode {
        SolveMode::Thm1 => (p2, p1),
        SolveMode::Thm8 => (p1, p2),
    };
    if !(1.0 <= lo && lo < hi && hi <= q) && !(q.is_infinite()) {
        return Err(MorreyError::Precondition(format!(
            "mode {mode:?} requires 1 <= p_small < p_large <= q, got p1={p1}, p2={p2}, q={q}"
        )));
    }
    if q.is_infinite() || !q.is_finite() {
        return Err(MorreyError::Precondition("q must be finite".into()));
    }
    Ok((lo, hi))
}

/// Smallest (w, then v) integer pair strictly inside the parameter
/// interval of the chosen mode. The interval is eventually nonempty
/// because the lower bound's slope q/p_hi - 1 is strictly below the
/// upper bound's slope q/p_lo - 1.
pub fn solve_vw(p1: f64, p2: f64, q: f64, mode: SolveMode) -> Result<(u64, u64)> {
    let (lo, hi) = order_exponents(p1, p2, q, mode)?;
    let p_lo = rational(lo, "p")?;
    let p_hi = rational(hi, "p")?;
    let qr = rational(q, "q")?;
    const W_CAP: u64 = 1_000_000;
    for w in 1..=W_CAP {
        let (lower, upper) = v_bounds(&p_lo, &p_hi, &qr, w);
        // smallest integer strictly above `lower`
        let v = lower.floor().to_integer() + BigInt::one();
        let v_rat = BigRational::from_integer(v.clone());
        if v_rat > lower && v_rat < upper {
            let v: u64 = u64::try_from(&v).map_err(|_| {
                MorreyError::Infeasible(format!("solved v={v} out of range"))
            })?;
            return Ok((v, w));
        }
    }
    Err(MorreyError::Infeasible(format!(
        "no (v, w) with w <= {W_CAP} for p1={p1}, p2={p2}, q={q}, {mode:?}"
    )))
}

/// Checks the strict parameter inequality of the given mode in exact
/// rational arithmetic.
pub fn check_vw(p1: f64, p2: f64, q: f64, mode: SolveMode, v: u64, w: u64) -> Result<bool> {
    let (lo, hi) = order_exponents(p1, p2, q, mode)?;
    let (lower, upper) = v_bounds(&rational(lo, "p")?, &rational(hi, "p")?, &rational(q, "q")?, w);
    let v_rat = BigRational::from_integer(BigInt::from(v));
    Ok(v_rat > lower && v_rat < upper)
}

/// Minimal positive integer k with 1 - 2^{-2k} > 2^{-(v+w-1)}, decided
/// exactly over powers of two.
pub fn compute_k0(v: u64, w: u64) -> Result<u64> {
    if v < 1 || w < 1 {
        return Err(MorreyError::Precondition(format!(
            "compute_k0 requires v, w >= 1, got v={v}, w={w}"
        )));
    }
    let e = v + w - 1;
    for k in 1..=64u64 {
        // 1 - 4^{-k} > 2^{-e}  <=>  2^e (4^k - 1) > 4^k
        let four_k = BigInt::one() << (2 * k);
        let lhs = (BigInt::one() << e) * (&four_k - BigInt::one());
        if lhs > four_k {
            return Ok(k);
        }
    }
    // 1 - 4^{-k} -> 1 > 2^{-e} for e >= 1, so the loop always returns
    unreachable!("k0 search exhausted")
}

/// The Eq.-(2)/(20) lacunary 0/1 sequence: a solid block |j| <= 2^{v+w}
/// plus, for each level k in [k0, n_max], the arithmetic progression
/// 2^{k(v+w)} - t 2^{kw}, t = 0..2^{k(v-2)}, symmetrized over +/-j.
/// Overlapping levels are deduped silently (membership semantics).
pub fn gen_lacunary(params: &CounterexampleParams) -> Result<SparseSequence> {
    let CounterexampleParams { v, w, k0, n_max, .. } = *params;
    if v < 2 {
        return Err(MorreyError::Precondition(format!(
            "lacunary construction requires v >= 2, got v={v}"
        )));
    }
    if w < 1 || k0 < 1 {
        return Err(MorreyError::Precondition(format!(
            "lacunary construction requires w >= 1 and k0 >= 1, got w={w}, k0={k0}"
        )));
    }
    let top = n_max.max(1).checked_mul(v + w);
    match top {
        Some(bits) if bits <= 62 && v + w <= 62 => {}
        _ => {
            return Err(MorreyError::IndexOverflow(format!(
                "2^{{n_max (v+w)}} exceeds the signed 64-bit index range (v={v}, w={w}, n_max={n_max})"
            )))
        }
    }
    let mut support: BTreeSet<i64> = BTreeSet::new();
    let block_top = 1i64 << (v + w);
    support.extend(0..=block_top);
    for k in k0..=n_max {
        let count_bits = k * (v - 2);
        if count_bits > 32 {
            return Err(MorreyError::Precondition(format!(
                "level k={k} would enumerate 2^{count_bits} points; refusing"
            )));
        }
        let base = 1i64 << (k * (v + w));
        let step = 1i64 << (k * w);
        let count = 1i64 << count_bits;
        for t in 0..=count {
            support.insert(base - t * step);
        }
    }
    let mirrored: Vec<i64> = support.iter().map(|&j| -j).collect();
    support.extend(mirrored);
    Ok(SparseSequence::indicator(support))
}

/// y_0 = 1 and y_j = |j|^{-1/q2} for 1 <= |j| <= K.
pub fn gen_power_sequence(q2: f64, k: u64) -> Result<SparseSequence> {
    if !(q2 >= 1.0) {
        return Err(MorreyError::Precondition(format!("q2 >= 1 required, got {q2}")));
    }
    let mut pairs = vec![(0i64, 1.0)];
    for j in 1..=k as i64 {
        let v = (j as f64).powf(-1.0 / q2);
        pairs.push((j, v));
        pairs.push((-j, v));
    }
    SparseSequence::from_pairs(pairs)
}

/// 2K+1 ones centered at 0.
pub fn gen_block(k: u64) -> SparseSequence {
    SparseSequence::indicator(-(k as i64)..=k as i64)
}

/// Truncation of the lacunary sequence to |j| <= 2^{n(v+w)}; identical
/// to generating with n_max = n.
pub fn lacunary_truncation(params: &CounterexampleParams, n: u64) -> Result<SparseSequence> {
    gen_lacunary(&CounterexampleParams { n_max: n, ..*params })
}

/// Predicted log2 growth exponent of the divergent direction,
/// (v+w)/q - w/p - 2/p.
pub fn divergence_exponent(v: u64, w: u64, q: f64, p: f64) -> f64 {
    (v + w) as f64 / q - w as f64 / p - 2.0 / p
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelNorm {
    pub n: u64,
    pub norm: f64,
}

/// Least-squares fit of log2(norm) against the level index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthFit {
    pub levels: Vec<LevelNorm>,
    pub slope: f64,
    pub predicted: f64,
    pub residual: f64,
}

/// Fits log2(norm) vs n by least squares over >= 3 levels with strictly
/// increasing n and positive norms.
pub fn growth_fit(levels: &[(u64, f64)], predicted: f64) -> Result<GrowthFit> {
    if levels.len() < 3 {
        return Err(MorreyError::Precondition(format!(
            "growth fit needs >= 3 levels, got {}",
            levels.len()
        )));
    }
    for pair in levels.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(MorreyError::Precondition(
                "levels must be strictly increasing in n".into(),
            ));
        }
    }
    if levels.iter().any(|&(_, norm)| !(norm > 0.0)) {
        return Err(MorreyError::Precondition("norms must be positive".into()));
    }
    let k = levels.len() as f64;
    let xs: Vec<f64> = levels.iter().map(|&(n, _)| n as f64).collect();
    let ys: Vec<f64> = levels.iter().map(|&(_, v)| v.log2()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Ok(GrowthFit {
        levels: levels
            .iter()
            .map(|&(n, norm)| LevelNorm { n, norm })
            .collect(),
        slope,
        predicted,
        residual: (ss / k).sqrt(),
    })
}

/// Exact support count of the lacunary truncation divided by 2^{n(v-2)}
/// (the paper's asymptotic order).
pub fn count_ratio(params: &CounterexampleParams, n: u64) -> Result<f64> {
    let seq = lacunary_truncation(params, n)?;
    Ok(seq.len() as f64 / ((1u64 << (n * (params.v - 2))) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: u64, w: u64, k0: u64, n_max: u64) -> CounterexampleParams {
        CounterexampleParams {
            p1: 2.0,
            p2: 1.0,
            q: 3.0,
            v,
            w,
            k0,
            n_max,
        }
    }

    #[test]
    fn solve_vw_thm1_reference() {
        // w=2 gives the open interval (4, 6); v=5
        assert_eq!(solve_vw(2.0, 1.0, 3.0, SolveMode::Thm1).unwrap(), (5, 2));
    }

    #[test]
    fn solve_vw_thm8_reference() {
        assert_eq!(solve_vw(1.0, 2.0, 3.0, SolveMode::Thm8).unwrap(), (5, 2));
    }

    #[test]
    fn solve_vw_rejects_equal_exponents() {
        assert!(solve_vw(2.0, 2.0, 3.0, SolveMode::Thm1).is_err());
        assert!(solve_vw(2.0, 2.0, 3.0, SolveMode::Thm8).is_err());
    }

    #[test]
    fn solved_pair_satisfies_strict_inequality() {
        let (v, w) = solve_vw(2.0, 1.0, 3.0, SolveMode::Thm1).unwrap();
        assert!(check_vw(2.0, 1.0, 3.0, SolveMode::Thm1, v, w).unwrap());
    }

    #[test]
    fn k0_examples() {
        assert_eq!(compute_k0(5, 2).unwrap(), 1);
        assert_eq!(compute_k0(1, 1).unwrap(), 1);
        assert!(compute_k0(1, 0).is_err());
    }

    #[test]
    fn lacunary_level_one_absorbed() {
        let x = gen_lacunary(&params(5, 2, 1, 1)).unwrap();
        assert_eq!(x.len(), 257);
        assert_eq!(x.min_index(), Some(-128));
        assert_eq!(x.max_index(), Some(128));
    }

    #[test]
    fn lacunary_level_two_disjoint() {
        let x = gen_lacunary(&params(5, 2, 1, 2)).unwrap();
        // 257 block + 2 * (2^6 + 1) level-2 points
        assert_eq!(x.len(), 257 + 2 * 65);
        // all level-2 indices clear the block: min positive beyond block
        let min_beyond = x
            .indices()
            .filter(|&j| j > 128)
            .min()
            .unwrap();
        assert_eq!(min_beyond, 16384 - 64 * 16);
    }

    #[test]
    fn lacunary_rejects_tiny_v_and_overflow() {
        assert!(gen_lacunary(&params(1, 2, 1, 1)).is_err());
        assert!(gen_lacunary(&params(40, 40, 1, 3)).is_err());
    }

    #[test]
    fn power_sequence_values() {
        let y = gen_power_sequence(2.0, 4).unwrap();
        assert_eq!(y.value_at(0), 1.0);
        assert_eq!(y.value_at(1), 1.0);
        assert!((y.value_at(2) - 2f64.powf(-0.5)).abs() < 1e-15);
        assert!((y.value_at(3) - 3f64.powf(-0.5)).abs() < 1e-15);
        assert!((y.value_at(4) - 0.5).abs() < 1e-15);
        assert_eq!(y.value_at(-4), y.value_at(4));
        // large q2: values approach 1
        let flat = gen_power_sequence(1e6, 2).unwrap();
        assert!((flat.value_at(2) - 1.0).abs() < 1e-5);
        let unit = gen_power_sequence(1.0, 1).unwrap();
        assert_eq!(unit.entries(), &[(-1, 1.0), (0, 1.0), (1, 1.0)]);
    }

    #[test]
    fn block_sizes() {
        assert_eq!(gen_block(0).len(), 1);
        assert_eq!(gen_block(4).len(), 9);
        assert_eq!(gen_block(13).len(), 27);
    }

    #[test]
    fn fit_recovers_exact_line() {
        let levels: Vec<(u64, f64)> = (1..=4).map(|n| (n, 2f64.powf(0.5 * n as f64))).collect();
        let fit = growth_fit(&levels, 0.5).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn fit_constant_family_is_flat() {
        let fit = growth_fit(&[(1, 2.0), (2, 2.0), (3, 2.0)], 0.0).unwrap();
        assert_eq!(fit.slope, 0.0);
    }

    #[test]
    fn fit_requires_three_levels() {
        assert!(growth_fit(&[(1, 1.0), (2, 2.0)], 0.0).is_err());
    }

    #[test]
    fn divergence_exponent_reference() {
        assert!((divergence_exponent(5, 2, 3.0, 2.0) - 1.0 / 3.0).abs() < 1e-15);
        // bounded direction: negative
        assert!(divergence_exponent(5, 2, 3.0, 1.0) < 0.0);
    }

    #[test]
    fn count_ratio_bounded_across_levels() {
        let p = params(5, 2, 1, 3);
        let ratios: Vec<f64> = (1..=3).map(|n| count_ratio(&p, n).unwrap()).collect();
        for &r in &ratios {
            assert!(r > 0.1 && r < 50.0, "ratio {r} escaped [0.1, 50]");
        }
    }
}
