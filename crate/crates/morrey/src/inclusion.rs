//! Classification of exponent pairs by applicable inclusion regime and
//! corpus-based verification of the norm inequalities — constant 1 where
//! the inclusion holds with constant 1, and the interpolation constant
//! C = 2^{1/p1} (p1/(p2-p1))^{1/p2} for the weak-to-strong embedding.

use crate::error::{MorreyError, Result};
use crate::exponents::Exponents;
use crate::norm::{discrete_norm, weak_norm};
use crate::sequence::SparseSequence;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative slack absorbing last-digit noise from log-domain powering.
pub const VERIFY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeKind {
    /// q1 = q2 and p1 <= p2: the larger-p space sits inside the
    /// smaller-p space, ||.||_{e1} <= ||.||_{e2}.
    FirstKind,
    /// p1 <= p2 and q1/q2 <= p1/p2: e1-space inside e2-space,
    /// ||.||_{e2} <= ||.||_{e1}.
    SecondKind,
    /// p1 = p2 and q1 <= q2: ||.||_{e2} <= ||.||_{e1}.
    QMonotone,
    /// Second-kind hypothesis on the weak quasi-norms.
    WeakSecondKind,
    /// q-monotone hypothesis on the weak quasi-norms.
    WeakQMonotone,
    /// p1 < p2, q1 = q2: weak (p2, q)-space inside strong (p1, q)-space
    /// with constant C, always proper.
    WeakToStrong,
}

impl RegimeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeKind::FirstKind => "first-kind",
            RegimeKind::SecondKind => "second-kind",
            RegimeKind::QMonotone => "q-monotone",
            RegimeKind::WeakSecondKind => "weak-second-kind",
            RegimeKind::WeakQMonotone => "weak-q-monotone",
            RegimeKind::WeakToStrong => "weak-to-strong",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeTag {
    pub kind: RegimeKind,
    pub proper: bool,
}

/// The full classification of an exponent pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionRegime {
    pub e1: Exponents,
    pub e2: Exponents,
    pub tags: Vec<RegimeTag>,
    /// Both pairs lie on the diagonal p = q with p2 < p1: the plain
    /// l^{p2} subset l^{p1} nesting applies even though no tag above
    /// covers it, so (p1 <= p2, q2 <= q1) is not necessary for
    /// inclusion.
    pub reversed_diagonal: bool,
}

impl InclusionRegime {
    pub fn tag(&self, kind: RegimeKind) -> Option<&RegimeTag> {
        self.tags.iter().find(|t| t.kind == kind)
    }

    pub fn has(&self, kind: RegimeKind) -> bool {
        self.tag(kind).is_some()
    }
}

/// Tags (e1, e2) with every regime whose hypothesis holds, plus
/// properness where a strict gap is proven. Requires finite q on both
/// sides.
pub fn classify(e1: &Exponents, e2: &Exponents) -> Result<InclusionRegime> {
    if e1.q_is_infinite() || e2.q_is_infinite() {
        return Err(MorreyError::Precondition(
            "classify requires finite q on both exponent pairs".into(),
        ));
    }
    let (p1, q1) = (e1.p(), e1.q());
    let (p2, q2) = (e2.p(), e2.q());
    let mut tags = Vec::new();
    if q1 == q2 && p1 <= p2 {
        tags.push(RegimeTag {
            kind: RegimeKind::FirstKind,
            proper: false,
        });
    }
    // q1/q2 <= p1/p2 compared cross-multiplied to avoid division noise
    let ratio_le = q1 * p2 <= p1 * q2;
    let ratio_lt = q1 * p2 < p1 * q2;
    if p1 <= p2 && ratio_le {
        let proper = (p1 < p2 && ratio_le) || ratio_lt;
        tags.push(RegimeTag {
            kind: RegimeKind::SecondKind,
            proper,
        });
        tags.push(RegimeTag {
            kind: RegimeKind::WeakSecondKind,
            proper,
        });
    }
    if p1 == p2 && q1 <= q2 {
        tags.push(RegimeTag {
            kind: RegimeKind::QMonotone,
            proper: q1 < q2,
        });
        tags.push(RegimeTag {
            kind: RegimeKind::WeakQMonotone,
            proper: q1 < q2,
        });
    }
    if p1 < p2 && q1 == q2 {
        tags.push(RegimeTag {
            kind: RegimeKind::WeakToStrong,
            proper: true,
        });
    }
    let reversed_diagonal = p1 == q1 && p2 == q2 && p2 < p1;
    Ok(InclusionRegime {
        e1: *e1,
        e2: *e2,
        tags,
        reversed_diagonal,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub id: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of checking a norm inequality over a corpus. `max_ratio` is
/// the largest observed LHS/RHS; `violations` lists sequences whose
/// ratio exceeds 1 + 1e-9.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub regime: String,
    pub trials: usize,
    pub max_ratio: f64,
    pub constant_used: f64,
    pub violations: Vec<Violation>,
    pub seed: Option<u64>,
}

fn fold_report(
    regime: &str,
    constant: f64,
    seed: Option<u64>,
    pairs: Vec<(f64, f64)>,
) -> VerificationReport {
    let mut max_ratio: f64 = 0.0;
    let mut violations = Vec::new();
    for (id, &(lhs, rhs)) in pairs.iter().enumerate() {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        max_ratio = max_ratio.max(ratio);
        if ratio > 1.0 + VERIFY_SLACK {
            violations.push(Violation { id, lhs, rhs });
        }
    }
    VerificationReport {
        regime: regime.to_string(),
        trials: pairs.len(),
        max_ratio,
        constant_used: constant,
        violations,
        seed,
    }
}

// LHS/RHS norms of one sequence under a constant-1 regime. First-kind
// bounds the e1-norm by the e2-norm; the other tags bound the e2-side
// norm by the e1-side norm (weak variants on the weak quasi-norm).
fn constant_one_pair(
    x: &SparseSequence,
    e1: &Exponents,
    e2: &Exponents,
    which: RegimeKind,
) -> (f64, f64) {
    match which {
        RegimeKind::FirstKind => (discrete_norm(x, e1).value, discrete_norm(x, e2).value),
        RegimeKind::SecondKind | RegimeKind::QMonotone => {
            (discrete_norm(x, e2).value, discrete_norm(x, e1).value)
        }
        RegimeKind::WeakSecondKind | RegimeKind::WeakQMonotone => {
            (weak_norm(x, e2).value, weak_norm(x, e1).value)
        }
        RegimeKind::WeakToStrong => unreachable!("weak-to-strong uses verify_t8"),
    }
}

/// Checks a constant-1 norm inequality on every corpus sequence.
/// `seed` is recorded verbatim in the report for replay.
pub fn verify_constant_one(
    corpus: &[SparseSequence],
    e1: &Exponents,
    e2: &Exponents,
    which: RegimeKind,
    seed: Option<u64>,
) -> Result<VerificationReport> {
    if which == RegimeKind::WeakToStrong {
        return Err(MorreyError::Precondition(
            "weak-to-strong carries a constant > 1; use verify_t8".into(),
        ));
    }
    let regime = classify(e1, e2)?;
    if !regime.has(which) {
        return Err(MorreyError::Precondition(format!(
            "regime {} does not apply to e1={e1}, e2={e2}",
            which.as_str()
        )));
    }
    let pairs: Vec<(f64, f64)> = corpus
        .par_iter()
        .map(|x| constant_one_pair(x, e1, e2, which))
        .collect();
    Ok(fold_report(which.as_str(), 1.0, seed, pairs))
}

/// C = 2^{1/p1} (p1/(p2-p1))^{1/p2}. Both halves of the split windowed
/// sum — the part below the cut radius R and the part above — reduce to
/// the same bound (p1/(p2-p1))^{p1/p2} (2N+1)^{1-p1/q} ||x||^{p1} once R
/// is chosen to balance them, and the p1-th root of the doubled bound is
/// this constant.
pub fn t8_bound_constant(p1: f64, p2: f64, q: f64) -> Result<f64> {
    if !(1.0 <= p1 && p1 < p2 && p2 <= q) || !q.is_finite() {
        return Err(MorreyError::Precondition(format!(
            "t8 constant requires 1 <= p1 < p2 <= q < inf, got p1={p1}, p2={p2}, q={q}"
        )));
    }
    Ok(2f64.powf(1.0 / p1) * (p1 / (p2 - p1)).powf(1.0 / p2))
}

/// Checks ||x||_{l^{p1}_q} <= C ||x||_{wl^{p2}_q} over the corpus with
/// the closed-form constant.
pub fn verify_t8(
    corpus: &[SparseSequence],
    p1: f64,
    p2: f64,
    q: f64,
    seed: Option<u64>,
) -> Result<VerificationReport> {
    let c = t8_bound_constant(p1, p2, q)?;
    let e_strong = Exponents::new(p1, q)?;
    let e_weak = Exponents::new(p2, q)?;
    let pairs: Vec<(f64, f64)> = corpus
        .par_iter()
        .map(|x| {
            (
                discrete_norm(x, &e_strong).value,
                c * weak_norm(x, &e_weak).value,
            )
        })
        .collect();
    Ok(fold_report(
        RegimeKind::WeakToStrong.as_str(),
        c,
        seed,
        pairs,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_corpus, CorpusSpec};

    fn exp(p: f64, q: f64) -> Exponents {
        Exponents::new(p, q).unwrap()
    }

    #[test]
    fn classify_first_kind_example() {
        let r = classify(&exp(1.0, 3.0), &exp(2.0, 3.0)).unwrap();
        assert!(r.has(RegimeKind::FirstKind));
        assert!(r.has(RegimeKind::WeakToStrong));
        assert!(!r.has(RegimeKind::SecondKind));
    }

    #[test]
    fn classify_q_monotone_proper() {
        let r = classify(&exp(2.0, 2.0), &exp(2.0, 3.0)).unwrap();
        let tag = r.tag(RegimeKind::QMonotone).unwrap();
        assert!(tag.proper);
        assert!(r.tag(RegimeKind::WeakQMonotone).unwrap().proper);
        // q1 = q2: present but not proper
        let same = classify(&exp(2.0, 3.0), &exp(2.0, 3.0)).unwrap();
        assert!(!same.tag(RegimeKind::QMonotone).unwrap().proper);
    }

    #[test]
    fn classify_second_kind_boundary() {
        // q1/q2 = p1/p2 exactly; still in the regime, proper via p1 < p2
        let r = classify(&exp(2.0, 4.0), &exp(3.0, 6.0)).unwrap();
        let tag = r.tag(RegimeKind::SecondKind).unwrap();
        assert!(tag.proper);
        assert!(r.has(RegimeKind::WeakSecondKind));
    }

    #[test]
    fn classify_second_kind_equal_exponents_not_proper() {
        let r = classify(&exp(2.0, 3.0), &exp(2.0, 3.0)).unwrap();
        assert!(!r.tag(RegimeKind::SecondKind).unwrap().proper);
    }

    #[test]
    fn classify_reversed_diagonal() {
        let r = classify(&exp(3.0, 3.0), &exp(2.0, 2.0)).unwrap();
        assert!(r.reversed_diagonal);
        assert!(r.tags.is_empty());
        assert!(!classify(&exp(2.0, 2.0), &exp(3.0, 3.0)).unwrap().reversed_diagonal);
    }

    #[test]
    fn classify_rejects_infinite_q() {
        assert!(classify(&exp(1.0, f64::INFINITY), &exp(1.0, 2.0)).is_err());
    }

    #[test]
    fn no_kind_is_proper_in_both_directions() {
        let pairs = [
            (exp(1.0, 2.0), exp(2.0, 4.0)),
            (exp(2.0, 2.0), exp(2.0, 3.0)),
            (exp(2.0, 4.0), exp(3.0, 6.0)),
            (exp(1.5, 3.0), exp(1.5, 3.0)),
        ];
        for (a, b) in &pairs {
            let fwd = classify(a, b).unwrap();
            let bwd = classify(b, a).unwrap();
            for kind in [
                RegimeKind::FirstKind,
                RegimeKind::SecondKind,
                RegimeKind::QMonotone,
                RegimeKind::WeakSecondKind,
                RegimeKind::WeakQMonotone,
            ] {
                let both_proper = fwd.tag(kind).is_some_and(|t| t.proper)
                    && bwd.tag(kind).is_some_and(|t| t.proper);
                assert!(!both_proper, "{kind:?} proper both ways for {a}, {b}");
            }
        }
    }

    #[test]
    fn first_kind_block_is_equality() {
        // 9 ones: both sides reduce to 9^{1/3}
        let block = SparseSequence::indicator(-4..=4);
        let r = verify_constant_one(
            &[block],
            &exp(1.0, 3.0),
            &exp(2.0, 3.0),
            RegimeKind::FirstKind,
            None,
        )
        .unwrap();
        assert!((r.max_ratio - 1.0).abs() < 1e-12);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn single_spike_ratio_one() {
        let spike = SparseSequence::from_pairs([(3, 2.5)]).unwrap();
        for kind in [
            RegimeKind::FirstKind,
            RegimeKind::QMonotone,
            RegimeKind::WeakQMonotone,
        ] {
            let (e1, e2) = match kind {
                RegimeKind::FirstKind => (exp(1.0, 3.0), exp(2.0, 3.0)),
                _ => (exp(2.0, 2.0), exp(2.0, 3.0)),
            };
            let r = verify_constant_one(&[spike.clone()], &e1, &e2, kind, None).unwrap();
            assert_eq!(r.max_ratio, 1.0, "{kind:?}");
        }
    }

    #[test]
    fn second_kind_corpus_clean() {
        let corpus = random_corpus(20260823, &CorpusSpec::standard(200));
        let r = verify_constant_one(
            &corpus,
            &exp(1.0, 2.0),
            &exp(2.0, 4.0),
            RegimeKind::SecondKind,
            Some(20260823),
        )
        .unwrap();
        assert!(r.max_ratio <= 1.0 + VERIFY_SLACK, "max_ratio {}", r.max_ratio);
        assert!(r.violations.is_empty());
        assert_eq!(r.trials, 200);
        assert_eq!(r.seed, Some(20260823));
    }

    #[test]
    fn weak_second_kind_corpus_clean() {
        let corpus = random_corpus(7, &CorpusSpec::standard(120));
        let r = verify_constant_one(
            &corpus,
            &exp(1.0, 2.0),
            &exp(2.0, 4.0),
            RegimeKind::WeakSecondKind,
            Some(7),
        )
        .unwrap();
        assert!(r.violations.is_empty(), "max_ratio {}", r.max_ratio);
    }

    #[test]
    fn verify_rejects_inapplicable_tag() {
        let corpus = random_corpus(1, &CorpusSpec::standard(2));
        assert!(verify_constant_one(
            &corpus,
            &exp(2.0, 3.0),
            &exp(1.0, 3.0),
            RegimeKind::FirstKind,
            None
        )
        .is_err());
        assert!(verify_constant_one(
            &corpus,
            &exp(1.0, 3.0),
            &exp(2.0, 3.0),
            RegimeKind::WeakToStrong,
            None
        )
        .is_err());
    }

    #[test]
    fn q_monotone_block_ratio_closed_form() {
        // indicator blocks give equality ||x|| = (2K+1)^{1/q}
        let (q1, q2) = (2.0, 3.0);
        for k in [1u64, 4, 10] {
            let block = SparseSequence::indicator(-(k as i64)..=k as i64);
            let lhs = discrete_norm(&block, &exp(2.0, q2)).value;
            let rhs = discrete_norm(&block, &exp(2.0, q1)).value;
            let card = (2 * k + 1) as f64;
            assert!((rhs - card.powf(1.0 / q1)).abs() < 1e-12 * rhs);
            let expect = card.powf(1.0 / q2 - 1.0 / q1);
            assert!((lhs / rhs - expect).abs() < 1e-12);
            assert!(lhs / rhs < 1.0);
        }
    }

    #[test]
    fn t8_constant_examples() {
        assert!((t8_bound_constant(1.0, 2.0, 3.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((t8_bound_constant(2.0, 4.0, 4.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(t8_bound_constant(1.0, 1.0, 2.0).is_err());
        assert!(t8_bound_constant(2.0, 3.0, f64::INFINITY).is_err());
    }

    #[test]
    fn t8_spike_and_block() {
        let spike = SparseSequence::from_pairs([(0, 1.0)]).unwrap();
        let r = verify_t8(&[spike], 1.0, 2.0, 3.0, None).unwrap();
        assert_eq!(r.constant_used, 2.0);
        assert!((r.max_ratio - 0.5).abs() < 1e-12);
        let block = SparseSequence::indicator(-4..=4);
        let rb = verify_t8(&[block], 1.0, 2.0, 3.0, None).unwrap();
        assert!((rb.max_ratio - 0.5).abs() < 1e-12);
        assert!(rb.violations.is_empty());
    }

    #[test]
    fn t8_corpus_clean() {
        let corpus = random_corpus(99, &CorpusSpec::standard(200));
        let r = verify_t8(&corpus, 1.0, 2.0, 3.0, Some(99)).unwrap();
        assert!(r.violations.is_empty(), "max_ratio {}", r.max_ratio);
        assert_eq!(r.trials, 200);
    }

    #[test]
    fn report_json_shape() {
        let corpus = random_corpus(5, &CorpusSpec::standard(3));
        let r = verify_t8(&corpus, 1.0, 2.0, 3.0, Some(5)).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in ["regime", "trials", "max_ratio", "constant_used", "violations", "seed"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["regime"], "weak-to-strong");
    }
}
