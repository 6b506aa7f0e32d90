//! Seeded random sequence corpora for inclusion verification. All
//! randomness flows through ChaCha8 seeded from a caller-supplied u64,
//! so every report is reproducible from its recorded seed.

use crate::sequence::SparseSequence;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Generator identifier recorded alongside seeds in reports.
pub const GENERATOR_NAME: &str = "corpus-v1";

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub trials: usize,
    pub max_support: usize,
    pub index_range: (i64, i64),
    pub value_range: (f64, f64),
}

impl CorpusSpec {
    /// Default shape: up to 50 support points in [-200, 200], values in
    /// (0, 10].
    pub fn standard(trials: usize) -> Self {
        CorpusSpec {
            trials,
            max_support: 50,
            index_range: (-200, 200),
            value_range: (0.0, 10.0),
        }
    }
}

/// Deterministic corpus of nonempty sequences.
pub fn random_corpus(seed: u64, spec: &CorpusSpec) -> Vec<SparseSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..spec.trials)
        .map(|_| random_sequence(&mut rng, spec))
        .collect()
}

fn random_sequence(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> SparseSequence {
    let size = rng.gen_range(1..=spec.max_support);
    let (lo, hi) = spec.index_range;
    let mut support: BTreeSet<i64> = BTreeSet::new();
    while support.len() < size {
        support.insert(rng.gen_range(lo..=hi));
    }
    let (vlo, vhi) = spec.value_range;
    let pairs: Vec<(i64, f64)> = support
        .into_iter()
        .map(|j| {
            // u in [0,1) maps to (vlo, vhi] so zeros never appear
            let u: f64 = rng.gen();
            (j, vhi - u * (vhi - vlo))
        })
        .collect();
    SparseSequence::from_pairs(pairs).expect("generator emits valid pairs")
}

/// A random exponent pair with p in [1, 4] and q in [p, 4], optionally
/// infinite with probability 1/8.
pub fn random_exponents(rng: &mut ChaCha8Rng, allow_infinite_q: bool) -> (f64, f64) {
    let p: f64 = 1.0 + rng.gen::<f64>() * 3.0;
    if allow_infinite_q && rng.gen_range(0..8) == 0 {
        return (p, f64::INFINITY);
    }
    let q = p + rng.gen::<f64>() * (4.0 - p);
    (p, q)
}
