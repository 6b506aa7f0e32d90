//! Discrete Morrey space toolkit: windowed l^p norms over Z with
//! sup-over-windows weights, their weak-type quasi-norms, inclusion
//! verification across exponent regimes, witness-sequence constructions,
//! and a step-function bridge to continuous Morrey norms on R.

pub mod continuous;
pub mod corpus;
pub mod counterexamples;
pub mod error;
pub mod exponents;
pub mod inclusion;
pub mod norm;
pub mod sequence;
pub mod window;

pub use continuous::{
    continuous_norm_grid, embed_step, integer_odd_norm, weak_continuous_norm_grid,
    GridNormEstimate, StepFunction,
};
pub use corpus::{random_corpus, random_exponents, CorpusSpec, GENERATOR_NAME};
pub use counterexamples::{
    check_vw, compute_k0, count_ratio, divergence_exponent, gen_block, gen_lacunary,
    gen_power_sequence, growth_fit, lacunary_truncation, solve_vw, CounterexampleParams,
    GrowthFit, LevelNorm, SolveMode,
};
pub use error::{MorreyError, Result};
pub use exponents::Exponents;
pub use inclusion::{
    classify, t8_bound_constant, verify_constant_one, verify_t8, InclusionRegime, RegimeKind,
    RegimeTag, VerificationReport, Violation, VERIFY_SLACK,
};
pub use norm::{
    dense_oracle_norm, discrete_norm, sup_norm, weak_norm, window_value, NormMethod, NormResult,
    PrefixPowerTable, ThresholdSweep,
};
pub use sequence::SparseSequence;
pub use window::{ln_cardinality, minimal_cover, window_weight, Window};
