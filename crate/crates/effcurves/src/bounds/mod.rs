//! Effective bounds: the constant ledger, the theorem-level estimates built
//! from it, Dehn filling thresholds, and machine verification of the
//! assembly chains.

pub mod chains;
pub mod dehn;
pub mod ledger;
pub mod theorems;

pub use chains::{
    builtin_corpus, chain_ids, identity_chains, load_corpus_dir, verify_assembly,
    verify_corpus_chain, ChainCert, ChainStatus, ChainStep, CorpusChain, ExponentCheck,
};
pub use dehn::{dehn_filling_check, dehn_filling_threshold, FillingCheck, MeridianData};
pub use ledger::{make_ledger, ConstantLedger, Monomial, Variant};
pub use theorems::{
    curves_per_segment, efficiency_bound, efficiency_bound_simplified,
    efficiency_simplified_dominates, end_curve_bounds, meridian_lower, theorem_a_pipeline,
    thm_a_length_bound, thm_a_threshold, thm_b_bound, width_bound, EndCurveBounds,
    PipelineStage, PipelineTrace,
};

use crate::certify::EvalError;
use crate::interval::NumError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BoundsError {
    #[error("invalid eps0: {0}")]
    InvalidEps0(String),
    #[error("hypothesis not certified: {0}")]
    BelowThreshold(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Num(#[from] NumError),
}
