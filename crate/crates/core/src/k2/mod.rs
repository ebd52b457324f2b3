//! `K2(A,F)` as a product of quotients of `K2(F)` and `K2(2,F)`.
//!
//! The group is modelled at the level of exponents: slot `i` is `K2(F)` or
//! `K2(2,F)` according to the parity of column `i`, and relations identify
//! powers of the first symbol argument across slots. Field elements are
//! never instantiated.

mod conjecture;
mod factor;
mod pipeline;
mod presentation;
mod rules;
mod trace;

pub use conjecture::{
    conjecture_analysis, conjecture_check, conjecture_predict, ConjectureAnalysis,
    ConjectureCheck, Verdict,
};
pub use factor::{canonicalize, k2_equiv, FactorKind, K2Factor};
pub use pipeline::{k2, k2_with, resolve_residual, Deletion, K2Result, Options};
pub use presentation::{
    build_presentation, reduce_delete_column, DeletionError, GenPresentation, Link, SlotKind,
    Torsion,
};
pub use rules::{
    exponent_relations, finite_affine_closed_form, leaf_deletions, match_class1, match_class2,
    match_class3, reduce_class_formulas, reduce_odd_columns, reduce_rank2, split_components,
    ClassMatch, RuleError,
};
pub use trace::{Rule, Trace, TraceStep};
