//! The quasi-norms of `B^w_{p(·),q(·)}` / `F^w_{p(·),q(·)}` and the
//! corpus-level checks built on them.

pub mod checks;
pub mod corpus;
pub mod spec;

pub use checks::{
    classical_check, embedding_check, embedding_checks, embedding_condition, equivalence_report, lifting_check,
    local_means_check, maximal_check, multiplier_bound_checks, pair_independence_check, quasi_triangle_bound,
    quasi_triangle_ratio, remark63_sum_check, schwartz_embedding_checks, ClassicalReport, EquivalenceReport,
    LiftingReport, MaximalCheckReport, MeasuredConstant, MultiplierMode, MultiplierReport, SchwartzReport,
    SpaceEmbeddingReport, DRIFT_TOLERANCE,
};
pub use corpus::{Corpus, CorpusFunction, CorpusKind, CORPUS_SEED, CORPUS_SIZE};
pub use spec::{
    quasi_norm, quasi_norm_local_means, quasi_norm_maximal, quasi_norm_maximal_with, ExponentRecipe, MaximalNorms,
    PointFn, Scale, SpaceRecipe, SpaceSpec, SystemRecipe, Thresholds, WeightRecipe,
};
