//! Fourier-side resolution systems and the operators built on them.

pub mod jet;
pub mod local_means;
pub mod operators;
pub mod symbol;
pub mod system;

pub use jet::{smoothstep, smoothstep_jet, Jet};
pub use local_means::{local_means, BumpKernel, LocalMeansKernels};
pub use operators::{apply_multiplier, bessel_norm, lift, littlewood_paley, multi_indices, p_n_seminorm, peetre_maximal};
pub use symbol::{
    h2_kappa_norm, multiplier_norm_2l, symbol_mask, BesselSymbol, ConstantSymbol, DerivativeSymbol, H2KappaReport,
    Norm2lReport, Symbol,
};
pub use system::{
    audit_admissible, covering_levels, default_levels, max_levels, satisfies_general_conditions, AdmissibilityAudit,
    AnalysisSystem, Profile, SystemKind,
};
