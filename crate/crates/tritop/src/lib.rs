//! Triangular Toeplitz matrices as scalar sequences: generation,
//! inversion, fundamental-matrix identities, decay classification,
//! p-norm analysis, and executable theorem checks.
//!
//! A lower triangular Toeplitz matrix is determined by its first column
//! {a_k}; inversion is the power-series reciprocal of that symbol. The
//! crate provides an O(n^2) recurrence and an O(n log n) Newton
//! reciprocal that validate each other, plus validators for the bound
//! 0 <= u_k <= 1, the decay of u and b, the decay-rate inequality, the
//! sign pattern of log-convex inverses, and the sum |b_k| = 2 identity.

pub mod conv;
pub mod error;
pub mod inverse;
pub mod io;
pub mod norms;
pub mod seq;
pub mod sum;
pub mod theorems;

pub use conv::{conv_full, conv_truncated, ConvMethod, ConvPlan};
pub use error::{Error, Result};
pub use inverse::{
    default_newton_tol, exhaustive_residual_au, fundamental, invert_naive, invert_newton,
    residual_ab, residual_au, verify_uu, FundamentalResult, InverseMethod, InverseResult,
};
pub use norms::{
    estimate_decay_rate, generalized_holder_check, holder_check, pnorm, slow_decay_witness,
    young_convolution_check, young_product_check, DecayFit, HolderExponents, InequalityCheck,
    PNormValue, SlowDecayWitness, YoungConvCheck,
};
pub use seq::{
    classify, default_class_tol, generate, Decay, DecaySource, GeneratorKind, GeneratorSpec,
    RealSeq, SeqClass,
};
pub use theorems::{
    check_cor_b_decay, check_stmt2, check_thm1, check_thm4, check_thm_decay_rate,
    check_thm_final, TheoremId, TheoremReport, Witness,
};
