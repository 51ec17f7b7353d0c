use alloc::string::String;
use alloc::vec::Vec;

use crate::C64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite value")]
    NonFinite,
    #[error("near-singular linear-fractional map (determinant {0:e})")]
    DegenerateMobius(f64),
    #[error("pole at z = {0}")]
    Pole(C64),
    #[error("invalid second-order data: {0}")]
    InvalidSecondOrderData(&'static str),
    #[error("not order-2 contact data")]
    NotOrderTwoContact,
    #[error("map is a disk automorphism")]
    Automorphism,
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("not in scope: inner symbol")]
    InnerSymbol,
    #[error("contact order exceeds 2 at {0}")]
    ContactOrderExceedsTwo(C64),
    #[error("root finder did not converge: {0}")]
    RootFinding(&'static str),
    #[error("eigenvalue iteration did not converge (order {0})")]
    EigenNonConvergence(usize),
    #[error("{0} is not in the contact set")]
    NotInContactSet(C64),
    #[error("no Denjoy-Wolff point found among candidates {candidates:?}")]
    DenjoyWolffNotFound { candidates: Vec<C64> },
    #[error("violates Parabolic-Type Test premise Re(ωφ''(ω)) ≥ 0")]
    ParabolicTestPremise,
    #[error("parabolic automorphism type is not covered by synthesis")]
    ParabolicAutomorphismType,
    #[error(
        "ambiguous boundary match for {0}: shrink the matching tolerance or separate the data"
    )]
    AmbiguousMatch(C64),
    #[error("contact points closer than 10x the matching tolerance")]
    PointsTooClose,
    #[error("cycle of length {length} has multiplier {multiplier} <= 1")]
    CycleNotExpanding { length: usize, multiplier: f64 },
    #[error("symbol is not certified S(2): {0}")]
    NotS2(String),
    #[error("no cycles in the partition; use the compact/power-compact path")]
    NoCycles,
    #[error("precondition unmet for kms2t_essential_union: {0}; use synthesize")]
    Kms2tPrecondition(&'static str),
    #[error("annihilation pattern verification failed: {0}")]
    PatternVerification(String),
    #[error("invalid family parameters: {0}")]
    FamilyParameters(String),
    #[error("matrix order {order} exceeds limit {limit}")]
    OrderTooLarge { order: usize, limit: usize },
    #[error("singular matrix")]
    Singular,
    #[error("denominator constant term vanishes")]
    ZeroConstantTerm,
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Stable machine-readable reason string.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::NonFinite => "non-finite",
            Error::DegenerateMobius(_) => "near-singular composition",
            Error::Pole(_) => "pole",
            Error::InvalidSecondOrderData(_) => "invalid second-order data",
            Error::NotOrderTwoContact => "not order-2 contact data",
            Error::Automorphism => "automorphism",
            Error::InvalidSymbol(_) => "invalid symbol",
            Error::DegreeCap { .. } => "degree cap exceeded",
            Error::InnerSymbol => "not in scope: inner symbol",
            Error::ContactOrderExceedsTwo(_) => "contact order exceeds 2",
            Error::RootFinding(_) => "root finder non-convergence",
            Error::EigenNonConvergence(_) => "eigensolver non-convergence",
            Error::NotInContactSet(_) => "not in contact set",
            Error::DenjoyWolffNotFound { .. } => "no Denjoy-Wolff point",
            Error::ParabolicTestPremise => "violates Parabolic-Type Test premise",
            Error::ParabolicAutomorphismType => "parabolic automorphism type",
            Error::AmbiguousMatch(_) => "ambiguous match",
            Error::PointsTooClose => "contact points too close",
            Error::CycleNotExpanding { .. } => "cycle not expanding",
            Error::NotS2(_) => "not S(2)",
            Error::NoCycles => "no cycles",
            Error::Kms2tPrecondition(_) => "kms2t precondition",
            Error::PatternVerification(_) => "pattern verification failure",
            Error::FamilyParameters(_) => "invalid family parameters",
            Error::OrderTooLarge { .. } => "order too large",
            Error::Singular => "singular matrix",
            Error::ZeroConstantTerm => "denominator constant term ~0",
            Error::Inconsistent(_) => "inconsistent data",
        }
    }
}
