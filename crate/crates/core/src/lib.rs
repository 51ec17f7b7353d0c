//! Spectra and essential spectra of composition operators on the Hardy space
//! `H²(𝔻)` whose symbols lie in the class `S(2)` of self-maps with finite,
//! order-two boundary contact.
//!
//! The crate is `no_std` (it needs `alloc`). The pipeline is:
//!
//! 1. [`symbol`]: a self-map of the disk, given either as a rational function
//!    analytic on the closed disk or as explicit second-order boundary data.
//!    Extracts the contact set `E(φ)`, second-order data, the Denjoy–Wolff
//!    point and type, and certifies `S(2)` membership.
//! 2. [`dynamics`]: partitions `E(φ)` into iterate-out points, cycles and
//!    lead-in sets, with cycle multipliers.
//! 3. [`spectrum`]: synthesizes spectrum and essential spectrum as a
//!    canonical [`SpectralRegion`].
//!
//! [`mobius`] holds the linear-fractional machinery everything above is built
//! on, and [`algebra_lab`] is a finite-matrix laboratory that checks the
//! annihilation-sum spectral identities the synthesis relies on.

#![no_std]

extern crate alloc;

pub mod algebra_lab;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod mobius;
pub mod poly;
pub mod spectrum;
pub mod symbol;

pub use error::{Error, Result};
pub use mobius::{FixedPoint, FixedPoints, MobiusMap, SecondOrderData};
pub use spectrum::{Primitive, SpectralRegion, SpectrumReport};
pub use symbol::{BoundaryDataSymbol, DenjoyWolffRecord, RationalSymbol, Symbol, TypeClass};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Numerical tolerances shared by every stage of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Global "within tolerance" threshold.
    pub eps: f64,
    /// Matching tolerance for deciding `φ(ζ) ∈ E(φ)`.
    pub match_tol: f64,
    /// Target accuracy for polished roots.
    pub polish: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps: 1e-9,
            match_tol: 1e-7,
            polish: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_match_tol(mut self, match_tol: f64) -> Self {
        self.match_tol = match_tol;
        self
    }
}

/// `C64::new` that rejects NaN and infinite components.
pub fn finite(re: f64, im: f64) -> Result<C64> {
    if re.is_finite() && im.is_finite() {
        Ok(C64::new(re, im))
    } else {
        Err(Error::NonFinite)
    }
}

pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
