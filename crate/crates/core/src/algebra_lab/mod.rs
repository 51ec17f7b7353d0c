//! Finite-matrix laboratory for spectral identities of annihilation families:
//! tuples of matrices with prescribed vanishing pairwise products.
//!
//! The identities concern spectra as sets, so every comparison here ignores
//! multiplicity and matches eigenvalues within a tolerance scaled by the
//! Frobenius norm of the matrices involved.

mod checks;
mod family;
mod truncation;

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

pub use crate::linalg::SquareMatrix;
use crate::{Error, Result, C64};

pub use checks::{
    check_equality_cta, check_equality_ta, check_inclusion_fl, check_jacobson, check_lip,
    check_n2c, check_rsm, check_union_flc, run_suite, run_trial, trial_seed, zero_threshold, Lemma,
    SuiteSummary, MATCH_TOL, ZERO_TOL,
};
pub use family::{make_family, random_similarity, AnnihilationFamily, Pattern};
pub use truncation::{truncated_matrix, truncated_symbol_matrix, TRUNCATION_LIMIT};

/// Largest order accepted by [`eigenvalues`].
pub const ORDER_LIMIT: usize = 128;

/// Eigenvalues of a matrix, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSet {
    eigenvalues: Vec<C64>,
}

impl SpectrumSet {
    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues with modulus above `zero_tol`.
    pub fn nonzero(&self, zero_tol: f64) -> Vec<C64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|z| z.norm() > zero_tol)
            .collect()
    }
}

/// Eigenvalues via balancing, Hessenberg reduction and shifted QR, each
/// re-verified by an inverse-iteration residual `≤ 1e-8·‖m‖_F`.
pub fn eigenvalues(m: &SquareMatrix) -> Result<SpectrumSet> {
    if m.order() > ORDER_LIMIT {
        return Err(Error::OrderTooLarge {
            order: m.order(),
            limit: ORDER_LIMIT,
        });
    }
    let eigenvalues = crate::linalg::eigenvalues(m)?;
    let norm = m.frobenius_norm();
    if norm == 0.0 {
        return Ok(SpectrumSet { eigenvalues });
    }
    let bound = 1e-8 * norm;
    for &lambda in &eigenvalues {
        if m.eigen_residual(lambda) > bound {
            return Err(Error::EigenNonConvergence(m.order()));
        }
    }
    Ok(SpectrumSet { eigenvalues })
}

/// Every element of `needles` lies within `tol` of some element of `haystack`.
pub fn covered(needles: &[C64], haystack: &[C64], tol: f64) -> bool {
    needles
        .iter()
        .all(|x| haystack.iter().any(|y| (x - y).norm() <= tol))
}

/// All `n`th roots of each element.
pub fn nth_roots(values: &[C64], n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(values.len() * n);
    for v in values {
        let r = v.norm().powf(1.0 / n as f64);
        let t = v.arg() / n as f64;
        for k in 0..n {
            out.push(C64::from_polar(
                r,
                t + 2.0 * core::f64::consts::PI * k as f64 / n as f64,
            ));
        }
    }
    out
}
