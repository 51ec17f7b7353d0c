//! The lemma-check and truncation drivers.

use compspec_core::algebra_lab::{self, run_trial, trial_seed, truncated_matrix, Lemma};
use compspec_core::spectrum::synthesize;
use compspec_core::Tolerances;
use rayon::prelude::*;
use serde::Serialize;

use crate::input::{pair, Pair, SymbolDocument};
use crate::report::{region_distance, region_doc, PrimitiveDoc, SCHEMA};
use crate::Failure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFailure {
    pub index: usize,
    pub seed: u64,
    /// Present when the trial errored rather than finding a mismatch.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSummary {
    pub schema: &'static str,
    pub lemma: &'static str,
    pub n: usize,
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub failures: Vec<TrialFailure>,
}

/// Runs trials in parallel; results are gathered in trial order, so the
/// summary does not depend on scheduling.
pub fn lemma_check(lemma: Lemma, n: usize, order: usize, trials: usize, seed: u64) -> LemmaSummary {
    let failures: Vec<TrialFailure> = (0..trials)
        .into_par_iter()
        .filter_map(|index| {
            let s = trial_seed(seed, index as u64);
            match run_trial(lemma, n, order, s) {
                Ok(true) => None,
                Ok(false) => Some(TrialFailure {
                    index,
                    seed: s,
                    error: None,
                }),
                Err(e) => Some(TrialFailure {
                    index,
                    seed: s,
                    error: Some(e.to_string()),
                }),
            }
        })
        .collect();
    LemmaSummary {
        schema: SCHEMA,
        lemma: lemma.name(),
        n: lemma.effective_n(n),
        order,
        trials,
        seed,
        passed: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationReport {
    pub schema: &'static str,
    /// Truncation spectra are not known to converge; the cloud is a
    /// diagnostic only.
    pub heuristic: bool,
    pub order: usize,
    pub eigenvalues: Vec<Pair>,
    pub predicted_full: Option<Vec<PrimitiveDoc>>,
    pub distances: Option<Vec<f64>>,
    pub notes: Vec<String>,
}

pub fn truncate(
    doc: &SymbolDocument,
    order: usize,
    tol: &Tolerances,
) -> Result<TruncationReport, Failure> {
    let (num, den) = doc.polynomials()?;
    let m = truncated_matrix(&num, &den, order)?;
    let eig = algebra_lab::eigenvalues(&m)?;
    let mut notes = Vec::new();
    let predicted = match doc.to_symbol(tol).and_then(|s| Ok(synthesize(&s, tol)?)) {
        Ok(rep) => Some(rep.full),
        Err(f) => {
            notes.push(format!("no spectrum prediction: {f}"));
            None
        }
    };
    let distances = predicted.as_ref().map(|r| {
        eig.eigenvalues()
            .iter()
            .map(|z| region_distance(r, *z))
            .collect()
    });
    Ok(TruncationReport {
        schema: SCHEMA,
        heuristic: true,
        order,
        eigenvalues: eig.eigenvalues().iter().copied().map(pair).collect(),
        predicted_full: predicted.as_ref().map(region_doc),
        distances,
        notes,
    })
}
