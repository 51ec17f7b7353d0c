use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::family::{make_family, AnnihilationFamily, Pattern};
use super::{covered, eigenvalues, nth_roots, SpectrumSet};
use crate::linalg::SquareMatrix;
use crate::{Error, Result, C64};

/// Set-matching tolerance, relative to the Frobenius norm.
pub const MATCH_TOL: f64 = 1e-7;
/// Eigenvalues below this (relative to the Frobenius norm) always count as
/// zero. Nilpotent summands perturb zero eigenvalues by roughly `√ε_mach`,
/// so this sits well above `1e-8`.
pub const ZERO_TOL: f64 = 1e-6;
/// Relative threshold for zero eigenvalues of products before root-taking.
const PRODUCT_ZERO_TOL: f64 = 1e-9;

fn require(f: &AnnihilationFamily, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::FamilyParameters(alloc::format!(
            "{what} requires a different family, got {:?} with {} matrices",
            f.pattern(),
            f.matrices().len()
        )))
    }
}

/// A set as all its eigenvalues plus those deemed nonzero.
struct Side {
    all: Vec<C64>,
    nonzero: Vec<C64>,
}

impl Side {
    fn spectrum(s: &SpectrumSet, scale: f64) -> Self {
        Self {
            all: s.eigenvalues().to_vec(),
            nonzero: s.nonzero(zero_threshold(s.eigenvalues(), scale)),
        }
    }

    /// `{λ : λⁿ ∈ σ(p)}`, zero-filtered on `σ(p)` before taking roots.
    fn roots_of(p: &SquareMatrix, n: usize) -> Result<Self> {
        let s = eigenvalues(p)?;
        let zt = PRODUCT_ZERO_TOL * p.frobenius_norm();
        Ok(Self {
            all: nth_roots(s.eigenvalues(), n),
            nonzero: nth_roots(&s.nonzero(zt), n),
        })
    }

    fn union(sides: Vec<Side>) -> Self {
        let mut all = Vec::new();
        let mut nonzero = Vec::new();
        for s in sides {
            all.extend(s.all);
            nonzero.extend(s.nonzero);
        }
        Self { all, nonzero }
    }
}

/// Modulus up to which eigenvalues count as zero. A Jordan block of size `m`
/// at 0 computes as a ring of radius about `(ε_mach·N)^{1/m}·‖·‖`, so the `m`
/// smallest eigenvalues are taken as one zero cluster when they all fit in
/// ten times that radius and the next eigenvalue is at least a hundred times
/// farther out; the largest such `m` wins. Below `ZERO_TOL` is always zero.
pub fn zero_threshold(eigs: &[C64], scale: f64) -> f64 {
    let mut moduli: Vec<f64> = eigs.iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let unit = f64::EPSILON * eigs.len().max(1) as f64;
    let mut threshold = ZERO_TOL * scale;
    for (k, r) in moduli.iter().enumerate() {
        let radius = 10.0 * scale * unit.powf(1.0 / (k + 1) as f64);
        let gap = moduli.get(k + 1).is_some_and(|next| *next >= 100.0 * r);
        if *r <= radius && gap {
            threshold = threshold.max(*r * (1.0 + 1e-12));
        }
    }
    threshold
}

/// Nonzero parts agree as sets; each side's nonzero elements are matched
/// against the whole of the other side.
fn agree(a: &Side, b: &Side, tol: f64) -> bool {
    covered(&a.nonzero, &b.all, tol) && covered(&b.nonzero, &a.all, tol)
}

fn scale_of<'a>(ms: impl IntoIterator<Item = &'a SquareMatrix>) -> f64 {
    ms.into_iter()
        .map(|m| m.frobenius_norm())
        .fold(f64::MIN_POSITIVE, f64::max)
}

fn summand_sides(f: &AnnihilationFamily, scale: f64) -> Result<Side> {
    let sides = f
        .matrices()
        .iter()
        .map(|a| eigenvalues(a).map(|s| Side::spectrum(&s, scale)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Side::union(sides))
}

/// `σ(a_1 + a_2) ⊆ σ(a_1) ∪ σ(a_2)` when `a_1 a_2 = 0`.
pub fn check_inclusion_fl(f: &AnnihilationFamily) -> Result<bool> {
    require(
        f,
        matches!(f.pattern(), Pattern::OneWay | Pattern::TwoSided) && f.matrices().len() == 2,
        "FL",
    )?;
    inclusion(f)
}

/// `σ(Σ a_j) ⊆ ∪ σ(a_j)` when `a_i a_j = 0` for `i < j`.
pub fn check_union_flc(f: &AnnihilationFamily) -> Result<bool> {
    require(
        f,
        matches!(f.pattern(), Pattern::OneWay | Pattern::TwoSided),
        "FLC",
    )?;
    inclusion(f)
}

fn inclusion(f: &AnnihilationFamily) -> Result<bool> {
    let sum = f.sum();
    let scale = scale_of(f.matrices().iter().chain([&sum]));
    let lhs = eigenvalues(&sum)?;
    let rhs = summand_sides(f, scale)?;
    Ok(covered(lhs.eigenvalues(), &rhs.all, MATCH_TOL * scale))
}

/// `σ(a_1 + a_2) \ {0} = (σ(a_1) ∪ σ(a_2)) \ {0}` when `a_1 a_2 = a_2 a_1 = 0`.
pub fn check_equality_ta(f: &AnnihilationFamily) -> Result<bool> {
    require(
        f,
        f.pattern() == Pattern::TwoSided && f.matrices().len() == 2,
        "TA",
    )?;
    equality(f)
}

/// The `n`-term version of [`check_equality_ta`].
pub fn check_equality_cta(f: &AnnihilationFamily) -> Result<bool> {
    require(f, f.pattern() == Pattern::TwoSided, "CTA")?;
    equality(f)
}

fn equality(f: &AnnihilationFamily) -> Result<bool> {
    let sum = f.sum();
    let scale = scale_of(f.matrices().iter().chain([&sum]));
    let lhs = Side::spectrum(&eigenvalues(&sum)?, scale);
    let rhs = summand_sides(f, scale)?;
    Ok(agree(&lhs, &rhs, MATCH_TOL * scale))
}

/// `σ(a_1 + a_2) \ {0} = σ(a_1) \ {0}` when `a_1 a_2 = 0` and `a_2² = 0`.
pub fn check_lip(f: &AnnihilationFamily) -> Result<bool> {
    require(f, f.pattern() == Pattern::LeadIn, "LIP")?;
    let sum = f.sum();
    let a1 = &f.matrices()[0];
    let scale = scale_of([a1, &sum]);
    let lhs = Side::spectrum(&eigenvalues(&sum)?, scale);
    let rhs = Side::spectrum(&eigenvalues(a1)?, scale);
    Ok(agree(&lhs, &rhs, MATCH_TOL * scale))
}

/// For `a_1² = a_2² = 0`, the nonzero parts of `σ(a_1 + a_2)`,
/// `{λ : λ² ∈ σ(a_1 a_2)}` and `{λ : λ² ∈ σ(a_2 a_1)}` coincide pairwise.
pub fn check_n2c(f: &AnnihilationFamily) -> Result<bool> {
    require(
        f,
        matches!(
            f.pattern(),
            Pattern::NilpotentPair | Pattern::Cyclic { n: 2 }
        ),
        "n2c",
    )?;
    let [a1, a2] = [&f.matrices()[0], &f.matrices()[1]];
    let sum = f.sum();
    let p12 = a1.mul(a2);
    let p21 = a2.mul(a1);
    let scale = scale_of([&sum, a1, a2]).max(p12.frobenius_norm().sqrt());
    let tol = MATCH_TOL * scale;
    let lhs = Side::spectrum(&eigenvalues(&sum)?, scale);
    let r12 = Side::roots_of(&p12, 2)?;
    let r21 = Side::roots_of(&p21, 2)?;
    Ok(agree(&lhs, &r12, tol) && agree(&lhs, &r21, tol) && agree(&r12, &r21, tol))
}

/// For a cyclic family, nonzero `σ(Σ a_j)` equals `{λ ≠ 0 : λⁿ ∈ σ(a_0⋯a_{n−1})}`.
/// Also checks invariance of the left side under rotation by `n`th roots
/// of unity, and that every cyclic shift `a_k⋯a_{k−1}` of the product gives
/// the same set.
pub fn check_rsm(f: &AnnihilationFamily) -> Result<bool> {
    let n = match f.pattern() {
        Pattern::Cyclic { n } => n,
        Pattern::NilpotentPair => 2,
        _ => return require(f, false, "RSM").map(|_| false),
    };
    let sum = f.sum();
    let ms = f.matrices();
    let products: Vec<SquareMatrix> = (0..n)
        .map(|k| SquareMatrix::product((0..n).map(|j| &ms[(k + j) % n])).expect("nonempty"))
        .collect();
    let root_scale = products
        .iter()
        .map(|p| p.frobenius_norm().powf(1.0 / n as f64))
        .fold(0.0, f64::max);
    let scale = scale_of(ms.iter().chain([&sum])).max(root_scale);
    let tol = MATCH_TOL * scale;
    let lhs = Side::spectrum(&eigenvalues(&sum)?, scale);

    let unity = C64::from_polar(1.0, 2.0 * core::f64::consts::PI / n as f64);
    let rotated: Vec<C64> = lhs.nonzero.iter().map(|z| z * unity).collect();
    if !covered(&rotated, &lhs.all, tol) {
        return Ok(false);
    }
    for p in &products {
        if !agree(&lhs, &Side::roots_of(p, n)?, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nonzero spectra of `ab` and `ba` coincide.
pub fn check_jacobson(a: &SquareMatrix, b: &SquareMatrix) -> Result<bool> {
    let ab = a.mul(b);
    let ba = b.mul(a);
    let scale = scale_of([&ab, &ba]);
    let l = Side::spectrum(&eigenvalues(&ab)?, scale);
    let r = Side::spectrum(&eigenvalues(&ba)?, scale);
    Ok(agree(&l, &r, MATCH_TOL * scale))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    Fl,
    Flc,
    Ta,
    Cta,
    Lip,
    N2c,
    Rsm,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [
        Lemma::Fl,
        Lemma::Flc,
        Lemma::Ta,
        Lemma::Cta,
        Lemma::Lip,
        Lemma::N2c,
        Lemma::Rsm,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Lemma::Fl => "fl",
            Lemma::Flc => "flc",
            Lemma::Ta => "ta",
            Lemma::Cta => "cta",
            Lemma::Lip => "lip",
            Lemma::N2c => "n2c",
            Lemma::Rsm => "rsm",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
    }

    /// The family pattern this lemma is tested on, with `n` members where
    /// the lemma allows a choice.
    pub fn pattern(&self, n: usize) -> Pattern {
        match self {
            Lemma::Fl | Lemma::Flc => Pattern::OneWay,
            Lemma::Ta | Lemma::Cta => Pattern::TwoSided,
            Lemma::Lip => Pattern::LeadIn,
            Lemma::N2c => Pattern::NilpotentPair,
            Lemma::Rsm => Pattern::Cyclic { n },
        }
    }

    /// Member count actually used: FL, TA and the pair lemmas fix `n = 2`.
    pub fn effective_n(&self, n: usize) -> usize {
        match self {
            Lemma::Fl | Lemma::Ta | Lemma::Lip | Lemma::N2c => 2,
            _ => n,
        }
    }

    pub fn check(&self, f: &AnnihilationFamily) -> Result<bool> {
        match self {
            Lemma::Fl => check_inclusion_fl(f),
            Lemma::Flc => check_union_flc(f),
            Lemma::Ta => check_equality_ta(f),
            Lemma::Cta => check_equality_cta(f),
            Lemma::Lip => check_lip(f),
            Lemma::N2c => check_n2c(f),
            Lemma::Rsm => check_rsm(f),
        }
    }
}

/// Per-trial seed: a SplitMix64 finalizer over the master seed and index.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Builds the family for one trial and runs the lemma on it.
pub fn run_trial(lemma: Lemma, n: usize, order: usize, seed: u64) -> Result<bool> {
    let n = lemma.effective_n(n);
    let f = make_family(lemma.pattern(n), n, order, seed)?;
    lemma.check(&f)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub lemma: Lemma,
    pub trials: usize,
    /// Seeds of failing trials, each with the error if the trial errored.
    pub failures: Vec<(u64, Option<Error>)>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `trials` seeded trials sequentially.
pub fn run_suite(lemma: Lemma, n: usize, order: usize, trials: usize, master: u64) -> SuiteSummary {
    let mut failures = Vec::new();
    for i in 0..trials {
        let seed = trial_seed(master, i as u64);
        match run_trial(lemma, n, order, seed) {
            Ok(true) => {}
            Ok(false) => failures.push((seed, None)),
            Err(e) => failures.push((seed, Some(e))),
        }
    }
    SuiteSummary {
        lemma,
        trials,
        failures,
    }
}
