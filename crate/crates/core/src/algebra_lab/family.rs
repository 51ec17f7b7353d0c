use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::SquareMatrix;
use crate::{Error, Result, C64};

/// Relative size below which a pairwise product counts as zero.
const PRODUCT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// `a_i a_j = 0` for `i < j`.
    OneWay,
    /// `a_i a_j = 0` for `i ≠ j`.
    TwoSided,
    /// `a_1² = a_2² = 0`.
    NilpotentPair,
    /// `a_1 a_2 = 0` and `a_2² = 0`.
    LeadIn,
    /// `a_j a_k = 0` unless `k = j + 1 mod n`.
    Cyclic { n: usize },
}

impl Pattern {
    /// Pairs `(i, j)` whose product `a_i a_j` must vanish.
    fn vanishing(&self, count: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..count {
            for j in 0..count {
                let zero = match self {
                    Pattern::OneWay => i < j,
                    Pattern::TwoSided => i != j,
                    Pattern::NilpotentPair => i == j,
                    Pattern::LeadIn => (i, j) == (0, 1) || (i, j) == (1, 1),
                    Pattern::Cyclic { n } => j != (i + 1) % n,
                };
                if zero {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn expected_count(&self, n: usize) -> Option<usize> {
        match self {
            Pattern::NilpotentPair | Pattern::LeadIn => Some(2),
            Pattern::Cyclic { n: m } => Some(*m),
            Pattern::OneWay | Pattern::TwoSided => (n >= 1).then_some(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilationFamily {
    matrices: Vec<SquareMatrix>,
    pattern: Pattern,
}

impl AnnihilationFamily {
    /// Wraps matrices after checking the declared pattern numerically.
    pub fn new(matrices: Vec<SquareMatrix>, pattern: Pattern) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::FamilyParameters("empty family".into()));
        };
        let order = first.order();
        if matrices.iter().any(|m| m.order() != order) {
            return Err(Error::FamilyParameters("matrices of unequal order".into()));
        }
        if pattern.expected_count(matrices.len()) != Some(matrices.len()) {
            return Err(Error::FamilyParameters(format!(
                "{pattern:?} needs a different number of matrices than {}",
                matrices.len()
            )));
        }
        for (i, j) in pattern.vanishing(matrices.len()) {
            let p = matrices[i].mul(&matrices[j]).frobenius_norm();
            let scale = matrices[i].frobenius_norm() * matrices[j].frobenius_norm();
            if p > PRODUCT_TOL * scale {
                return Err(Error::PatternVerification(format!(
                    "|a{i} a{j}| = {p:e} exceeds tolerance for {pattern:?}"
                )));
            }
        }
        Ok(Self { matrices, pattern })
    }

    pub fn matrices(&self) -> &[SquareMatrix] {
        &self.matrices
    }

    pub fn pattern(&self) -> Pattern {
        self.pattern
    }

    pub fn order(&self) -> usize {
        self.matrices[0].order()
    }

    /// `S a_j S⁻¹` for every member; products and spectra are preserved.
    pub fn conjugate(&self, s: &SquareMatrix) -> Result<Self> {
        let inv = s.inverse()?;
        let matrices = self.matrices.iter().map(|a| s.mul(a).mul(&inv)).collect();
        Self::new(matrices, self.pattern)
    }

    pub fn sum(&self) -> SquareMatrix {
        SquareMatrix::sum(&self.matrices).expect("nonempty")
    }
}

/// Near-equal block sizes summing to `order`.
fn block_ranges(order: usize, blocks: usize) -> Vec<core::ops::Range<usize>> {
    let base = order / blocks;
    let extra = order % blocks;
    let mut start = 0;
    (0..blocks)
        .map(|k| {
            let len = base + usize::from(k < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

fn random_c(rng: &mut ChaCha8Rng, scale: f64) -> C64 {
    C64::new(
        rng.random::<f64>() * 2.0 - 1.0,
        rng.random::<f64>() * 2.0 - 1.0,
    ) * scale
}

/// Random entries on `rows × cols` (given as lists of block indices).
fn block_matrix(
    rng: &mut ChaCha8Rng,
    ranges: &[core::ops::Range<usize>],
    order: usize,
    rows: &[usize],
    cols: &[usize],
) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(order);
    let width: usize = cols.iter().map(|&c| ranges[c].len()).sum();
    let scale = 1.0 / (width.max(1) as f64).sqrt();
    for &rb in rows {
        for i in ranges[rb].clone() {
            for &cb in cols {
                for j in ranges[cb].clone() {
                    m[(i, j)] = random_c(rng, scale);
                }
            }
        }
    }
    m
}

/// Unitary Householder reflector times `I + E` with `‖E‖_F = 0.9`, so the
/// condition number is at most 19.
pub fn random_similarity(order: usize, rng: &mut ChaCha8Rng) -> SquareMatrix {
    let v: Vec<C64> = (0..order).map(|_| random_c(rng, 1.0)).collect();
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut h = SquareMatrix::identity(order);
    if vv > 0.0 {
        for i in 0..order {
            for j in 0..order {
                h[(i, j)] -= v[i] * v[j].conj() * (2.0 / vv);
            }
        }
    }
    let mut e = SquareMatrix::zeros(order);
    for i in 0..order {
        for j in 0..order {
            e[(i, j)] = random_c(rng, 1.0);
        }
    }
    let norm = e.frobenius_norm();
    let e = e.scale(C64::new(0.9 / norm, 0.0));
    h.mul(&SquareMatrix::identity(order).add(&e))
}

/// A random family realizing `pattern` exactly through block supports,
/// conjugated by one random well-conditioned similarity.
///
/// Coordinates are split into near-equal blocks `V_0, …`; each matrix has
/// nonzero rows only in its target blocks and columns only in its source
/// blocks.
pub fn make_family(
    pattern: Pattern,
    n: usize,
    order: usize,
    seed: u64,
) -> Result<AnnihilationFamily> {
    let count = match pattern {
        Pattern::NilpotentPair | Pattern::LeadIn => 2,
        Pattern::Cyclic { n: m } => m,
        Pattern::OneWay | Pattern::TwoSided => n,
    };
    if count == 0 || (matches!(pattern, Pattern::Cyclic { .. }) && count < 2) {
        return Err(Error::FamilyParameters(format!(
            "{pattern:?} with {count} matrices"
        )));
    }
    let blocks = match pattern {
        Pattern::NilpotentPair => 2,
        Pattern::LeadIn => 3,
        _ => count,
    };
    if order < blocks {
        return Err(Error::FamilyParameters(format!(
            "order {order} is smaller than the {blocks} blocks {pattern:?} needs"
        )));
    }
    if order > super::ORDER_LIMIT {
        return Err(Error::OrderTooLarge {
            order,
            limit: super::ORDER_LIMIT,
        });
    }
    let ranges = block_ranges(order, blocks);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices: Vec<SquareMatrix> = match pattern {
        Pattern::OneWay => (0..count)
            .map(|j| {
                let rows: Vec<usize> = (j..count).collect();
                block_matrix(&mut rng, &ranges, order, &rows, &[j])
            })
            .collect(),
        Pattern::TwoSided => (0..count)
            .map(|j| block_matrix(&mut rng, &ranges, order, &[j], &[j]))
            .collect(),
        Pattern::LeadIn => vec![
            block_matrix(&mut rng, &ranges, order, &[0, 1, 2], &[0, 2]),
            block_matrix(&mut rng, &ranges, order, &[1], &[2]),
        ],
        Pattern::NilpotentPair | Pattern::Cyclic { .. } => (0..count)
            .map(|j| block_matrix(&mut rng, &ranges, order, &[j], &[(j + 1) % count]))
            .collect(),
    };
    let s = random_similarity(order, &mut rng);
    AnnihilationFamily::new(matrices, pattern)?.conjugate(&s)
}
