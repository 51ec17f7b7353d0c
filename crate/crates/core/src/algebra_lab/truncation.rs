use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::linalg::SquareMatrix;
use crate::poly::Poly;
use crate::symbol::RationalSymbol;
use crate::{Error, Result, C64};

/// Largest truncation order.
pub const TRUNCATION_LIMIT: usize = 512;

/// First `n` Maclaurin coefficients of `num/den`.
fn series_quotient(num: &Poly, den: &Poly, n: usize) -> Result<Vec<C64>> {
    let d = den.coeffs();
    let d0 = d.first().copied().unwrap_or_default();
    if d0.norm() <= 1e-14 * den.max_abs_coeff() || d0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let a = num.coeffs();
    let mut q = vec![C64::zero(); n];
    for k in 0..n {
        let mut acc = a.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(d.len().saturating_sub(1)) {
            acc -= d[j] * q[k - j];
        }
        q[k] = acc / d0;
    }
    Ok(q)
}

fn truncated_mul(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// The `n × n` compression of `C_φ` to the monomial basis: column `j`
/// holds the first `n` Maclaurin coefficients of `φ^j`. Diagnostic only.
pub fn truncated_matrix(num: &Poly, den: &Poly, n: usize) -> Result<SquareMatrix> {
    if n == 0 || n > TRUNCATION_LIMIT {
        return Err(Error::OrderTooLarge {
            order: n,
            limit: TRUNCATION_LIMIT,
        });
    }
    let phi = series_quotient(num, den, n)?;
    let mut m = SquareMatrix::zeros(n);
    let mut power = vec![C64::zero(); n];
    power[0] = C64::new(1.0, 0.0);
    for j in 0..n {
        for (i, c) in power.iter().enumerate() {
            m[(i, j)] = *c;
        }
        if j + 1 < n {
            power = truncated_mul(&power, &phi, n);
        }
    }
    Ok(m)
}

pub fn truncated_symbol_matrix(s: &RationalSymbol, n: usize) -> Result<SquareMatrix> {
    truncated_matrix(s.numerator(), s.denominator(), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_symbol_is_diagonal() {
        let m =
            truncated_matrix(&Poly::from_real(&[0.0, 0.5]), &Poly::from_real(&[1.0]), 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.5f64.powi(i as i32) } else { 0.0 };
                assert_eq!(m[(i, j)], C64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn constant_symbol_fills_first_row() {
        let c = 0.3;
        let m = truncated_matrix(&Poly::from_real(&[c]), &Poly::from_real(&[1.0]), 5).unwrap();
        for j in 0..5 {
            assert!((m[(0, j)] - c.powi(j as i32)).norm() < 1e-15);
            for i in 1..5 {
                assert_eq!(m[(i, j)], C64::zero());
            }
        }
    }

    #[test]
    fn series_division() {
        // 1/(1 - z/2) = Σ z^k / 2^k
        let q =
            series_quotient(&Poly::from_real(&[1.0]), &Poly::from_real(&[1.0, -0.5]), 6).unwrap();
        for (k, c) in q.iter().enumerate() {
            assert!((c - 0.5f64.powi(k as i32)).norm() < 1e-15);
        }
        assert_eq!(
            series_quotient(&Poly::from_real(&[1.0]), &Poly::from_real(&[0.0, 1.0]), 3),
            Err(Error::ZeroConstantTerm)
        );
    }
}
