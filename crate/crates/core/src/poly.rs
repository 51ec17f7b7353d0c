//! Dense complex polynomials in ascending-power form, with companion-matrix
//! root finding.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::linalg::{eigenvalues, SquareMatrix};
use crate::{is_finite, Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    /// Coefficients in ascending powers; trailing zeros are dropped.
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.iter().any(|z| !is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        let mut p = Self { coeffs };
        p.trim(0.0);
        Ok(p)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        let mut p = Self {
            coeffs: coeffs.iter().map(|&x| C64::new(x, 0.0)).collect(),
        };
        p.trim(0.0);
        p
    }

    pub fn monomial(c: C64, power: usize) -> Self {
        let mut coeffs = vec![C64::zero(); power + 1];
        coeffs[power] = c;
        let mut p = Self { coeffs };
        p.trim(0.0);
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Drop trailing coefficients with modulus `<= rel_tol * max|coeff|`.
    pub fn trim(&mut self, rel_tol: f64) {
        let cut = rel_tol * self.max_abs_coeff();
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= cut {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::zero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let at = |p: &Self, k: usize| p.coeffs.get(k).copied().unwrap_or_default();
        let mut p = Self {
            coeffs: (0..n).map(|k| at(self, k) + at(rhs, k)).collect(),
        };
        p.trim(0.0);
        p
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        };
        p.trim(0.0);
        p
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self { coeffs: Vec::new() };
        }
        let mut coeffs = vec![C64::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = Self { coeffs };
        p.trim(0.0);
        p
    }

    /// `z ↦ P(c z)`.
    pub fn compose_scale(&self, c: C64) -> Self {
        let mut pw = C64::new(1.0, 0.0);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            coeffs.push(a * pw);
            pw *= c;
        }
        let mut p = Self { coeffs };
        p.trim(0.0);
        p
    }

    /// Reflection at formal degree `k >= deg P`: `z^k · conj(P(1/conj z))`,
    /// i.e. the coefficient vector padded to length `k + 1`, reversed and
    /// conjugated. On the unit circle `P(z)·P*(z) = z^k |P(z)|²`.
    pub fn reflect(&self, k: usize) -> Self {
        assert!(self.is_zero() || k >= self.degree());
        let mut coeffs = vec![C64::zero(); k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[k - i] = c.conj();
        }
        let mut p = Self { coeffs };
        p.trim(0.0);
        p
    }

    /// Taylor coefficient `P^{(k)}(z) / k!`.
    pub fn taylor_coeff(&self, z: C64, k: usize) -> C64 {
        let mut d = self.clone();
        let mut fact = 1.0;
        for j in 1..=k {
            d = d.derivative();
            fact *= j as f64;
        }
        d.eval(z) / fact
    }

    /// All complex roots via companion-matrix eigenvalues, each refined by a
    /// few Newton steps when that reduces the residual.
    pub fn roots(&self) -> Result<Vec<C64>> {
        if self.is_zero() {
            return Err(Error::RootFinding("zero polynomial"));
        }
        let n = self.degree();
        // Leading zeros of the ascending vector are roots at the origin.
        let shift = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        let mut roots = vec![C64::zero(); shift];
        let reduced = &self.coeffs[shift..];
        let m = reduced.len() - 1;
        if m == 0 {
            return Ok(roots);
        }
        let lead = reduced[m];
        let mut comp = SquareMatrix::zeros(m);
        for i in 1..m {
            comp[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..m {
            comp[(i, m - 1)] = -reduced[i] / lead;
        }
        let eig = eigenvalues(&comp)?;
        let deriv = self.derivative();
        for r in eig {
            roots.push(newton_refine(self, &deriv, r));
        }
        debug_assert_eq!(roots.len(), n);
        Ok(roots)
    }
}

fn newton_refine(p: &Poly, dp: &Poly, mut z: C64) -> C64 {
    let mut res = p.eval(z).norm();
    for _ in 0..8 {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - p.eval(z) / d;
        let next_res = p.eval(next).norm();
        if !(next_res < res) || !is_finite(next) {
            break;
        }
        z = next;
        res = next_res;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        let p = Poly::from_real(&[-2.0, -1.0, 2.0]); // 2z^2 - z - 2
        assert_eq!(p.eval(C64::new(1.0, 0.0)), C64::new(-1.0, 0.0));
        assert_eq!(
            p.derivative().coeffs(),
            &[C64::new(-1.0, 0.0), C64::new(4.0, 0.0)]
        );
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn reflection_identity_on_circle() {
        let p = Poly::new(vec![
            C64::new(1.0, 2.0),
            C64::new(-0.5, 0.3),
            C64::new(0.0, 1.0),
        ])
        .unwrap();
        let k = 4;
        let r = p.reflect(k);
        for t in 0..7 {
            let z = C64::from_polar(1.0, t as f64 * 0.9);
            let lhs = p.eval(z) * r.eval(z);
            let rhs = z.powu(k as u32) * p.eval(z).norm_sqr();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn roots_of_known_quartic() {
        // (z - 1)^2 (z + 2)(z - i)
        let p = Poly::from_real(&[-1.0, 1.0])
            .mul(&Poly::from_real(&[-1.0, 1.0]))
            .mul(&Poly::from_real(&[2.0, 1.0]))
            .mul(&Poly::new(vec![C64::new(0.0, -1.0), C64::new(1.0, 0.0)]).unwrap());
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 4);
        for want in [C64::new(1.0, 0.0), C64::new(-2.0, 0.0), C64::new(0.0, 1.0)] {
            assert!(
                roots.iter().any(|r| (r - want).norm() < 1e-7),
                "missing {want}"
            );
        }
    }

    #[test]
    fn roots_at_origin() {
        let p = Poly::from_real(&[0.0, 0.0, 3.0, 1.0]);
        let mut roots = p.roots().unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] + 3.0).norm() < 1e-12);
        assert_eq!(roots[1], C64::zero());
        assert_eq!(roots[2], C64::zero());
    }
}
