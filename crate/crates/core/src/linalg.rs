//! Dense complex matrices and a Hessenberg–QR eigenvalue solver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
#[allow(unused_imports)]
use num_traits::Float;

use num_traits::Zero;

use crate::{is_finite, Error, Result, C64};

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    order: usize,
    entries: Vec<C64>,
}

impl SquareMatrix {
    pub fn zeros(order: usize) -> Self {
        assert!(order >= 1, "matrix order must be positive");
        Self {
            order,
            entries: vec![C64::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 || rows.iter().any(|r| r.len() != order) {
            return Err(Error::Inconsistent(
                "matrix rows must form a nonempty square".into(),
            ));
        }
        let entries: Vec<C64> = rows.iter().flatten().copied().collect();
        if entries.iter().any(|z| !is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        Ok(Self { order, entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order, rhs.order);
        let n = self.order;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.order, rhs.order);
        Self {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.order, rhs.order);
        Self {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            order: self.order,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// Product of a nonempty sequence, left to right.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a SquareMatrix>) -> Option<Self> {
        let mut it = factors.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.mul(m)))
    }

    pub fn sum<'a>(terms: impl IntoIterator<Item = &'a SquareMatrix>) -> Option<Self> {
        let mut it = terms.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.add(m)))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.order;
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[i * n + j] * v[j]).sum())
            .collect()
    }

    /// Inverse via Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)].norm() <= f64::EPSILON * scale {
                return Err(Error::Singular);
            }
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f == C64::zero() {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(i, j)] -= f * ac;
                    inv[(i, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = self.order;
        for k in 0..n {
            self.entries.swap(i * n + k, j * n + k);
        }
    }

    /// Backward error of `lambda` as an eigenvalue: `‖(m − λ)v‖` for the unit
    /// vector `v` that inverse iteration on `(m − λ)ᴴ(m − λ)` settles on, an
    /// estimate of the smallest singular value of `m − λ`. Unlike an
    /// eigenvector residual it stays small inside defective clusters.
    pub fn eigen_residual(&self, lambda: C64) -> f64 {
        let n = self.order;
        let norm = self.frobenius_norm().max(f64::MIN_POSITIVE);
        let mut shifted = self.clone();
        let nudge = C64::new(norm * 1e-13, norm * 1e-13);
        for i in 0..n {
            shifted[(i, i)] -= lambda + nudge;
        }
        let lu = Lu::factor(shifted, norm);
        let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0, 0.1 * i as f64)).collect();
        for _ in 0..3 {
            v = lu.solve(&lu.solve_adjoint(&v));
            let len = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !(len.is_finite() && len > 0.0) {
                return f64::INFINITY;
            }
            v.iter_mut().for_each(|z| *z /= len);
        }
        let mv = self.mul_vec(&v);
        mv.iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.order + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.order + j]
    }
}

struct Lu {
    a: SquareMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// LU with partial pivoting; exactly singular pivots are replaced by a
    /// tiny value so inverse iteration still proceeds.
    fn factor(mut a: SquareMatrix, scale: f64) -> Self {
        let n = a.order;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap_or(k);
            a.swap_rows(k, p);
            perm.swap(k, p);
            if a[(k, k)].norm() < f64::EPSILON * scale * 1e-3 {
                a[(k, k)] = C64::new(f64::EPSILON * scale * 1e-3, 0.0);
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
        Self { a, perm }
    }

    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.a.order;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.a[(i, j)];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.a[(i, j)];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.a[(i, i)];
        }
        x
    }

    /// Solves `aᴴ x = b` for the factored `a`.
    fn solve_adjoint(&self, b: &[C64]) -> Vec<C64> {
        let n = self.a.order;
        let mut y = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let u = self.a[(j, i)].conj();
                y[i] = y[i] - u * y[j];
            }
            y[i] /= self.a[(i, i)].conj();
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let l = self.a[(j, i)].conj();
                y[i] = y[i] - l * y[j];
            }
        }
        let mut x = vec![C64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }
}

/// All eigenvalues with multiplicity, in no particular order.
///
/// Balancing, Householder reduction to upper Hessenberg form, then
/// single-shift complex QR with Wilkinson shifts and deflation.
pub fn eigenvalues(m: &SquareMatrix) -> Result<Vec<C64>> {
    let n = m.order;
    if m.entries.iter().any(|z| !is_finite(*z)) {
        return Err(Error::NonFinite);
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut h = m.clone();
    balance(&mut h);
    hessenberg(&mut h);
    hessenberg_qr(&mut h)
}

fn l1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

fn balance(a: &mut SquareMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.order;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(a[(j, i)]);
                    r += l1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

fn hessenberg(a: &mut SquareMatrix) {
    let n = a.order;
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        // A <- (I - 2vv*) A
        for j in k..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| vi.conj() * a[(k + 1 + t, j)])
                .sum();
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= vi * dot * 2.0;
            }
        }
        // A <- A (I - 2vv*)
        for i in 0..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| a[(i, k + 1 + t)] * vi)
                .sum();
            for (t, vi) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= dot * vi.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = C64::zero();
        }
    }
}

#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: C64,
}

impl Givens {
    /// Rotation `G` with `G [x; y] = [r; 0]`.
    fn zeroing(x: C64, y: C64) -> Self {
        let norm = x.norm().hypot(y.norm());
        if norm == 0.0 {
            return Self {
                c: 1.0,
                s: C64::zero(),
            };
        }
        if x.norm() == 0.0 {
            return Self {
                c: 0.0,
                s: C64::new(1.0, 0.0),
            };
        }
        let alpha = x / x.norm();
        Self {
            c: x.norm() / norm,
            s: alpha * y.conj() / norm,
        }
    }

    fn rows(
        self,
        h: &mut SquareMatrix,
        p: usize,
        q: usize,
        cols: core::ops::RangeInclusive<usize>,
    ) {
        for j in cols {
            let (a, b) = (h[(p, j)], h[(q, j)]);
            h[(p, j)] = a * self.c + self.s * b;
            h[(q, j)] = -self.s.conj() * a + b * self.c;
        }
    }

    fn cols(
        self,
        h: &mut SquareMatrix,
        p: usize,
        q: usize,
        rows: core::ops::RangeInclusive<usize>,
    ) {
        for i in rows {
            let (a, b) = (h[(i, p)], h[(i, q)]);
            h[(i, p)] = a * self.c + b * self.s.conj();
            h[(i, q)] = -self.s * a + b * self.c;
        }
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (l1, l2) = (mean + disc, mean - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(h: &mut SquareMatrix) -> Result<Vec<C64>> {
    let n = h.order;
    let norm = h.frobenius_norm();
    let mut eig = vec![C64::zero(); n];
    if norm == 0.0 {
        return Ok(eig);
    }
    let max_iter = 60 * n;
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let off = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if diag == 0.0 {
                diag = norm;
            }
            if off <= f64::EPSILON * diag {
                h[(lo, lo - 1)] = C64::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if total > max_iter * 4 || its > max_iter {
            return Err(Error::EigenNonConvergence(n));
        }
        let shift = if its % 11 == 0 {
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.25)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        let g = Givens::zeroing(h[(lo, lo)] - shift, h[(lo + 1, lo)]);
        g.rows(h, lo, lo + 1, lo..=hi);
        g.cols(h, lo, lo + 1, lo..=(lo + 2).min(hi));
        for k in lo + 1..hi {
            let g = Givens::zeroing(h[(k, k - 1)], h[(k + 1, k - 1)]);
            g.rows(h, k, k + 1, (k - 1)..=hi);
            h[(k + 1, k - 1)] = C64::zero();
            g.cols(h, k, k + 1, lo..=(k + 2).min(hi));
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn nilpotent_two_by_two() {
        let m = SquareMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let e = eigenvalues(&m).unwrap();
        assert!(e.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn diagonal_and_swap() {
        let m = SquareMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let e = sorted_re(eigenvalues(&m).unwrap());
        assert!((e[0] - C64::new(0.0, 0.0)).norm() < 1e-14);
        assert!((e[1] - C64::new(1.0, 0.0)).norm() < 1e-14);

        let m = SquareMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = sorted_re(eigenvalues(&m).unwrap());
        assert!((e[0] + 1.0).norm() < 1e-13);
        assert!((e[1] - 1.0).norm() < 1e-13);
    }

    #[test]
    fn rotation_has_complex_pair() {
        let m = SquareMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let e = eigenvalues(&m).unwrap();
        for z in &e {
            assert!((z.norm() - 1.0).abs() < 1e-13 && z.re.abs() < 1e-13);
        }
        assert!((e[0] + e[1]).norm() < 1e-13);
    }

    #[test]
    fn companion_of_cubic() {
        // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
        let m =
            SquareMatrix::from_real_rows(&[&[0.0, 0.0, 6.0], &[1.0, 0.0, -11.0], &[0.0, 1.0, 6.0]])
                .unwrap();
        let e = sorted_re(eigenvalues(&m).unwrap());
        for (z, want) in e.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z - want).norm() < 1e-10, "{z} vs {want}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m =
            SquareMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 4.0]])
                .unwrap();
        let p = m.mul(&m.inverse().unwrap());
        assert!(p.sub(&SquareMatrix::identity(3)).frobenius_norm() < 1e-14);
        let singular = SquareMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert_eq!(singular.inverse(), Err(Error::Singular));
    }

    #[test]
    fn residual_is_small_at_eigenvalue() {
        let m = SquareMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert!(m.eigen_residual(C64::new(3.0, 0.0)) < 1e-10);
        assert!(m.eigen_residual(C64::new(1.0, 0.0)) < 1e-10);
        assert!((m.eigen_residual(C64::new(2.0, 0.0)) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn residual_inside_jordan_cluster() {
        // A 3×3 Jordan block at 0 with a 1e-15 corner: eigenvalues ~1e-5.
        let mut m =
            SquareMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]])
                .unwrap();
        m[(2, 0)] = C64::new(1e-15, 0.0);
        for lambda in eigenvalues(&m).unwrap() {
            assert!((lambda.norm() - 1e-5).abs() < 1e-7);
            assert!(m.eigen_residual(lambda) < 1e-12);
        }
        assert!(m.eigen_residual(C64::new(1e-3, 0.0)) > 1e-10);
    }
}
