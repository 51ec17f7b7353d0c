//! Linear-fractional maps `z ↦ (az+b)/(cz+d)`.
//!
//! Coefficients are projective, so every [`MobiusMap`] is stored scaled so
//! that its largest-modulus coefficient equals `1`. Equality of maps should be
//! tested with [`MobiusMap::approx_eq`], which compares up to scaling.

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::{is_finite, Error, Result, Tolerances, C64};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Relative size of `|cz + d|` below which `z` is treated as the pole.
const POLE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
}

/// A fixed point of a linear-fractional map on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPoint {
    Finite(C64),
    Infinity,
}

impl FixedPoint {
    pub fn finite(self) -> Option<C64> {
        match self {
            FixedPoint::Finite(z) => Some(z),
            FixedPoint::Infinity => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPoints {
    /// The identity map fixes everything.
    Identity,
    /// A single fixed point of multiplicity two (parabolic).
    Double(FixedPoint),
    Pair(FixedPoint, FixedPoint),
}

impl FixedPoints {
    pub fn finite(&self) -> impl Iterator<Item = C64> {
        let (p, q) = match *self {
            FixedPoints::Identity => (None, None),
            FixedPoints::Double(p) => (p.finite(), None),
            FixedPoints::Pair(p, q) => (p.finite(), q.finite()),
        };
        p.into_iter().chain(q)
    }
}

impl MobiusMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        Self::with_tolerance(a, b, c, d, Tolerances::default().eps)
    }

    /// Builds and normalizes, rejecting `|ad − bc| <= eps` after scaling.
    pub fn with_tolerance(a: C64, b: C64, c: C64, d: C64, eps: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        let coeffs = [a, b, c, d];
        let mut top = coeffs[0];
        for &z in &coeffs[1..] {
            if z.norm() > top.norm() {
                top = z;
            }
        }
        if top.norm() == 0.0 {
            return Err(Error::DegenerateMobius(0.0));
        }
        let m = Self {
            a: a / top,
            b: b / top,
            c: c / top,
            d: d / top,
        };
        let det = m.determinant();
        if det.norm() <= eps {
            return Err(Error::DegenerateMobius(det.norm()));
        }
        Ok(m)
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(
            C64::new(a, 0.0),
            C64::new(b, 0.0),
            C64::new(c, 0.0),
            C64::new(d, 0.0),
        )
    }

    pub fn identity() -> Self {
        Self {
            a: ONE,
            b: C64::zero(),
            c: C64::zero(),
            d: ONE,
        }
    }

    /// `z ↦ λ z`.
    pub fn rotation(lambda: C64) -> Result<Self> {
        Self::new(lambda, C64::zero(), C64::zero(), ONE)
    }

    /// `R(z) = (1 + z)/(1 − z)`, the disk-to-right-halfplane map.
    pub fn cayley() -> Self {
        Self::from_real(1.0, 1.0, -1.0, 1.0).expect("valid")
    }

    /// `R⁻¹(w) = (w − 1)/(w + 1)`.
    pub fn cayley_inverse() -> Self {
        Self::from_real(1.0, -1.0, 1.0, 1.0).expect("valid")
    }

    pub fn coefficients(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a).expect("inverse of a valid map is valid")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        compose(self, inner)
    }

    fn denominator(&self, z: C64) -> Result<C64> {
        let den = self.c * z + self.d;
        if den.norm() <= POLE_TOL * (self.c.norm() * z.norm() + self.d.norm()) {
            return Err(Error::Pole(z));
        }
        Ok(den)
    }

    pub fn evaluate(&self, z: C64) -> Result<C64> {
        let den = self.denominator(z)?;
        Ok((self.a * z + self.b) / den)
    }

    pub fn derivative(&self, z: C64) -> Result<C64> {
        let den = self.denominator(z)?;
        Ok(self.determinant() / (den * den))
    }

    pub fn second_derivative(&self, z: C64) -> Result<C64> {
        let den = self.denominator(z)?;
        Ok(self.c * self.determinant() * -2.0 / (den * den * den))
    }

    /// Second-order data `(ψ(ζ), ψ'(ζ), ψ''(ζ))` at a boundary point.
    pub fn second_order_data_at(&self, zeta: C64, tol: f64) -> Result<SecondOrderData> {
        SecondOrderData::new(
            zeta,
            self.evaluate(zeta)?,
            self.derivative(zeta)?,
            self.second_derivative(zeta)?,
            tol,
        )
    }

    /// Equality up to the projective scale of the coefficient vector.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let u = self.coefficients();
        let v = other.coefficients();
        let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let lambda: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum::<C64>() / uu;
        let resid: f64 = u
            .iter()
            .zip(&v)
            .map(|(x, y)| (y - lambda * x).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        resid <= tol * vv
    }

    /// Roots of `cz² + (d − a)z − b = 0`, with `∞` when `c = 0`.
    pub fn fixed_points(&self, eps: f64) -> FixedPoints {
        let qa = self.c;
        let qb = self.d - self.a;
        let qc = -self.b;
        let scale = qa.norm().max(qb.norm()).max(qc.norm());
        if scale <= eps {
            return FixedPoints::Identity;
        }
        if qa.norm() <= eps * scale {
            // Linear: (d − a) z = b, plus the point at infinity.
            if qb.norm() <= eps * scale {
                return FixedPoints::Double(FixedPoint::Infinity);
            }
            return FixedPoints::Pair(FixedPoint::Finite(-qc / qb), FixedPoint::Infinity);
        }
        let disc = qb * qb - qa * qc * 4.0;
        if disc.norm() <= eps * scale * scale {
            return FixedPoints::Double(FixedPoint::Finite(-qb / (qa * 2.0)));
        }
        let root = disc.sqrt();
        // Pick the sign that avoids cancellation in qb ± root.
        let q = if (qb.conj() * root).re >= 0.0 {
            (qb + root) * -0.5
        } else {
            (qb - root) * -0.5
        };
        FixedPoints::Pair(FixedPoint::Finite(q / qa), FixedPoint::Finite(qc / q))
    }

    /// Right-halfplane incarnation `R ∘ m ∘ R⁻¹`.
    pub fn halfplane_incarnation(&self) -> Result<Self> {
        Self::cayley().compose(&self.compose(&Self::cayley_inverse())?)
    }

    /// Whether the map has the form `λ(z − p)/(1 − p̄ z)` with `|λ| = 1` and
    /// `|p| < 1`.
    pub fn is_disk_automorphism(&self, eps: f64) -> bool {
        if self.d.norm() <= eps {
            return false;
        }
        let a = self.a / self.d;
        let b = self.b / self.d;
        let c = self.c / self.d;
        (a.norm() - 1.0).abs() <= eps && c.norm() < 1.0 && (b - a * c.conj()).norm() <= eps
    }

    /// The unique linear-fractional map whose second-order data at
    /// `data.zeta()` is `data`.
    ///
    /// Aligns to `s(z) = conj(η)·ψ(ζz)` fixing `1`, writes the halfplane
    /// incarnation of `s` as the affine map `w/s'(1) + (1/s'(1) − 1 + s''(1)/s'(1)²)`
    /// and conjugates back.
    pub fn from_second_order_data(data: &SecondOrderData, eps: f64) -> Result<Self> {
        let zeta = data.zeta;
        let eta = data.value;
        let p = data.aligned_derivative();
        let s2 = eta.conj() * zeta * zeta * data.d2;
        let constant = C64::new(1.0 / p - 1.0, 0.0) + s2 / (p * p);
        if constant.re <= eps {
            return Err(Error::NotOrderTwoContact);
        }
        let sigma = Self::new(C64::new(1.0 / p, 0.0), constant, C64::zero(), ONE)?;
        let s = Self::cayley_inverse().compose(&sigma.compose(&Self::cayley())?)?;
        let psi = Self::rotation(eta)?.compose(&s.compose(&Self::rotation(zeta.conj())?)?)?;
        if psi.is_disk_automorphism(eps) {
            return Err(Error::Automorphism);
        }
        let back = psi.second_order_data_at(zeta, 1e-6)?;
        let scale = 1.0 + data.d1.norm() + data.d2.norm();
        let err =
            (back.value - eta).norm() + (back.d1 - data.d1).norm() + (back.d2 - data.d2).norm();
        if err > 1e-8 * scale {
            return Err(Error::Inconsistent(alloc::format!(
                "second-order data round trip off by {err:e}"
            )));
        }
        Ok(psi)
    }
}

/// `outer ∘ inner` via the coefficient matrix product.
pub fn compose(outer: &MobiusMap, inner: &MobiusMap) -> Result<MobiusMap> {
    let (a1, b1, c1, d1) = (outer.a, outer.b, outer.c, outer.d);
    let (a2, b2, c2, d2) = (inner.a, inner.b, inner.c, inner.d);
    MobiusMap::new(
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
    )
}

/// Second-order boundary data `D₂(φ, ζ) = (φ(ζ), φ'(ζ), φ''(ζ))` at a
/// boundary point `ζ` with `|φ(ζ)| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderData {
    zeta: C64,
    value: C64,
    d1: C64,
    d2: C64,
}

impl SecondOrderData {
    /// Validates `|ζ| = |φ(ζ)| = 1` and that `ζ·conj(φ(ζ))·φ'(ζ)` is real and
    /// positive, all to `tol`. `ζ` and `φ(ζ)` are snapped onto the circle.
    pub fn new(zeta: C64, value: C64, d1: C64, d2: C64, tol: f64) -> Result<Self> {
        if ![zeta, value, d1, d2].iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        if (zeta.norm() - 1.0).abs() > tol {
            return Err(Error::InvalidSecondOrderData("|zeta| != 1"));
        }
        if (value.norm() - 1.0).abs() > tol {
            return Err(Error::InvalidSecondOrderData("|value| != 1"));
        }
        let aligned = zeta * value.conj() * d1;
        if aligned.re <= 0.0 || aligned.im.abs() > tol * aligned.norm().max(1.0) {
            return Err(Error::InvalidSecondOrderData(
                "zeta * conj(value) * d1 must be real and positive",
            ));
        }
        Ok(Self {
            zeta: zeta / zeta.norm(),
            value: value / value.norm(),
            d1,
            d2,
        })
    }

    pub fn zeta(&self) -> C64 {
        self.zeta
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn d1(&self) -> C64 {
        self.d1
    }

    pub fn d2(&self) -> C64 {
        self.d2
    }

    /// `s'(1)` for the aligned map `s(z) = conj(φ(ζ))·φ(ζz)`; equals `|φ'(ζ)|`.
    pub fn aligned_derivative(&self) -> f64 {
        (self.zeta * self.value.conj() * self.d1).re
    }

    /// `1/|φ'(ζ)| + ζφ''(ζ)/(φ'(ζ)|φ'(ζ)|) − 1`, whose real part is positive
    /// exactly for order-2 contact.
    pub fn contact_quantity(&self) -> C64 {
        let m = self.d1.norm();
        C64::new(1.0 / m - 1.0, 0.0) + self.zeta * self.d2 / (self.d1 * m)
    }
}
