//! Self-maps of the disk: rational symbols analytic on the closed disk, and
//! symbols known only through second-order boundary data.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{Float, Zero};

use crate::mobius::{MobiusMap, SecondOrderData};
use crate::poly::Poly;
use crate::{Error, Result, Tolerances, C64};

/// Boundary grid used to certify `|φ| ≤ 1` on the circle.
const GRID: usize = 4096;
/// Roots of the reflection polynomial this close to the circle are polished.
const CANDIDATE_BAND: f64 = 1e-2;
/// Polished contact points must satisfy `||φ(ζ)| − 1| < CONTACT_RESIDUAL`.
const CONTACT_RESIDUAL: f64 = 1e-8;
/// Iteration cap when cross-validating the Denjoy–Wolff point.
const DW_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenjoyWolffRecord {
    omega: C64,
    derivative: C64,
    location: Location,
}

impl DenjoyWolffRecord {
    pub fn new(omega: C64, derivative: C64, location: Location, eps: f64) -> Result<Self> {
        match location {
            Location::Interior => {
                if omega.norm() >= 1.0 - eps || derivative.norm() >= 1.0 {
                    return Err(Error::Inconsistent(format!(
                        "interior Denjoy-Wolff record needs |omega| < 1 and |derivative| < 1, got {omega}, {derivative}"
                    )));
                }
            }
            Location::Boundary => {
                if (omega.norm() - 1.0).abs() > eps
                    || derivative.im.abs() > eps
                    || derivative.re <= 0.0
                    || derivative.re > 1.0 + eps
                {
                    return Err(Error::Inconsistent(format!(
                        "boundary Denjoy-Wolff record needs |omega| = 1 and 0 < derivative <= 1, got {omega}, {derivative}"
                    )));
                }
            }
        }
        Ok(Self {
            omega,
            derivative,
            location,
        })
    }

    pub fn omega(&self) -> C64 {
        self.omega
    }

    pub fn derivative(&self) -> C64 {
        self.derivative
    }

    pub fn location(&self) -> Location {
        self.location
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeClass {
    Dilation,
    Hyperbolic,
    ParabolicNonAutomorphismType,
    /// Decided by the curvature test alone; the `C^{3+ε}` smoothness it also
    /// needs is not checked.
    ParabolicAutomorphismType,
}

impl TypeClass {
    /// True when the verdict relies on smoothness that was not verified.
    pub fn smoothness_caveat(&self) -> bool {
        matches!(self, TypeClass::ParabolicAutomorphismType)
    }

    pub fn name(&self) -> &'static str {
        match self {
            TypeClass::Dilation => "dilation",
            TypeClass::Hyperbolic => "hyperbolic",
            TypeClass::ParabolicNonAutomorphismType => "parabolic-non-automorphism",
            TypeClass::ParabolicAutomorphismType => "parabolic-automorphism",
        }
    }
}

/// `φ = N/D` with `D` zero-free on the closed disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSymbol {
    num: Poly,
    den: Poly,
    num_d: Poly,
    num_dd: Poly,
    den_d: Poly,
    den_dd: Poly,
}

/// A contact point before multiplicity screening.
#[derive(Debug, Clone, Copy)]
struct Contact {
    zeta: C64,
    higher_order: bool,
}

impl RationalSymbol {
    pub const DEFAULT_DEGREE_CAP: usize = 64;

    pub fn new(num: Vec<C64>, den: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        Self::with_degree_cap(num, den, tol, Self::DEFAULT_DEGREE_CAP)
    }

    pub fn with_degree_cap(
        num: Vec<C64>,
        den: Vec<C64>,
        tol: &Tolerances,
        cap: usize,
    ) -> Result<Self> {
        let num = Poly::new(num)?;
        let den = Poly::new(den)?;
        if den.is_zero() {
            return Err(Error::InvalidSymbol("zero denominator".into()));
        }
        let degree = num.degree().max(den.degree());
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        if den.degree() > 0 {
            for r in den.roots()? {
                if r.norm() <= 1.0 + tol.eps {
                    return Err(Error::InvalidSymbol(format!(
                        "denominator vanishes at {r} in the closed disk"
                    )));
                }
            }
        }
        let s = Self::from_parts(num, den);
        let wronskian = s.num_d.mul(&s.den).sub(&s.num.mul(&s.den_d));
        let scale =
            s.num.max_abs_coeff().max(1e-300) * s.den.max_abs_coeff() * (degree.max(1) as f64);
        if wronskian.max_abs_coeff() <= 1e-14 * scale {
            return Err(Error::InvalidSymbol("constant symbol".into()));
        }
        let mut sup: f64 = 0.0;
        for k in 0..GRID {
            let z = C64::from_polar(1.0, 2.0 * PI * k as f64 / GRID as f64);
            sup = sup.max(s.eval(z).norm());
        }
        if sup > 1.0 + tol.eps {
            return Err(Error::InvalidSymbol(format!(
                "not a self-map of the disk: sup |phi| on the circle is {sup}"
            )));
        }
        if s.fits_automorphism(tol.eps) {
            return Err(Error::Automorphism);
        }
        Ok(s)
    }

    fn from_parts(num: Poly, den: Poly) -> Self {
        let num_d = num.derivative();
        let den_d = den.derivative();
        Self {
            num_dd: num_d.derivative(),
            den_dd: den_d.derivative(),
            num,
            den,
            num_d,
            den_d,
        }
    }

    /// Interpolates a Möbius map through three interior samples and tests
    /// whether it reproduces `φ` and is an automorphism.
    fn fits_automorphism(&self, eps: f64) -> bool {
        let zs = [C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.5)];
        let ws = zs.map(|z| self.eval(z));
        let Some(m) = three_point_mobius(zs, ws) else {
            return false;
        };
        if !m.is_disk_automorphism(1e-7) {
            return false;
        }
        (1..12).all(|k| {
            let z = C64::from_polar(0.9, k as f64);
            match m.evaluate(z) {
                Ok(w) => (w - self.eval(z)).norm() <= 1e-7.max(eps),
                Err(_) => false,
            }
        })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// `(φ(z), φ'(z), φ''(z))` by the quotient rule.
    pub fn jet(&self, z: C64) -> (C64, C64, C64) {
        let n = self.num.eval(z);
        let n1 = self.num_d.eval(z);
        let n2 = self.num_dd.eval(z);
        let d = self.den.eval(z);
        let d1 = self.den_d.eval(z);
        let d2 = self.den_dd.eval(z);
        let w = n1 * d - n * d1;
        let f = n / d;
        let f1 = w / (d * d);
        let f2 = (n2 * d - n * d2) / (d * d) - d1 * w * 2.0 / (d * d * d);
        (f, f1, f2)
    }

    pub fn derivative(&self, z: C64) -> C64 {
        self.jet(z).1
    }

    /// `z ↦ conj(η)·φ(ζz)`.
    pub fn aligned(&self, zeta: C64, eta: C64) -> Self {
        Self::from_parts(
            self.num.compose_scale(zeta).scale(eta.conj()),
            self.den.compose_scale(zeta),
        )
    }

    /// `G = N·N*_K − D·D*_K` with `K = max(deg N, deg D)`; on the circle
    /// `G(z) = z^K (|N(z)|² − |D(z)|²)`.
    pub fn reflection_polynomial(&self) -> Poly {
        let k = self.num.degree().max(self.den.degree());
        self.num
            .mul(&self.num.reflect(k))
            .sub(&self.den.mul(&self.den.reflect(k)))
    }

    fn contacts(&self) -> Result<Vec<Contact>> {
        let g = self.reflection_polynomial();
        let scale = self.num.max_abs_coeff().powi(2) + self.den.max_abs_coeff().powi(2);
        if g.max_abs_coeff() <= 1e-12 * scale * (g.degree() + 1) as f64 {
            return Err(Error::InnerSymbol);
        }
        let mut found: Vec<Contact> = Vec::new();
        for r in g.roots()? {
            if (r.norm() - 1.0).abs() >= CANDIDATE_BAND {
                continue;
            }
            let Some(c) = self.polish_contact(r.arg()) else {
                continue;
            };
            if !found.iter().any(|f| (f.zeta - c.zeta).norm() < 1e-9) {
                found.push(c);
            }
        }
        found.sort_by(|a, b| unit_angle(a.zeta).total_cmp(&unit_angle(b.zeta)));
        Ok(found)
    }

    /// Newton on `θ ↦ d/dθ |φ(e^{iθ})|²` from `theta`.
    fn polish_contact(&self, mut theta: f64) -> Option<Contact> {
        let derivs = |theta: f64| {
            let z = C64::from_polar(1.0, theta);
            let (f, f1, f2) = self.jet(z);
            let i = C64::new(0.0, 1.0);
            let h = f.norm_sqr();
            let h1 = 2.0 * (f.conj() * i * z * f1).re;
            let h2 = 2.0 * ((z * f1).norm_sqr() + (f.conj() * (-z * f1 - z * z * f2)).re);
            (h, h1, h2, f1.norm(), f2.norm())
        };
        for _ in 0..200 {
            let (_, h1, h2, _, _) = derivs(theta);
            if h2 == 0.0 || !h2.is_finite() {
                break;
            }
            let step = h1 / h2;
            theta -= step;
            if step.abs() <= 1e-15 {
                break;
            }
        }
        let (h, _, h2, m1, m2) = derivs(theta);
        if (h.sqrt() - 1.0).abs() >= CONTACT_RESIDUAL {
            return None;
        }
        let curvature_scale = 2.0 * (m1 * m1 + m1 + m2);
        Some(Contact {
            zeta: C64::from_polar(1.0, theta),
            higher_order: h2.abs() <= 1e-6 * curvature_scale,
        })
    }

    /// The contact set `E(φ) = {ζ ∈ ∂𝔻 : |φ(ζ)| = 1}`, sorted by argument in
    /// `[0, 2π)`.
    pub fn contact_set(&self) -> Result<Vec<C64>> {
        let contacts = self.contacts()?;
        if let Some(c) = contacts.iter().find(|c| c.higher_order) {
            return Err(Error::ContactOrderExceedsTwo(c.zeta));
        }
        Ok(contacts.into_iter().map(|c| c.zeta).collect())
    }

    /// Checks `|ζ| = 1` and `|φ(ζ)| = 1` rather than recomputing `E(φ)`.
    pub fn second_order_data(&self, zeta: C64, tol: &Tolerances) -> Result<SecondOrderData> {
        if (zeta.norm() - 1.0).abs() > tol.match_tol {
            return Err(Error::NotInContactSet(zeta));
        }
        let (f, f1, f2) = self.jet(zeta);
        if (f.norm() - 1.0).abs() > tol.match_tol {
            return Err(Error::NotInContactSet(zeta));
        }
        SecondOrderData::new(zeta, f, f1, f2, tol.match_tol)
    }

    pub fn denjoy_wolff(&self, tol: &Tolerances) -> Result<DenjoyWolffRecord> {
        let fixed = self
            .num
            .sub(&self.den.mul(&Poly::monomial(C64::new(1.0, 0.0), 1)));
        let mut candidates: Vec<C64> = Vec::new();
        let mut interior: Vec<(C64, C64)> = Vec::new();
        if !fixed.is_zero() {
            for r in fixed.roots()? {
                if r.norm() < 1.0 - 1e-6 {
                    let d = self.derivative(r);
                    candidates.push(r);
                    if d.norm() < 1.0 {
                        interior.push((r, d));
                    }
                } else if r.norm() <= 1.0 + CANDIDATE_BAND {
                    candidates.push(r);
                }
            }
        }
        let mut boundary: Vec<(C64, C64)> = Vec::new();
        match self.contacts() {
            Ok(contacts) => {
                for c in contacts {
                    let (f, f1, _) = self.jet(c.zeta);
                    if (f - c.zeta).norm() < tol.match_tol {
                        candidates.push(c.zeta);
                        if f1.im.abs() <= tol.match_tol && f1.re > 0.0 && f1.re <= 1.0 + tol.eps {
                            boundary.push((c.zeta, C64::new(f1.re, 0.0)));
                        }
                    }
                }
            }
            Err(Error::InnerSymbol) => {}
            Err(e) => return Err(e),
        }
        let record = match (interior.as_slice(), boundary.as_slice()) {
            ([(w, d)], _) => DenjoyWolffRecord::new(*w, *d, Location::Interior, tol.eps)?,
            ([], [(w, d)]) => DenjoyWolffRecord::new(*w, *d, Location::Boundary, tol.eps)?,
            _ => return Err(Error::DenjoyWolffNotFound { candidates }),
        };
        // Forward orbit of 0 must settle nearest to the selected point.
        let mut z = C64::zero();
        for _ in 0..DW_ITERATIONS {
            let next = self.eval(z);
            let done = (next - z).norm() < 1e-14;
            z = next;
            if done {
                break;
            }
        }
        let nearest = candidates
            .iter()
            .copied()
            .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()));
        if nearest.map_or(true, |n| (n - record.omega).norm() > 1e-6) {
            return Err(Error::Inconsistent(format!(
                "orbit of 0 approaches {z}, not the Denjoy-Wolff candidate {}",
                record.omega
            )));
        }
        Ok(record)
    }
}

fn three_point_mobius(zs: [C64; 3], ws: [C64; 3]) -> Option<MobiusMap> {
    // Cross-ratio map sending (p, q, r) to (0, ∞, 1).
    let to_std = |p: [C64; 3]| {
        MobiusMap::new(
            p[2] - p[1],
            -p[0] * (p[2] - p[1]),
            p[2] - p[0],
            -p[1] * (p[2] - p[0]),
        )
        .ok()
    };
    let a = to_std(zs)?;
    let b = to_std(ws)?;
    b.inverse().compose(&a).ok()
}

/// Argument in `[0, 2π)`, with angles just below `2π` snapped to 0.
fn unit_angle(z: C64) -> f64 {
    let t = z.arg();
    if t < -1e-9 {
        t + 2.0 * PI
    } else {
        t.max(0.0)
    }
}

/// A symbol known only through its contact points and Denjoy–Wolff data.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDataSymbol {
    points: Vec<SecondOrderData>,
    denjoy_wolff: DenjoyWolffRecord,
}

impl BoundaryDataSymbol {
    /// Checks distinct contact points and that the Denjoy–Wolff record agrees
    /// with the declared boundary fixed points.
    pub fn new(
        points: Vec<SecondOrderData>,
        denjoy_wolff: DenjoyWolffRecord,
        tol: &Tolerances,
    ) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i]
                .iter()
                .any(|q| (q.zeta() - p.zeta()).norm() <= tol.match_tol)
            {
                return Err(Error::InvalidSymbol(format!(
                    "duplicate contact point {}",
                    p.zeta()
                )));
            }
        }
        let omega = denjoy_wolff.omega();
        let is_fixed = |p: &SecondOrderData| (p.value() - p.zeta()).norm() <= tol.match_tol;
        match denjoy_wolff.location() {
            Location::Boundary => {
                let Some(p) = points
                    .iter()
                    .find(|p| (p.zeta() - omega).norm() <= tol.match_tol)
                else {
                    return Err(Error::Inconsistent(format!(
                        "boundary Denjoy-Wolff point {omega} is not a declared contact point"
                    )));
                };
                if !is_fixed(p) || (p.d1() - denjoy_wolff.derivative()).norm() > tol.match_tol {
                    return Err(Error::Inconsistent(format!(
                        "declared data at {omega} disagree with the Denjoy-Wolff record"
                    )));
                }
            }
            Location::Interior => {}
        }
        for p in points.iter().filter(|p| is_fixed(p)) {
            let at_omega = (p.zeta() - omega).norm() <= tol.match_tol;
            if !at_omega && p.aligned_derivative() <= 1.0 + tol.eps {
                return Err(Error::Inconsistent(format!(
                    "boundary fixed point {} has derivative <= 1 but is not the Denjoy-Wolff point",
                    p.zeta()
                )));
            }
        }
        Ok(Self {
            points,
            denjoy_wolff,
        })
    }

    pub fn points(&self) -> &[SecondOrderData] {
        &self.points
    }

    pub fn denjoy_wolff(&self) -> DenjoyWolffRecord {
        self.denjoy_wolff
    }

    fn find(&self, zeta: C64, tol: &Tolerances) -> Result<SecondOrderData> {
        self.points
            .iter()
            .find(|p| (p.zeta() - zeta).norm() <= tol.match_tol)
            .copied()
            .ok_or(Error::NotInContactSet(zeta))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Rational(RationalSymbol),
    BoundaryData(BoundaryDataSymbol),
}

impl From<RationalSymbol> for Symbol {
    fn from(s: RationalSymbol) -> Self {
        Symbol::Rational(s)
    }
}

impl From<BoundaryDataSymbol> for Symbol {
    fn from(s: BoundaryDataSymbol) -> Self {
        Symbol::BoundaryData(s)
    }
}

impl Symbol {
    pub fn contact_set(&self) -> Result<Vec<C64>> {
        match self {
            Symbol::Rational(r) => r.contact_set(),
            Symbol::BoundaryData(b) => Ok(b.points.iter().map(|p| p.zeta()).collect()),
        }
    }

    pub fn second_order_data(&self, zeta: C64, tol: &Tolerances) -> Result<SecondOrderData> {
        match self {
            Symbol::Rational(r) => r.second_order_data(zeta, tol),
            Symbol::BoundaryData(b) => b.find(zeta, tol),
        }
    }

    pub fn denjoy_wolff(&self, tol: &Tolerances) -> Result<DenjoyWolffRecord> {
        match self {
            Symbol::Rational(r) => r.denjoy_wolff(tol),
            Symbol::BoundaryData(b) => Ok(b.denjoy_wolff),
        }
    }

    /// Second-order data at ω when ω is a boundary point.
    pub fn data_at_denjoy_wolff(
        &self,
        dw: &DenjoyWolffRecord,
        tol: &Tolerances,
    ) -> Result<Option<SecondOrderData>> {
        match dw.location() {
            Location::Interior => Ok(None),
            Location::Boundary => self.second_order_data(dw.omega(), tol).map(Some),
        }
    }
}

/// Curvature test for order-2 contact.
pub fn contact_order_two(data: &SecondOrderData, eps: f64) -> bool {
    data.contact_quantity().re > eps
}

pub fn classify_type(
    dw: &DenjoyWolffRecord,
    data_at_omega: Option<&SecondOrderData>,
    eps: f64,
) -> Result<TypeClass> {
    if dw.location() == Location::Interior {
        return Ok(TypeClass::Dilation);
    }
    let d = dw.derivative().re;
    if d < 1.0 - eps {
        return Ok(TypeClass::Hyperbolic);
    }
    let data = data_at_omega.ok_or(Error::Inconsistent(
        "parabolic classification needs second-order data at the Denjoy-Wolff point".into(),
    ))?;
    let a = dw.omega() * data.d2();
    if a.norm() <= eps || a.re > eps {
        Ok(TypeClass::ParabolicNonAutomorphismType)
    } else if a.re < -eps {
        Err(Error::ParabolicTestPremise)
    } else {
        Ok(TypeClass::ParabolicAutomorphismType)
    }
}

/// Which of the S(2) conditions other than order-2 contact hold by analytic
/// structure and which are taken on trust.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionBasis {
    /// Rational and analytic on the closed disk: non-unimodular boundary
    /// values a.e., finite `E(φ)` and `C²` smoothness all hold.
    Automatic,
    /// Boundary-data symbols: those conditions are declared by the caller.
    Declared,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCheck {
    pub zeta: C64,
    /// Real part of the curvature quantity.
    pub curvature: f64,
    pub order_two: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub reason: &'static str,
    pub detail: alloc::string::String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct S2Certificate {
    pub basis: ConditionBasis,
    pub points: Vec<PointCheck>,
    pub rejection: Option<Rejection>,
}

impl S2Certificate {
    pub fn accepted(&self) -> bool {
        self.rejection.is_none()
    }
}

/// Certifies membership in `S(2)`. Hard numerical failures are errors;
/// failing the class conditions yields a certificate carrying a rejection.
pub fn certify_s2(s: &Symbol, tol: &Tolerances) -> Result<S2Certificate> {
    let basis = match s {
        Symbol::Rational(_) => ConditionBasis::Automatic,
        Symbol::BoundaryData(_) => ConditionBasis::Declared,
    };
    let contact = match s.contact_set() {
        Ok(c) => c,
        Err(e @ (Error::InnerSymbol | Error::ContactOrderExceedsTwo(_))) => {
            return Ok(S2Certificate {
                basis,
                points: Vec::new(),
                rejection: Some(Rejection {
                    reason: e.reason(),
                    detail: format!("{e}"),
                }),
            })
        }
        Err(e) => return Err(e),
    };
    let mut points = Vec::with_capacity(contact.len());
    for zeta in contact {
        let data = s.second_order_data(zeta, tol)?;
        points.push(PointCheck {
            zeta,
            curvature: data.contact_quantity().re,
            order_two: contact_order_two(&data, tol.eps),
        });
    }
    let failing: Vec<C64> = points
        .iter()
        .filter(|p| !p.order_two)
        .map(|p| p.zeta)
        .collect();
    let rejection = (!failing.is_empty()).then(|| Rejection {
        reason: "order of contact is not 2",
        detail: format!("curvature test fails at {failing:?}"),
    });
    Ok(S2Certificate {
        basis,
        points,
        rejection,
    })
}

/// The pure-point part of the Clark measure `μ_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClarkAtoms {
    pub alpha: C64,
    /// `(ζ, 1/|φ'(ζ)|)` for each `ζ ∈ E(φ)` with `φ(ζ) = α`.
    pub atoms: Vec<(C64, f64)>,
}

impl ClarkAtoms {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }
}

pub fn clark_atoms(s: &Symbol, alpha: C64, tol: &Tolerances) -> Result<ClarkAtoms> {
    let mut atoms = Vec::new();
    for zeta in s.contact_set()? {
        let data = s.second_order_data(zeta, tol)?;
        if (data.value() - alpha).norm() <= tol.eps {
            atoms.push((zeta, 1.0 / data.d1().norm()));
        }
    }
    Ok(ClarkAtoms { alpha, atoms })
}

/// `‖C_φ‖²_e`: the largest pure-point Clark mass over `α ∈ φ(E(φ))`.
pub fn essential_norm_sq(s: &Symbol, tol: &Tolerances) -> Result<f64> {
    let mut best: f64 = 0.0;
    let mut seen: Vec<C64> = vec![];
    for zeta in s.contact_set()? {
        let alpha = s.second_order_data(zeta, tol)?.value();
        if seen.iter().any(|a| (a - alpha).norm() <= tol.eps) {
            continue;
        }
        seen.push(alpha);
        best = best.max(clark_atoms(s, alpha, tol)?.total_mass());
    }
    Ok(best)
}
