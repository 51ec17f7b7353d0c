//! Spectral regions and the spectrum synthesizers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{partition, OrbitPartition};
use crate::mobius::{FixedPoints, MobiusMap};
use crate::symbol::{certify_s2, classify_type, DenjoyWolffRecord, Location, Symbol, TypeClass};
use crate::{is_finite, Error, Result, Tolerances, C64};

/// Tail elements below this modulus are not enumerated; 0 stands for them.
const TAIL_CUTOFF: f64 = 1e-12;
/// Spirals are sampled for probing until `|e^{-at}|` falls below this.
const SPIRAL_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    /// `{|z| ≤ radius}`.
    Disk {
        radius: f64,
    },
    /// `{e^{-at} : t ≥ 0} ∪ {0}`, `Re a > 0`. Real `a` gives `[0, 1]`.
    Spiral {
        a: C64,
    },
    Points(Vec<C64>),
    /// `{base^k : k ≥ 0} ∪ {0}`, `|base| < 1`.
    Tail {
        base: C64,
    },
}

impl Primitive {
    fn rank(&self) -> u8 {
        match self {
            Primitive::Disk { .. } => 0,
            Primitive::Spiral { .. } => 1,
            Primitive::Tail { .. } => 2,
            Primitive::Points(_) => 3,
        }
    }

    pub fn contains(&self, lambda: C64, eps: f64) -> bool {
        match self {
            Primitive::Disk { radius } => lambda.norm() <= radius + eps,
            Primitive::Points(ps) => ps.iter().any(|p| (p - lambda).norm() < eps),
            Primitive::Tail { base } => {
                if lambda.norm() < eps {
                    return true;
                }
                let mut z = C64::new(1.0, 0.0);
                while z.norm() >= eps.min(TAIL_CUTOFF) {
                    if (z - lambda).norm() < eps {
                        return true;
                    }
                    z *= base;
                    if base.norm() == 0.0 {
                        break;
                    }
                }
                false
            }
            Primitive::Spiral { a } => spiral_contains(*a, lambda, eps),
        }
    }

    pub fn max_modulus(&self) -> f64 {
        match self {
            Primitive::Disk { radius } => *radius,
            Primitive::Spiral { .. } | Primitive::Tail { .. } => 1.0,
            Primitive::Points(ps) => ps.iter().map(|p| p.norm()).fold(0.0, f64::max),
        }
    }

    fn probes(&self, out: &mut Vec<C64>) {
        match self {
            Primitive::Disk { radius } => {
                out.push(C64::new(0.0, 0.0));
                for k in 0..96 {
                    let t = 2.0 * PI * k as f64 / 96.0;
                    out.push(C64::from_polar(*radius, t));
                    if k % 2 == 0 {
                        out.push(C64::from_polar(radius * 0.5, t + 0.1));
                    }
                }
            }
            Primitive::Spiral { a } => {
                out.push(C64::new(0.0, 0.0));
                let t_max = -SPIRAL_CUTOFF.ln() / a.re;
                for k in 0..=256 {
                    let t = t_max * k as f64 / 256.0;
                    out.push((-a * t).exp());
                }
            }
            Primitive::Points(ps) => out.extend_from_slice(ps),
            Primitive::Tail { base } => {
                out.push(C64::new(0.0, 0.0));
                out.extend(tail_terms(*base, TAIL_CUTOFF));
            }
        }
    }
}

fn tail_terms(base: C64, cutoff: f64) -> Vec<C64> {
    let mut terms = Vec::new();
    let mut z = C64::new(1.0, 0.0);
    while z.norm() >= cutoff {
        terms.push(z);
        if base.norm() == 0.0 {
            break;
        }
        z *= base;
    }
    terms
}

fn spiral_contains(a: C64, lambda: C64, eps: f64) -> bool {
    if lambda.norm() < eps {
        return true;
    }
    let l = lambda.norm().ln();
    let theta = lambda.arg();
    let window = (l.abs() * a.im.abs() / (2.0 * PI * a.re)).ceil() as i64 + 2;
    (-window..=window).any(|k| {
        let t = -(C64::new(l, theta + 2.0 * PI * k as f64)) / a;
        if t.re < -eps {
            return false;
        }
        let t = t.re.max(0.0);
        ((-a * t).exp() - lambda).norm() < eps
    })
}

fn cmp_c(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// A closed subset of the plane stored as a canonical union of primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRegion {
    primitives: Vec<Primitive>,
}

impl SpectralRegion {
    /// Canonical tolerance used when absorbing and deduplicating.
    pub const CANON_EPS: f64 = 1e-9;

    pub fn new(primitives: Vec<Primitive>) -> Result<Self> {
        for p in &primitives {
            let ok = match p {
                Primitive::Disk { radius } => radius.is_finite() && *radius >= 0.0,
                Primitive::Spiral { a } => is_finite(*a) && a.re > 0.0,
                Primitive::Points(ps) => ps.iter().all(|z| is_finite(*z)),
                Primitive::Tail { base } => is_finite(*base) && base.norm() < 1.0,
            };
            if !ok {
                return Err(Error::Inconsistent(alloc::format!(
                    "invalid primitive {p:?}"
                )));
            }
        }
        Ok(Self::canonicalize(primitives))
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::new(vec![Primitive::Disk { radius }])
    }

    pub fn spiral(a: C64) -> Result<Self> {
        Self::new(vec![Primitive::Spiral { a }])
    }

    pub fn points(points: Vec<C64>) -> Result<Self> {
        Self::new(vec![Primitive::Points(points)])
    }

    pub fn tail(base: C64) -> Result<Self> {
        Self::new(vec![Primitive::Tail { base }])
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.primitives.clone();
        all.extend(other.primitives.iter().cloned());
        Self::canonicalize(all)
    }

    /// Re-runs canonicalization; a no-op on any constructed region.
    pub fn canonical(&self) -> Self {
        Self::canonicalize(self.primitives.clone())
    }

    fn canonicalize(input: Vec<Primitive>) -> Self {
        let eps = Self::CANON_EPS;
        let mut radius: Option<f64> = None;
        let mut spirals: Vec<C64> = Vec::new();
        let mut tails: Vec<C64> = Vec::new();
        let mut points: Vec<C64> = Vec::new();
        for p in input {
            match p {
                Primitive::Disk { radius: r } if r == 0.0 => points.push(C64::new(0.0, 0.0)),
                Primitive::Disk { radius: r } => radius = Some(radius.map_or(r, |q| q.max(r))),
                Primitive::Spiral { a } => {
                    if !spirals.iter().any(|s| (s - a).norm() <= eps) {
                        spirals.push(a);
                    }
                }
                Primitive::Tail { base } if base.norm() == 0.0 => {
                    points.push(C64::new(0.0, 0.0));
                    points.push(C64::new(1.0, 0.0));
                }
                Primitive::Tail { base } => {
                    if !tails.iter().any(|t| (t - base).norm() <= eps) {
                        tails.push(base);
                    }
                }
                Primitive::Points(ps) => points.extend(ps),
            }
        }
        if let Some(r) = radius {
            // A disk swallows every spiral and tail once r ≥ 1; below that a
            // tail leaves only finitely many terms outside the disk.
            if r + eps >= 1.0 {
                spirals.clear();
                tails.clear();
            }
            for t in tails.drain(..) {
                points.extend(
                    tail_terms(t, TAIL_CUTOFF)
                        .into_iter()
                        .filter(|z| z.norm() > r + eps),
                );
            }
        }
        spirals.sort_by(cmp_c);
        tails.sort_by(cmp_c);

        let mut out: Vec<Primitive> = Vec::new();
        if let Some(r) = radius {
            out.push(Primitive::Disk { radius: r });
        }
        out.extend(spirals.into_iter().map(|a| Primitive::Spiral { a }));
        out.extend(tails.into_iter().map(|base| Primitive::Tail { base }));

        points.sort_by(cmp_c);
        let mut kept: Vec<C64> = Vec::new();
        for p in points {
            if kept.iter().any(|k| (k - p).norm() < eps) || out.iter().any(|q| q.contains(p, eps)) {
                continue;
            }
            kept.push(p);
        }
        if !kept.is_empty() {
            out.push(Primitive::Points(kept));
        }
        out.sort_by_key(|p| p.rank());
        Self { primitives: out }
    }

    pub fn contains(&self, lambda: C64, eps: f64) -> bool {
        self.primitives.iter().any(|p| p.contains(lambda, eps))
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.max_modulus())
            .fold(0.0, f64::max)
    }

    /// Deterministic probe set, dense along the boundary of each primitive.
    pub fn probes(&self) -> Vec<C64> {
        let mut out = Vec::new();
        for p in &self.primitives {
            p.probes(&mut out);
        }
        out
    }

    pub fn is_subset_of(&self, other: &Self, tol: f64) -> bool {
        self.probes().into_iter().all(|z| other.contains(z, tol))
    }

    /// Set equality by two-sided probe containment.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.is_subset_of(other, tol) && other.is_subset_of(self, tol)
    }

    /// The radius of the disk primitive, if any.
    pub fn disk_radius(&self) -> Option<f64> {
        self.primitives.iter().find_map(|p| match p {
            Primitive::Disk { radius } => Some(*radius),
            _ => None,
        })
    }

    pub fn spiral_parameters(&self) -> Vec<C64> {
        self.primitives
            .iter()
            .filter_map(|p| match p {
                Primitive::Spiral { a } => Some(*a),
                _ => None,
            })
            .collect()
    }

    pub fn isolated_points(&self) -> &[C64] {
        self.primitives
            .iter()
            .find_map(|p| match p {
                Primitive::Points(ps) => Some(ps.as_slice()),
                _ => None,
            })
            .unwrap_or(&[])
    }
}

/// Spectrum and essential spectrum of `C_ψ` for a non-automorphic
/// linear-fractional self-map. Returns `(full, essential)`.
pub fn lft_spectra(psi: &MobiusMap, eps: f64) -> Result<(SpectralRegion, SpectralRegion)> {
    if psi.is_disk_automorphism(eps) {
        return Err(Error::Automorphism);
    }
    let fixed: Vec<C64> = psi.fixed_points(eps).finite().collect();
    if matches!(psi.fixed_points(eps), FixedPoints::Identity) {
        return Err(Error::Automorphism);
    }
    let on_circle = |z: &C64| (z.norm() - 1.0).abs() <= 1e-7;
    let interior = fixed
        .iter()
        .copied()
        .find(|z| z.norm() < 1.0 && !on_circle(z));
    let boundary: Vec<C64> = fixed.iter().copied().filter(on_circle).collect();
    match (interior, boundary.as_slice()) {
        (Some(w), []) => {
            let d = psi.derivative(w)?;
            Ok((
                SpectralRegion::tail(d)?,
                SpectralRegion::points(vec![C64::new(0.0, 0.0)])?,
            ))
        }
        (Some(w), [z0, ..]) => {
            let d0 = psi.derivative(*z0)?.re;
            let essential = SpectralRegion::disk(1.0 / d0.sqrt())?;
            let full = essential.union(&SpectralRegion::tail(psi.derivative(w)?)?);
            Ok((full, essential))
        }
        (None, [w]) => {
            let d = psi.derivative(*w)?.re;
            if d < 1.0 - eps {
                let r = SpectralRegion::disk(1.0 / d.sqrt())?;
                Ok((r.clone(), r))
            } else {
                let a = *w * psi.second_derivative(*w)?;
                if a.re <= 0.0 {
                    return Err(Error::ParabolicAutomorphismType);
                }
                let r = SpectralRegion::spiral(a)?;
                Ok((r.clone(), r))
            }
        }
        _ => Err(Error::DenjoyWolffNotFound { candidates: fixed }),
    }
}

/// `max_j ((φ^{[ℓ_j]})'(ζ_{s_j}))^{-1/(2ℓ_j)}` over all cycles.
pub fn rho(p: &OrbitPartition) -> Result<f64> {
    if p.cycles().is_empty() {
        return Err(Error::NoCycles);
    }
    Ok(radius_over(p, None))
}

/// [`rho`] with cycle `excluded` left out; 0 if nothing remains.
pub fn rho_star(p: &OrbitPartition, excluded: usize) -> f64 {
    radius_over(p, Some(excluded))
}

fn radius_over(p: &OrbitPartition, excluded: Option<usize>) -> f64 {
    p.cycles()
        .iter()
        .enumerate()
        .filter(|(k, _)| Some(*k) != excluded)
        .map(|(_, c)| c.multiplier().powf(-1.0 / (2.0 * c.len() as f64)))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisCase {
    /// `E(φ)` empty: `C_φ` is compact.
    Compact,
    /// Every point of `E(φ)` iterates out: a power of `C_φ` is compact.
    PowerCompact,
    /// Cycles present, interior Denjoy–Wolff point.
    InteriorDenjoyWolff,
    /// Cycles present, hyperbolic type.
    Hyperbolic,
    /// Cycles present, parabolic non-automorphism type.
    Parabolic,
}

impl SynthesisCase {
    pub fn name(&self) -> &'static str {
        match self {
            SynthesisCase::Compact => "compact",
            SynthesisCase::PowerCompact => "power-compact",
            SynthesisCase::InteriorDenjoyWolff => "interior-denjoy-wolff",
            SynthesisCase::Hyperbolic => "hyperbolic",
            SynthesisCase::Parabolic => "parabolic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub essential: SpectralRegion,
    pub full: SpectralRegion,
    /// The cycle radius `ρ`; 0 when there are no cycles.
    pub rho: f64,
    pub type_class: TypeClass,
    pub denjoy_wolff: DenjoyWolffRecord,
    pub partition: OrbitPartition,
    pub case: SynthesisCase,
    pub notes: Vec<String>,
}

/// Spectrum and essential spectrum of `C_φ` for a symbol in `S(2)`.
pub fn synthesize(s: &Symbol, tol: &Tolerances) -> Result<SpectrumReport> {
    let cert = certify_s2(s, tol)?;
    if let Some(r) = cert.rejection {
        return Err(Error::NotS2(r.detail));
    }
    let dw = s.denjoy_wolff(tol)?;
    let data = s.data_at_denjoy_wolff(&dw, tol)?;
    let type_class = classify_type(&dw, data.as_ref(), tol.eps)?;
    if type_class == TypeClass::ParabolicAutomorphismType {
        return Err(Error::ParabolicAutomorphismType);
    }
    let part = partition(s, tol)?;
    let zero = C64::new(0.0, 0.0);
    let mut notes = Vec::new();

    let (essential, full, rho_value, case) = if part.cycles().is_empty() {
        let case = if part.contact().is_empty() {
            SynthesisCase::Compact
        } else {
            SynthesisCase::PowerCompact
        };
        notes.push(alloc::format!("{}: no cycles in E(phi)", case.name()));
        (
            SpectralRegion::points(vec![zero])?,
            SpectralRegion::tail(dw.derivative())?,
            0.0,
            case,
        )
    } else {
        match type_class {
            TypeClass::Dilation => {
                let r = rho(&part)?;
                let d = dw.derivative();
                let mut eigen = vec![C64::new(1.0, 0.0)];
                let mut power = d;
                // N is the least positive integer with |φ'(ω)|^N ≤ ρ.
                while power.norm() > r {
                    eigen.push(power);
                    power *= d;
                }
                notes.push(alloc::format!(
                    "interior Denjoy-Wolff point, N = {}",
                    eigen.len()
                ));
                let essential = SpectralRegion::disk(r)?;
                let full = essential.union(&SpectralRegion::points(eigen)?);
                (essential, full, r, SynthesisCase::InteriorDenjoyWolff)
            }
            TypeClass::Hyperbolic => {
                let r = rho(&part)?;
                let predicted = 1.0 / dw.derivative().re.sqrt();
                if (r - predicted).abs() > 1e-9 * predicted.max(1.0) {
                    return Err(Error::Inconsistent(alloc::format!(
                        "cycle radius {r} disagrees with 1/sqrt(phi'(omega)) = {predicted}"
                    )));
                }
                notes.push("hyperbolic type".into());
                let region = SpectralRegion::disk(predicted)?;
                (region.clone(), region, predicted, SynthesisCase::Hyperbolic)
            }
            TypeClass::ParabolicNonAutomorphismType => {
                let omega = dw.omega();
                let j = part
                    .cycles()
                    .iter()
                    .position(|c| c.len() == 1 && c.contains(omega, tol.match_tol))
                    .ok_or_else(|| {
                        Error::Inconsistent("Denjoy-Wolff point is not a fixed cycle".into())
                    })?;
                let r = rho_star(&part, j);
                let a = omega * data.expect("boundary data").d2();
                notes.push(alloc::format!("parabolic type, rho_* = {r}"));
                let region = if r > 0.0 {
                    SpectralRegion::new(vec![
                        Primitive::Disk { radius: r },
                        Primitive::Spiral { a },
                    ])?
                } else {
                    SpectralRegion::spiral(a)?
                };
                (
                    region.clone(),
                    region,
                    rho(&part)?,
                    SynthesisCase::Parabolic,
                )
            }
            TypeClass::ParabolicAutomorphismType => unreachable!(),
        }
    };
    Ok(SpectrumReport {
        essential,
        full,
        rho: rho_value,
        type_class,
        denjoy_wolff: dw,
        partition: part,
        case,
        notes,
    })
}

/// Spectral radius cross-check: `r(C_φ)` is 1 for interior `ω` and
/// `1/√φ'(ω)` for boundary `ω`.
pub fn spectral_radius_check(report: &SpectrumReport, dw: &DenjoyWolffRecord, tol: f64) -> bool {
    let expected = match dw.location() {
        Location::Interior => 1.0,
        Location::Boundary => 1.0 / dw.derivative().re.sqrt(),
    };
    (report.full.max_modulus() - expected).abs() <= tol * expected
}

/// Independent route to the essential spectrum for symbols whose contact set
/// consists of fixed points only: the union of the essential spectra of the
/// linear-fractional maps sharing each point's second-order data, plus `{0}`.
pub fn kms2t_essential_union(s: &Symbol, tol: &Tolerances) -> Result<SpectralRegion> {
    let cert = certify_s2(s, tol)?;
    if let Some(r) = cert.rejection {
        return Err(Error::NotS2(r.detail));
    }
    let part = partition(s, tol)?;
    if !part.iterate_out().is_empty() {
        return Err(Error::Kms2tPrecondition("iterate-out points present"));
    }
    if part.cycles().iter().any(|c| c.len() != 1) {
        return Err(Error::Kms2tPrecondition("cycle of length > 1"));
    }
    if (0..part.cycles().len()).any(|k| !part.lead_ins(k).is_empty()) {
        return Err(Error::Kms2tPrecondition("lead-in points present"));
    }
    let mut region = SpectralRegion::points(vec![C64::new(0.0, 0.0)])?;
    for &zeta in part.contact() {
        let data = s.second_order_data(zeta, tol)?;
        let psi = MobiusMap::from_second_order_data(&data, tol.eps)?;
        let (_, essential) = lft_spectra(&psi, tol.eps)?;
        region = region.union(&essential);
    }
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn spiral_membership() {
        let s = SpectralRegion::spiral(c(8.0, 0.0)).unwrap();
        assert!(s.contains(c(1.0, 0.0), 1e-9));
        assert!(s.contains(c((-8.0f64).exp(), 0.0), 1e-12));
        assert!(s.contains(c(0.5, 0.0), 1e-9));
        assert!(!s.contains(c(-0.5, 0.0), 1e-9));
        assert!(!s.contains(c(1.01, 0.0), 1e-9));
        let a = c(1.0, 5.0);
        let s = SpectralRegion::spiral(a).unwrap();
        for t in [0.0, 0.3, 1.0, 2.5] {
            assert!(s.contains((-a * t).exp(), 1e-9), "t = {t}");
        }
        assert!(!s.contains(c(0.5, 0.0), 1e-6));
    }

    #[test]
    fn disk_membership() {
        let d = SpectralRegion::disk(1.0 / 3.0).unwrap();
        assert!(!d.contains(c(0.4, 0.0), 1e-9));
        assert!(d.contains(c(0.0, 1.0 / 3.0), 1e-9));
    }

    #[test]
    fn canonical_forms() {
        let r = SpectralRegion::new(vec![
            Primitive::Points(vec![c(0.1, 0.0), c(1.0, 0.0), c(1.0, 0.0)]),
            Primitive::Disk { radius: 0.2 },
            Primitive::Disk { radius: 0.5 },
        ])
        .unwrap();
        assert_eq!(
            r.primitives(),
            &[
                Primitive::Disk { radius: 0.5 },
                Primitive::Points(vec![c(1.0, 0.0)])
            ]
        );
        assert_eq!(
            SpectralRegion::tail(c(0.0, 0.0)).unwrap().primitives(),
            &[Primitive::Points(vec![c(0.0, 0.0), c(1.0, 0.0)])]
        );
        let r = SpectralRegion::new(vec![
            Primitive::Disk { radius: 0.3 },
            Primitive::Tail { base: c(0.5, 0.0) },
        ])
        .unwrap();
        assert_eq!(r.isolated_points(), &[c(0.5, 0.0), c(1.0, 0.0)]);
        let r = SpectralRegion::new(vec![
            Primitive::Disk { radius: 0.0 },
            Primitive::Spiral { a: c(8.0, 0.0) },
        ])
        .unwrap();
        assert_eq!(r.primitives(), &[Primitive::Spiral { a: c(8.0, 0.0) }]);
        assert_eq!(r.canonical(), r);
    }

    #[test]
    fn lft_cases() {
        let psi1 = MobiusMap::from_real(-3.0, 4.0, -4.0, 5.0).unwrap();
        let (full, ess) = lft_spectra(&psi1, 1e-9).unwrap();
        assert_eq!(full, ess);
        assert!((ess.spiral_parameters()[0] - 8.0).norm() < 1e-9);

        let psi2 = MobiusMap::from_real(41.0, 32.0, 40.0, 49.0).unwrap();
        let (full, ess) = lft_spectra(&psi2, 1e-9).unwrap();
        assert!((ess.disk_radius().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(ess.primitives().len(), 1);
        assert!((full.disk_radius().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(full.isolated_points().len(), 1);
        assert!((full.isolated_points()[0] - 1.0).norm() < 1e-12);

        let half = MobiusMap::from_real(0.5, 0.0, 0.0, 1.0).unwrap();
        let (full, ess) = lft_spectra(&half, 1e-9).unwrap();
        assert_eq!(ess.primitives(), &[Primitive::Points(vec![c(0.0, 0.0)])]);
        assert_eq!(full.primitives(), &[Primitive::Tail { base: c(0.5, 0.0) }]);

        // (1 + z)/2: hyperbolic with ω = 1, φ'(1) = 1/2
        let hyper = MobiusMap::from_real(0.5, 0.5, 0.0, 1.0).unwrap();
        let (full, _) = lft_spectra(&hyper, 1e-9).unwrap();
        assert!((full.disk_radius().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }
}
