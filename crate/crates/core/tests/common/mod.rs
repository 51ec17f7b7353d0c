#![allow(dead_code)]

use std::f64::consts::PI;

use compspec_core::algebra_lab::{
    self, check_jacobson, make_family, random_similarity, Lemma, SquareMatrix,
};
use compspec_core::dynamics::{cycle_multiplier, partition};
use compspec_core::spectrum::{spectral_radius_check, synthesize};
use compspec_core::symbol::Location;
use compspec_core::{
    BoundaryDataSymbol, DenjoyWolffRecord, MobiusMap, Primitive, RationalSymbol, SecondOrderData,
    SpectralRegion, Symbol, Tolerances, C64,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}

pub fn rational(num: Vec<C64>, den: Vec<C64>) -> Symbol {
    Symbol::Rational(RationalSymbol::new(num, den, &Tolerances::default()).expect("valid symbol"))
}

/// (2z² − z − 2)/(2z² − 3)
pub fn lollipop_parts() -> (Vec<C64>, Vec<C64>) {
    (real(&[-2.0, -1.0, 2.0]), real(&[-3.0, 0.0, 2.0]))
}

pub fn lollipop() -> Symbol {
    let (n, d) = lollipop_parts();
    rational(n, d)
}

/// −z³((1+i) + (3−i)z²) / ((2 − z⁸)((3+i) + (1−i)z²))
pub fn ppex_parts() -> (Vec<C64>, Vec<C64>) {
    let mut num = vec![c(0.0, 0.0); 6];
    num[3] = -c(1.0, 1.0);
    num[5] = -c(3.0, -1.0);
    let inner = [c(3.0, 1.0), c(0.0, 0.0), c(1.0, -1.0)];
    let mut den = vec![c(0.0, 0.0); 11];
    for (k, q) in inner.iter().enumerate() {
        den[k] += q * 2.0;
        den[k + 8] -= q;
    }
    (num, den)
}

pub fn ppex() -> Symbol {
    let (n, d) = ppex_parts();
    rational(n, d)
}

/// −z/(3 − 2z²)
pub fn two_cycle_parts() -> (Vec<C64>, Vec<C64>) {
    (real(&[0.0, -1.0]), real(&[3.0, 0.0, -2.0]))
}

pub fn two_cycle() -> Symbol {
    let (n, d) = two_cycle_parts();
    rational(n, d)
}

pub fn sqrt_boundary() -> Symbol {
    let t = Tolerances::default();
    let points = vec![
        SecondOrderData::new(
            c(-1.0, 0.0),
            c(-1.0, 0.0),
            c(2.5, 0.0),
            c(-33.0 / 8.0, 0.0),
            t.eps,
        )
        .unwrap(),
        SecondOrderData::new(c(1.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), t.eps).unwrap(),
    ];
    let dw = DenjoyWolffRecord::new(c(1.0, 0.0), c(0.5, 0.0), Location::Boundary, t.eps).unwrap();
    Symbol::BoundaryData(BoundaryDataSymbol::new(points, dw, &t).unwrap())
}

/// (4 − 3z)/(5 − 4z)
pub fn psi1() -> MobiusMap {
    MobiusMap::from_real(-3.0, 4.0, -4.0, 5.0).unwrap()
}

/// (41z + 32)/(40z + 49)
pub fn psi2() -> MobiusMap {
    MobiusMap::from_real(41.0, 32.0, 40.0, 49.0).unwrap()
}

pub fn psi2_symbol() -> Symbol {
    rational(real(&[32.0, 41.0]), real(&[49.0, 40.0]))
}

/// Coefficients of `η·φ(ζz)`.
pub fn rotate(parts: &(Vec<C64>, Vec<C64>), zeta: C64, eta: C64) -> (Vec<C64>, Vec<C64>) {
    let scale = |v: &[C64], out: C64| -> Vec<C64> {
        let mut p = C64::new(1.0, 0.0);
        v.iter()
            .map(|&x| {
                let y = x * p * out;
                p *= zeta;
                y
            })
            .collect()
    };
    (scale(&parts.0, eta), scale(&parts.1, C64::new(1.0, 0.0)))
}

/// Two-sided probe containment.
pub fn same_region(a: &SpectralRegion, b: &SpectralRegion, tol: f64) -> bool {
    a.probes().into_iter().all(|z| b.contains(z, tol))
        && b.probes().into_iter().all(|z| a.contains(z, tol))
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(0x5eed),
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

fn unit() -> impl Strategy<Value = C64> {
    prop_oneof![
        (0usize..8).prop_map(|k| C64::from_polar(1.0, PI * k as f64 / 4.0)),
        (0.0..2.0 * PI).prop_map(|t| C64::from_polar(1.0, t)),
    ]
}

/// Unit-normalized maps with `|det| ≥ 0.05`.
fn mobius() -> impl Strategy<Value = MobiusMap> {
    (complex(2.0), complex(2.0), complex(2.0), complex(2.0)).prop_filter_map(
        "degenerate",
        |(a, b, cc, d)| {
            let m = MobiusMap::new(a, b, cc, d).ok()?;
            (m.determinant().norm() >= 0.05).then_some(m)
        },
    )
}

fn rel_close(x: C64, y: C64, tol: f64) -> bool {
    (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0)
}

pub fn mobius_associativity() -> Result<(), String> {
    run(256, (mobius(), mobius(), mobius()), |(a, b, m)| {
        let left = a.compose(&b).and_then(|ab| ab.compose(&m));
        let right = b.compose(&m).and_then(|bm| a.compose(&bm));
        if let (Ok(l), Ok(r)) = (left, right) {
            prop_assert!(l.approx_eq(&r, 1e-10), "{l:?} vs {r:?}");
        }
        Ok(())
    })
}

pub fn mobius_chain_rule() -> Result<(), String> {
    let points = proptest::collection::vec(complex(1.5), 100);
    run(128, (mobius(), mobius(), points), |(a, b, zs)| {
        let Ok(ab) = a.compose(&b) else { return Ok(()) };
        let [_, _, bc, bd] = b.coefficients();
        let [_, _, ac, ad] = a.coefficients();
        for z in zs {
            if (bc * z + bd).norm() < 0.1 {
                continue;
            }
            let w = b.evaluate(z).unwrap();
            if (ac * w + ad).norm() < 0.1 * (1.0 + w.norm()) {
                continue;
            }
            let lhs = ab.derivative(z).unwrap();
            let rhs = a.derivative(w).unwrap() * b.derivative(z).unwrap();
            prop_assert!(
                (lhs - rhs).norm() <= 1e-10 * lhs.norm().max(rhs.norm()),
                "z = {z}: {lhs} vs {rhs}"
            );
        }
        Ok(())
    })
}

pub fn incarnation_homomorphism() -> Result<(), String> {
    run(256, (mobius(), mobius()), |(a, b)| {
        let Ok(ab) = a.compose(&b) else { return Ok(()) };
        let whole = ab.halfplane_incarnation();
        let parts = a
            .halfplane_incarnation()
            .and_then(|x| b.halfplane_incarnation().and_then(|y| x.compose(&y)));
        if let (Ok(w), Ok(p)) = (whole, parts) {
            prop_assert!(w.approx_eq(&p, 1e-9), "{w:?} vs {p:?}");
        }
        Ok(())
    })
}

pub fn mobius_fixed_points() -> Result<(), String> {
    run(256, mobius(), |m| {
        let [a, b, cc, d] = m.coefficients();
        for p in m.fixed_points(1e-12).finite() {
            if p.norm() > 1e3 {
                continue;
            }
            let resid = cc * p * p + (d - a) * p - b;
            prop_assert!(
                resid.norm() <= 1e-10 * (1.0 + p.norm()).powi(2),
                "{p}: {resid}"
            );
        }
        Ok(())
    })
}

/// Second-order data of a non-automorphic self-map touching the circle at
/// `ζ`, built from its halfplane incarnation `w/p + B` with `Re B > 0`.
fn contact_data() -> impl Strategy<Value = SecondOrderData> {
    (unit(), unit(), 0.2f64..5.0, 0.05f64..3.0, -3.0f64..3.0).prop_map(
        |(zeta, eta, p, bre, bim)| {
            let b = c(bre, bim);
            let s2 = (b - 1.0 / p + 1.0) * p * p;
            let d1 = eta * zeta.conj() * p;
            let d2 = eta * zeta.conj() * zeta.conj() * s2;
            SecondOrderData::new(zeta, eta, d1, d2, 1e-12).unwrap()
        },
    )
}

pub fn lfm_round_trip() -> Result<(), String> {
    run(256, contact_data(), |data| {
        let psi = MobiusMap::from_second_order_data(&data, 1e-9)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = psi.second_order_data_at(data.zeta(), 1e-9).unwrap();
        prop_assert!(rel_close(back.value(), data.value(), 1e-9));
        prop_assert!(
            rel_close(back.d1(), data.d1(), 1e-9),
            "{} vs {}",
            back.d1(),
            data.d1()
        );
        prop_assert!(
            rel_close(back.d2(), data.d2(), 1e-9),
            "{} vs {}",
            back.d2(),
            data.d2()
        );
        Ok(())
    })
}

fn golden_parts() -> impl Strategy<Value = (Vec<C64>, Vec<C64>)> {
    prop_oneof![
        Just(lollipop_parts()),
        Just(ppex_parts()),
        Just(two_cycle_parts())
    ]
}

fn rotated_symbol() -> impl Strategy<Value = RationalSymbol> {
    (golden_parts(), unit(), unit()).prop_map(|(parts, zeta, eta)| {
        let (n, d) = rotate(&parts, zeta, eta);
        RationalSymbol::new(n, d, &Tolerances::default()).unwrap()
    })
}

fn err(e: compspec_core::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

pub fn partition_disjoint_cover() -> Result<(), String> {
    let t = Tolerances::default();
    run(48, rotated_symbol(), |r| {
        let s = Symbol::Rational(r);
        let p = partition(&s, &t).map_err(err)?;
        let mut seen: Vec<C64> = p.iterate_out().to_vec();
        for (k, cyc) in p.cycles().iter().enumerate() {
            seen.extend_from_slice(cyc.points());
            seen.extend_from_slice(p.lead_ins(k));
        }
        prop_assert_eq!(seen.len(), p.contact().len());
        for z in p.contact() {
            prop_assert_eq!(seen.iter().filter(|w| *w == z).count(), 1);
        }
        Ok(())
    })
}

pub fn cycle_start_independence() -> Result<(), String> {
    let t = Tolerances::default();
    run(48, rotated_symbol(), |r| {
        let s = Symbol::Rational(r);
        let p = partition(&s, &t).map_err(err)?;
        for cyc in p.cycles() {
            let mut pts = cyc.points().to_vec();
            for _ in 0..pts.len() {
                pts.rotate_left(1);
                let m = cycle_multiplier(&s, &pts, &t).map_err(err)?;
                prop_assert!(
                    (m - cyc.multiplier()).abs() <= 1e-10 * m,
                    "{m} vs {}",
                    cyc.multiplier()
                );
            }
        }
        Ok(())
    })
}

pub fn contact_rotation_covariance() -> Result<(), String> {
    let t = Tolerances::default();
    run(
        48,
        (golden_parts(), unit(), unit()),
        |(parts, zeta, eta)| {
            let base = Symbol::Rational(
                RationalSymbol::new(parts.0.clone(), parts.1.clone(), &t).unwrap(),
            );
            let (n, d) = rotate(&parts, zeta, eta);
            let rot = Symbol::Rational(RationalSymbol::new(n, d, &t).unwrap());
            let e0 = base.contact_set().map_err(err)?;
            let e1 = rot.contact_set().map_err(err)?;
            prop_assert_eq!(e0.len(), e1.len());
            for z in &e0 {
                let w = zeta.conj() * z;
                let hit = e1.iter().find(|x| (*x - w).norm() < 1e-9);
                prop_assert!(hit.is_some(), "{w} missing from {e1:?}");
                let q0 = base.second_order_data(*z, &t).unwrap().contact_quantity();
                let q1 = rot
                    .second_order_data(*hit.unwrap(), &t)
                    .unwrap()
                    .contact_quantity();
                prop_assert!((q0.re - q1.re).abs() <= 1e-7 * q0.re.abs().max(1.0));
            }
            Ok(())
        },
    )
}

pub fn report_invariants() -> Result<(), String> {
    let t = Tolerances::default();
    run(32, rotated_symbol(), |r| {
        let s = Symbol::Rational(r);
        let rep = synthesize(&s, &t).map_err(err)?;
        prop_assert!(rep.essential.contains(c(0.0, 0.0), 1e-12));
        prop_assert!(rep.full.contains(c(1.0, 0.0), 1e-9));
        prop_assert!(rep.essential.is_subset_of(&rep.full, 1e-9));
        prop_assert!(spectral_radius_check(&rep, &rep.denjoy_wolff, 1e-9));
        Ok(())
    })
}

fn primitive() -> impl Strategy<Value = Primitive> {
    prop_oneof![
        (0.0f64..2.0).prop_map(|radius| Primitive::Disk { radius }),
        Just(Primitive::Disk { radius: 0.0 }),
        (0.1f64..10.0, -10.0f64..10.0).prop_map(|(re, im)| Primitive::Spiral { a: c(re, im) }),
        proptest::collection::vec(complex(1.5), 0..4).prop_map(Primitive::Points),
        (0.0f64..0.95, 0.0..2.0 * PI).prop_map(|(r, t)| Primitive::Tail {
            base: C64::from_polar(r, t)
        }),
    ]
}

fn primitives() -> impl Strategy<Value = Vec<Primitive>> {
    proptest::collection::vec(primitive(), 0..5)
}

pub fn canonical_idempotent() -> Result<(), String> {
    run(512, primitives(), |ps| {
        let r = SpectralRegion::new(ps).map_err(err)?;
        prop_assert_eq!(r.canonical(), r.clone());
        prop_assert_eq!(r.union(&r), r);
        Ok(())
    })
}

pub fn canonical_membership() -> Result<(), String> {
    let eps = SpectralRegion::CANON_EPS;
    let probes = proptest::collection::vec(complex(2.2), 1000);
    run(64, (primitives(), probes), |(ps, mut zs)| {
        for p in &ps {
            zs.extend(SpectralRegion::new(vec![p.clone()]).unwrap().probes());
        }
        let r = SpectralRegion::new(ps.clone()).map_err(err)?;
        for z in zs {
            let raw = ps.iter().any(|p| p.contains(z, eps));
            prop_assert_eq!(raw, r.contains(z, eps), "probe {} in {:?}", z, r);
        }
        Ok(())
    })
}

pub fn spiral_membership() -> Result<(), String> {
    run(
        512,
        (0.05f64..20.0, -20.0f64..20.0, 1e-6f64..2.0, 0.0..2.0 * PI),
        |(re, im, dr, theta)| {
            let a = c(re, im);
            let s = SpectralRegion::spiral(a).unwrap();
            for lambda in [c(1.0, 0.0), (-a).exp(), (-a * 2.0).exp()] {
                prop_assert!(s.contains(lambda, 1e-9), "{lambda} not in spiral {a}");
            }
            prop_assert!(!s.contains(C64::from_polar(1.0 + dr, theta), 1e-9));
            Ok(())
        },
    )
}

fn square(order: usize) -> impl Strategy<Value = SquareMatrix> {
    proptest::collection::vec(complex(1.0), order * order).prop_map(move |v| {
        let mut m = SquareMatrix::zeros(order);
        for i in 0..order {
            for j in 0..order {
                m[(i, j)] = v[i * order + j];
            }
        }
        m
    })
}

pub fn jacobson_pairs() -> Result<(), String> {
    let pair = (2usize..9, 0usize..3)
        .prop_flat_map(|(order, rank_cut)| (square(order), square(order), Just(rank_cut)));
    run(128, pair, |(a, mut b, cut)| {
        let n = b.order();
        for j in 0..cut.min(n - 1) {
            for i in 0..n {
                b[(i, j)] = c(0.0, 0.0);
            }
        }
        prop_assert!(check_jacobson(&a, &b).map_err(err)?);
        Ok(())
    })
}

pub fn similarity_invariance() -> Result<(), String> {
    let lemmas = proptest::sample::select(Lemma::ALL.to_vec());
    run(
        64,
        (lemmas, 2usize..6, 6usize..17, any::<u64>()),
        |(lemma, n, order, seed)| {
            let n = lemma.effective_n(n);
            let f = make_family(lemma.pattern(n), n, order, seed).map_err(err)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
            let g = f
                .conjugate(&random_similarity(order, &mut rng))
                .map_err(err)?;
            let x = algebra_lab::eigenvalues(&f.sum()).map_err(err)?;
            let y = algebra_lab::eigenvalues(&g.sum()).map_err(err)?;
            let norm = f.sum().frobenius_norm().max(g.sum().frobenius_norm());
            let tol = 1e-7 * norm;
            let ok = |u: &[C64], v: &[C64]| {
                let zt = algebra_lab::zero_threshold(u, norm);
                u.iter()
                    .filter(|z| z.norm() > zt)
                    .all(|z| v.iter().any(|w| (z - w).norm() <= tol))
            };
            prop_assert!(
                ok(x.eigenvalues(), y.eigenvalues()) && ok(y.eigenvalues(), x.eigenvalues())
            );
            prop_assert!(lemma.check(&g).map_err(err)?);
            Ok(())
        },
    )
}

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("mobius associativity", mobius_associativity),
    ("mobius chain rule", mobius_chain_rule),
    (
        "halfplane incarnation homomorphism",
        incarnation_homomorphism,
    ),
    ("mobius fixed points", mobius_fixed_points),
    ("second-order data round trip", lfm_round_trip),
    ("partition disjoint and covering", partition_disjoint_cover),
    ("cycle multiplier start point", cycle_start_independence),
    (
        "contact set rotation covariance",
        contact_rotation_covariance,
    ),
    ("report invariants", report_invariants),
    ("canonicalization idempotent", canonical_idempotent),
    ("membership respects canonicalization", canonical_membership),
    ("spiral membership", spiral_membership),
    ("jacobson pairs", jacobson_pairs),
    ("similarity invariance", similarity_invariance),
];
