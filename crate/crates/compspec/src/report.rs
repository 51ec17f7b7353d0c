//! Report documents: the JSON output format, plus the derived outputs of the
//! narrower subcommands.

use compspec_core::dynamics::OrbitPartition;
use compspec_core::spectrum::{spectral_radius_check, synthesize};
use compspec_core::symbol::{certify_s2, essential_norm_sq, ConditionBasis, S2Certificate};
use compspec_core::{DenjoyWolffRecord, Error, Primitive, SpectralRegion, Symbol, Tolerances, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::input::{complex, pair, DenjoyWolffDoc, Pair, SymbolDocument};
use crate::Failure;

pub const SCHEMA: &str = "compspec/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimitiveDoc {
    Disk(f64),
    Spiral(Pair),
    Points(Vec<Pair>),
    Tail(Pair),
}

impl From<&Primitive> for PrimitiveDoc {
    fn from(p: &Primitive) -> Self {
        match p {
            Primitive::Disk { radius } => PrimitiveDoc::Disk(*radius),
            Primitive::Spiral { a } => PrimitiveDoc::Spiral(pair(*a)),
            Primitive::Points(ps) => PrimitiveDoc::Points(ps.iter().copied().map(pair).collect()),
            Primitive::Tail { base } => PrimitiveDoc::Tail(pair(*base)),
        }
    }
}

impl From<&PrimitiveDoc> for Primitive {
    fn from(p: &PrimitiveDoc) -> Self {
        match p {
            PrimitiveDoc::Disk(r) => Primitive::Disk { radius: *r },
            PrimitiveDoc::Spiral(a) => Primitive::Spiral { a: complex(*a) },
            PrimitiveDoc::Points(ps) => {
                Primitive::Points(ps.iter().copied().map(complex).collect())
            }
            PrimitiveDoc::Tail(b) => Primitive::Tail { base: complex(*b) },
        }
    }
}

pub fn region_doc(r: &SpectralRegion) -> Vec<PrimitiveDoc> {
    r.primitives().iter().map(PrimitiveDoc::from).collect()
}

pub fn region_from_doc(docs: &[PrimitiveDoc]) -> Result<SpectralRegion, Failure> {
    Ok(SpectralRegion::new(
        docs.iter().map(Primitive::from).collect(),
    )?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCheckDoc {
    pub zeta: Pair,
    pub curvature: f64,
    pub order_two: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionDoc {
    pub reason: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationDoc {
    pub accepted: bool,
    /// `automatic` for rational symbols, `declared` for boundary data.
    pub basis: String,
    pub points: Vec<PointCheckDoc>,
    pub rejection: Option<RejectionDoc>,
}

impl From<&S2Certificate> for CertificationDoc {
    fn from(c: &S2Certificate) -> Self {
        Self {
            accepted: c.accepted(),
            basis: match c.basis {
                ConditionBasis::Automatic => "automatic",
                ConditionBasis::Declared => "declared",
            }
            .into(),
            points: c
                .points
                .iter()
                .map(|p| PointCheckDoc {
                    zeta: pair(p.zeta),
                    curvature: p.curvature,
                    order_two: p.order_two,
                })
                .collect(),
            rejection: c.rejection.as_ref().map(|r| RejectionDoc {
                reason: r.reason.into(),
                detail: r.detail.clone(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleDoc {
    pub points: Vec<Pair>,
    pub multiplier: f64,
    pub lead_ins: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub contact: Vec<Pair>,
    pub iterate_out: Vec<Pair>,
    pub cycles: Vec<CycleDoc>,
}

impl From<&OrbitPartition> for PartitionDoc {
    fn from(p: &OrbitPartition) -> Self {
        let pairs = |v: &[C64]| v.iter().copied().map(pair).collect::<Vec<_>>();
        Self {
            contact: pairs(p.contact()),
            iterate_out: pairs(p.iterate_out()),
            cycles: p
                .cycles()
                .iter()
                .enumerate()
                .map(|(k, c)| CycleDoc {
                    points: pairs(c.points()),
                    multiplier: c.multiplier(),
                    lead_ins: pairs(p.lead_ins(k)),
                })
                .collect(),
        }
    }
}

pub fn denjoy_wolff_doc(dw: &DenjoyWolffRecord) -> DenjoyWolffDoc {
    DenjoyWolffDoc {
        omega: pair(dw.omega()),
        derivative: pair(dw.derivative()),
        location: dw.location().into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub eps: f64,
    pub match_tol: f64,
    /// The type verdict relies on smoothness that was not verified.
    pub smoothness_caveat: bool,
    /// Spectral radius of the full region against the Denjoy-Wolff prediction.
    pub spectral_radius_check: Option<bool>,
    pub notes: Vec<String>,
}

/// Everything `analyze` knows about a symbol. On rejection only `input`,
/// `certification` and `diagnostics` are filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub input: SymbolDocument,
    pub certification: CertificationDoc,
    pub partition: Option<PartitionDoc>,
    pub denjoy_wolff: Option<DenjoyWolffDoc>,
    pub type_class: Option<String>,
    pub case: Option<String>,
    pub rho: Option<f64>,
    pub essential: Option<Vec<PrimitiveDoc>>,
    pub full: Option<Vec<PrimitiveDoc>>,
    pub essential_norm_sq: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl ReportDocument {
    pub fn accepted(&self) -> bool {
        self.certification.accepted
    }

    fn rejected(input: SymbolDocument, certification: CertificationDoc, tol: &Tolerances) -> Self {
        Self {
            schema: SCHEMA.into(),
            input,
            certification,
            partition: None,
            denjoy_wolff: None,
            type_class: None,
            case: None,
            rho: None,
            essential: None,
            full: None,
            essential_norm_sq: None,
            diagnostics: Diagnostics {
                eps: tol.eps,
                match_tol: tol.match_tol,
                smoothness_caveat: false,
                spectral_radius_check: None,
                notes: Vec::new(),
            },
        }
    }
}

/// Runs the whole pipeline. Class rejections come back as a report with
/// `accepted == false`; numerical failures are errors.
pub fn analyze(doc: &SymbolDocument, tol: &Tolerances) -> Result<ReportDocument, Failure> {
    let symbol = match doc.to_symbol(tol) {
        Ok(s) => s,
        Err(f) if f.reason == Error::Automorphism.reason() => {
            let cert = CertificationDoc {
                accepted: false,
                basis: "automatic".into(),
                points: Vec::new(),
                rejection: Some(RejectionDoc {
                    reason: f.reason.into(),
                    detail: f.detail,
                }),
            };
            return Ok(ReportDocument::rejected(doc.clone(), cert, tol));
        }
        Err(f) => return Err(f),
    };
    let cert = certify_s2(&symbol, tol)?;
    if !cert.accepted() {
        return Ok(ReportDocument::rejected(
            doc.clone(),
            CertificationDoc::from(&cert),
            tol,
        ));
    }
    let rep = synthesize(&symbol, tol)?;
    let norm = essential_norm_sq(&symbol, tol)?;
    Ok(ReportDocument {
        schema: SCHEMA.into(),
        input: doc.clone(),
        certification: CertificationDoc::from(&cert),
        partition: Some(PartitionDoc::from(&rep.partition)),
        denjoy_wolff: Some(denjoy_wolff_doc(&rep.denjoy_wolff)),
        type_class: Some(rep.type_class.name().into()),
        case: Some(rep.case.name().into()),
        rho: Some(rep.rho),
        essential: Some(region_doc(&rep.essential)),
        full: Some(region_doc(&rep.full)),
        essential_norm_sq: Some(norm),
        diagnostics: Diagnostics {
            eps: tol.eps,
            match_tol: tol.match_tol,
            smoothness_caveat: rep.type_class.smoothness_caveat(),
            spectral_radius_check: Some(spectral_radius_check(&rep, &rep.denjoy_wolff, 1e-9)),
            notes: rep.notes.clone(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactDoc {
    pub zeta: Pair,
    pub value: Pair,
    pub d1: Pair,
    pub d2: Pair,
    pub curvature: f64,
    pub order_two: bool,
}

/// Contact set with second-order data at each point.
pub fn boundary(symbol: &Symbol, tol: &Tolerances) -> Result<Value, Failure> {
    let mut points = Vec::new();
    for zeta in symbol.contact_set()? {
        let d = symbol.second_order_data(zeta, tol)?;
        points.push(ContactDoc {
            zeta: pair(d.zeta()),
            value: pair(d.value()),
            d1: pair(d.d1()),
            d2: pair(d.d2()),
            curvature: d.contact_quantity().re,
            order_two: compspec_core::symbol::contact_order_two(&d, tol.eps),
        });
    }
    Ok(serde_json::json!({ "schema": SCHEMA, "contact": points }))
}

/// Denjoy-Wolff point and type class.
pub fn classify(symbol: &Symbol, tol: &Tolerances) -> Result<Value, Failure> {
    let dw = symbol.denjoy_wolff(tol)?;
    let data = symbol.data_at_denjoy_wolff(&dw, tol)?;
    let class = compspec_core::symbol::classify_type(&dw, data.as_ref(), tol.eps)?;
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "denjoy_wolff": denjoy_wolff_doc(&dw),
        "type_class": class.name(),
        "smoothness_caveat": class.smoothness_caveat(),
    }))
}

/// Distance from `lambda` to a region: exact for disks, points and tails,
/// by dense sampling for spirals.
pub fn region_distance(r: &SpectralRegion, lambda: C64) -> f64 {
    if r.contains(lambda, 1e-10) {
        return 0.0;
    }
    r.primitives()
        .iter()
        .map(|p| match p {
            Primitive::Disk { radius } => (lambda.norm() - radius).max(0.0),
            Primitive::Points(ps) => ps
                .iter()
                .map(|q| (q - lambda).norm())
                .fold(f64::INFINITY, f64::min),
            Primitive::Tail { base } => {
                let mut best = lambda.norm();
                let mut z = C64::new(1.0, 0.0);
                while z.norm() >= 1e-12 {
                    best = best.min((z - lambda).norm());
                    if base.norm() == 0.0 {
                        break;
                    }
                    z *= base;
                }
                best.min((z - lambda).norm())
            }
            Primitive::Spiral { a } => {
                let t_max = -(1e-4f64).ln() / a.re;
                (0..=4096)
                    .map(|k| ((-a * (t_max * k as f64 / 4096.0)).exp() - lambda).norm())
                    .fold(lambda.norm(), f64::min)
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Rounds every number to `digits` significant digits and flushes values
/// below `1e-10` in magnitude to zero, for golden comparisons.
pub fn rounded(v: &Value, digits: usize) -> Value {
    match v {
        Value::Number(n) => {
            let x = n.as_f64().unwrap_or(0.0);
            if x.abs() < 1e-10 {
                return Value::from(0.0);
            }
            let s = format!("{:.*e}", digits - 1, x);
            Value::from(s.parse::<f64>().unwrap_or(x))
        }
        Value::Array(a) => Value::Array(a.iter().map(|x| rounded(x, digits)).collect()),
        Value::Object(o) => Value::Object(
            o.iter()
                .map(|(k, x)| (k.clone(), rounded(x, digits)))
                .collect(),
        ),
        other => other.clone(),
    }
}

fn fmt_c(z: Pair) -> String {
    let (re, im) = (z[0], z[1]);
    if im.abs() < 1e-12 {
        format!("{re:.6}")
    } else {
        format!(
            "{re:.6}{}{:.6}i",
            if im < 0.0 { "-" } else { "+" },
            im.abs()
        )
    }
}

fn fmt_region(r: &[PrimitiveDoc]) -> String {
    r.iter()
        .map(|p| match p {
            PrimitiveDoc::Disk(radius) => format!("Disk{{{radius:.9}}}"),
            PrimitiveDoc::Spiral(a) => format!("Spiral{{{}}}", fmt_c(*a)),
            PrimitiveDoc::Points(ps) => format!(
                "{{{}}}",
                ps.iter().map(|z| fmt_c(*z)).collect::<Vec<_>>().join(", ")
            ),
            PrimitiveDoc::Tail(b) => format!("Tail{{{}}}", fmt_c(*b)),
        })
        .collect::<Vec<_>>()
        .join(" ∪ ")
}

/// Human-readable summary.
pub fn summary(r: &ReportDocument) -> String {
    let mut out = String::new();
    let c = &r.certification;
    match &c.rejection {
        Some(rej) => {
            out += &format!("S(2): rejected ({}): {}\n", rej.reason, rej.detail);
            return out;
        }
        None => out += &format!("S(2): accepted ({})\n", c.basis),
    }
    if let Some(p) = &r.partition {
        let list = |v: &[Pair]| v.iter().map(|z| fmt_c(*z)).collect::<Vec<_>>().join(", ");
        out += &format!("contact set: {{{}}}\n", list(&p.contact));
        out += &format!("iterate-out: {{{}}}\n", list(&p.iterate_out));
        for (k, cy) in p.cycles.iter().enumerate() {
            out += &format!(
                "cycle {}: {{{}}} multiplier {:.9} lead-ins {{{}}}\n",
                k + 1,
                list(&cy.points),
                cy.multiplier,
                list(&cy.lead_ins)
            );
        }
    }
    if let Some(dw) = &r.denjoy_wolff {
        out += &format!(
            "Denjoy-Wolff point: {} ({:?}), derivative {}\n",
            fmt_c(dw.omega),
            dw.location,
            fmt_c(dw.derivative)
        );
    }
    if let (Some(t), Some(case)) = (&r.type_class, &r.case) {
        out += &format!("type: {t}; case: {case}\n");
    }
    if let Some(rho) = r.rho {
        out += &format!("rho: {rho:.12}\n");
    }
    if let Some(e) = &r.essential {
        out += &format!("essential spectrum: {}\n", fmt_region(e));
    }
    if let Some(f) = &r.full {
        out += &format!("spectrum: {}\n", fmt_region(f));
    }
    if let Some(n) = r.essential_norm_sq {
        out += &format!("essential norm squared: {n:.12}\n");
    }
    if r.diagnostics.smoothness_caveat {
        out += "caveat: smoothness at the Denjoy-Wolff point not verified\n";
    }
    for note in &r.diagnostics.notes {
        out += &format!("note: {note}\n");
    }
    out
}
