//! Symbol documents: the JSON input format.
//!
//! ```json
//! {"kind": "rational", "num": [[-2, 0], [-1, 0], [2, 0]], "den": [[-3, 0], [0, 0], [2, 0]]}
//! ```
//!
//! Coefficients are `[re, im]` pairs in ascending powers. Boundary-data
//! documents list second-order data per contact point plus the declared
//! Denjoy-Wolff point.

use compspec_core::poly::Poly;
use compspec_core::symbol::Location;
use compspec_core::{
    BoundaryDataSymbol, DenjoyWolffRecord, RationalSymbol, SecondOrderData, Symbol, Tolerances, C64,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{fail, Failure};

pub type Pair = [f64; 2];

pub fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

pub fn complex(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SymbolDocument {
    Rational(RationalDoc),
    BoundaryData(BoundaryDataDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalDoc {
    pub num: Vec<Pair>,
    pub den: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryDataDoc {
    pub points: Vec<PointDoc>,
    pub denjoy_wolff: DenjoyWolffDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub zeta: Pair,
    pub value: Pair,
    pub d1: Pair,
    pub d2: Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenjoyWolffDoc {
    pub omega: Pair,
    pub derivative: Pair,
    pub location: LocationDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationDoc {
    Interior,
    Boundary,
}

impl From<Location> for LocationDoc {
    fn from(l: Location) -> Self {
        match l {
            Location::Interior => LocationDoc::Interior,
            Location::Boundary => LocationDoc::Boundary,
        }
    }
}

impl From<LocationDoc> for Location {
    fn from(l: LocationDoc) -> Self {
        match l {
            LocationDoc::Interior => Location::Interior,
            LocationDoc::Boundary => Location::Boundary,
        }
    }
}

fn variant<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        fail("parse error", format!("at `{path}`: {}", e.inner()))
    })
}

impl SymbolDocument {
    /// Parses a document, reporting the field path of any schema error.
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut value: Value = serde_json::from_str(text)
            .map_err(|e| fail("parse error", format!("invalid JSON: {e}")))?;
        let Some(obj) = value.as_object_mut() else {
            return Err(fail("parse error", "at `.`: expected an object".into()));
        };
        let kind = obj.remove("kind");
        match kind.as_ref().and_then(Value::as_str) {
            Some("rational") => variant(value).map(SymbolDocument::Rational),
            Some("boundary-data") => variant(value).map(SymbolDocument::BoundaryData),
            Some(other) => Err(fail(
                "parse error",
                format!(
                    "at `kind`: unknown kind `{other}`, expected `rational` or `boundary-data`"
                ),
            )),
            None => Err(fail(
                "parse error",
                "at `kind`: missing string field".into(),
            )),
        }
    }

    pub fn to_symbol(&self, tol: &Tolerances) -> Result<Symbol, Failure> {
        match self {
            SymbolDocument::Rational(r) => {
                let num = r.num.iter().copied().map(complex).collect();
                let den = r.den.iter().copied().map(complex).collect();
                Ok(Symbol::Rational(RationalSymbol::new(num, den, tol)?))
            }
            SymbolDocument::BoundaryData(b) => {
                let points = b
                    .points
                    .iter()
                    .map(|p| {
                        SecondOrderData::new(
                            complex(p.zeta),
                            complex(p.value),
                            complex(p.d1),
                            complex(p.d2),
                            tol.match_tol,
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let dw = &b.denjoy_wolff;
                let record = DenjoyWolffRecord::new(
                    complex(dw.omega),
                    complex(dw.derivative),
                    dw.location.into(),
                    tol.eps,
                )?;
                Ok(Symbol::BoundaryData(BoundaryDataSymbol::new(
                    points, record, tol,
                )?))
            }
        }
    }

    /// Raw numerator and denominator, without the self-map validation.
    pub fn polynomials(&self) -> Result<(Poly, Poly), Failure> {
        match self {
            SymbolDocument::Rational(r) => Ok((
                Poly::new(r.num.iter().copied().map(complex).collect())?,
                Poly::new(r.den.iter().copied().map(complex).collect())?,
            )),
            SymbolDocument::BoundaryData(_) => Err(fail(
                "invalid symbol",
                "truncation needs a rational symbol".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_kind_and_fields() {
        let e = SymbolDocument::parse(r#"{"kind": "series", "num": []}"#).unwrap_err();
        assert!(e.detail.contains("kind"));
        let e = SymbolDocument::parse(r#"{"kind": "rational", "num": [], "den": [], "x": 1}"#)
            .unwrap_err();
        assert_eq!(e.reason, "parse error");
        assert!(SymbolDocument::parse("[1]").is_err());
    }

    #[test]
    fn boundary_document() {
        let text = r#"{"kind": "boundary-data",
            "points": [{"zeta": [1, 0], "value": [1, 0], "d1": [0.5, 0], "d2": [0, 0]}],
            "denjoy_wolff": {"omega": [1, 0], "derivative": [0.5, 0], "location": "boundary"}}"#;
        let doc = SymbolDocument::parse(text).unwrap();
        let SymbolDocument::BoundaryData(b) = &doc else {
            panic!()
        };
        assert_eq!(b.denjoy_wolff.location, LocationDoc::Boundary);
        assert!(doc.polynomials().is_err());
    }
}
