//! File formats, reports and rendering for `compspec-core`, plus the
//! drivers behind the `compspec` binary.

use std::fmt;

pub mod input;
pub mod report;
pub mod svg;
pub mod tasks;

pub use input::SymbolDocument;
pub use report::{analyze, ReportDocument, SCHEMA};

/// A hard failure: a stable machine-readable reason plus detail.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub reason: &'static str,
    pub detail: String,
}

pub fn fail(reason: &'static str, detail: String) -> Failure {
    Failure { reason, detail }
}

impl From<compspec_core::Error> for Failure {
    fn from(e: compspec_core::Error) -> Self {
        Failure {
            reason: e.reason(),
            detail: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.reason, self.detail)
    }
}

impl std::error::Error for Failure {}

impl Failure {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": SCHEMA,
            "error": { "reason": self.reason, "detail": self.detail },
        })
    }
}
