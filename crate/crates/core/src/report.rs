//! Serializable bound reports shared by the bound-producing modules.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Which norm a bound is stated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Operator (spectral) norm.
    Op,
    /// Hilbert-Schmidt (Frobenius) norm.
    Hs,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Op => "op",
            NormKind::Hs => "hs",
        })
    }
}

impl FromStr for NormKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "op" => Ok(NormKind::Op),
            "hs" => Ok(NormKind::Hs),
            _ => Err(crate::Error::Parse(format!("unknown norm {s:?}, expected op or hs"))),
        }
    }
}

/// A computed bound, whether its hypotheses held, and (when it can be
/// computed) the quantity the bound is meant to dominate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    /// `None` when a hypothesis fails; the bound is not fabricated in that case.
    pub value: Option<f64>,
    pub hypothesis_ok: bool,
    pub true_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    pub fn ok(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value: Some(value),
            hypothesis_ok: true,
            true_value: None,
            note: None,
        }
    }

    pub fn not_applicable(name: impl Into<String>, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value: None,
            hypothesis_ok: false,
            true_value: None,
            note: Some(note.into()),
        }
    }

    pub fn with_truth(mut self, t: f64) -> Self {
        self.true_value = Some(t);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// True unless the bound applies, a true value is known, and the bound is
    /// exceeded by more than `slack`.
    pub fn dominates(&self, slack: f64) -> bool {
        match (self.value, self.true_value) {
            (Some(b), Some(t)) if self.hypothesis_ok => t <= b + slack,
            _ => true,
        }
    }
}
