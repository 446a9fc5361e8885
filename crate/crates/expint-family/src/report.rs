//! Output records shared by the CLI subcommands.

use serde::{Deserialize, Serialize};

/// How a value in a record was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    ClosedForm,
    ReducedForm,
    Oracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::ClosedForm => write!(f, "CLOSED_FORM"),
            Method::ReducedForm => write!(f, "REDUCED_FORM"),
            Method::Oracle => write!(f, "ORACLE"),
        }
    }
}

/// Inputs of a record: either a family evaluation point or an H spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Inputs {
    Family {
        lambda: f64,
        mu: f64,
        nu: f64,
        z: f64,
    },
    DynFric {
        a: f64,
        family: String,
        y: f64,
    },
}

/// One evaluated point, as emitted in json output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub inputs: Inputs,
    pub value: f64,
    pub method: Method,
    /// Present iff method = ORACLE.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub err_estimate: Option<f64>,
    pub admissible: bool,
}
