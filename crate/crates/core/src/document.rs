//! JSON exchange format for plans.
//!
//! ```json
//! {"version":1,"kind":"dst1","n":3,"gates":[
//!   {"type":"two_mode","i":0,"j":2,"name":"fhat","matrix":[[0.7071067811865476,0.0],…]},
//!   {"type":"scalar","i":3,"value":[0.0,-1.0]},
//!   {"type":"perm","map":[0,2,1]}
//! ]}
//! ```
//!
//! Gates are listed in application order. Two-mode matrices are four
//! `[re, im]` pairs in row-major order; rotation gates are named
//! `rot(ℓ,m)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::gate::{Gate, GateKind, Mat2, Permutation};
use crate::planner::{Plan, PlanKind};

pub const FORMAT_VERSION: u32 = 1;

/// Tolerance on the unitarity of two-mode matrices read from a document.
const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed plan document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported plan format version {0}")]
    Version(u32),
    #[error("gate {index}: {message}")]
    Gate { index: usize, message: String },
    #[error(transparent)]
    Plan(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub version: u32,
    pub kind: PlanKind,
    pub n: usize,
    pub gates: Vec<GateRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GateRecord {
    TwoMode {
        i: usize,
        j: usize,
        name: String,
        matrix: Vec<[f64; 2]>,
    },
    Scalar {
        i: usize,
        value: [f64; 2],
    },
    Perm {
        map: Vec<usize>,
    },
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl GateRecord {
    fn from_gate(g: &Gate) -> Self {
        match g {
            Gate::TwoMode { i, j, op } => GateRecord::TwoMode {
                i: *i,
                j: *j,
                name: op.kind.to_string(),
                matrix: op.matrix.0.iter().flatten().copied().map(pair).collect(),
            },
            Gate::Scalar { i, value } => GateRecord::Scalar {
                i: *i,
                value: pair(*value),
            },
            Gate::Perm(p) => GateRecord::Perm { map: p.map().to_vec() },
        }
    }

    fn to_gate(&self) -> std::result::Result<Gate, String> {
        match self {
            GateRecord::TwoMode { i, j, name, matrix } => {
                let kind: GateKind = name.parse()?;
                let entries: Vec<Complex64> =
                    matrix.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                let [a, b, c, d]: [Complex64; 4] = entries
                    .try_into()
                    .map_err(|_| format!("expected 4 matrix entries, found {}", matrix.len()))?;
                let m = Mat2([[a, b], [c, d]]);
                if !(m.unitarity_defect() <= UNITARITY_TOL) {
                    return Err("two-mode matrix is not unitary".into());
                }
                Gate::two_mode_with(*i, *j, kind, m).map_err(|e| e.to_string())
            }
            GateRecord::Scalar { i, value } => Ok(Gate::Scalar {
                i: *i,
                value: Complex64::new(value[0], value[1]),
            }),
            GateRecord::Perm { map } => Permutation::new(map.clone())
                .map(Gate::Perm)
                .map_err(|e| e.to_string()),
        }
    }
}

impl PlanDocument {
    pub fn from_plan(plan: &Plan) -> Self {
        Self {
            version: FORMAT_VERSION,
            kind: plan.kind(),
            n: plan.n(),
            gates: plan.gates().iter().map(GateRecord::from_gate).collect(),
        }
    }

    pub fn to_plan(&self) -> Result<Plan, DocumentError> {
        if self.version != FORMAT_VERSION {
            return Err(DocumentError::Version(self.version));
        }
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(index, r)| r.to_gate().map_err(|message| DocumentError::Gate { index, message }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Plan::new(self.kind, self.n, gates)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Serializes a plan as a JSON document.
pub fn plan_to_json(plan: &Plan) -> String {
    PlanDocument::from_plan(plan).to_json()
}

/// Parses and validates a JSON plan document.
pub fn plan_from_json(s: &str) -> Result<Plan, DocumentError> {
    PlanDocument::from_json(s)?.to_plan()
}
