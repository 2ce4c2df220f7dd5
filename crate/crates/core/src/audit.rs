// Copyright 2026 The QLUE Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! State-set documents and audit reports.
//!
//! A document is a JSON object
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "renormalize": false,
//!   "states": [
//!     {"name": "psi1", "amplitudes": [[0.894, 0.0], [0.0, 0.0], [0.0, 0.0], [0.447, 0.0]]}
//!   ]
//! }
//! ```
//!
//! with amplitudes as `[re, im]` pairs in the row-major index convention
//! `i·dimB + j`. The audit classifies the set — orthogonality, equal
//! entanglement (equal Schmidt spectra), maximal entanglement — and fills a
//! pair matrix with witness existence and best one-sided overlaps for every
//! ordered pair.
//!
//! "Equally entangled" means equal Schmidt coefficient multisets within
//! tolerance, which is strictly stronger than equal entropy; sets that agree
//! in entropy but not in spectrum are flagged by the separate
//! `equal_entropies` field rather than silently conflated.

use serde::{Deserialize, Serialize};

use num_complex::Complex64 as C64;

use crate::equiv::{self, OneSidedOutcome, TwoSidedOutcome};
use crate::state::{make_state, Normalization, Side, StateVector};

#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("validation error: {0}")]
    Validation(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    dims: [usize; 2],
    #[serde(default)]
    renormalize: bool,
    states: Vec<RawState>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    name: String,
    amplitudes: Vec<[f64; 2]>,
}

/// A validated set of named states on a common bipartite space.
#[derive(Clone, Debug)]
pub struct StateSetDocument {
    dims: (usize, usize),
    renormalize: bool,
    states: Vec<(String, StateVector)>,
}

impl StateSetDocument {
    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[(String, StateVector)] {
        &self.states
    }

    pub fn get(&self, name: &str) -> Option<&StateVector> {
        self.states.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.states.iter().map(|(n, _)| n.as_str())
    }

    /// Serializes back to the input JSON schema.
    pub fn to_json(&self) -> String {
        let raw = serde_json::json!({
            "dims": [self.dims.0, self.dims.1],
            "renormalize": self.renormalize,
            "states": self.states.iter().map(|(name, psi)| {
                serde_json::json!({
                    "name": name,
                    "amplitudes": psi.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&raw).expect("document serializes")
    }
}

/// Parses and validates a state-set document.
///
/// Amplitude norms are checked strictly against `tol` unless the document
/// sets `"renormalize": true`.
pub fn parse_document(text: &[u8], tol: f64) -> Result<StateSetDocument, AuditError> {
    let raw: RawDocument = serde_json::from_slice(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Syntax | serde_json::error::Category::Eof => AuditError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
        _ => AuditError::Schema(e.to_string()),
    })?;

    if raw.states.is_empty() {
        return Err(AuditError::Schema("at least one state is required".to_string()));
    }
    let (dim_a, dim_b) = (raw.dims[0], raw.dims[1]);
    if dim_a == 0 || dim_b == 0 {
        return Err(AuditError::Validation(format!(
            "dims must both be at least 1, got [{dim_a}, {dim_b}]"
        )));
    }

    let mode = if raw.renormalize { Normalization::Renormalize } else { Normalization::Strict };
    let mut states: Vec<(String, StateVector)> = Vec::with_capacity(raw.states.len());
    for raw_state in &raw.states {
        if states.iter().any(|(n, _)| n == &raw_state.name) {
            return Err(AuditError::Validation(format!(
                "duplicate state name '{}'",
                raw_state.name
            )));
        }
        if raw_state.amplitudes.len() != dim_a * dim_b {
            return Err(AuditError::Validation(format!(
                "state '{}' has {} amplitudes, expected {}",
                raw_state.name,
                raw_state.amplitudes.len(),
                dim_a * dim_b
            )));
        }
        let amps: Vec<C64> = raw_state.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let state = make_state(dim_a, dim_b, amps, tol, mode).map_err(|e| {
            AuditError::Validation(format!("state '{}': {e}", raw_state.name))
        })?;
        states.push((raw_state.name.clone(), state));
    }

    Ok(StateSetDocument { dims: (dim_a, dim_b), renormalize: raw.renormalize, states })
}

/// Set-level classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// Orthogonal, equal spectra, all maximally entangled.
    #[serde(rename = "BOPEE-maximal")]
    BopeeMaximal,
    /// Orthogonal, equal non-maximal spectra.
    #[serde(rename = "BOPEE-partial")]
    BopeePartial,
    /// Orthogonal but Schmidt spectra differ.
    #[serde(rename = "orthogonal-unequal-entanglement")]
    OrthogonalUnequalEntanglement,
    /// Some pair has nonzero overlap.
    #[serde(rename = "non-orthogonal")]
    NonOrthogonal,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::BopeeMaximal => "BOPEE-maximal",
            Classification::BopeePartial => "BOPEE-partial",
            Classification::OrthogonalUnequalEntanglement => "orthogonal-unequal-entanglement",
            Classification::NonOrthogonal => "non-orthogonal",
        };
        write!(f, "{s}")
    }
}

/// Per-state entry of the spectra table.
#[derive(Clone, Debug, Serialize)]
pub struct StateAudit {
    pub name: String,
    pub schmidt_coefficients: Vec<f64>,
    pub entropy_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// One ordered pair of the pair matrix.
#[derive(Clone, Debug, Serialize)]
pub struct PairAudit {
    pub from: String,
    pub to: String,
    /// `⟨from|to⟩` as `[re, im]`.
    pub overlap: [f64; 2],
    pub one_sided_a: bool,
    pub one_sided_b: bool,
    pub two_sided: bool,
    pub max_overlap_a: f64,
    pub max_overlap_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub dims: [usize; 2],
    pub tol: f64,
    pub classification: Classification,
    pub orthogonal: bool,
    pub max_offdiagonal_overlap: f64,
    pub equally_entangled: bool,
    /// Entropies all equal within tolerance. Together with
    /// `equally_entangled == false` this flags entropy-equal but
    /// spectrum-different sets.
    pub equal_entropies: bool,
    pub maximally_entangled: bool,
    pub states: Vec<StateAudit>,
    pub pairs: Vec<PairAudit>,
}

/// Runs the full audit. Numerical failures are recorded on the affected
/// entry instead of aborting the audit.
pub fn audit(doc: &StateSetDocument, tol: f64) -> AuditReport {
    let n = doc.len();
    let d = doc.dims().0.min(doc.dims().1);

    let mut states = Vec::with_capacity(n);
    let mut spectra: Vec<Option<Vec<f64>>> = Vec::with_capacity(n);
    for (name, psi) in doc.states() {
        match psi.schmidt(tol) {
            Ok(s) => {
                states.push(StateAudit {
                    name: name.clone(),
                    schmidt_coefficients: s.coefficients.clone(),
                    entropy_bits: s.entropy_bits(),
                    error: None,
                });
                spectra.push(Some(s.coefficients));
            }
            Err(e) => {
                states.push(StateAudit {
                    name: name.clone(),
                    schmidt_coefficients: Vec::new(),
                    entropy_bits: f64::NAN,
                    error: Some(e.to_string()),
                });
                spectra.push(None);
            }
        }
    }

    let mut orthogonal = true;
    let mut max_offdiagonal_overlap: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let o = doc.states()[i].1.overlap(&doc.states()[j].1).expect("same dims").norm();
            max_offdiagonal_overlap = max_offdiagonal_overlap.max(o);
            if o >= tol {
                orthogonal = false;
            }
        }
    }

    let mut equally_entangled = true;
    let mut equal_entropies = true;
    for i in 0..n {
        for j in i + 1..n {
            match (&spectra[i], &spectra[j]) {
                (Some(si), Some(sj)) => {
                    let gap = si.iter().zip(sj).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                    if gap >= tol {
                        equally_entangled = false;
                    }
                    if (states[i].entropy_bits - states[j].entropy_bits).abs() >= tol {
                        equal_entropies = false;
                    }
                }
                _ => {
                    equally_entangled = false;
                    equal_entropies = false;
                }
            }
        }
    }

    let w = 1.0 / (d as f64).sqrt();
    let maximally_entangled = spectra.iter().all(|s| match s {
        Some(coeffs) => coeffs.iter().all(|&x| (x - w).abs() < tol),
        None => false,
    });

    let classification = if !orthogonal {
        Classification::NonOrthogonal
    } else if !equally_entangled {
        Classification::OrthogonalUnequalEntanglement
    } else if maximally_entangled {
        Classification::BopeeMaximal
    } else {
        Classification::BopeePartial
    };

    let mut pairs = Vec::with_capacity(n * n);
    for (from_name, from_state) in doc.states() {
        for (to_name, to_state) in doc.states() {
            pairs.push(audit_pair(from_name, from_state, to_name, to_state, tol));
        }
    }

    AuditReport {
        dims: [doc.dims().0, doc.dims().1],
        tol,
        classification,
        orthogonal,
        max_offdiagonal_overlap,
        equally_entangled,
        equal_entropies,
        maximally_entangled,
        states,
        pairs,
    }
}

fn audit_pair(
    from_name: &str,
    from: &StateVector,
    to_name: &str,
    to: &StateVector,
    tol: f64,
) -> PairAudit {
    let mut entry = PairAudit {
        from: from_name.to_string(),
        to: to_name.to_string(),
        overlap: [0.0, 0.0],
        one_sided_a: false,
        one_sided_b: false,
        two_sided: false,
        max_overlap_a: f64::NAN,
        max_overlap_b: f64::NAN,
        error: None,
    };
    let record_err = |entry: &mut PairAudit, e: String| {
        if entry.error.is_none() {
            entry.error = Some(e);
        }
    };

    match from.overlap(to) {
        Ok(o) => entry.overlap = [o.re, o.im],
        Err(e) => record_err(&mut entry, e.to_string()),
    }
    match equiv::one_sided_witness(from, to, Side::A, tol) {
        Ok(OneSidedOutcome::Witness(_)) => entry.one_sided_a = true,
        Ok(OneSidedOutcome::NoWitness { .. }) => {}
        Err(e) => record_err(&mut entry, e.to_string()),
    }
    match equiv::one_sided_witness(from, to, Side::B, tol) {
        Ok(OneSidedOutcome::Witness(_)) => entry.one_sided_b = true,
        Ok(OneSidedOutcome::NoWitness { .. }) => {}
        Err(e) => record_err(&mut entry, e.to_string()),
    }
    match equiv::two_sided_witness(from, to, tol) {
        Ok(TwoSidedOutcome::Witness(_)) => entry.two_sided = true,
        Ok(TwoSidedOutcome::NoWitness { .. }) => {}
        Err(e) => record_err(&mut entry, e.to_string()),
    }
    match equiv::max_overlap_one_sided(from, to, Side::A) {
        Ok(r) => entry.max_overlap_a = r.value,
        Err(e) => record_err(&mut entry, e.to_string()),
    }
    match equiv::max_overlap_one_sided(from, to, Side::B) {
        Ok(r) => entry.max_overlap_b = r.value,
        Err(e) => record_err(&mut entry, e.to_string()),
    }
    entry
}
