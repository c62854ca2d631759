//! Machine-readable run reports for the CLI and the C API.
//!
//! Reports are deterministic for identical inputs except for the
//! `timings_ms` block.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::matrix::MinorReport;
use crate::monomial::MonomialOrder;
use crate::smith::{QwlShape, SmithDecision};

#[derive(Debug, Clone, Serialize)]
pub struct MinorReportEntry {
    pub k: usize,
    pub d: String,
    /// Nonzero reduced minors: the generators of `J_k`.
    pub reduced_minors: Vec<String>,
    pub unit_ideal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeEntry {
    pub f1: String,
    pub p: u32,
    pub f2: String,
    pub q: u32,
    pub unit: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub order: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<MinorReportEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smith_diagonal: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_accepted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Vec<String>>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, input: &[u8], order: MonomialOrder) -> Self {
        RunReport {
            command: command.into(),
            input_digest: digest(input),
            order: order.to_string(),
            rank: None,
            reports: Vec::new(),
            shape: None,
            verdict: None,
            smith_diagonal: None,
            witness_accepted: None,
            output: None,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn record_timing(&mut self, stage: &str, ms: f64) {
        self.timings_ms.insert(stage.to_string(), ms);
    }

    pub fn set_minor_reports(&mut self, reports: &[MinorReport], order: MonomialOrder) {
        self.reports = reports
            .iter()
            .map(|r| MinorReportEntry {
                k: r.k,
                d: crate::io::print_poly(&r.d, order),
                reduced_minors: r
                    .reduced_minors
                    .iter()
                    .filter(|m| !m.is_zero())
                    .map(|m| crate::io::print_poly(m, order))
                    .collect(),
                unit_ideal: r.unit_ideal,
            })
            .collect();
    }

    pub fn set_shape(&mut self, shape: &QwlShape, order: MonomialOrder) {
        self.shape = Some(ShapeEntry {
            f1: crate::io::print_poly(&shape.f1, order),
            p: shape.p,
            f2: crate::io::print_poly(&shape.f2, order),
            q: shape.q,
            unit: format!("{}", shape.unit),
        });
    }

    pub fn set_decision(&mut self, decision: &SmithDecision, order: MonomialOrder) {
        self.rank = Some(decision.rank);
        self.set_minor_reports(&decision.reports, order);
        if let Some(shape) = &decision.shape {
            self.set_shape(shape, order);
        }
        self.verdict = Some(decision.verdict.to_string());
        if !decision.smith_diagonal.is_empty() {
            self.smith_diagonal = Some(
                decision
                    .smith_diagonal
                    .iter()
                    .map(|d| crate::io::print_poly(d, order))
                    .collect(),
            );
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
