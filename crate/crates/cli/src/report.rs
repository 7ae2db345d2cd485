//! Schema-stable JSON reports.
//!
//! Field order is fixed by the struct definitions and floats serialize
//! in shortest round-trip form, so identical input + flags + seed yields
//! byte-identical output. The schema ships in-repo at
//! `schema/report-v1.schema.json`.

use schmidt_core::bipartite::DegeneracyReport;
use schmidt_core::{CountingRecord, RankWitness, SchmidtWitness};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    /// sha-256 of the raw input file bytes, making the report
    /// self-identifying.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub dims: Vec<usize>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    pub result: ResultPayload,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut body = serde_json::to_string_pretty(self).expect("report serializes");
        body.push('\n');
        body
    }
}

#[derive(Debug, Default, Serialize)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict_tol: Option<f64>,
}

/// Complex vector as `[[re, im], …]`.
pub type JsonVector = Vec<[f64; 2]>;

#[derive(Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResultPayload {
    BipartiteDecomposition {
        split: SplitOut,
        weights: Vec<f64>,
        entropy_nats: f64,
        entropy_bits: f64,
        degeneracy: DegeneracyReport,
    },
    GeneralizedSchmidt {
        verdict: Verdict,
        #[serde(skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        party_bases: Option<Vec<Vec<JsonVector>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<SchmidtWitness>,
        #[serde(skip_serializing_if = "Option::is_none")]
        reason: Option<String>,
    },
    ProductTest {
        verdict: Verdict,
        #[serde(skip_serializing_if = "Option::is_none")]
        factors: Option<Vec<JsonVector>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<RankWitness>,
        counting: CountingRecord,
    },
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Exists,
    NotExists,
    Indeterminate,
    IsProduct,
    NotProduct,
}

#[derive(Debug, Serialize)]
pub struct SplitOut {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Reports must never carry non-finite numbers; walk the serialized
/// tree and fail loudly if one slipped through.
pub fn assert_finite(report: &Report) {
    fn walk(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => {
                if let Some(f) = n.as_f64() {
                    assert!(f.is_finite(), "non-finite number in report");
                }
            }
            serde_json::Value::Array(a) => a.iter().for_each(walk),
            serde_json::Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    let value = serde_json::to_value(report).expect("report serializes");
    walk(&value);
}
