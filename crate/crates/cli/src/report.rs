//! JSON report documents.
//!
//! The report schema mirrors CongruenceReport field by field, in the fixed
//! order level, sturm_bound, method, candidates, congruence_primes,
//! witnesses, congruence_exponent, conjecture1, notes.  Integers are
//! emitted as JSON numbers only when they fit exactly in an IEEE double
//! (absolute value below 2^53); anything larger becomes a decimal string,
//! so that consumers which parse numbers as doubles never see a silently
//! rounded value.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use oldcong_core::congruence::CongruenceReport;

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub level: u64,
    pub sturm_bound: u64,
    pub method: String,
    pub candidates: Vec<CandidateDocument>,
    pub congruence_primes: Vec<Value>,
    pub witnesses: BTreeMap<String, Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence_exponent: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjecture1: Option<Vec<VerdictDocument>>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CandidateDocument {
    pub p: Value,
    pub provenance: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub ell: u64,
    pub verdict: String,
    pub reason: String,
}

/// Largest integer magnitude an IEEE double represents exactly.
const SAFE_INTEGER_LIMIT: u64 = 1 << 53;

fn unsigned_to_value(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(small) if small < SAFE_INTEGER_LIMIT => Value::from(small),
        _ => Value::from(n.to_string()),
    }
}


impl ReportDocument {
    pub fn from_report(report: &CongruenceReport) -> Self {
        ReportDocument {
            level: report.level.get(),
            sturm_bound: report.sturm_bound as u64,
            method: report.method.to_string(),
            candidates: report
                .candidates
                .iter()
                .map(|c| CandidateDocument {
                    p: unsigned_to_value(&c.prime),
                    provenance: c.provenance.iter().map(|p| p.to_string()).collect(),
                })
                .collect(),
            congruence_primes: report
                .congruence_primes
                .iter()
                .map(unsigned_to_value)
                .collect(),
            witnesses: report
                .witnesses
                .iter()
                .map(|(p, w)| {
                    let entries = w.components().iter().map(unsigned_to_value).collect();
                    (p.to_string(), entries)
                })
                .collect(),
            congruence_exponent: report.congruence_exponent.as_ref().map(unsigned_to_value),
            conjecture1: report.conjecture1.as_ref().map(|verdicts| {
                verdicts
                    .iter()
                    .map(|v| VerdictDocument {
                        ell: v.ell,
                        verdict: v.verdict.to_string(),
                        reason: v.reason.clone(),
                    })
                    .collect()
            }),
            notes: report.notes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
