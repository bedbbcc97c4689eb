//! Curve input documents.
//!
//! One JSON object per file: label (optional string), level (required
//! integer), ainvs (required array of exactly five integers), and the
//! optional extras modular_degree, tamagawa (object, prime-as-string keys)
//! and torsion_order.  Unknown keys are rejected by name rather than
//! silently ignored, since a typo in "modular_degree" would otherwise
//! change which routes are available without any hint.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use oldcong_core::{CurveRecord, Level};

use crate::Failure;

const KNOWN_KEYS: [&str; 6] = [
    "label",
    "level",
    "ainvs",
    "modular_degree",
    "tamagawa",
    "torsion_order",
];

pub fn load_curve(path: &Path) -> Result<CurveRecord, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Failure::Usage(format!("{}: document is not a JSON object", path.display())))?;

    let unknown: Vec<&str> = obj
        .keys()
        .map(String::as_str)
        .filter(|k| !KNOWN_KEYS.contains(k))
        .collect();
    if !unknown.is_empty() {
        return Err(Failure::Usage(format!(
            "{}: unknown keys: {} (expected {})",
            path.display(),
            unknown.join(", "),
            KNOWN_KEYS.join(", ")
        )));
    }

    let label = match obj.get("label") {
        None => None,
        Some(v) => Some(
            v.as_str()
                .ok_or_else(|| field_error(path, "label", "must be a string"))?
                .to_string(),
        ),
    };

    let level = obj
        .get("level")
        .ok_or_else(|| field_error(path, "level", "is required"))?
        .as_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| field_error(path, "level", "must be a positive integer"))?;

    let ainvs_value = obj
        .get("ainvs")
        .ok_or_else(|| field_error(path, "ainvs", "is required"))?;
    let ainvs_array = ainvs_value
        .as_array()
        .ok_or_else(|| field_error(path, "ainvs", "must be an array"))?;
    if ainvs_array.len() != 5 {
        return Err(field_error(
            path,
            "ainvs",
            "must contain exactly five integers [a1, a2, a3, a4, a6]",
        ));
    }
    let mut ainvs = [0i64; 5];
    for (i, v) in ainvs_array.iter().enumerate() {
        ainvs[i] = v
            .as_i64()
            .ok_or_else(|| field_error(path, "ainvs", "must contain only integers"))?;
    }

    let modular_degree = match obj.get("modular_degree") {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .filter(|&n| n >= 1)
                .ok_or_else(|| field_error(path, "modular_degree", "must be a positive integer"))?,
        ),
    };

    let tamagawa = match obj.get("tamagawa") {
        None => None,
        Some(v) => {
            let map = v
                .as_object()
                .ok_or_else(|| field_error(path, "tamagawa", "must be an object"))?;
            let mut parsed: BTreeMap<u64, u64> = BTreeMap::new();
            for (key, val) in map {
                let p: u64 = key.parse().map_err(|_| {
                    field_error(path, "tamagawa", &format!("key {key:?} is not a prime"))
                })?;
                let c = val
                    .as_u64()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| {
                        field_error(path, "tamagawa", "values must be positive integers")
                    })?;
                parsed.insert(p, c);
            }
            Some(parsed)
        }
    };

    let torsion_order = match obj.get("torsion_order") {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .filter(|&n| n >= 1)
                .ok_or_else(|| field_error(path, "torsion_order", "must be a positive integer"))?,
        ),
    };

    CurveRecord::new(
        label,
        Level::new(level),
        ainvs,
        modular_degree,
        tamagawa,
        torsion_order,
    )
    .map_err(Failure::Math)
}

fn field_error(path: &Path, field: &str, what: &str) -> Failure {
    Failure::Usage(format!("{}: field \"{field}\" {what}", path.display()))
}
