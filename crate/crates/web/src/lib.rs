//! Browser bindings for three demo operations: exact coupling coefficients, Schur transform
//! resources, and the block census of a PQC tree.
//!
//! The `*_json` functions are plain Rust and return JSON text; the `#[wasm_bindgen]` wrappers
//! turn their errors into JavaScript exceptions.

use schur_core::circuit::{
    gate_counts, qubit_count_modified, qubit_count_original, synth_schur, synth_schur_log_ancilla,
};
use schur_core::pqc::PqcTree;
use schur_core::sim::{block_structure, Family};
use schur_core::{clebsch_gordan, wigner_3j, wigner_6j, HalfInt, SixJLabel};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest n the resource demo will synthesize.
pub const MAX_DEMO_QUBITS: usize = 10;

fn labels(text: &str) -> Result<Vec<HalfInt>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<HalfInt>().map_err(|e| e.to_string()))
        .collect()
}

/// `kind` is `cg` (j1 m1 j2 m2 J M), `3j` (j1 j2 j3 m1 m2 m3) or `6j` (a b f c e d).
pub fn coefficient_json(kind: &str, text: &str) -> Result<String, String> {
    let v = labels(text)?;
    if v.len() != 6 {
        return Err(format!("expected six labels, got {}", v.len()));
    }
    let value = match kind {
        "cg" => clebsch_gordan(v[0], v[1], v[2], v[3], v[4], v[5]),
        "3j" => wigner_3j(v[0], v[1], v[2], v[3], v[4], v[5]),
        "6j" => wigner_6j(SixJLabel::new(v[0], v[1], v[2], v[3], v[4], v[5])),
        _ => return Err(format!("unknown coefficient kind `{kind}`")),
    }
    .map_err(|e| e.to_string())?;
    Ok(json!({
        "kind": kind,
        "exact": value.to_string(),
        "sign": value.sign(),
        "square": value.square().to_string(),
        "decimal": value.to_f64(),
    })
    .to_string())
}

/// Peak qubits and two-level rotation counts of both Schur transform variants on n qubits.
pub fn schur_resources_json(n: usize) -> Result<String, String> {
    if !(3..=MAX_DEMO_QUBITS).contains(&n) {
        return Err(format!("n must lie between 3 and {MAX_DEMO_QUBITS}"));
    }
    let err = |e: schur_core::Error| e.to_string();
    let full = synth_schur(n).map_err(err)?;
    let small = synth_schur_log_ancilla(n).map_err(err)?;
    let counts = gate_counts(&full).map_err(err)?;
    let steps: Vec<_> = counts
        .steps
        .iter()
        .map(|s| json!({ "label": s.label, "dim": s.dim, "two_level": s.two_level, "bound": s.diagonal_bound }))
        .collect();
    Ok(json!({
        "n": n,
        "original": { "formula": qubit_count_original(n), "measured": full.peak_qubits().map_err(err)? },
        "modified": { "formula": qubit_count_modified(n), "measured": small.peak_qubits().map_err(err)? },
        "two_level_total": counts.total(),
        "steps": steps,
    })
    .to_string())
}

/// `subsets` is a list such as `3,4; 2,3,4; 1,2,3,4; 5,6; 1,2,3,4,5,6`.
/// `family` is `P`, `Q`, or `subgroup:1,2,3,4`.
pub fn block_census_json(n: usize, subsets: &str, family: &str) -> Result<String, String> {
    let sets: Vec<Vec<usize>> = subsets
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| format!("`{t}` is not a qubit number")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let tree = PqcTree::from_subsets(n, sets).map_err(|e| e.to_string())?;
    let family = match family.trim() {
        "P" | "p" => Family::Permutations,
        "Q" | "q" => Family::Local,
        f => match f.strip_prefix("subgroup:") {
            Some(list) => Family::Subgroup(
                list.split(',')
                    .map(|t| t.trim().parse().map_err(|_| format!("bad qubit `{t}`")))
                    .collect::<Result<_, _>>()?,
            ),
            None => return Err(format!("unknown family `{f}`")),
        },
    };
    let s = block_structure(&tree, &family).map_err(|e| e.to_string())?;
    let census: Vec<_> =
        s.census().into_iter().rev().map(|(size, count)| json!({ "size": size, "count": count })).collect();
    Ok(json!({ "tree": tree.to_string(), "census": census, "blocks": s.blocks.len() }).to_string())
}

#[wasm_bindgen]
pub fn coefficient(kind: &str, labels: &str) -> Result<String, JsError> {
    coefficient_json(kind, labels).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn schur_resources(n: usize) -> Result<String, JsError> {
    schur_resources_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn block_census(n: usize, subsets: &str, family: &str) -> Result<String, JsError> {
    block_census_json(n, subsets, family).map_err(|e| JsError::new(&e))
}
