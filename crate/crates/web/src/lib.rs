//! Browser bindings for the toric crate.
//!
//! Each export takes and returns JSON strings. The `*_json` functions hold the
//! logic and run natively as well.

use serde_json::{json, Value};
use toric::analyzer::analyze_pair;
use toric::gallery::{get_fan, xab};
use toric::intersection::{anticanonical_degree, is_fano};
use toric::mori::{is_projective, MoriCone};
use toric::Fan;
use wasm_bindgen::prelude::*;

fn text(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Validity, projectivity and the walls of `f`, with extremality marked.
pub fn describe(f: &Fan) -> Result<Value, String> {
    let report = f.validate();
    let mut v = json!({
        "fan": f.to_json(),
        "dim": f.dim(),
        "rho": f.picard_number(),
        "valid": report.is_valid(),
    });
    if !report.is_valid() {
        v["failures"] = json!(report.failures);
        return Ok(v);
    }
    let cone = MoriCone::new(f).map_err(text)?;
    let verdict = cone.is_projective().map_err(text)?;
    let mut walls = Vec::new();
    for rel in cone.relations() {
        let mut w = rel.to_json();
        w["anticanonical_degree"] = json!(anticanonical_degree(rel).to_string());
        w["extremal"] = json!(cone.is_extremal(&rel.wall).map_err(text)?);
        walls.push(w);
    }
    v["projective"] = json!(verdict.projective);
    v["fano"] = json!(is_fano(f).map_err(text)?);
    v["verdict"] = verdict.to_json();
    v["walls"] = Value::Array(walls);
    Ok(v)
}

/// A gallery entry together with its description.
pub fn gallery_json(name: &str, params: &[i64]) -> Result<String, String> {
    let entry = get_fan(name, params).map_err(text)?;
    let mut v = describe(&entry.fan)?;
    v["entry"] = entry.to_json();
    Ok(v.to_string())
}

/// Describes a fan given in the fan file format.
pub fn check_json(fan: &str) -> Result<String, String> {
    let f = Fan::from_json_str(fan).map_err(text)?;
    Ok(describe(&f)?.to_string())
}

/// Projectivity of `X_{a,b}` for `a, b` in `lo..=hi`.
pub fn xab_grid_json(lo: i64, hi: i64) -> Result<String, String> {
    if lo > hi || hi - lo > 12 {
        return Err(format!(
            "range {lo}..={hi} must be nonempty and at most 13 wide"
        ));
    }
    let mut cells = Vec::new();
    for a in lo..=hi {
        for b in lo..=hi {
            let projective = is_projective(&xab(a, b)).map_err(text)?.projective;
            cells.push(json!({"a": a, "b": b, "projective": projective}));
        }
    }
    Ok(Value::Array(cells).to_string())
}

/// Blows up `fan` along the curve of `curve` and reports the findings.
pub fn analyze_json(fan: &str, curve: &[usize]) -> Result<String, String> {
    let f = Fan::from_json_str(fan).map_err(text)?;
    let mut rays = curve.to_vec();
    rays.sort_unstable();
    let wall = f.wall(&rays).map_err(text)?;
    let report = analyze_pair(&f, &wall).map_err(text)?;
    Ok(report.to_json().to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gallery(name: &str, params: Vec<i64>) -> Result<String, JsError> {
    js(gallery_json(name, &params))
}

#[wasm_bindgen]
pub fn check(fan: &str) -> Result<String, JsError> {
    js(check_json(fan))
}

#[wasm_bindgen]
pub fn xab_grid(lo: i64, hi: i64) -> Result<String, JsError> {
    js(xab_grid_json(lo, hi))
}

#[wasm_bindgen]
pub fn analyze(fan: &str, curve: Vec<usize>) -> Result<String, JsError> {
    js(analyze_json(fan, &curve))
}
