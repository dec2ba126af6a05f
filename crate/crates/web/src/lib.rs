//! JSON-in, JSON-out bindings for the browser demo.
//!
//! Every function takes a quadratic map `{"B1": [[..],[..]], "B2": [[..],[..]]}`
//! with optional `"tol"` (and `"samples"` for [`hyperbola`]) and returns a JSON
//! string. Failures come back as `{"error": "..."}` instead of exceptions.

use lorentz22::algebra::DEFAULT_TOL;
use lorentz22::asymptotic::{asymptotic_directions, mean_curved_directions, DeltaForm};
use lorentz22::classify::classify as classify_map;
use lorentz22::hyperbola::{describe, sample};
use lorentz22::io::parse_qmap;
use lorentz22::qmap::QuadraticMap;
use lorentz22::{Error, Result};
use serde_json::{json, Map, Value};
use wasm_bindgen::prelude::*;

const DEFAULT_SAMPLES: usize = 200;
const MAX_SAMPLES: usize = 20_000;
const SAMPLE_RANGE: f64 = 3.0;

struct Request {
    q: QuadraticMap,
    tol: f64,
    samples: usize,
}

fn take_number(obj: &mut Map<String, Value>, key: &str) -> Result<Option<f64>> {
    match obj.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_f64().map(Some).ok_or_else(|| Error::Input(format!("{key} must be a number"))),
    }
}

fn parse_request(text: &str) -> Result<Request> {
    let mut v: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))?;
    let obj = v.as_object_mut().ok_or_else(|| Error::Input("expected a JSON object".into()))?;
    let tol = take_number(obj, "tol")?.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Input("tol must be positive".into()));
    }
    let samples = match take_number(obj, "samples")? {
        None => DEFAULT_SAMPLES,
        Some(n) if n >= 1.0 && n <= MAX_SAMPLES as f64 && n.fract() == 0.0 => n as usize,
        Some(_) => return Err(Error::Input(format!("samples must be an integer in 1..={MAX_SAMPLES}"))),
    };
    let q = parse_qmap(&v.to_string())?;
    Ok(Request { q, tol, samples })
}

fn respond(result: Result<Value>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

/// Description of the curvature hyperbola with sampled points.
#[wasm_bindgen]
pub fn hyperbola(input: &str) -> String {
    respond(parse_request(input).map(|r| {
        json!({
            "invariants": r.q.invariants(r.tol),
            "description": describe(&r.q, r.tol),
            "samples": sample(&r.q, r.samples, SAMPLE_RANGE),
        })
    }))
}

/// Case of the classification theorem with its invariants.
#[wasm_bindgen]
pub fn classify(input: &str) -> String {
    respond(parse_request(input).map(|r| {
        json!({
            "classification": classify_map(&r.q, r.tol),
            "invariants": r.q.invariants(r.tol),
        })
    }))
}

/// Asymptotic and mean directionally curved directions.
#[wasm_bindgen]
pub fn directions(input: &str) -> String {
    respond(parse_request(input).and_then(|r| {
        let asymptotic = asymptotic_directions(&r.q, r.tol)?;
        let mean = match mean_curved_directions(&r.q, r.tol) {
            Ok(m) => json!(m),
            Err(Error::HUndefined) => Value::Null,
            Err(e) => return Err(e),
        };
        Ok(json!({
            "delta": DeltaForm::new(&r.q, r.tol),
            "asymptotic": asymptotic,
            "mean": mean,
        }))
    }))
}
