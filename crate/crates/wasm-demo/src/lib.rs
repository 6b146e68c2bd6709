//! Browser bindings. Every export returns a JSON string; the `*_json`
//! functions hold the logic so they can be tested natively.

use berry_core::berry::{berry_factor, trace_path, BerryOptions};
use berry_core::lattice::{path_catalog, LatticeGeometry, CATALOG};
use berry_core::meanfield::ModelParams;
use berry_core::twolevel::{loop_phase_factor, loop_states, PlanarLoop};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn model(u: f64, g: f64, d: f64) -> ModelParams {
    ModelParams {
        u,
        g,
        d,
        ..ModelParams::default()
    }
}

/// Ground states around a planar loop of winding `k`.
pub fn two_level_json(k: i64, samples: usize) -> Result<String, String> {
    let lp = PlanarLoop::new(k, 1.0, samples, 0.0).map_err(|e| e.to_string())?;
    let states = loop_states(&lp).map_err(|e| e.to_string())?;
    let raw = loop_phase_factor(&lp).map_err(|e| e.to_string())?;
    let angles: Vec<f64> = (0..lp.samples).map(|s| lp.angle(s)).collect();
    Ok(json!({
        "k": k,
        "factor": if raw < 0.0 { -1 } else { 1 },
        "raw_product": raw,
        "angles": angles,
        "states": states,
    })
    .to_string())
}

pub fn gap_profile_json(path: &str, u: f64, g: f64, d: f64, points: usize) -> Result<String, String> {
    let geom = LatticeGeometry::default();
    let spec = path_catalog(&geom, path, points).map_err(|e| e.to_string())?;
    let trace = trace_path(&geom, &model(u, g, d), &spec, &BerryOptions::default()).map_err(|e| e.to_string())?;
    let rows: Vec<_> = trace
        .samples
        .iter()
        .map(|s| json!({"arc": s.arc, "gap": s.gap, "homo": s.homo, "lumo": s.lumo, "hole_site": s.hole_site}))
        .collect();
    Ok(json!({"path": path, "segments": spec.segment_count(), "samples": rows}).to_string())
}

pub fn berry_factor_json(path: &str, u: f64, g: f64, d: f64, steps: usize) -> Result<String, String> {
    let geom = LatticeGeometry::default();
    let spec = path_catalog(&geom, path, steps).map_err(|e| e.to_string())?;
    let r = berry_factor(&geom, &model(u, g, d), &spec, &BerryOptions::default()).map_err(|e| e.to_string())?;
    Ok(json!({
        "path": path,
        "factor": r.factor,
        "raw_product": r.raw_product,
        "degeneracy_count": r.degeneracy_count,
        "parity_consistent": r.parity_consistent,
        "switches": r.switches,
        "overlaps": r.overlap_trace,
        "sites": spec.coords(&geom),
    })
    .to_string())
}

pub fn catalog_json() -> String {
    let entries: Vec<_> = CATALOG.iter().map(|(name, sites)| json!({"name": name, "sites": sites})).collect();
    json!(entries).to_string()
}

#[wasm_bindgen]
pub fn two_level(k: i32, samples: usize) -> Result<String, JsValue> {
    two_level_json(k.into(), samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn gap_profile(path: &str, u: f64, g: f64, d: f64, points: usize) -> Result<String, JsValue> {
    gap_profile_json(path, u, g, d, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn phase_factor(path: &str, u: f64, g: f64, d: f64, steps: usize) -> Result<String, JsValue> {
    berry_factor_json(path, u, g, d, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn catalog() -> String {
    catalog_json()
}
