//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON document. The `*_json` functions hold the
//! logic so that it can be tested natively.

use wasm_bindgen::prelude::*;

use dle_core::oracle::{validate_closed_forms, OracleOptions};
use dle_core::params::DEFAULT_NMAX;
use dle_core::report::{validation_json, Report};
use dle_core::sweep::sweep;
use dle_core::SystemParams;

/// Scales of the coupling used by the oracle panel.
pub const ORACLE_SCALES: [f64; 3] = [1.0, 0.5, 0.25];

fn params(omega1: f64, omega2: f64, e0: f64, lambda: f64, nmax: usize) -> Result<SystemParams, String> {
    SystemParams::new(omega1, omega2, e0, lambda, nmax).map_err(|e| e.to_string())
}

pub fn point_report_json(omega1: f64, omega2: f64, e0: f64, lambda: f64) -> Result<String, String> {
    let p = params(omega1, omega2, e0, lambda, DEFAULT_NMAX)?;
    Report::build(&p, p.to_file())
        .map(|r| r.to_json())
        .map_err(|e| e.to_string())
}

pub fn sweep_json(
    omega1: f64,
    e0: f64,
    lambda: f64,
    omega2_min: f64,
    omega2_max: f64,
    steps: usize,
) -> Result<String, String> {
    let p = params(omega1, omega2_max, e0, lambda, DEFAULT_NMAX)?;
    sweep(&p, omega2_min, omega2_max, steps)
        .map(|s| s.to_json())
        .map_err(|e| e.to_string())
}

pub fn oracle_json(
    omega1: f64,
    omega2: f64,
    e0: f64,
    lambda: f64,
    nmax: usize,
    with_rwa: bool,
) -> Result<String, String> {
    let p = params(omega1, omega2, e0, lambda, nmax)?;
    let v = validate_closed_forms(&p, nmax, &ORACLE_SCALES, OracleOptions { include_rwa: with_rwa })
        .map_err(|e| e.to_string())?;
    Ok(validation_json(&v, &dle_core::oracle::GATED_CHANNELS))
}

/// Single-point report.
#[wasm_bindgen]
pub fn point_report(omega1: f64, omega2: f64, e0: f64, lambda: f64) -> Result<String, JsError> {
    point_report_json(omega1, omega2, e0, lambda).map_err(|e| JsError::new(&e))
}

/// Measures along a grid of post-switch frequencies.
#[wasm_bindgen]
pub fn sweep_curves(
    omega1: f64,
    e0: f64,
    lambda: f64,
    omega2_min: f64,
    omega2_max: f64,
    steps: usize,
) -> Result<String, JsError> {
    sweep_json(omega1, e0, lambda, omega2_min, omega2_max, steps).map_err(|e| JsError::new(&e))
}

/// Closed forms against exact diagonalization at three couplings.
#[wasm_bindgen]
pub fn oracle_check(
    omega1: f64,
    omega2: f64,
    e0: f64,
    lambda: f64,
    nmax: usize,
    with_rwa: bool,
) -> Result<String, JsError> {
    oracle_json(omega1, omega2, e0, lambda, nmax, with_rwa).map_err(|e| JsError::new(&e))
}
