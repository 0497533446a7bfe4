//! wasm-bindgen surface for the static demo page in `www/`. Every export
//! returns the same JSON table the CLI prints with `--format json`.

use aho_core::report::{energy_table, scan_omega_table, wavefunction_table};
use aho_core::{OscillatorParams, Result};
use wasm_bindgen::prelude::*;

const SCAN_POINTS: usize = 201;
const PROFILE_ROWS: usize = 401;
const TOL: f64 = 1e-8;

fn params(mu: f64, omega: f64) -> Result<OscillatorParams> {
    OscillatorParams::new(1.0, 1.0, omega, mu)
}

pub fn pms_energy_json(mu: f64, omega: f64, order: usize) -> Result<String> {
    Ok(energy_table(&params(mu, omega)?, order, TOL)?.to_json())
}

pub fn scan_omega_json(mu: f64, omega: f64, first_order: usize, last_order: usize) -> Result<String> {
    Ok(scan_omega_table(&params(mu, omega)?, first_order..=last_order, None, SCAN_POINTS)?.to_json())
}

pub fn wavefunction_json(mu: f64, omega: f64) -> Result<String> {
    Ok(wavefunction_table(&params(mu, omega)?, TOL, PROFILE_ROWS)?.to_json())
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// PMS energy at `order` next to the reference eigenvalue.
#[wasm_bindgen(js_name = pmsEnergy)]
pub fn pms_energy(mu: f64, omega: f64, order: usize) -> std::result::Result<String, JsError> {
    js(pms_energy_json(mu, omega, order))
}

/// Energy against the artificial frequency for each order in the range.
#[wasm_bindgen(js_name = scanOmega)]
pub fn scan_omega(mu: f64, omega: f64, first_order: usize, last_order: usize) -> std::result::Result<String, JsError> {
    js(scan_omega_json(mu, omega, first_order, last_order))
}

#[wasm_bindgen]
pub fn wavefunction(mu: f64, omega: f64) -> std::result::Result<String, JsError> {
    js(wavefunction_json(mu, omega))
}
