//! Browser bindings. Each export is a thin wrapper over a plain function
//! so the logic can be tested natively.

use akns_spps::direct::{mobius_z, solve_direct, DirectOptions, RhoSampling};
use akns_spps::numerics::GridSpec;
use akns_spps::potential::{sample_potential, PotentialSpec};
use akns_spps::reference::SechChirpScattering;
use akns_spps::seed::SeedOptions;
use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest table order the page will request; keeps a solve under a few seconds.
pub const MAX_ORDER: usize = 200;

pub fn mobius(re: f64, im: f64) -> Result<[f64; 2], String> {
    let z = mobius_z(Complex64::new(re, im)).map_err(|e| e.to_string())?;
    Ok([z.re, z.im])
}

/// Closed-form `(ρ, |a|, |b|)` triples on a uniform real grid.
pub fn sech_chirp_table(amplitude: f64, gamma: f64, half: f64, count: usize) -> Result<Vec<f64>, String> {
    let rhos = RhoSampling::Uniform {
        min: -half,
        max: half,
        count,
    }
    .points()
    .map_err(|e| e.to_string())?;
    let exact = SechChirpScattering::new(amplitude, gamma);
    let mut out = Vec::with_capacity(3 * count);
    for rho in rhos {
        let r = Complex64::new(rho, 0.0);
        let a = exact.analytic_a(r).map_err(|e| e.to_string())?;
        let b = exact.analytic_b(r).map_err(|e| e.to_string())?;
        out.extend([rho, a.norm(), b.norm()]);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct DemoSolve {
    pub rho: Vec<f64>,
    pub abs_a: Vec<f64>,
    pub abs_b: Vec<f64>,
    /// Largest deviation from the closed form over the samples.
    pub max_err_a: f64,
    pub max_err_b: f64,
    /// Eigenvalues as `[re, im]`, upper half-plane.
    pub eigenvalues: Vec<[f64; 2]>,
    pub exact_eigenvalues: Vec<[f64; 2]>,
}

/// Direct solve for the sech-chirp pair on a coarse grid, compared with the
/// closed form.
pub fn sech_chirp_direct(amplitude: f64, gamma: f64, order: usize, count: usize) -> Result<DemoSolve, String> {
    if order == 0 || order > MAX_ORDER {
        return Err(format!("order must lie in 1..={MAX_ORDER}"));
    }
    let spec = PotentialSpec::SechChirp { amplitude, gamma };
    let grid = GridSpec {
        x_min: -36.0,
        x_max: 36.0,
        nodes_per_unit: 250,
    }
    .build()
    .map_err(|e| e.to_string())?;
    let pair = sample_potential(&spec, grid).map_err(|e| e.to_string())?;
    let rhos = RhoSampling::Uniform {
        min: -10.0,
        max: 10.0,
        count,
    }
    .points()
    .map_err(|e| e.to_string())?;
    let sol = solve_direct(&pair, order, &rhos, &SeedOptions::default(), &DirectOptions::default())
        .map_err(|e| e.to_string())?;

    let exact = SechChirpScattering::new(amplitude, gamma);
    let mut demo = DemoSolve {
        rho: rhos,
        abs_a: Vec::new(),
        abs_b: Vec::new(),
        max_err_a: 0.0,
        max_err_b: 0.0,
        eigenvalues: sol.data.upper.iter().map(|d| [d.rho.re, d.rho.im]).collect(),
        exact_eigenvalues: exact.eigenvalues().iter().map(|z| [z.re, z.im]).collect(),
    };
    for s in &sol.data.samples {
        let r = Complex64::new(s.rho, 0.0);
        let a = exact.analytic_a(r).map_err(|e| e.to_string())?;
        let b = exact.analytic_b(r).map_err(|e| e.to_string())?;
        demo.abs_a.push(s.a.norm());
        demo.abs_b.push(s.b.norm());
        demo.max_err_a = demo.max_err_a.max((s.a - a).norm());
        demo.max_err_b = demo.max_err_b.max((s.b - b).norm());
    }
    Ok(demo)
}

fn js_err(e: String) -> JsValue {
    JsValue::from_str(&e)
}

#[wasm_bindgen(js_name = mobiusZ)]
pub fn mobius_js(re: f64, im: f64) -> Result<Vec<f64>, JsValue> {
    mobius(re, im).map(|z| z.to_vec()).map_err(js_err)
}

#[wasm_bindgen(js_name = sechChirpTable)]
pub fn sech_chirp_table_js(amplitude: f64, gamma: f64, half: f64, count: usize) -> Result<Vec<f64>, JsValue> {
    sech_chirp_table(amplitude, gamma, half, count).map_err(js_err)
}

/// Returns the solve as a JSON string.
#[wasm_bindgen(js_name = sechChirpDirect)]
pub fn sech_chirp_direct_js(amplitude: f64, gamma: f64, order: usize, count: usize) -> Result<String, JsValue> {
    let demo = sech_chirp_direct(amplitude, gamma, order, count).map_err(js_err)?;
    Ok(serde_json::to_string(&demo).expect("plain numbers serialize"))
}
