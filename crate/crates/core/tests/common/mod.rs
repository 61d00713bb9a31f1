//! Shared helpers for the integration suites: an independent RK4 integrator
//! for Jost solutions and small setup shortcuts.
#![allow(dead_code)]

use std::sync::Arc;

use akns_spps::numerics::Grid;
use akns_spps::potential::{sample_potential, PotentialPair, PotentialSpec};
use akns_spps::spps::Family;
use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pair(spec: &PotentialSpec, half_width: f64, npu: usize) -> PotentialPair {
    let grid = Arc::new(Grid::new(-half_width, half_width, npu).unwrap());
    sample_potential(spec, grid).unwrap()
}

/// Jost solution of `family` at `x = target` by classical RK4 on the
/// plane-wave-stripped unknown, started from the asymptotic data at the
/// boundary of `[x_min, x_max]` with roughly `steps_per_unit` steps.
pub fn ode_jost(
    spec: &PotentialSpec,
    family: Family,
    rho: Complex64,
    x_min: f64,
    x_max: f64,
    target: f64,
    steps_per_unit: usize,
) -> [Complex64; 2] {
    // φ = e^{σ iρx} u; (sign σ, start data, integrate from the left?)
    let (sigma, start, from_left) = match family {
        Family::B => (-1.0, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], true),
        Family::Btil => (1.0, [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)], true),
        Family::A => (1.0, [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], false),
        Family::Atil => (-1.0, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], false),
    };
    let shift = sigma * I * rho;
    let rhs = |x: f64, u: [Complex64; 2]| -> [Complex64; 2] {
        let (q, r) = spec.eval_analytic(x).unwrap();
        [(-I * rho - shift) * u[0] + q * u[1], r * u[0] + (I * rho - shift) * u[1]]
    };
    let x0 = if from_left { x_min } else { x_max };
    let steps = ((target - x0).abs() * steps_per_unit as f64).ceil() as usize;
    let h = (target - x0) / steps as f64;
    let mut u = start;
    let mut x = x0;
    let axpy = |u: [Complex64; 2], k: [Complex64; 2], s: f64| [u[0] + k[0] * s, u[1] + k[1] * s];
    for _ in 0..steps {
        let k1 = rhs(x, u);
        let k2 = rhs(x + h / 2.0, axpy(u, k1, h / 2.0));
        let k3 = rhs(x + h / 2.0, axpy(u, k2, h / 2.0));
        let k4 = rhs(x + h, axpy(u, k3, h));
        for c in 0..2 {
            u[c] += (k1[c] + k2[c] * 2.0 + k3[c] * 2.0 + k4[c]) * (h / 6.0);
        }
        x += h;
    }
    let e = (shift * target).exp();
    [u[0] * e, u[1] * e]
}

pub fn max_diff(a: [Complex64; 2], b: [Complex64; 2]) -> f64 {
    (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
}

/// Deterministic uniform samples on `[lo, hi)`.
pub fn uniform_samples(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(lo..hi)).collect()
}
