//! Jost solutions at `ρ = ±i/2`, which seed every SPPS recurrence.
//!
//! Each solution is stored with its plane-wave factor removed, so all fields
//! stay of order one on the whole grid.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexField, Grid, PanelRule, PANEL};
use crate::potential::PotentialPair;

pub const DEFAULT_NONVANISH_TOL: f64 = 1e-8;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedOptions {
    pub nonvanish_tol: f64,
    /// Bound on the panel-averaged ODE residual relative to the local
    /// solution size.
    pub residual_tol: f64,
}

impl Default for SeedOptions {
    fn default() -> Self {
        Self {
            nonvanish_tol: DEFAULT_NONVANISH_TOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeedSet {
    /// `e^{x/2} ψ₂(i/2, x)`.
    pub f: ComplexField,
    pub f_prime: ComplexField,
    /// `e^{x/2} ψ₁(i/2, x)`, equal to `f'/r`.
    pub psi1_half: ComplexField,
    /// `e^{x/2} ψ̃₁(-i/2, x)`.
    pub ftil: ComplexField,
    pub ftil_prime: ComplexField,
    /// `e^{x/2} ψ̃₂(-i/2, x)`, equal to `f̃'/q`.
    pub psitil2_half: ComplexField,
    /// `e^{-x/2} φ₁(i/2, x)`.
    pub g: ComplexField,
    pub g_prime: ComplexField,
    /// `e^{-x/2} φ₂(i/2, x)`, equal to `g'/q`.
    pub phi2_half: ComplexField,
    /// `e^{-x/2} φ̃₂(-i/2, x)`.
    pub gtil: ComplexField,
    pub gtil_prime: ComplexField,
    /// `e^{-x/2} φ̃₁(-i/2, x)`, equal to `g̃'/r`.
    pub phitil1_half: ComplexField,
}

impl SeedSet {
    pub fn grid(&self) -> &Arc<Grid> {
        self.f.grid()
    }
}

/// Which boundary a seed starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sweep {
    Leftward,
    Rightward,
}

/// The weighted system `s0' = α s0 + q s1`, `s1' = β s1 + r s0`.
#[derive(Debug, Clone, Copy)]
struct WeightedSystem {
    alpha: f64,
    beta: f64,
    sweep: Sweep,
    start: [Complex64; 2],
}

impl WeightedSystem {
    #[inline]
    fn rhs(&self, q: Complex64, r: Complex64, s: [Complex64; 2]) -> [Complex64; 2] {
        [s[0] * self.alpha + q * s[1], s[1] * self.beta + r * s[0]]
    }
}

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// `(u, f)` for ψ at `i/2`.
const PSI: WeightedSystem = WeightedSystem {
    alpha: 1.0,
    beta: 0.0,
    sweep: Sweep::Leftward,
    start: [C0, C1],
};
/// `(f̃, w)` for ψ̃ at `-i/2`.
const PSI_TIL: WeightedSystem = WeightedSystem {
    alpha: 0.0,
    beta: 1.0,
    sweep: Sweep::Leftward,
    start: [C1, C0],
};
/// `(g, v)` for φ at `i/2`.
const PHI: WeightedSystem = WeightedSystem {
    alpha: 0.0,
    beta: -1.0,
    sweep: Sweep::Rightward,
    start: [C1, C0],
};
/// `(y, g̃)` for φ̃ at `-i/2`.
const PHI_TIL: WeightedSystem = WeightedSystem {
    alpha: -1.0,
    beta: 0.0,
    sweep: Sweep::Rightward,
    start: [C0, Complex64::new(-1.0, 0.0)],
};

/// Lagrange weights at position `t` for unit-spaced nodes `0..6`.
fn lagrange6(t: f64) -> [f64; 6] {
    let mut w = [1.0; 6];
    for (k, wk) in w.iter_mut().enumerate() {
        for m in 0..6 {
            if m != k {
                *wk *= (t - m as f64) / (k as f64 - m as f64);
            }
        }
    }
    w
}

/// Samples of `v` at every interval midpoint, interpolated by a sixth-order
/// stencil that shifts inward near the ends.
fn midpoints(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    if n < 6 {
        return v.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    let centered = lagrange6(2.5);
    let mut out = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let start = i.saturating_sub(2).min(n - 6);
        let w = if start + 2 == i {
            centered
        } else {
            lagrange6(i as f64 + 0.5 - start as f64)
        };
        let mut acc = C0;
        for k in 0..6 {
            acc += v[start + k] * w[k];
        }
        out.push(acc);
    }
    out
}

struct Sampled<'a> {
    q: &'a [Complex64],
    r: &'a [Complex64],
    q_mid: &'a [Complex64],
    r_mid: &'a [Complex64],
}

/// Classical Runge–Kutta over the whole grid, one step per interval.
fn integrate(sys: &WeightedSystem, p: &Sampled<'_>, h: f64) -> [Vec<Complex64>; 2] {
    let n = p.q.len();
    let mut s0 = vec![C0; n];
    let mut s1 = vec![C0; n];
    let (first, step): (usize, f64) = match sys.sweep {
        Sweep::Leftward => (n - 1, -h),
        Sweep::Rightward => (0, h),
    };
    let mut s = sys.start;
    s0[first] = s[0];
    s1[first] = s[1];
    for k in 0..n - 1 {
        let (i, j) = match sys.sweep {
            Sweep::Leftward => (n - 1 - k, n - 2 - k),
            Sweep::Rightward => (k, k + 1),
        };
        let mid = i.min(j);
        let k1 = sys.rhs(p.q[i], p.r[i], s);
        let k2 = sys.rhs(
            p.q_mid[mid],
            p.r_mid[mid],
            [s[0] + k1[0] * (0.5 * step), s[1] + k1[1] * (0.5 * step)],
        );
        let k3 = sys.rhs(
            p.q_mid[mid],
            p.r_mid[mid],
            [s[0] + k2[0] * (0.5 * step), s[1] + k2[1] * (0.5 * step)],
        );
        let k4 = sys.rhs(p.q[j], p.r[j], [s[0] + k3[0] * step, s[1] + k3[1] * step]);
        for c in 0..2 {
            s[c] += (k1[c] + (k2[c] + k3[c]) * 2.0 + k4[c]) * (step / 6.0);
        }
        s0[j] = s[0];
        s1[j] = s[1];
    }
    [s0, s1]
}

/// Largest panel-wise mismatch between the increment of the solution and the
/// integral of the right-hand side, per unit length and relative to the local
/// solution size.
fn panel_residual(sys: &WeightedSystem, p: &Sampled<'_>, s: &[Vec<Complex64>; 2], rule: &PanelRule) -> f64 {
    let n = p.q.len();
    let mut worst: f64 = 0.0;
    let mut rhs0 = [C0; PANEL + 1];
    let mut rhs1 = [C0; PANEL + 1];
    for base in (0..n - 1).step_by(PANEL) {
        for k in 0..=PANEL {
            let i = base + k;
            let d = sys.rhs(p.q[i], p.r[i], [s[0][i], s[1][i]]);
            rhs0[k] = d[0];
            rhs1[k] = d[1];
        }
        let scale = (0..=PANEL)
            .map(|k| s[0][base + k].norm().max(s[1][base + k].norm()))
            .fold(1.0, f64::max);
        let width = PANEL as f64 * rule.h();
        for (c, rhs) in [&rhs0, &rhs1].into_iter().enumerate() {
            let inc = s[c][base + PANEL] - s[c][base];
            let int = rule.integrate(rhs).expect("one panel");
            worst = worst.max((inc - int).norm() / (width * scale));
        }
    }
    worst
}

fn check_nonvanishing(which: &'static str, field: &[Complex64], grid: &Grid, tol: f64) -> Result<()> {
    let (idx, min_abs) = field
        .iter()
        .map(|v| v.norm())
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, m)| if m < acc.1 { (i, m) } else { acc });
    if min_abs < tol {
        return Err(Error::NonvanishingAssumptionViolated {
            which,
            min_abs,
            x: grid.nodes()[idx],
        });
    }
    Ok(())
}

pub fn compute_seed_set(p: &PotentialPair) -> Result<SeedSet> {
    compute_seed_set_with(p, &SeedOptions::default())
}

pub fn compute_seed_set_with(p: &PotentialPair, opts: &SeedOptions) -> Result<SeedSet> {
    let grid = p.grid().clone();
    let q = p.q.values();
    let r = p.r.values();
    let q_mid = midpoints(q);
    let r_mid = midpoints(r);
    let sampled = Sampled {
        q,
        r,
        q_mid: &q_mid,
        r_mid: &r_mid,
    };
    let rule = PanelRule::new(grid.h());
    let systems = [PSI, PSI_TIL, PHI, PHI_TIL];

    let solve = |sys: &WeightedSystem| -> Result<[Vec<Complex64>; 2]> {
        let s = integrate(sys, &sampled, grid.h());
        if s.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::SolverDivergence {
                residual: f64::INFINITY,
                tol: opts.residual_tol,
            });
        }
        let residual = panel_residual(sys, &sampled, &s, &rule);
        if !(residual <= opts.residual_tol) {
            return Err(Error::SolverDivergence {
                residual,
                tol: opts.residual_tol,
            });
        }
        Ok(s)
    };

    #[cfg(feature = "parallel")]
    let solved: Vec<Result<[Vec<Complex64>; 2]>> = {
        use rayon::prelude::*;
        systems.par_iter().map(solve).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let solved: Vec<Result<[Vec<Complex64>; 2]>> = systems.iter().map(solve).collect();

    let mut it = solved.into_iter();
    let [u, f] = it.next().unwrap()?;
    let [ftil, w] = it.next().unwrap()?;
    let [g, v] = it.next().unwrap()?;
    let [y, gtil] = it.next().unwrap()?;

    check_nonvanishing("f", &f, &grid, opts.nonvanish_tol)?;
    check_nonvanishing("ftil", &ftil, &grid, opts.nonvanish_tol)?;
    check_nonvanishing("g", &g, &grid, opts.nonvanish_tol)?;
    check_nonvanishing("gtil", &gtil, &grid, opts.nonvanish_tol)?;

    let prod = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        a.iter().zip(b).map(|(x, y)| x * y).collect()
    };
    let field = |v: Vec<Complex64>| ComplexField::from_parts(grid.clone(), v);
    Ok(SeedSet {
        f_prime: field(prod(r, &u)),
        ftil_prime: field(prod(q, &w)),
        g_prime: field(prod(q, &v)),
        gtil_prime: field(prod(r, &y)),
        f: field(f),
        psi1_half: field(u),
        ftil: field(ftil),
        psitil2_half: field(w),
        g: field(g),
        phi2_half: field(v),
        gtil: field(gtil),
        phitil1_half: field(y),
    })
}
