//! Composite closed six-point Newton–Cotes quadrature and its cumulative
//! (per-node) variants.
//!
//! Every cumulative routine integrates the degree-5 interpolant of the
//! enclosing panel, so sub-panel nodes keep the full order of the rule.

use num_complex::Complex64;

use super::grid::{ComplexField, PANEL};
use crate::error::{Error, Result};

/// `SUB_WEIGHTS[j][k] * h / 1440` integrates the Lagrange basis polynomial of
/// panel node `k` over the sub-interval `[j, j + 1]` of a unit-spaced panel.
const SUB_WEIGHTS: [[f64; 6]; 5] = [
    [475.0, 1427.0, -798.0, 482.0, -173.0, 27.0],
    [-27.0, 637.0, 1022.0, -258.0, 77.0, -11.0],
    [11.0, -93.0, 802.0, 802.0, -93.0, 11.0],
    [-11.0, 77.0, -258.0, 1022.0, 637.0, -27.0],
    [27.0, -173.0, 482.0, -798.0, 1427.0, 475.0],
];
const SUB_DENOM: f64 = 1440.0;

/// Full-panel weights `5h/288 * (19, 75, 50, 50, 75, 19)`.
const PANEL_WEIGHTS: [f64; 6] = [19.0, 75.0, 50.0, 50.0, 75.0, 19.0];
const PANEL_DENOM: f64 = 288.0;

fn check_len(len: usize) -> Result<()> {
    if len < PANEL + 1 || !(len - 1).is_multiple_of(PANEL) {
        return Err(Error::GridShape(format!(
            "{len} samples do not form whole {}-point panels",
            PANEL + 1
        )));
    }
    Ok(())
}

/// Precomputed sub-interval weights for one spacing `h`.
#[derive(Debug, Clone)]
pub struct PanelRule {
    h: f64,
    sub: [[f64; 6]; 5],
    /// Weights for `∫_{x_j}^{x_{j+1}} e^{-(s - x_j)} F(s) ds` built from the panel samples.
    decay_fwd: [[f64; 6]; 5],
    /// Weights for `∫_{x_j}^{x_{j+1}} e^{-(x_{j+1} - s)} F(s) ds`.
    decay_bwd: [[f64; 6]; 5],
    step_decay: f64,
}

impl PanelRule {
    pub fn new(h: f64) -> Self {
        let mut sub = [[0.0; 6]; 5];
        let mut decay_fwd = [[0.0; 6]; 5];
        let mut decay_bwd = [[0.0; 6]; 5];
        for j in 0..5 {
            for k in 0..6 {
                let w = SUB_WEIGHTS[j][k] * h / SUB_DENOM;
                sub[j][k] = w;
                decay_fwd[j][k] = w * (-(k as f64 - j as f64) * h).exp();
                decay_bwd[j][k] = w * (-((j + 1) as f64 - k as f64) * h).exp();
            }
        }
        Self {
            h,
            sub,
            decay_fwd,
            decay_bwd,
            step_decay: (-h).exp(),
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    #[inline]
    fn sub_integrals(weights: &[[f64; 6]; 5], f: &[Complex64]) -> [Complex64; 5] {
        let mut out = [Complex64::new(0.0, 0.0); 5];
        for (o, w) in out.iter_mut().zip(weights) {
            *o = f[0] * w[0] + f[1] * w[1] + f[2] * w[2] + f[3] * w[3] + f[4] * w[4] + f[5] * w[5];
        }
        out
    }

    pub fn integrate(&self, f: &[Complex64]) -> Result<Complex64> {
        check_len(f.len())?;
        let scale = PANEL as f64 * self.h / PANEL_DENOM;
        let mut total = Complex64::new(0.0, 0.0);
        for panel in f.windows(PANEL + 1).step_by(PANEL) {
            let mut s = Complex64::new(0.0, 0.0);
            for (v, w) in panel.iter().zip(PANEL_WEIGHTS) {
                s += v * w;
            }
            total += s * scale;
        }
        Ok(total)
    }

    /// `out[j] = ∫_{x_j}^{x_max} f`.
    pub fn tail_right_into(&self, f: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        check_len(f.len())?;
        let last = f.len() - 1;
        out[last] = Complex64::new(0.0, 0.0);
        for base in (0..last).step_by(PANEL).rev() {
            let parts = Self::sub_integrals(&self.sub, &f[base..=base + PANEL]);
            for j in (0..PANEL).rev() {
                out[base + j] = out[base + j + 1] + parts[j];
            }
        }
        Ok(())
    }

    /// `out[j] = ∫_{x_min}^{x_j} f`.
    pub fn tail_left_into(&self, f: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        check_len(f.len())?;
        let last = f.len() - 1;
        out[0] = Complex64::new(0.0, 0.0);
        for base in (0..last).step_by(PANEL) {
            let parts = Self::sub_integrals(&self.sub, &f[base..=base + PANEL]);
            for j in 0..PANEL {
                out[base + j + 1] = out[base + j] + parts[j];
            }
        }
        Ok(())
    }

    /// `out[j] = ∫_{x_j}^{x_max} e^{-(s - x_j)} f(s) ds`, accumulated from the
    /// right so that no exponential ever exceeds one.
    pub fn discounted_tail_right_into(&self, f: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        check_len(f.len())?;
        let last = f.len() - 1;
        out[last] = Complex64::new(0.0, 0.0);
        for base in (0..last).step_by(PANEL).rev() {
            let parts = Self::sub_integrals(&self.decay_fwd, &f[base..=base + PANEL]);
            for j in (0..PANEL).rev() {
                out[base + j] = out[base + j + 1] * self.step_decay + parts[j];
            }
        }
        Ok(())
    }

    /// `out[j] = ∫_{x_min}^{x_j} e^{-(x_j - s)} f(s) ds`.
    pub fn discounted_tail_left_into(&self, f: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        check_len(f.len())?;
        let last = f.len() - 1;
        out[0] = Complex64::new(0.0, 0.0);
        for base in (0..last).step_by(PANEL) {
            let parts = Self::sub_integrals(&self.decay_bwd, &f[base..=base + PANEL]);
            for j in 0..PANEL {
                out[base + j + 1] = out[base + j] * self.step_decay + parts[j];
            }
        }
        Ok(())
    }
}

/// Composite six-point Newton–Cotes integral of `field` over the whole grid.
pub fn integrate(field: &ComplexField) -> Result<Complex64> {
    PanelRule::new(field.grid().h()).integrate(field.values())
}

/// `F(x_j) = ∫_{x_j}^{x_max} field`, with `F(x_max) = 0`.
pub fn cumulative_tail_right(field: &ComplexField) -> Result<ComplexField> {
    let mut out = vec![Complex64::new(0.0, 0.0); field.values().len()];
    PanelRule::new(field.grid().h()).tail_right_into(field.values(), &mut out)?;
    Ok(ComplexField::from_parts(field.grid().clone(), out))
}

/// `F(x_j) = ∫_{x_min}^{x_j} field`, with `F(x_min) = 0`.
pub fn cumulative_tail_left(field: &ComplexField) -> Result<ComplexField> {
    let mut out = vec![Complex64::new(0.0, 0.0); field.values().len()];
    PanelRule::new(field.grid().h()).tail_left_into(field.values(), &mut out)?;
    Ok(ComplexField::from_parts(field.grid().clone(), out))
}
