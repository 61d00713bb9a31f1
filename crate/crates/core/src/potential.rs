//! Potential pairs `(q, r)`: the built-in benchmark families and sampled data.

use std::f64::consts::{LN_2, PI};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats;
use crate::numerics::{ComplexField, CubicSpline, Grid};

pub const DEFAULT_DECAY_TOL: f64 = 1e-14;

/// Number of outermost nodes on each side checked by the decay diagnostic.
const DECAY_PROBE: usize = 4;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `q = -iA sech(x) exp(-iγA ln cosh x)`, `r = -conj(q)`.
    SechChirp {
        #[serde(alias = "A")]
        amplitude: f64,
        gamma: f64,
    },
    /// `q = exp(-x²)`, `r = -2 exp(-x² + ix)`.
    GaussPair,
    /// `q = π exp(-x² + i sin πx)`, `r = -π exp(-x² - i cos πx)`.
    GaussPhasePair,
    /// Samples read from a CSV file with header `x,re_q,im_q,re_r,im_r`.
    Sampled { path: PathBuf },
}

fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::SechChirp { amplitude, gamma } => {
                if !(*amplitude > 0.0 && amplitude.is_finite() && gamma.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "sech_chirp needs amplitude > 0 and finite gamma, got A = {amplitude}, gamma = {gamma}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Closed-form `(q(x), r(x))` for the analytic families.
    pub fn eval_analytic(&self, x: f64) -> Option<(Complex64, Complex64)> {
        match *self {
            PotentialSpec::SechChirp { amplitude: a, gamma } => {
                let q = -I * a * sech(x) * Complex64::new(0.0, -gamma * a * ln_cosh(x)).exp();
                Some((q, -q.conj()))
            }
            PotentialSpec::GaussPair => {
                let g = (-x * x).exp();
                Some((Complex64::new(g, 0.0), -2.0 * Complex64::new(-x * x, x).exp()))
            }
            PotentialSpec::GaussPhasePair => {
                let q = PI * Complex64::new(-x * x, (PI * x).sin()).exp();
                let r = -PI * Complex64::new(-x * x, -(PI * x).cos()).exp();
                Some((q, r))
            }
            PotentialSpec::Sampled { .. } => None,
        }
    }

    /// Resolves the spec into something that can be evaluated anywhere.
    pub fn load(&self) -> Result<PotentialModel> {
        self.validate()?;
        match self {
            PotentialSpec::Sampled { path } => PotentialModel::from_csv(path),
            other => Ok(PotentialModel::Analytic(other.clone())),
        }
    }
}

/// An evaluable potential: closed form or spline through samples.
#[derive(Debug, Clone)]
pub enum PotentialModel {
    Analytic(PotentialSpec),
    Sampled {
        x_min: f64,
        x_max: f64,
        q: CubicSpline,
        r: CubicSpline,
    },
}

impl PotentialModel {
    pub fn from_csv(path: &Path) -> Result<Self> {
        let (x, q, r) = formats::read_potential_csv(path)?;
        Self::from_samples(&x, &q, &r)
    }

    pub fn from_samples(x: &[f64], q: &[Complex64], r: &[Complex64]) -> Result<Self> {
        if x.len() != q.len() || x.len() != r.len() {
            return Err(Error::Shape("q and r columns differ in length".into()));
        }
        Ok(PotentialModel::Sampled {
            x_min: x[0],
            x_max: x[x.len() - 1],
            q: CubicSpline::not_a_knot(x, q)?,
            r: CubicSpline::not_a_knot(x, r)?,
        })
    }

    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        match self {
            PotentialModel::Analytic(spec) => spec.eval_analytic(x).expect("analytic family"),
            PotentialModel::Sampled { q, r, .. } => (q.eval(x), r.eval(x)),
        }
    }

    fn covers(&self, grid: &Grid) -> bool {
        match *self {
            PotentialModel::Analytic(_) => true,
            PotentialModel::Sampled { x_min, x_max, .. } => {
                let slack = 1e-9 * grid.h();
                x_min <= grid.x_min() + slack && x_max >= grid.x_max() - slack
            }
        }
    }
}

/// `q` and `r` sampled on a common grid.
#[derive(Debug, Clone)]
pub struct PotentialPair {
    pub q: ComplexField,
    pub r: ComplexField,
    pub decay_tol: f64,
}

impl PotentialPair {
    /// Checks that both potentials have decayed below `decay_tol` at the
    /// outermost nodes, which every truncated tail integral relies on.
    pub fn new(q: ComplexField, r: ComplexField, decay_tol: f64) -> Result<Self> {
        if q.grid() != r.grid() {
            return Err(Error::Shape("q and r live on different grids".into()));
        }
        let pair = Self { q, r, decay_tol };
        let tail = pair.tail_magnitude();
        if tail > decay_tol {
            let g = pair.grid();
            return Err(Error::Decay {
                x_min: g.x_min(),
                x_max: g.x_max(),
                tail,
                tol: decay_tol,
            });
        }
        Ok(pair)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.q.grid()
    }

    /// Largest `|q|` or `|r|` over the outermost nodes on either side.
    pub fn tail_magnitude(&self) -> f64 {
        let n = self.q.values().len();
        let probe = DECAY_PROBE.min(n);
        (0..probe)
            .chain(n - probe..n)
            .map(|i| self.q[i].norm().max(self.r[i].norm()))
            .fold(0.0, f64::max)
    }

    pub fn zero(grid: Arc<Grid>) -> Self {
        Self {
            q: ComplexField::zeros(grid.clone()),
            r: ComplexField::zeros(grid),
            decay_tol: DEFAULT_DECAY_TOL,
        }
    }
}

/// Samples `spec` on `grid` with the default decay tolerance.
pub fn sample_potential(spec: &PotentialSpec, grid: Arc<Grid>) -> Result<PotentialPair> {
    sample_model(&spec.load()?, grid, DEFAULT_DECAY_TOL)
}

pub fn sample_model(model: &PotentialModel, grid: Arc<Grid>, decay_tol: f64) -> Result<PotentialPair> {
    if !model.covers(&grid) {
        return Err(Error::InvalidInput(format!(
            "sampled potential does not cover [{}, {}]",
            grid.x_min(),
            grid.x_max()
        )));
    }
    let (q, r): (Vec<_>, Vec<_>) = grid.nodes().iter().map(|&x| model.eval(x)).unzip();
    PotentialPair::new(
        ComplexField::new(grid.clone(), q)?,
        ComplexField::new(grid, r)?,
        decay_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, npu: usize) -> Arc<Grid> {
        Arc::new(Grid::new(-a, a, npu).unwrap())
    }

    #[test]
    fn sech_chirp_at_origin() {
        let spec = PotentialSpec::SechChirp { amplitude: 1.65, gamma: 0.1 };
        let (q, r) = spec.eval_analytic(0.0).unwrap();
        assert!((q - Complex64::new(0.0, -1.65)).norm() < 1e-15);
        assert!((r + q.conj()).norm() == 0.0);
    }

    #[test]
    fn gauss_pair_at_origin() {
        let (q, r) = PotentialSpec::GaussPair.eval_analytic(0.0).unwrap();
        assert_eq!(q, Complex64::new(1.0, 0.0));
        assert!((r - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sech_chirp_symmetry() {
        let spec = PotentialSpec::SechChirp { amplitude: 1.65, gamma: 0.1 };
        let p = sample_potential(&spec, grid(35.0, 20)).unwrap();
        let n = p.q.values().len();
        for i in 0..n {
            assert!((p.q[i].norm() - p.q[n - 1 - i].norm()).abs() <= 1e-14);
            assert_eq!(p.r[i], -p.q[i].conj());
        }
    }

    #[test]
    fn decay_error_on_short_interval() {
        let spec = PotentialSpec::SechChirp { amplitude: 1.65, gamma: 0.1 };
        assert!(matches!(sample_potential(&spec, grid(10.0, 10)), Err(Error::Decay { .. })));
        assert!(sample_potential(&PotentialSpec::GaussPair, grid(7.0, 10)).is_ok());
        assert!(sample_potential(&PotentialSpec::GaussPhasePair, grid(7.0, 10)).is_ok());
    }

    #[test]
    fn invalid_amplitude() {
        let spec = PotentialSpec::SechChirp { amplitude: -1.0, gamma: 0.1 };
        assert!(matches!(sample_potential(&spec, grid(35.0, 10)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn ln_cosh_is_stable() {
        assert!((ln_cosh(0.3) - 0.3f64.cosh().ln()).abs() < 1e-15);
        assert!((ln_cosh(800.0) - (800.0 - LN_2)).abs() < 1e-12);
        assert!((sech(2.0) - 1.0 / 2.0f64.cosh()).abs() < 1e-16);
    }
}
