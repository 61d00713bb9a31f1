//! Inverse scattering: least-squares recovery of the SPPS coefficients from
//! scattering data, then of `q` and `r` from the first coefficients.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::direct::{mobius_ztil, ScatteringData};
use crate::error::{Error, Result};
use crate::numerics::lstsq::LeastSquares;
use crate::numerics::spline_derivative_at;

pub const DEFAULT_RANK_TOL: f64 = 1e-10;
pub const DEFAULT_X_NODES_PER_UNIT: usize = 20;
pub const DENOMINATOR_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseConfig {
    /// Unknowns per family.
    #[serde(rename = "N")]
    pub order: usize,
    /// Half-width of the reconstruction interval.
    pub l: f64,
    #[serde(default = "default_x_nodes_per_unit")]
    pub x_nodes_per_unit: usize,
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    #[serde(default)]
    pub residual_report: bool,
}

fn default_x_nodes_per_unit() -> usize {
    DEFAULT_X_NODES_PER_UNIT
}

fn default_rank_tol() -> f64 {
    DEFAULT_RANK_TOL
}

impl InverseConfig {
    pub fn new(order: usize, l: f64) -> Self {
        Self {
            order,
            l,
            x_nodes_per_unit: DEFAULT_X_NODES_PER_UNIT,
            rank_tol: DEFAULT_RANK_TOL,
            residual_report: false,
        }
    }

    /// Equispaced reconstruction nodes on `[-l, l]`, symmetric about zero.
    pub fn x_nodes(&self) -> Result<Vec<f64>> {
        if !(self.l > 0.0) || self.x_nodes_per_unit == 0 || self.order == 0 {
            return Err(Error::InvalidInput(format!(
                "inverse needs N >= 1, l > 0 and x_nodes_per_unit >= 1 (got N = {}, l = {}, {})",
                self.order, self.l, self.x_nodes_per_unit
            )));
        }
        let half = (self.l * self.x_nodes_per_unit as f64).round() as i64;
        if half < 3 {
            return Err(Error::InvalidInput("fewer than 7 reconstruction nodes".into()));
        }
        let step = self.l / half as f64;
        Ok((-half..=half).map(|k| k as f64 * step).collect())
    }
}

/// `A`, `B1` and `B2` at one reconstruction point. The two right-hand sides
/// share the single matrix.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub x: f64,
    pub order: usize,
    pub matrix: Mat<Complex64>,
    /// Two columns: `B1` then `B2`.
    pub rhs: Mat<Complex64>,
}

/// `(w + 1)(−w)ⁿ` for `n = 0..N`, scaled by `s`.
fn powers(w: Complex64, s: Complex64, order: usize) -> impl Iterator<Item = Complex64> {
    let mut acc = (w + 1.0) * s;
    (0..order).map(move |_| {
        let v = acc;
        acc *= -w;
        v
    })
}

pub fn assemble_system(sd: &ScatteringData, x: f64, order: usize) -> Result<LinearSystem> {
    sd.check()?;
    let k = sd.samples.len();
    let (m, mt) = (sd.upper.len(), sd.lower.len());
    let rows = 2 * k + m + mt;
    let cols = 4 * order;
    if order == 0 {
        return Err(Error::Shape("N must be at least 1".into()));
    }
    if rows < cols {
        return Err(Error::Shape(format!(
            "{rows} equations cannot determine {cols} unknowns; supply more continuum samples"
        )));
    }
    let mut a = Mat::<Complex64>::zeros(rows, cols);
    let mut rhs = Mat::<Complex64>::zeros(rows, 2);
    let (cb, cbt, ca, cat) = (0, order, 2 * order, 3 * order);

    for (row, s) in sd.samples.iter().enumerate() {
        let em = Complex64::new(0.0, -s.rho * x).exp();
        let ep = em.conj();
        for (j, v) in powers(s.z, em, order).enumerate() {
            a[(row, cb + j)] = v;
        }
        for (j, v) in powers(s.z, -s.b * ep, order).enumerate() {
            a[(row, ca + j)] = v;
        }
        for (j, v) in powers(s.ztil, -s.a * em, order).enumerate() {
            a[(row, cat + j)] = v;
        }
        rhs[(row, 0)] = (s.a - 1.0) * em;
        rhs[(row, 1)] = s.b * ep;

        let row2 = k + row;
        for (j, v) in powers(s.ztil, ep, order).enumerate() {
            a[(row2, cbt + j)] = v;
        }
        for (j, v) in powers(s.z, s.atil * ep, order).enumerate() {
            a[(row2, ca + j)] = v;
        }
        for (j, v) in powers(s.ztil, -s.btil * em, order).enumerate() {
            a[(row2, cat + j)] = v;
        }
        rhs[(row2, 0)] = s.btil * em;
        rhs[(row2, 1)] = (1.0 - s.atil) * ep;
    }

    for (i, d) in sd.upper.iter().enumerate() {
        let row = 2 * k + i;
        let z = crate::direct::mobius_z(d.rho)?;
        let em = (-I * d.rho * x).exp();
        let ep = (I * d.rho * x).exp();
        for (j, v) in powers(z, em, order).enumerate() {
            a[(row, cb + j)] = v;
        }
        for (j, v) in powers(z, -d.c * ep, order).enumerate() {
            a[(row, ca + j)] = v;
        }
        rhs[(row, 0)] = -em;
        rhs[(row, 1)] = d.c * ep;
    }

    for (i, d) in sd.lower.iter().enumerate() {
        let row = 2 * k + m + i;
        let zt = mobius_ztil(d.rho)?;
        let em = (-I * d.rho * x).exp();
        let ep = (I * d.rho * x).exp();
        for (j, v) in powers(zt, ep, order).enumerate() {
            a[(row, cbt + j)] = v;
        }
        for (j, v) in powers(zt, -d.c * em, order).enumerate() {
            a[(row, cat + j)] = v;
        }
        rhs[(row, 0)] = d.c * em;
        rhs[(row, 1)] = ep;
    }

    Ok(LinearSystem {
        x,
        order,
        matrix: a,
        rhs,
    })
}

/// Solutions `X1`, `X2` ordered `(b, b̃, a, ã)` with `N` entries per family.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVectors {
    pub x: f64,
    pub order: usize,
    pub x1: Vec<Complex64>,
    pub x2: Vec<Complex64>,
    /// `‖A X1 − B1‖`, `‖A X2 − B2‖` when requested.
    pub residuals: Option<[f64; 2]>,
}

impl CoefficientVectors {
    fn first(&self, block: usize) -> [Complex64; 2] {
        let i = block * self.order;
        [self.x1[i], self.x2[i]]
    }

    pub fn b0(&self) -> [Complex64; 2] {
        self.first(0)
    }

    pub fn btil0(&self) -> [Complex64; 2] {
        self.first(1)
    }

    pub fn a0(&self) -> [Complex64; 2] {
        self.first(2)
    }

    pub fn atil0(&self) -> [Complex64; 2] {
        self.first(3)
    }
}

pub fn solve_coefficient_vectors(sys: LinearSystem, rank_tol: f64, report: bool) -> Result<CoefficientVectors> {
    let cols = sys.matrix.ncols();
    let ls = LeastSquares::factor(sys.matrix, rank_tol);
    if ls.rank() < cols {
        return Err(Error::RankDeficiency {
            x: sys.x,
            rank: ls.rank(),
            columns: cols,
        });
    }
    let sol = ls.solve(&sys.rhs);
    let residuals = report.then(|| {
        let r = ls.residual_norms(&sol, &sys.rhs);
        [r[0], r[1]]
    });
    Ok(CoefficientVectors {
        x: sys.x,
        order: sys.order,
        x1: (0..cols).map(|i| sol[(i, 0)]).collect(),
        x2: (0..cols).map(|i| sol[(i, 1)]).collect(),
        residuals,
    })
}

/// Potentials recovered on the reconstruction nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredPotential {
    pub x: Vec<f64>,
    pub q: Vec<Complex64>,
    pub r: Vec<Complex64>,
}

/// `r` from `b₀` and `q` from `b̃₀`, with the exponential weights cancelled:
/// `r = (b₂,₀' + b₂,₀)/(1 + b₁,₀)` and `q = (b̃₁,₀' + b̃₁,₀)/(b̃₂,₀ − 1)`.
pub fn recover_potentials(vectors: &[CoefficientVectors]) -> Result<RecoveredPotential> {
    let x: Vec<f64> = vectors.iter().map(|v| v.x).collect();
    let b1: Vec<Complex64> = vectors.iter().map(|v| v.b0()[0]).collect();
    let b2: Vec<Complex64> = vectors.iter().map(|v| v.b0()[1]).collect();
    let bt1: Vec<Complex64> = vectors.iter().map(|v| v.btil0()[0]).collect();
    let bt2: Vec<Complex64> = vectors.iter().map(|v| v.btil0()[1]).collect();
    let db2 = spline_derivative_at(&x, &b2)?;
    let dbt1 = spline_derivative_at(&x, &bt1)?;

    let mut q = Vec::with_capacity(x.len());
    let mut r = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let weight = (x[i] / 2.0).exp();
        let phi1 = 1.0 + b1[i];
        let phitil2 = bt2[i] - 1.0;
        if (phi1 * weight).norm() < DENOMINATOR_TOL {
            return Err(Error::DegenerateDenominator {
                which: "r",
                x: x[i],
                value: (phi1 * weight).norm(),
            });
        }
        if (phitil2 * weight).norm() < DENOMINATOR_TOL {
            return Err(Error::DegenerateDenominator {
                which: "q",
                x: x[i],
                value: (phitil2 * weight).norm(),
            });
        }
        r.push((db2[i] + b2[i]) / phi1);
        q.push((dbt1[i] + bt1[i]) / phitil2);
    }
    Ok(RecoveredPotential { x, q, r })
}

#[derive(Debug, Clone)]
pub struct InverseSolution {
    pub vectors: Vec<CoefficientVectors>,
    pub recovered: RecoveredPotential,
    pub warnings: Vec<String>,
}

pub fn solve_inverse(sd: &ScatteringData, cfg: &InverseConfig) -> Result<InverseSolution> {
    let nodes = cfg.x_nodes()?;
    let k = sd.samples.len();
    let mut warnings = Vec::new();
    if k < cfg.order {
        return Err(Error::Shape(format!(
            "{k} continuum samples are fewer than N = {}",
            cfg.order
        )));
    }
    if k < 2 * cfg.order {
        warnings.push(format!(
            "only {k} continuum samples for N = {}; at least 2N are recommended",
            cfg.order
        ));
    }
    let one = |x: &f64| -> Result<CoefficientVectors> {
        let sys = assemble_system(sd, *x, cfg.order)?;
        solve_coefficient_vectors(sys, cfg.rank_tol, cfg.residual_report)
    };
    #[cfg(feature = "parallel")]
    let vectors: Result<Vec<CoefficientVectors>> = {
        use rayon::prelude::*;
        nodes.par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let vectors: Result<Vec<CoefficientVectors>> = nodes.iter().map(one).collect();
    let vectors = vectors?;
    let recovered = recover_potentials(&vectors)?;
    Ok(InverseSolution {
        vectors,
        recovered,
        warnings,
    })
}

/// Zero potential data: `a = ã = 1`, `b = b̃ = 0`, no eigenvalues.
pub fn zero_potential_data(rhos: &[f64]) -> Result<ScatteringData> {
    let one = Complex64::new(1.0, 0.0);
    Ok(ScatteringData {
        samples: rhos
            .iter()
            .map(|&r| crate::direct::ScatteringSample::new(r, one, one, ZERO, ZERO))
            .collect::<Result<_>>()?,
        upper: Vec::new(),
        lower: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::RhoSampling;

    fn zero_data(k: usize) -> ScatteringData {
        let rhos = RhoSampling::Uniform { min: -10.0, max: 10.0, count: k }.points().unwrap();
        zero_potential_data(&rhos).unwrap()
    }

    #[test]
    fn system_shape_and_first_entry() {
        let mut sd = zero_data(40);
        sd.upper.push(crate::direct::DiscreteDatum {
            rho: Complex64::new(0.0, 0.3),
            c: Complex64::new(1.0, 0.0),
            half_plane: crate::direct::HalfPlane::Upper,
        });
        sd.lower.push(crate::direct::DiscreteDatum {
            rho: Complex64::new(0.1, -0.3),
            c: Complex64::new(1.0, 0.0),
            half_plane: crate::direct::HalfPlane::Lower,
        });
        let sys = assemble_system(&sd, 0.0, 5).unwrap();
        assert_eq!((sys.matrix.nrows(), sys.matrix.ncols()), (82, 20));
        let s = sd.samples[3];
        assert_eq!(sys.matrix[(3, 0)], s.z + 1.0);
        assert_eq!(sys.matrix[(3, 5)], ZERO);
    }

    #[test]
    fn zero_data_gives_zero_rhs_and_coefficients() {
        let sd = zero_data(200);
        let sys = assemble_system(&sd, 0.7, 8).unwrap();
        assert!((0..sys.rhs.nrows()).all(|i| sys.rhs[(i, 0)] == ZERO && sys.rhs[(i, 1)] == ZERO));
        let v = solve_coefficient_vectors(sys, DEFAULT_RANK_TOL, true).unwrap();
        assert!(v.x1.iter().chain(&v.x2).all(|c| c.norm() == 0.0));
    }

    #[test]
    fn zero_data_recovers_zero_potential() {
        let sd = zero_data(300);
        let sol = solve_inverse(&sd, &InverseConfig::new(10, 2.0)).unwrap();
        assert_eq!(sol.recovered.x.len(), 81);
        assert!(sol.recovered.q.iter().chain(&sol.recovered.r).all(|c| c.norm() <= 1e-10));
        assert!(sol.warnings.is_empty());
    }

    #[test]
    fn too_few_samples() {
        let sd = zero_data(4);
        assert!(matches!(solve_inverse(&sd, &InverseConfig::new(10, 2.0)), Err(Error::Shape(_))));
    }

    #[test]
    fn reconstruction_nodes() {
        let x = InverseConfig::new(50, 5.0).x_nodes().unwrap();
        assert_eq!(x.len(), 201);
        assert_eq!((x[0], x[100], x[200]), (-5.0, 0.0, 5.0));
    }
}
