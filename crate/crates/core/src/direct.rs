//! Direct scattering: Möbius maps, scattering-matrix entries on the real
//! line, eigenvalues from truncated polynomials, and norming constants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::poly::DEFAULT_DEGREE_CAP;
use crate::numerics::Polynomial;
use crate::potential::PotentialPair;
use crate::seed::{compute_seed_set_with, SeedOptions};
use crate::spps::{compute_all, CoefficientTable, FamilyTables, Retain};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `z = (1/2 + iρ)/(1/2 − iρ)`, mapping the closed upper half-plane onto the
/// closed unit disk.
pub fn mobius_z(rho: Complex64) -> Result<Complex64> {
    let den = 0.5 - I * rho;
    if den == ZERO {
        return Err(Error::Pole { what: "z(rho)", at: rho });
    }
    Ok((0.5 + I * rho) / den)
}

/// `z̃ = (1/2 − iρ)/(1/2 + iρ)`, the lower half-plane counterpart.
pub fn mobius_ztil(rho: Complex64) -> Result<Complex64> {
    let den = 0.5 + I * rho;
    if den == ZERO {
        return Err(Error::Pole { what: "ztil(rho)", at: rho });
    }
    Ok((0.5 - I * rho) / den)
}

pub fn rho_of_z(z: Complex64) -> Result<Complex64> {
    if z == -ONE {
        return Err(Error::Pole { what: "rho(z)", at: z });
    }
    Ok((z - 1.0) / (2.0 * I * (z + 1.0)))
}

pub fn rho_of_ztil(zt: Complex64) -> Result<Complex64> {
    if zt == -ONE {
        return Err(Error::Pole { what: "rho(ztil)", at: zt });
    }
    Ok((1.0 - zt) / (2.0 * I * (zt + 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringSample {
    pub rho: f64,
    pub z: Complex64,
    pub ztil: Complex64,
    pub a: Complex64,
    pub atil: Complex64,
    pub b: Complex64,
    pub btil: Complex64,
}

impl ScatteringSample {
    /// Builds a sample from the four entries, filling in both Möbius images.
    pub fn new(rho: f64, a: Complex64, atil: Complex64, b: Complex64, btil: Complex64) -> Result<Self> {
        let r = Complex64::new(rho, 0.0);
        Ok(Self {
            rho,
            z: mobius_z(r)?,
            ztil: mobius_ztil(r)?,
            a,
            atil,
            b,
            btil,
        })
    }

    /// `|a ã + b b̃ − 1|`, zero for exact data.
    pub fn unitarity_residual(&self) -> f64 {
        (self.a * self.atil + self.b * self.btil - 1.0).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfPlane {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDatum {
    pub rho: Complex64,
    pub c: Complex64,
    pub half_plane: HalfPlane,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScatteringData {
    pub samples: Vec<ScatteringSample>,
    pub upper: Vec<DiscreteDatum>,
    pub lower: Vec<DiscreteDatum>,
}

impl ScatteringData {
    pub fn max_unitarity_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(ScatteringSample::unitarity_residual)
            .fold(0.0, f64::max)
    }

    pub fn check(&self) -> Result<()> {
        if self.samples.windows(2).any(|w| !(w[0].rho < w[1].rho)) {
            return Err(Error::Shape("continuum samples must be sorted by rho without repeats".into()));
        }
        if self.upper.iter().any(|d| !(d.rho.im > 0.0) || d.half_plane != HalfPlane::Upper) {
            return Err(Error::Shape("upper eigenvalues need Im rho > 0".into()));
        }
        if self.lower.iter().any(|d| !(d.rho.im < 0.0) || d.half_plane != HalfPlane::Lower) {
            return Err(Error::Shape("lower eigenvalues need Im rho < 0".into()));
        }
        Ok(())
    }
}

/// Real-axis sampling schemes for the continuous spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RhoSampling {
    /// `count` equispaced points on `[min, max]`, both ends included.
    Uniform { min: f64, max: f64, count: usize },
    /// `count/2` points `10^α` with `α` equispaced on `[min_exp, max_exp]`,
    /// mirrored onto the negative axis.
    LogSymmetric { min_exp: f64, max_exp: f64, count: usize },
}

impl RhoSampling {
    pub fn points(&self) -> Result<Vec<f64>> {
        match *self {
            RhoSampling::Uniform { min, max, count } => {
                if count < 2 || !(min < max) {
                    return Err(Error::InvalidInput(format!(
                        "uniform sampling needs count >= 2 and min < max, got {count} on [{min}, {max}]"
                    )));
                }
                let step = (max - min) / (count - 1) as f64;
                Ok((0..count)
                    .map(|k| if k + 1 == count { max } else { min + step * k as f64 })
                    .collect())
            }
            RhoSampling::LogSymmetric { min_exp, max_exp, count } => {
                if count < 4 || count % 2 != 0 || !(min_exp < max_exp) {
                    return Err(Error::InvalidInput(format!(
                        "log-symmetric sampling needs an even count >= 4 and min_exp < max_exp, got {count}"
                    )));
                }
                let half = count / 2;
                let step = (max_exp - min_exp) / (half - 1) as f64;
                let pos: Vec<f64> = (0..half)
                    .map(|k| 10f64.powf(if k + 1 == half { max_exp } else { min_exp + step * k as f64 }))
                    .collect();
                let mut out: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
                out.extend(pos);
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectOptions {
    /// Roots with `|z| > 1 − disk_margin` are discarded.
    pub disk_margin: f64,
    /// Kept roots must satisfy `|a_N(z)| ≤ root_residual_tol`.
    pub root_residual_tol: f64,
    pub degree_cap: usize,
    /// First-component denominators below this switch the norming constant
    /// to the second-component quotient.
    pub quotient_tol: f64,
}

impl Default for DirectOptions {
    fn default() -> Self {
        Self {
            disk_margin: 1e-6,
            root_residual_tol: 1e-7,
            degree_cap: DEFAULT_DEGREE_CAP,
            quotient_tol: 1e-8,
        }
    }
}

/// Jost solution at the origin from a table retained at `x = 0`.
fn jost_at_origin(table: &CoefficientTable, w: Complex64) -> Result<[Complex64; 2]> {
    use crate::spps::Family;
    let node = table.grid().zero_index();
    let s = table.series_at(node, w)?;
    let base = match table.family() {
        Family::A => [ZERO, ONE],
        Family::Atil | Family::B => [ONE, ZERO],
        Family::Btil => [ZERO, -ONE],
    };
    Ok([base[0] + (w + 1.0) * s[0], base[1] + (w + 1.0) * s[1]])
}

/// `W[θ; ω] = θ₁ω₂ − θ₂ω₁`.
pub fn wronskian(t: [Complex64; 2], w: [Complex64; 2]) -> Complex64 {
    t[0] * w[1] - t[1] * w[0]
}

struct OriginJost {
    phi: [Complex64; 2],
    psi: [Complex64; 2],
    phitil: [Complex64; 2],
    psitil: [Complex64; 2],
}

fn origin_jost_real(t: &FamilyTables, rho: f64) -> Result<OriginJost> {
    let r = Complex64::new(rho, 0.0);
    let z = mobius_z(r)?;
    let zt = mobius_ztil(r)?;
    Ok(OriginJost {
        phi: jost_at_origin(&t.b, z)?,
        psi: jost_at_origin(&t.a, z)?,
        phitil: jost_at_origin(&t.btil, zt)?,
        psitil: jost_at_origin(&t.atil, zt)?,
    })
}

/// Scattering-matrix entries at real `ρ` from the truncated series at `x = 0`.
pub fn scattering_entries(tables: &FamilyTables, rhos: &[f64]) -> Result<Vec<ScatteringSample>> {
    let one = |rho: &f64| -> Result<ScatteringSample> {
        let j = origin_jost_real(tables, *rho)?;
        ScatteringSample::new(
            *rho,
            wronskian(j.phi, j.psi),
            wronskian(j.phitil, j.psitil),
            j.phi[1] * j.psitil[0] - j.phi[0] * j.psitil[1],
            wronskian(j.phitil, j.psi),
        )
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        rhos.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    rhos.iter().map(one).collect()
}

/// `W[φ; φ̃]` at real `ρ`, identically `−1` for exact Jost solutions.
pub fn wronskian_phi_phitil(tables: &FamilyTables, rho: f64) -> Result<Complex64> {
    let j = origin_jost_real(tables, rho)?;
    Ok(wronskian(j.phi, j.phitil))
}

/// `a(ρ)` continued into the closed upper half-plane.
pub fn a_coefficient(tables: &FamilyTables, rho: Complex64) -> Result<Complex64> {
    if rho.im < -1e-12 {
        return Err(Error::Domain { family: "a", rho });
    }
    let z = mobius_z(rho)?;
    Ok(wronskian(jost_at_origin(&tables.b, z)?, jost_at_origin(&tables.a, z)?))
}

/// `ã(ρ)` continued into the closed lower half-plane.
pub fn atil_coefficient(tables: &FamilyTables, rho: Complex64) -> Result<Complex64> {
    if rho.im > 1e-12 {
        return Err(Error::Domain { family: "atil", rho });
    }
    let zt = mobius_ztil(rho)?;
    Ok(wronskian(jost_at_origin(&tables.btil, zt)?, jost_at_origin(&tables.atil, zt)?))
}

/// `Σ (−w)ⁿ cₙ` as a polynomial in `w`.
fn series_poly(coeffs: &[Complex64]) -> Polynomial {
    Polynomial::new(
        coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 2 == 0 { *c } else { -*c })
            .collect(),
    )
}

fn component_polys(table: &CoefficientTable) -> Result<(Polynomial, Polynomial)> {
    let rows = table.coefficients_at(table.grid().zero_index())?;
    let c1: Vec<Complex64> = rows.iter().map(|r| r[0]).collect();
    let c2: Vec<Complex64> = rows.iter().map(|r| r[1]).collect();
    Ok((series_poly(&c1), series_poly(&c2)))
}

/// `a_N(z)` and `ã_N(z̃)`, each of degree `2N + 2`.
pub fn eigen_polynomials(tables: &FamilyTables) -> Result<(Polynomial, Polynomial)> {
    let zp1 = Polynomial::one_plus_z();
    let one = Polynomial::constant(ONE);
    let (a1, a2) = component_polys(&tables.a)?;
    let (b1, b2) = component_polys(&tables.b)?;
    let (at1, at2) = component_polys(&tables.atil)?;
    let (bt1, bt2) = component_polys(&tables.btil)?;
    let zp1_sq = &zp1 * &zp1;

    let phi1 = &one + &(&zp1 * &b1);
    let psi2 = &one + &(&zp1 * &a2);
    let a_n = &(&phi1 * &psi2) - &(&zp1_sq * &(&b2 * &a1));

    let minus_phitil2 = &one - &(&zp1 * &bt2);
    let psitil1 = &one + &(&zp1 * &at1);
    let atil_n = &(&zp1_sq * &(&bt1 * &at2)) + &(&minus_phitil2 * &psitil1);
    Ok((a_n, atil_n))
}

fn roots_in_disk(p: &Polynomial, opts: &DirectOptions) -> Result<Vec<Complex64>> {
    let p = p.clone().trimmed();
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let mut kept: Vec<Complex64> = p
        .roots_with_cap(opts.degree_cap)?
        .into_iter()
        .filter(|z| z.norm() <= 1.0 - opts.disk_margin)
        .filter(|z| p.eval(*z).norm() <= opts.root_residual_tol)
        .collect();
    kept.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    Ok(kept)
}

/// Eigenvalues in both half-planes, norming constants left at zero.
pub fn find_eigenvalues(
    tables: &FamilyTables,
    opts: &DirectOptions,
) -> Result<(Vec<DiscreteDatum>, Vec<DiscreteDatum>)> {
    let (a_n, atil_n) = eigen_polynomials(tables)?;
    let upper = roots_in_disk(&a_n, opts)?
        .into_iter()
        .map(|z| {
            Ok(DiscreteDatum {
                rho: rho_of_z(z)?,
                c: ZERO,
                half_plane: HalfPlane::Upper,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lower = roots_in_disk(&atil_n, opts)?
        .into_iter()
        .map(|zt| {
            Ok(DiscreteDatum {
                rho: rho_of_ztil(zt)?,
                c: ZERO,
                half_plane: HalfPlane::Lower,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((upper, lower))
}

fn quotient(num: [Complex64; 2], den: [Complex64; 2], tol: f64, rho: Complex64) -> Result<Complex64> {
    if den[0].norm() >= tol {
        Ok(num[0] / den[0])
    } else if den[1].norm() >= tol {
        Ok(num[1] / den[1])
    } else {
        Err(Error::DegenerateQuotient { rho })
    }
}

/// Fills `c` for each datum: `φ = c ψ` in the upper half-plane and
/// `φ̃ = c̃ ψ̃` in the lower one, compared at `x = 0`.
pub fn norming_constants(tables: &FamilyTables, eigen: &mut [DiscreteDatum], opts: &DirectOptions) -> Result<()> {
    for d in eigen.iter_mut() {
        let (num, den) = match d.half_plane {
            HalfPlane::Upper => {
                let z = mobius_z(d.rho)?;
                (jost_at_origin(&tables.b, z)?, jost_at_origin(&tables.a, z)?)
            }
            HalfPlane::Lower => {
                let zt = mobius_ztil(d.rho)?;
                (jost_at_origin(&tables.btil, zt)?, jost_at_origin(&tables.atil, zt)?)
            }
        };
        d.c = quotient(num, den, opts.quotient_tol, d.rho)?;
    }
    Ok(())
}

/// Both first- and second-component quotients at an eigenvalue, for
/// consistency checks.
pub fn norming_quotients(tables: &FamilyTables, d: &DiscreteDatum) -> Result<[(Complex64, Complex64); 2]> {
    let (num, den) = match d.half_plane {
        HalfPlane::Upper => {
            let z = mobius_z(d.rho)?;
            (jost_at_origin(&tables.b, z)?, jost_at_origin(&tables.a, z)?)
        }
        HalfPlane::Lower => {
            let zt = mobius_ztil(d.rho)?;
            (jost_at_origin(&tables.btil, zt)?, jost_at_origin(&tables.atil, zt)?)
        }
    };
    Ok([(num[0], den[0]), (num[1], den[1])])
}

#[derive(Debug, Clone)]
pub struct DirectSolution {
    pub data: ScatteringData,
    pub tables: FamilyTables,
}

/// Seeds, SPPS tables of order `order`, continuum samples and discrete data.
pub fn solve_direct(
    p: &PotentialPair,
    order: usize,
    rhos: &[f64],
    seed_opts: &SeedOptions,
    opts: &DirectOptions,
) -> Result<DirectSolution> {
    let seeds = compute_seed_set_with(p, seed_opts)?;
    let tables = compute_all(p, &seeds, order, &Retain::Origin)?;
    let samples = scattering_entries(&tables, rhos)?;
    let (mut upper, mut lower) = find_eigenvalues(&tables, opts)?;
    norming_constants(&tables, &mut upper, opts)?;
    norming_constants(&tables, &mut lower, opts)?;
    Ok(DirectSolution {
        data: ScatteringData { samples, upper, lower },
        tables,
    })
}
