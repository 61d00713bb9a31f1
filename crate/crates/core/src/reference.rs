//! Closed-form scattering data of the chirped hyperbolic-secant potential
//! `q = -iA sech(x) exp(-iγA ln cosh x)`, `r = -conj(q)`.

use num_complex::Complex64;

use crate::error::Result;
use crate::numerics::{complex_gamma, reciprocal_gamma};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SechChirpScattering {
    pub amplitude: f64,
    pub gamma: f64,
    /// `sqrt(γ²/4 − 1)`, imaginary when `|γ| < 2`.
    pub t: Complex64,
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
}

impl SechChirpScattering {
    pub fn new(amplitude: f64, gamma: f64) -> Self {
        let t = Complex64::new(gamma * gamma / 4.0 - 1.0, 0.0).sqrt();
        Self {
            amplitude,
            gamma,
            t,
            omega_plus: -I * amplitude * (t + gamma / 2.0),
            omega_minus: I * amplitude * (t - gamma / 2.0),
        }
    }

    pub fn omega(&self, rho: Complex64) -> Complex64 {
        -I * rho - I * (self.amplitude * self.gamma / 2.0) + 0.5
    }

    /// `a(ρ)`. The two denominator Gammas enter through `1/Γ`, so the value is
    /// exactly zero at the eigenvalues.
    pub fn analytic_a(&self, rho: Complex64) -> Result<Complex64> {
        let w = self.omega(rho);
        let num = complex_gamma(w)? * complex_gamma(w - self.omega_minus - self.omega_plus)?;
        Ok(num * reciprocal_gamma(w - self.omega_plus) * reciprocal_gamma(w - self.omega_minus))
    }

    pub fn analytic_b(&self, rho: Complex64) -> Result<Complex64> {
        let a = self.amplitude;
        let w = self.omega(rho);
        let chirp = Complex64::new(0.0, -self.gamma * a * std::f64::consts::LN_2).exp();
        let num = complex_gamma(w)? * complex_gamma(1.0 - w + self.omega_minus + self.omega_plus)?;
        Ok(I / a * chirp * num * reciprocal_gamma(self.omega_plus) * reciprocal_gamma(self.omega_minus))
    }

    /// `floor(1/2 + A|T|)` when `T` is imaginary, otherwise the count of
    /// upper-half-plane zeros of the `Γ(ω − ω₊)` factor.
    pub fn eigenvalue_count(&self) -> usize {
        self.eigenvalues().len()
    }

    /// Zeros of `a` in the upper half-plane, `ρ_m = AT − i(m − 1/2)`,
    /// ordered by increasing imaginary part.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let at = self.t * self.amplitude;
        let mut out: Vec<Complex64> = (1..)
            .map(|m| at - I * (m as f64 - 0.5))
            .take_while(|rho| rho.im > 0.0)
            .collect();
        out.reverse();
        out
    }

    /// Norming constants `c_m = b(ρ_m)`.
    pub fn norming_constants(&self) -> Result<Vec<Complex64>> {
        self.eigenvalues().into_iter().map(|rho| self.analytic_b(rho)).collect()
    }
}
