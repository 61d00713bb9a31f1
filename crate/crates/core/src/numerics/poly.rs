//! Dense complex polynomials and simultaneous root finding.
//!
//! Roots come from the Aberth–Ehrlich iteration seeded on the circles of the
//! Newton polygon of the coefficient moduli, which copes with the strongly
//! decaying coefficients produced by truncated power series.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: usize = 2048;

const MAX_ITERATIONS: usize = 800;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    /// Ascending powers.
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `1 + z`.
    pub fn one_plus_z() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self { coeffs: vec![one, one] }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
        self
    }

    /// Degree after trimming; zero for constants (including the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
            .unwrap_or(0)
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// All roots with multiplicity, using the default degree cap.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        self.roots_with_cap(DEFAULT_DEGREE_CAP)
    }

    pub fn roots_with_cap(&self, cap: usize) -> Result<Vec<Complex64>> {
        let p = self.clone().trimmed();
        let n = p.degree();
        if n == 0 {
            return Err(Error::Degenerate("constant polynomial has no roots".into()));
        }
        if n > cap {
            return Err(Error::RootCap { degree: n, cap });
        }
        // Roots at the origin are split off exactly.
        let zeros = p.coeffs.iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count();
        let reduced = &p.coeffs[zeros..=n];
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
        roots.extend(aberth(reduced));
        Ok(roots)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..len)
            .map(|i| *self.coeffs.get(i).unwrap_or(&zero) + *rhs.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Polynomial { coeffs }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Polynomial { coeffs: vec![] };
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial { coeffs }
    }
}

/// Newton correction `p(z)/p'(z)` and a flag telling whether `|p(z)|` is
/// already at the rounding-error level. Evaluates the reversed polynomial
/// outside the unit disk so high degrees do not overflow.
fn newton_step(c: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let n = c.len() - 1;
    const EPS: f64 = 4.0 * f64::EPSILON;
    if z.norm() <= 1.0 {
        let mut p = c[n];
        let mut dp = Complex64::new(0.0, 0.0);
        let mut bound = c[n].norm();
        let az = z.norm();
        for k in (0..n).rev() {
            dp = dp * z + p;
            p = p * z + c[k];
            bound = bound * az + c[k].norm();
        }
        let small = p.norm() <= EPS * bound * (n as f64);
        (p / dp, small)
    } else {
        let y = z.inv();
        let mut r = c[0];
        let mut dr = Complex64::new(0.0, 0.0);
        let mut bound = c[0].norm();
        let ay = y.norm();
        for ck in &c[1..=n] {
            dr = dr * y + r;
            r = r * y + ck;
            bound = bound * ay + ck.norm();
        }
        let small = r.norm() <= EPS * bound * (n as f64);
        // p(z) = z^n r(y), p'(z) = z^{n-1} (n r(y) - y r'(y)).
        (z / (n as f64 - y * dr / r), small)
    }
}

/// Initial estimates on the circles given by the upper convex hull of
/// `(k, ln|c_k|)`.
fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(k, v)| (k, v.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(n);
    for (i, w) in hull.windows(2).enumerate() {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let m = k1 - k0;
        let radius = ((l0 - l1) / m as f64).exp();
        for j in 0..m {
            let theta = 2.0 * PI * j as f64 / m as f64 + 2.0 * PI * i as f64 / n as f64 + 0.4;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    guesses
}

fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    let mut z = initial_guesses(c);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, small) = newton_step(c, z[i]);
            if small || !ratio.is_finite() {
                done[i] = true;
                continue;
            }
            all_done = false;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (1.0 - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                if w.norm() <= f64::EPSILON * z[i].norm() {
                    done[i] = true;
                }
            } else {
                done[i] = true;
            }
        }
        if all_done {
            break;
        }
    }
    // A final Newton step sharpens roots that stopped on the rounding floor.
    for zi in z.iter_mut() {
        let (ratio, _) = newton_step(c, *zi);
        if ratio.is_finite() && ratio.norm() < 1e-8 * zi.norm().max(1e-300) {
            *zi -= ratio;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn quadratics() {
        let r = sorted(Polynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).roots().unwrap());
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14 && (r[1] - c(1.0, 0.0)).norm() < 1e-14);

        let r = sorted(Polynomial::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).roots().unwrap());
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14 && (r[1] - c(0.0, 1.0)).norm() < 1e-14);

        let r = sorted(Polynomial::new(vec![c(1.0, 0.0), c(-2.5, 0.0), c(1.0, 0.0)]).roots().unwrap());
        assert!((r[0] - c(0.5, 0.0)).norm() < 1e-14 && (r[1] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn constant_is_degenerate() {
        let p = Polynomial::new(vec![c(3.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(p.roots(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn degree_cap() {
        let mut coeffs = vec![c(0.0, 0.0); 12];
        coeffs[0] = c(1.0, 0.0);
        coeffs[11] = c(1.0, 0.0);
        let p = Polynomial::new(coeffs);
        assert!(matches!(p.roots_with_cap(10), Err(Error::RootCap { degree: 11, cap: 10 })));
        assert_eq!(p.roots_with_cap(11).unwrap().len(), 11);
    }

    #[test]
    fn zero_roots_split_off() {
        let p = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(-4.0, 0.0), c(1.0, 0.0)]);
        let r = sorted(p.roots().unwrap());
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!((r[2] - c(4.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn geometric_decay_with_interior_roots() {
        // (z - 0.3i)(z + 0.6) times a long tail with geometrically decaying
        // coefficients, as produced by truncated power series.
        let tail = Polynomial::new((0..300).map(|n| c(0.9f64.powi(n), 0.0) * c(0.0, 1.0).powi(n)).collect());
        let p = &(&Polynomial::new(vec![c(0.0, -0.3), c(1.0, 0.0)]) * &Polynomial::new(vec![c(0.6, 0.0), c(1.0, 0.0)])) * &tail;
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 301);
        assert!(roots.iter().any(|z| (z - c(0.0, 0.3)).norm() < 1e-12));
        assert!(roots.iter().any(|z| (z - c(-0.6, 0.0)).norm() < 1e-12));
        let inside = roots.iter().filter(|z| z.norm() < 1.0).count();
        assert_eq!(inside, 2);
    }

    #[test]
    fn product_and_eval() {
        let a = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let b = Polynomial::new(vec![c(0.0, 1.0), c(1.0, 0.0)]);
        let p = &a * &b;
        let z = c(0.3, -0.7);
        assert!((p.eval(z) - a.eval(z) * b.eval(z)).norm() < 1e-15);
        assert!(((&a - &b).eval(z) - (a.eval(z) - b.eval(z))).norm() < 1e-15);
    }
}
