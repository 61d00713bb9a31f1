//! Not-a-knot cubic spline interpolation of complex samples.

use num_complex::Complex64;

use super::grid::ComplexField;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<Complex64>,
    /// Second derivatives at the knots.
    m: Vec<Complex64>,
}

impl CubicSpline {
    pub fn not_a_knot(x: &[f64], y: &[Complex64]) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(Error::Shape(format!("{} abscissae, {} ordinates", n, y.len())));
        }
        if n < 4 {
            return Err(Error::GridShape(format!("spline needs at least 4 knots, got {n}")));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::GridShape("spline knots must increase strictly".into()));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<Complex64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        // Unknowns m[1..n-1]; m[0] and m[n-1] follow from the not-a-knot rows.
        let k = n - 2;
        let mut sub = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut sup = vec![0.0; k];
        let mut rhs = vec![Complex64::new(0.0, 0.0); k];
        for r in 0..k {
            let i = r + 1;
            sub[r] = h[i - 1];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            sup[r] = h[i];
            rhs[r] = (d[i] - d[i - 1]) * 6.0;
        }
        // m0 = ((h0 + h1) m1 - h0 m2) / h1
        let (h0, h1) = (h[0], h[1]);
        diag[0] += h0 * (h0 + h1) / h1;
        if k > 1 {
            sup[0] -= h0 * h0 / h1;
        }
        // m_{n-1} = ((ha + hb) m_{n-2} - hb m_{n-3}) / ha with ha = h[n-3], hb = h[n-2]
        let (ha, hb) = (h[n - 3], h[n - 2]);
        diag[k - 1] += hb * (ha + hb) / ha;
        if k > 1 {
            sub[k - 1] -= hb * hb / ha;
        }

        // Thomas algorithm.
        for r in 1..k {
            let w = sub[r] / diag[r - 1];
            diag[r] -= w * sup[r - 1];
            let prev = rhs[r - 1];
            rhs[r] -= prev * w;
        }
        let mut inner = vec![Complex64::new(0.0, 0.0); k];
        inner[k - 1] = rhs[k - 1] / diag[k - 1];
        for r in (0..k - 1).rev() {
            inner[r] = (rhs[r] - inner[r + 1] * sup[r]) / diag[r];
        }

        let mut m = Vec::with_capacity(n);
        let m1 = inner[0];
        let m2 = if k > 1 { inner[1] } else { Complex64::new(0.0, 0.0) };
        m.push(if k > 1 {
            (m1 * (h0 + h1) - m2 * h0) / h1
        } else {
            m1
        });
        m.extend_from_slice(&inner);
        let ma = inner[k - 1];
        let mb = if k > 1 { inner[k - 2] } else { Complex64::new(0.0, 0.0) };
        m.push(if k > 1 {
            (ma * (ha + hb) - mb * hb) / ha
        } else {
            ma
        });
        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    fn interval(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        self.y[i] * a
            + self.y[i + 1] * b
            + (self.m[i] * (a * a * a - a) + self.m[i + 1] * (b * b * b - b)) * (h * h / 6.0)
    }

    pub fn derivative(&self, t: f64) -> Complex64 {
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h
            + (self.m[i + 1] * (3.0 * b * b - 1.0) - self.m[i] * (3.0 * a * a - 1.0)) * (h / 6.0)
    }

    /// Spline slopes at every knot.
    pub fn knot_derivatives(&self) -> Vec<Complex64> {
        let n = self.x.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n - 1 {
            let h = self.x[i + 1] - self.x[i];
            out.push((self.y[i + 1] - self.y[i]) / h - (self.m[i] * 2.0 + self.m[i + 1]) * (h / 6.0));
        }
        let h = self.x[n - 1] - self.x[n - 2];
        out.push((self.y[n - 1] - self.y[n - 2]) / h + (self.m[n - 2] + self.m[n - 1] * 2.0) * (h / 6.0));
        out
    }
}

/// Derivative of the interpolating spline at arbitrary increasing abscissae.
pub fn spline_derivative_at(x: &[f64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.len() < 6 {
        return Err(Error::GridShape(format!("need at least 6 nodes, got {}", x.len())));
    }
    Ok(CubicSpline::not_a_knot(x, y)?.knot_derivatives())
}

/// `d(field)/dx` at the grid nodes via the not-a-knot cubic spline.
pub fn spline_derivative(field: &ComplexField) -> Result<ComplexField> {
    let d = spline_derivative_at(field.grid().nodes(), field.values())?;
    Ok(ComplexField::from_parts(field.grid().clone(), d))
}
