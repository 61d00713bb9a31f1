//! Dense complex least squares: thin QR of the column-equilibrated matrix,
//! then a truncated singular value decomposition of the small `R` factor.

use faer::Mat;
use num_complex::Complex64;

/// One factorization of an overdetermined matrix, reusable for any number
/// of right-hand sides. Columns are scaled to unit norm first so the rank
/// test sees linear dependence rather than column magnitude. Directions
/// with `σ_k ≤ rank_tol·σ_0` are dropped from the solution.
pub struct LeastSquares {
    matrix: Mat<Complex64>,
    q: Mat<Complex64>,
    u: Mat<Complex64>,
    v: Mat<Complex64>,
    sigma: Vec<f64>,
    scale: Vec<f64>,
    rank: usize,
}

impl LeastSquares {
    pub fn factor(matrix: Mat<Complex64>, rank_tol: f64) -> Self {
        let scale: Vec<f64> = (0..matrix.ncols())
            .map(|j| {
                let n = matrix.col(j).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                if n > 0.0 { 1.0 / n } else { 1.0 }
            })
            .collect();
        let scaled = Mat::from_fn(matrix.nrows(), matrix.ncols(), |i, j| matrix[(i, j)] * scale[j]);
        let qr = scaled.qr();
        let q = qr.compute_thin_Q();
        let (u, v, sigma) = match qr.thin_R().thin_svd() {
            Ok(svd) => (
                svd.U().to_owned(),
                svd.V().to_owned(),
                svd.S().column_vector().iter().map(|s| s.re).collect::<Vec<f64>>(),
            ),
            // No convergence: report rank zero, which callers treat as deficient.
            Err(_) => (Mat::zeros(matrix.nrows(), 0), Mat::zeros(matrix.ncols(), 0), Vec::new()),
        };
        let lead = sigma.first().copied().unwrap_or(0.0);
        let rank = sigma.iter().take_while(|&&s| s > rank_tol * lead).count();
        Self {
            matrix,
            q,
            u,
            v,
            sigma,
            scale,
            rank,
        }
    }

    /// Singular values of the equilibrated matrix, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    /// `σ_0 / σ_min` of the equilibrated matrix.
    pub fn condition(&self) -> f64 {
        match (self.sigma.first(), self.sigma.last()) {
            (Some(a), Some(b)) if *b > 0.0 => a / b,
            _ => f64::INFINITY,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    /// Minimum-norm least-squares solutions over the retained singular
    /// directions, one per right-hand side column of `rhs`.
    pub fn solve(&self, rhs: &Mat<Complex64>) -> Mat<Complex64> {
        let k = self.rank;
        let qh_b = self.q.adjoint() * rhs;
        let uh_b = self.u.get(.., ..k).adjoint() * &qh_b;
        let mut coef = uh_b;
        for j in 0..coef.ncols() {
            for i in 0..k {
                coef[(i, j)] /= self.sigma[i];
            }
        }
        let mut x = self.v.get(.., ..k) * &coef;
        for j in 0..x.ncols() {
            for (i, s) in self.scale.iter().enumerate() {
                x[(i, j)] *= *s;
            }
        }
        x
    }

    /// Euclidean norm of `A x - b` for each column pair.
    pub fn residual_norms(&self, x: &Mat<Complex64>, rhs: &Mat<Complex64>) -> Vec<f64> {
        let ax = &self.matrix * x;
        (0..rhs.ncols())
            .map(|j| {
                (0..rhs.nrows())
                    .map(|i| (ax[(i, j)] - rhs[(i, j)]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }
}
