//! Manifold-ranking diffusion on the adjacency-weight graph.
//!
//! The operator solves `(I - alpha * S) f = y` where `S = D^{-1/2} W D^{-1/2}`
//! is the symmetrically normalized weight matrix. It is used twice per image:
//! to smooth the dense affinity before the compactness stage and to propagate
//! the foreground score vector.

use nalgebra::{DMatrix, DVector, LU};

use crate::error::{Error, Result};

/// Factorized ranking operator; build once per graph, solve many times.
pub struct DiffusionOperator {
    alpha: f64,
    n: usize,
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl DiffusionOperator {
    /// Build from sparse adjacency weights. Requires `0 <= alpha < 1`
    /// (at `alpha = 1` the system is singular). Degree-zero nodes get a zero
    /// row/column in `S` and pass through the solve unchanged.
    pub fn new(weights: &DMatrix<f64>, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::Config(format!(
                "alpha must lie in [0, 1), got {alpha}"
            )));
        }
        if weights.nrows() != weights.ncols() {
            return Err(Error::Domain(format!(
                "weight matrix must be square, got {}x{}",
                weights.nrows(),
                weights.ncols()
            )));
        }
        let n = weights.nrows();
        let inv_sqrt_deg: Vec<f64> = (0..n)
            .map(|i| {
                let d: f64 = weights.row(i).sum();
                if d > 0.0 {
                    1.0 / d.sqrt()
                } else {
                    0.0
                }
            })
            .collect();

        let mut system = DMatrix::identity(n, n);
        for i in 0..n {
            for j in 0..n {
                let s = inv_sqrt_deg[i] * weights[(i, j)] * inv_sqrt_deg[j];
                system[(i, j)] -= alpha * s;
            }
        }
        Ok(Self {
            alpha,
            n,
            lu: system.lu(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Solve `(I - alpha * S) f = y`.
    pub fn manifold_rank(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.n {
            return Err(Error::Domain(format!(
                "seed vector length {} does not match graph size {}",
                y.len(),
                self.n
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("seed vector contains non-finite values".into()));
        }
        let rhs = DVector::from_column_slice(y);
        let f = self
            .lu
            .solve(&rhs)
            .ok_or_else(|| Error::Config("ranking system is singular".into()))?;
        Ok(f.as_slice().to_vec())
    }

    /// Diffuse a dense affinity matrix column by column, then re-symmetrize
    /// and rescale so the diagonal is exactly 1.
    ///
    /// The symmetric rescale divides `a_ij` by `sqrt(a_ii * a_jj)`; diagonal
    /// entries stay strictly positive because the Neumann series of the
    /// solve only adds nonnegative mass to the unit diagonal of the input.
    pub fn diffuse_affinity(&self, affinity: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if affinity.nrows() != self.n || affinity.ncols() != self.n {
            return Err(Error::Domain(format!(
                "affinity {}x{} does not match graph size {}",
                affinity.nrows(),
                affinity.ncols(),
                self.n
            )));
        }
        let diffused = self
            .lu
            .solve(affinity)
            .ok_or_else(|| Error::Config("ranking system is singular".into()))?;
        let mut sym = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                sym[(i, j)] = 0.5 * (diffused[(i, j)] + diffused[(j, i)]);
            }
        }
        let scale: Vec<f64> = (0..self.n).map(|i| sym[(i, i)].sqrt()).collect();
        for i in 0..self.n {
            for j in 0..self.n {
                let s = scale[i] * scale[j];
                sym[(i, j)] = if s > 0.0 { sym[(i, j)] / s } else { 0.0 };
            }
        }
        // Exact unit diagonal, untouched by rounding in the division above.
        for i in 0..self.n {
            sym[(i, i)] = 1.0;
        }
        Ok(sym)
    }
}
