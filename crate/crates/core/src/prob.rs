//! Probability vectors and column-stochastic matrices.

use std::ops::Index;

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::tol;

/// A probability distribution over `n` outcomes.
///
/// Entries in `[-1e-12, 0)` are clamped to zero on construction; the entries
/// must sum to one within `1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec(Vec<f64>);

impl ProbVec {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("probability vector is empty".into()));
        }
        let mut entries = entries;
        for p in entries.iter_mut() {
            if !p.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite probability {p}")));
            }
            if *p < 0.0 {
                if *p < -tol::CLAMP {
                    return Err(Error::InvalidInput(format!("negative probability {p}")));
                }
                *p = 0.0;
            }
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > tol::VALIDATION {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self(entries))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("probability vector is empty".into()));
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    /// Point mass on outcome `k`.
    pub fn sharp(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidInput(format!("index {k} out of range for dimension {n}")));
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        Ok(Self(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Tensor product `self ⊗ other`, `other` varying fastest.
    pub fn tensor(&self, other: &ProbVec) -> ProbVec {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in self.iter() {
            for b in other.iter() {
                out.push(a * b);
            }
        }
        ProbVec(out)
    }

    /// Vector with entries sorted in non-increasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Largest entry-wise deviation from `other`.
    pub fn max_abs_diff(&self, other: &ProbVec) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for ProbVec {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Column-stochastic matrix of transition probabilities `G[(i, j)] = G_{i|j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix(DMatrix<f64>);

impl StochasticMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "stochastic matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let mut entries = entries;
        for v in entries.iter_mut() {
            if !v.is_finite() || *v < -tol::CLAMP || *v > 1.0 + tol::CLAMP {
                return Err(Error::InvalidInput(format!(
                    "transition probability {v} outside [0, 1]"
                )));
            }
            *v = v.clamp(0.0, 1.0);
        }
        for (j, col) in entries.column_iter().enumerate() {
            let s = col.sum();
            if (s - 1.0).abs() > tol::VALIDATION {
                return Err(Error::InvalidInput(format!(
                    "column {j} sums to {s}, expected 1"
                )));
            }
        }
        Ok(Self(entries))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("stochastic matrix rows are ragged".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Rank-one map sending every input to `target`.
    pub fn replacement(target: &ProbVec) -> Self {
        let n = target.len();
        Self(DMatrix::from_fn(n, n, |i, _| target[i]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `G_{i|j}`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn apply_raw(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok((0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)] * x[j]).sum())
            .collect())
    }

    pub fn apply(&self, x: &ProbVec) -> Result<ProbVec> {
        ProbVec::new(self.apply_raw(x.as_slice())?)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &StochasticMatrix) -> Result<StochasticMatrix> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 * &other.0))
    }

    /// `max_i |(G g)_i - g_i|`.
    pub fn fixed_point_residual(&self, g: &[f64]) -> Result<f64> {
        let gg = self.apply_raw(g)?;
        Ok(gg.iter().zip(g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    pub fn is_gibbs_stochastic(&self, g: &ProbVec, tol: f64) -> Result<bool> {
        Ok(self.fixed_point_residual(g.as_slice())? <= tol)
    }

    /// Row sums equal one as well as column sums.
    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        self.0.row_iter().all(|r| (r.sum() - 1.0).abs() <= tol)
    }

    pub fn max_abs_diff(&self, other: &StochasticMatrix) -> f64 {
        (&self.0 - &other.0).abs().max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_tiny_negatives() {
        let p = ProbVec::new(vec![1.0 + 5e-13, -5e-13]).unwrap();
        assert_eq!(p[1], 0.0);
        assert!(ProbVec::new(vec![1.1, -0.1]).is_err());
        assert!(ProbVec::new(vec![0.5, 0.4]).is_err());
        assert!(ProbVec::new(vec![]).is_err());
    }

    #[test]
    fn tensor_orders_second_factor_fastest() {
        let a = ProbVec::new(vec![0.25, 0.75]).unwrap();
        let b = ProbVec::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(a.tensor(&b).as_slice(), &[0.25, 0.0, 0.75, 0.0]);
    }

    #[test]
    fn stochastic_validation() {
        assert!(StochasticMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).is_ok());
        assert!(StochasticMatrix::from_rows(&[vec![0.5, 0.5], vec![0.4, 0.5]]).is_err());
        assert!(StochasticMatrix::from_rows(&[vec![1.5, 0.0], vec![-0.5, 1.0]]).is_err());
        assert!(StochasticMatrix::from_rows(&[vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn replacement_map_thermalises() {
        let g = ProbVec::new(vec![0.7, 0.2, 0.1]).unwrap();
        let m = StochasticMatrix::replacement(&g);
        let x = ProbVec::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(m.apply(&x).unwrap().max_abs_diff(&g) < 1e-15);
        assert!(m.is_gibbs_stochastic(&g, 1e-15).unwrap());
        assert!(!m.is_doubly_stochastic(1e-9));
    }
}
