//! Classical majorisation: Lorenz curves, ordering checks and the constructive
//! Hardy–Littlewood–Pólya synthesis of a doubly-stochastic map from T-transforms.
//!
//! This is the infinite-temperature special case of thermo-majorisation; the
//! [`thermo`](crate::thermo) module reduces the general case to this one through
//! the embedding map.

use nalgebra::DMatrix;

use crate::curve::PLCurve;
use crate::divergences::shannon_entropy;
use crate::error::{check_dim, Error, Result};
use crate::prob::{ProbVec, StochasticMatrix};
use crate::tol;

/// Doubly-stochastic matrix acting as the identity except on coordinates `i`
/// and `j`, which are mixed as `(t z_i + (1-t) z_j, (1-t) z_i + t z_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTransform {
    pub i: usize,
    pub j: usize,
    pub t: f64,
}

impl TTransform {
    pub fn new(i: usize, j: usize, t: f64) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidInput("T-transform needs two distinct indices".into()));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(format!("T-transform weight {t} outside [0, 1]")));
        }
        Ok(Self { i, j, t })
    }

    pub fn apply_in_place(&self, z: &mut [f64]) {
        let (a, b) = (z[self.i], z[self.j]);
        z[self.i] = self.t * a + (1.0 - self.t) * b;
        z[self.j] = (1.0 - self.t) * a + self.t * b;
    }

    fn apply_to_rows(&self, m: &mut DMatrix<f64>) {
        for col in 0..m.ncols() {
            let (a, b) = (m[(self.i, col)], m[(self.j, col)]);
            m[(self.i, col)] = self.t * a + (1.0 - self.t) * b;
            m[(self.j, col)] = (1.0 - self.t) * a + self.t * b;
        }
    }
}

/// Output of [`hlp_construct`]: T-transforms applied in order, followed by a
/// relabelling of coordinates.
///
/// The composed matrix is `P · T_m ⋯ T_1` with `P` sending coordinate `k` to
/// `output_perm[k]`. At most `n - 1` transforms are used; `P` carries the
/// permutation bookkeeping between the sorted construction and the original
/// coordinates of `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct HlpPlan {
    pub transforms: Vec<TTransform>,
    pub output_perm: Vec<usize>,
}

impl HlpPlan {
    pub fn dim(&self) -> usize {
        self.output_perm.len()
    }

    pub fn apply_raw(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let mut z = x.to_vec();
        for t in &self.transforms {
            t.apply_in_place(&mut z);
        }
        let mut out = vec![0.0; z.len()];
        for (slot, &target) in self.output_perm.iter().enumerate() {
            out[target] = z[slot];
        }
        Ok(out)
    }

    pub fn apply(&self, x: &ProbVec) -> Result<ProbVec> {
        ProbVec::new(self.apply_raw(x.as_slice())?)
    }

    /// The composed doubly-stochastic matrix.
    pub fn matrix(&self) -> StochasticMatrix {
        let n = self.dim();
        let mut m = DMatrix::<f64>::identity(n, n);
        for t in &self.transforms {
            t.apply_to_rows(&mut m);
        }
        let permuted = DMatrix::from_fn(n, n, |row, col| {
            let slot = self.output_perm.iter().position(|&p| p == row).unwrap();
            m[(slot, col)]
        });
        StochasticMatrix::new(permuted).expect("products of T-transforms are stochastic")
    }
}

/// Lorenz curve: breakpoints `(k, Σ_{i≤k} x↓_i)` for `k = 0..n`.
pub fn lorenz_curve(x: &ProbVec) -> PLCurve {
    let mut acc = 0.0;
    let mut points = vec![(0.0, 0.0)];
    for (k, v) in x.sorted_desc().into_iter().enumerate() {
        acc += v;
        points.push(((k + 1) as f64, acc));
    }
    PLCurve::new(points).expect("Lorenz breakpoints are well formed")
}

/// `x ≻ y` with the default slack.
pub fn majorizes(x: &ProbVec, y: &ProbVec) -> Result<bool> {
    majorizes_with(x, y, tol::ORDER_EPS)
}

/// `x ≻ y`: partial sums of `x↓` dominate those of `y↓` up to `eps`, with
/// equal totals.
pub fn majorizes_with(x: &ProbVec, y: &ProbVec, eps: f64) -> Result<bool> {
    check_dim(x.len(), y.len())?;
    Ok(majorizes_raw(x.as_slice(), y.as_slice(), eps))
}

pub(crate) fn majorizes_raw(x: &[f64], y: &[f64], eps: f64) -> bool {
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (xs, ys) = (sorted(x), sorted(y));
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        if sx < sy - eps {
            return false;
        }
    }
    (sx - sy).abs() <= eps
}

/// Builds T-transforms taking `x` to `y` following the inductive proof of the
/// Hardy–Littlewood–Pólya theorem.
///
/// At each step the largest remaining entry `z_1` is mixed with `z_k`, the
/// largest entry not exceeding the next target value `y_1`, so that `z_1`
/// becomes `y_1`; the leftover mass stays at slot `k` and the step recurses on
/// the remaining slots.
pub fn hlp_construct(x: &ProbVec, y: &ProbVec) -> Result<HlpPlan> {
    hlp_construct_with(x, y, tol::ORDER_EPS)
}

pub fn hlp_construct_with(x: &ProbVec, y: &ProbVec, eps: f64) -> Result<HlpPlan> {
    if !majorizes_with(x, y, eps)? {
        return Err(Error::Ordering("x does not majorise y".into()));
    }
    Ok(hlp_unchecked(x.as_slice(), y.as_slice()))
}

/// Values equal within this are considered already matched.
const MATCHED: f64 = 1e-15;

pub(crate) fn hlp_unchecked(x: &[f64], y: &[f64]) -> HlpPlan {
    let n = x.len();
    let mut z = x.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    active.sort_by(|&a, &b| z[b].total_cmp(&z[a]));
    let mut targets: Vec<usize> = (0..n).collect();
    targets.sort_by(|&a, &b| y[b].total_cmp(&y[a]));

    let mut transforms = Vec::new();
    let mut output_perm = vec![0; n];
    for &target in &targets {
        let v = y[target];
        let lead = active[0];
        if active.len() > 1 && z[lead] - v > MATCHED {
            // smallest k >= 1 with z_k <= v; the last slot always qualifies in exact arithmetic
            let p = (active[1..].partition_point(|&s| z[s] > v) + 1).min(active.len() - 1);
            let slot = active[p];
            let span = z[lead] - z[slot];
            let t = if span > 0.0 {
                ((v - z[slot]) / span).clamp(0.0, 1.0)
            } else {
                1.0
            };
            let tt = TTransform { i: lead, j: slot, t };
            tt.apply_in_place(&mut z);
            transforms.push(tt);
            active.remove(p);
            active.remove(0);
            let r = z[slot];
            let at = active.partition_point(|&s| z[s] >= r);
            active.insert(at, slot);
        } else {
            active.remove(0);
        }
        output_perm[lead] = target;
    }
    HlpPlan {
        transforms,
        output_perm,
    }
}

/// Optimal asymptotic conversion rate `(log n - H(x)) / (log n - H(y))`.
pub fn asymptotic_rate(x: &ProbVec, y: &ProbVec) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    let log_n = (x.len() as f64).ln();
    let denom = log_n - shannon_entropy(y);
    if denom <= 1e-14 {
        return Err(Error::UnboundedRate);
    }
    Ok(((log_n - shannon_entropy(x)) / denom).max(0.0))
}
