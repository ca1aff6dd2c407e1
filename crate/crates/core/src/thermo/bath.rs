use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::prob::{ProbVec, StochasticMatrix};
use crate::spectrum::GibbsContext;
use crate::tol;

/// Integer transport plan realised inside one constant-energy block of
/// system plus bath.
///
/// System level `i` pairs with `d[i]` bath states of matching total energy;
/// an energy-preserving permutation of the block sends `counts[(i, j)]` of the
/// `d[j]` states tagged `j` to states tagged `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BathModel {
    pub degeneracies: Vec<u64>,
    pub counts: DMatrix<u64>,
    pub induced: StochasticMatrix,
    /// `max_{ij} |G^T_{i|j} - G_{i|j}|`.
    pub residual: f64,
}

impl BathModel {
    /// Thermal vector the induced matrix fixes exactly: `d / Σ d`.
    pub fn rounded_gibbs(&self) -> ProbVec {
        let total = self.degeneracies.iter().sum::<u64>() as f64;
        ProbVec::new(self.degeneracies.iter().map(|&k| k as f64 / total).collect())
            .expect("degeneracies are positive")
    }
}

/// Realises a Gibbs-stochastic target by a permutation of a single block of
/// degenerate states with `d_i = round(g_e · e^{-β(E_i - E_max)})`, so the
/// most excited level carries `g_e` states and the others proportionally
/// more.
///
/// The integer counts start from largest-remainder rounding of
/// `G_{i|j} d_j` within each column; rows are then repaired one unit at a
/// time, moving from the most over-full row to the most under-full one.
pub fn bath_model_simulate(
    target: &StochasticMatrix,
    ctx: &GibbsContext,
    g_e: u64,
) -> Result<BathModel> {
    bath_model_simulate_with(target, ctx, g_e, tol::VALIDATION)
}

/// [`bath_model_simulate`] accepting targets that fix `g` only up to `tol`,
/// e.g. matrices built from a rational approximation of `g`.
pub fn bath_model_simulate_with(
    target: &StochasticMatrix,
    ctx: &GibbsContext,
    g_e: u64,
    tol: f64,
) -> Result<BathModel> {
    let n = ctx.dim();
    crate::error::check_dim(n, target.dim())?;
    if g_e == 0 {
        return Err(Error::Resolution("g_e must be at least 1".into()));
    }
    let residual = target.fixed_point_residual(ctx.gibbs().as_slice())?;
    if residual > tol {
        return Err(Error::InvalidInput(format!(
            "target is not Gibbs-stochastic (residual {residual:e})"
        )));
    }
    let top = ctx.spectrum().max();
    let mut d = Vec::with_capacity(n);
    for &e in ctx.energies() {
        let v = (g_e as f64 * (ctx.beta() * (top - e)).exp()).round();
        if !(1.0..=2f64.powi(52)).contains(&v) {
            return Err(Error::Resolution(format!(
                "block size {v:e} for level E = {e} is not representable; lower g_e or beta"
            )));
        }
        d.push(v as u64);
    }

    let ideal = DMatrix::from_fn(n, n, |i, j| target.get(i, j) * d[j] as f64);
    let mut counts = DMatrix::<u64>::zeros(n, n);
    for j in 0..n {
        let floors: Vec<u64> = (0..n).map(|i| ideal[(i, j)].floor() as u64).collect();
        let mut missing = d[j] - floors.iter().sum::<u64>().min(d[j]);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let ra = ideal[(a, j)] - floors[a] as f64;
            let rb = ideal[(b, j)] - floors[b] as f64;
            rb.total_cmp(&ra)
        });
        for i in 0..n {
            counts[(i, j)] = floors[i];
        }
        for &i in order.iter().cycle() {
            if missing == 0 {
                break;
            }
            counts[(i, j)] += 1;
            missing -= 1;
        }
    }

    let row_excess = |counts: &DMatrix<u64>, i: usize| -> i64 {
        counts.row(i).iter().sum::<u64>() as i64 - d[i] as i64
    };
    loop {
        let excess: Vec<i64> = (0..n).map(|i| row_excess(&counts, i)).collect();
        let (over, &hi) = excess.iter().enumerate().max_by_key(|(_, e)| **e).unwrap();
        if hi == 0 {
            break;
        }
        let (under, _) = excess.iter().enumerate().min_by_key(|(_, e)| **e).unwrap();
        // move one state in the column where the over-full row is furthest above its ideal
        let j = (0..n)
            .filter(|&j| counts[(over, j)] > 0)
            .max_by(|&a, &b| {
                let ga = (counts[(over, a)] as f64 - ideal[(over, a)]) / d[a] as f64
                    - (counts[(under, a)] as f64 - ideal[(under, a)]) / d[a] as f64;
                let gb = (counts[(over, b)] as f64 - ideal[(over, b)]) / d[b] as f64
                    - (counts[(under, b)] as f64 - ideal[(under, b)]) / d[b] as f64;
                ga.total_cmp(&gb)
            })
            .ok_or_else(|| {
                Error::Resolution("integer transport repair stalled; increase g_e".into())
            })?;
        counts[(over, j)] -= 1;
        counts[(under, j)] += 1;
    }

    let induced = StochasticMatrix::new(DMatrix::from_fn(n, n, |i, j| {
        counts[(i, j)] as f64 / d[j] as f64
    }))?;
    let residual = induced.max_abs_diff(target);
    Ok(BathModel {
        degeneracies: d,
        counts,
        induced,
        residual,
    })
}
