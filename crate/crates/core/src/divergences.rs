//! Rényi entropies and divergences, the α-free energies built from them, the
//! Burg free energy, and a grid-based checker for the family of second laws
//! `F_α(x) ≥ F_α(y)`.
//!
//! Orders are plain `f64`, with `f64::INFINITY` and `f64::NEG_INFINITY`
//! selecting the limiting branches. Unbounded values are reported as signed
//! infinities. Conventions: `0 log 0 = 0`, and `0^α` for `α < 0` is `+∞`.

use crate::error::{check_dim, Error, Result};
use crate::prob::ProbVec;
use crate::spectrum::GibbsContext;
use crate::tol;

/// `log Σ_i exp(terms_i)` without overflow.
fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.collect();
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

fn in_support(p: f64) -> bool {
    p > tol::SUPPORT
}

/// Shannon entropy in nats.
pub fn shannon_entropy(x: &ProbVec) -> f64 {
    x.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

/// Rényi entropy `H_α(x) = sgn(α)/(1-α) log Σ_i x_i^α`.
///
/// With the `sgn(α)` factor every `H_α` is Schur-concave; for `α < 0` the
/// values are non-positive and any zero entry gives `-∞`.
pub fn renyi_entropy(x: &ProbVec, alpha: f64) -> f64 {
    if alpha.is_nan() {
        return f64::NAN;
    }
    if alpha == 1.0 {
        return shannon_entropy(x);
    }
    if alpha == 0.0 {
        return (x.iter().filter(|&&p| in_support(p)).count() as f64).ln();
    }
    if alpha == f64::INFINITY {
        return -x.iter().copied().fold(0.0, f64::max).ln();
    }
    if alpha == f64::NEG_INFINITY {
        if x.iter().any(|&p| !in_support(p)) {
            return f64::NEG_INFINITY;
        }
        return x.iter().copied().fold(f64::INFINITY, f64::min).ln();
    }
    if alpha < 0.0 {
        if x.iter().any(|&p| !in_support(p)) {
            return f64::NEG_INFINITY;
        }
        return -log_sum_exp(x.iter().map(|p| alpha * p.ln())) / (1.0 - alpha);
    }
    log_sum_exp(x.iter().filter(|&&p| p > 0.0).map(|p| alpha * p.ln())) / (1.0 - alpha)
}

/// Rényi divergence `S_α(x‖y) = sgn(α)/(α-1) log Σ_i x_i^α y_i^{1-α}` with its
/// limits at `α ∈ {-∞, 0, 1, +∞}`. `y` must be strictly positive.
pub fn renyi_divergence(x: &ProbVec, y: &ProbVec, alpha: f64) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    if y.iter().any(|&q| q <= 0.0) {
        return Err(Error::InvalidInput(
            "reference distribution must be strictly positive".into(),
        ));
    }
    if alpha.is_nan() {
        return Err(Error::InvalidInput("Rényi order is NaN".into()));
    }
    let pairs = || x.iter().copied().zip(y.iter().copied());
    let value = if alpha == 1.0 {
        pairs()
            .filter(|&(p, _)| p > 0.0)
            .map(|(p, q)| p * (p / q).ln())
            .sum::<f64>()
            .max(0.0)
    } else if alpha == 0.0 {
        let mass: f64 = pairs().filter(|&(p, _)| in_support(p)).map(|(_, q)| q).sum();
        (-mass.ln()).max(0.0)
    } else if alpha == f64::INFINITY {
        pairs()
            .map(|(p, q)| p / q)
            .fold(0.0, f64::max)
            .ln()
            .max(0.0)
    } else if alpha == f64::NEG_INFINITY {
        if x.iter().any(|&p| !in_support(p)) {
            f64::INFINITY
        } else {
            pairs().map(|(p, q)| q / p).fold(0.0, f64::max).ln().max(0.0)
        }
    } else if alpha < 0.0 {
        if x.iter().any(|&p| !in_support(p)) {
            f64::INFINITY
        } else {
            let lse = log_sum_exp(pairs().map(|(p, q)| alpha * p.ln() + (1.0 - alpha) * q.ln()));
            (lse / (1.0 - alpha)).max(0.0)
        }
    } else {
        let lse = log_sum_exp(
            pairs()
                .filter(|&(p, _)| p > 0.0)
                .map(|(p, q)| alpha * p.ln() + (1.0 - alpha) * q.ln()),
        );
        (lse / (alpha - 1.0)).max(0.0)
    };
    Ok(value)
}

/// `F_α(x) = -kT log Z + kT S_α(x‖g)`. Requires `β > 0`.
pub fn free_energy_alpha(x: &ProbVec, ctx: &GibbsContext, alpha: f64) -> Result<f64> {
    ctx.check_dim(x.len())?;
    let kt = ctx.kt()?;
    Ok(-kt * ctx.log_partition() + kt * renyi_divergence(x, ctx.gibbs(), alpha)?)
}

/// Equilibrium free energy `-kT log Z`.
pub fn equilibrium_free_energy(ctx: &GibbsContext) -> Result<f64> {
    Ok(-ctx.kt()? * ctx.log_partition())
}

/// `F_Burg(x) = kT S_1(g‖x) - kT log Z`; `+∞` when `x` lacks full support.
pub fn burg_free_energy(x: &ProbVec, ctx: &GibbsContext) -> Result<f64> {
    ctx.check_dim(x.len())?;
    let kt = ctx.kt()?;
    if x.iter().any(|&p| !in_support(p)) {
        return Ok(f64::INFINITY);
    }
    Ok(kt * renyi_divergence(ctx.gibbs(), x, 1.0)? - kt * ctx.log_partition())
}

/// Default order grid: `-∞`, nine log-spaced orders in `[-5, -0.1]`, nine in
/// `[0.1, 5]`, `1` and `+∞`, ascending.
pub fn default_alpha_grid() -> Vec<f64> {
    let spaced: Vec<f64> = (0..9)
        .map(|k| 0.1 * 50f64.powf(k as f64 / 8.0))
        .collect();
    let mut grid = vec![f64::NEG_INFINITY];
    grid.extend(spaced.iter().rev().map(|a| -a));
    grid.extend(spaced.iter().copied());
    grid.push(1.0);
    grid.push(f64::INFINITY);
    grid.sort_by(f64::total_cmp);
    grid
}

/// Which monotone a comparison refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    Alpha(f64),
    Burg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub law: Law,
    /// `F(y) - F(x)`, positive when violated.
    pub delta: f64,
}

/// Outcome of checking `F(x) ≥ F(y)` on a finite grid of orders plus Burg.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondLawsVerdict {
    pub passed: bool,
    pub violations: Vec<Violation>,
    pub alpha_grid: Vec<f64>,
    /// Laws holding with `F(x) > F(y) + eps`.
    pub strict: usize,
    /// Laws holding only as `|F(x) - F(y)| <= eps` (including both unbounded).
    pub ties: usize,
}

impl SecondLawsVerdict {
    /// All laws hold strictly, as required by the catalytic sufficiency theorem.
    pub fn strictly_passed(&self) -> bool {
        self.passed && self.ties == 0
    }
}

/// Checks the necessary conditions `F_α(x) ≥ F_α(y)` over `alpha_grid` and
/// for the Burg free energy.
pub fn second_laws_check(
    x: &ProbVec,
    y: &ProbVec,
    ctx: &GibbsContext,
    alpha_grid: &[f64],
) -> Result<SecondLawsVerdict> {
    second_laws_check_with(x, y, ctx, alpha_grid, tol::ORDER_EPS)
}

pub fn second_laws_check_with(
    x: &ProbVec,
    y: &ProbVec,
    ctx: &GibbsContext,
    alpha_grid: &[f64],
    eps: f64,
) -> Result<SecondLawsVerdict> {
    check_dim(x.len(), y.len())?;
    if alpha_grid.is_empty() {
        return Err(Error::InvalidInput("alpha grid is empty".into()));
    }
    let mut comparisons = Vec::with_capacity(alpha_grid.len() + 1);
    for &a in alpha_grid {
        comparisons.push((
            Law::Alpha(a),
            free_energy_alpha(x, ctx, a)?,
            free_energy_alpha(y, ctx, a)?,
        ));
    }
    comparisons.push((Law::Burg, burg_free_energy(x, ctx)?, burg_free_energy(y, ctx)?));

    let (mut violations, mut strict, mut ties) = (Vec::new(), 0, 0);
    for (law, fx, fy) in comparisons {
        if fx == fy {
            ties += 1;
        } else if fx < fy - eps {
            violations.push(Violation { law, delta: fy - fx });
        } else if fx > fy + eps {
            strict += 1;
        } else {
            ties += 1;
        }
    }
    Ok(SecondLawsVerdict {
        passed: violations.is_empty(),
        violations,
        alpha_grid: alpha_grid.to_vec(),
        strict,
        ties,
    })
}
