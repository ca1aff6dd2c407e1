//! Complete solution of qubit Thermal Operations. Populations are those of
//! the ground state, `p = ρ_00`, and coherences are taken real and
//! non-negative (an energy-preserving phase rotation adjusts them).

use super::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ONE};
use crate::prob::StochasticMatrix;
use crate::spectrum::GibbsContext;

/// Slack on the `[0, 1]` range of `λ` and on the input validation.
const RANGE_EPS: f64 = 1e-12;

fn check_qubit(ctx: &GibbsContext) -> Result<(f64, f64)> {
    if ctx.dim() != 2 {
        return Err(Error::InvalidInput(format!("expected a qubit, got dimension {}", ctx.dim())));
    }
    let g = ctx.gibbs()[0];
    Ok((g, ctx.gibbs()[1] / g))
}

fn check_population(name: &str, v: f64) -> Result<()> {
    if !(-RANGE_EPS..=1.0 + RANGE_EPS).contains(&v) {
        return Err(Error::InvalidInput(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

/// The one-parameter family of qubit Gibbs-stochastic matrices,
/// `G = [[1 - λ e^{-βE}, λ], [λ e^{-βE}, 1 - λ]]`.
pub fn qubit_gibbs_matrix(lambda: f64, ctx: &GibbsContext) -> Result<StochasticMatrix> {
    let (_, boltz) = check_qubit(ctx)?;
    if !(-RANGE_EPS..=1.0 + RANGE_EPS).contains(&lambda) {
        return Err(Error::InvalidInput(format!("lambda = {lambda} outside [0, 1]")));
    }
    let l = lambda.clamp(0.0, 1.0);
    StochasticMatrix::from_rows(&[vec![1.0 - l * boltz, l], vec![l * boltz, 1.0 - l]])
}

/// `λ = (q - p) g / (g - p)`, the unique parameter sending `p` to `q`.
pub fn qubit_lambda(p: f64, q: f64, ctx: &GibbsContext) -> Result<f64> {
    let (g, _) = check_qubit(ctx)?;
    check_population("p", p)?;
    check_population("q", q)?;
    if (p - g).abs() <= RANGE_EPS {
        // the thermal state is a fixed point of every member of the family
        return if (q - g).abs() <= RANGE_EPS {
            Ok(0.0)
        } else {
            Err(Error::Unreachable(format!(
                "p equals the thermal population {g}; only q = g is reachable, got q = {q}"
            )))
        };
    }
    let lambda = (q - p) * g / (g - p);
    if !(-RANGE_EPS..=1.0 + RANGE_EPS).contains(&lambda) {
        return Err(Error::Unreachable(format!(
            "q = {q} needs lambda = {lambda}, outside [0, 1]"
        )));
    }
    Ok(lambda.clamp(0.0, 1.0))
}

/// `(λ, d_max)` with `d_max = √(G_{0|0} G_{1|1}) c`, the largest coherence
/// reachable alongside the population change `p → q`.
pub fn qubit_coherence_bound(p: f64, q: f64, ctx: &GibbsContext, c: f64) -> Result<(f64, f64)> {
    let lambda = qubit_lambda(p, q, ctx)?;
    if c < -RANGE_EPS || c > (p * (1.0 - p)).max(0.0).sqrt() + RANGE_EPS {
        return Err(Error::InvalidInput(format!(
            "coherence {c} is not compatible with population {p}"
        )));
    }
    let g = qubit_gibbs_matrix(lambda, ctx)?;
    Ok((lambda, (g.get(0, 0) * g.get(1, 1)).sqrt() * c.max(0.0)))
}

/// The covariant, Gibbs-preserving channel with Kraus operators
/// `K_0 = √G_{0|0}|0⟩⟨0| + √G_{1|1}|1⟩⟨1|`, `K_1 = √G_{1|0}|1⟩⟨0|`,
/// `K_{-1} = √G_{0|1}|0⟩⟨1|`; it attains [`qubit_coherence_bound`].
pub fn qubit_optimal_channel(p: f64, q: f64, ctx: &GibbsContext) -> Result<QuantumChannel> {
    let lambda = qubit_lambda(p, q, ctx)?;
    qubit_channel_for_lambda(lambda, ctx)
}

pub fn qubit_channel_for_lambda(lambda: f64, ctx: &GibbsContext) -> Result<QuantumChannel> {
    let g = qubit_gibbs_matrix(lambda, ctx)?;
    let mut k0 = CMat::zeros(2, 2);
    k0[(0, 0)] = ONE.scale(g.get(0, 0).sqrt());
    k0[(1, 1)] = ONE.scale(g.get(1, 1).sqrt());
    let k_up = linalg::ketbra(2, 1, 0).scale(g.get(1, 0).sqrt());
    let k_down = linalg::ketbra(2, 0, 1).scale(g.get(0, 1).sqrt());
    QuantumChannel::new(vec![k0, k_up, k_down])
}

/// Boundary of the reachable set from `(p, c)`: `samples` points `(q, d_max)`
/// with `λ` evenly spaced on `[0, 1]`, so `q` runs from `p` to
/// `p + (g - p)/g`. Interior points follow by partial dephasing.
pub fn qubit_reachable_boundary(
    p: f64,
    c: f64,
    ctx: &GibbsContext,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    let (g, _) = check_qubit(ctx)?;
    check_population("p", p)?;
    if samples < 2 {
        return Err(Error::InvalidInput("need at least two boundary samples".into()));
    }
    if c < -RANGE_EPS || c > (p * (1.0 - p)).max(0.0).sqrt() + RANGE_EPS {
        return Err(Error::InvalidInput(format!(
            "coherence {c} is not compatible with population {p}"
        )));
    }
    (0..samples)
        .map(|k| {
            let lambda = k as f64 / (samples - 1) as f64;
            let m = qubit_gibbs_matrix(lambda, ctx)?;
            let q = m.get(0, 0) * p + m.get(0, 1) * (1.0 - p);
            debug_assert!((q - (p + lambda * (g - p) / g)).abs() < 1e-12);
            Ok((q, (m.get(0, 0) * m.get(1, 1)).sqrt() * c.max(0.0)))
        })
        .collect()
}
