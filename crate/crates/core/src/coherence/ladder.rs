//! Coherence transport on an equispaced three-level system coupled to a
//! single bosonic mode with the same gap.
//!
//! The energy-preserving unitary permutes, inside each total-energy block
//! `{|0;k⟩, |1;k-1⟩, |2;k-2⟩}`, the system level downwards (`2 → 1 → 0 → 2`);
//! the block with one quantum swaps `|0;1⟩` and `|1;0⟩`. With the bath cut at
//! a finite number of levels the top two blocks are incomplete: there the
//! permutation is restricted to the states that exist, which keeps it
//! unitary and energy preserving.

use super::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `U`: coherence between levels 1 and 2 moves to levels 0 and 1.
    Down,
    /// `U†`: coherence between levels 0 and 1 moves to levels 1 and 2.
    Up,
}

/// Number of bath levels kept for a requested truncation order: the two
/// incomplete top blocks consume two levels beyond `n_trunc`.
pub fn bath_levels(n_trunc: usize) -> usize {
    n_trunc + 2
}

/// `e^{-β n ΔE} / (1 - e^{-β ΔE})`: accuracy guaranteed by truncation order `n`.
pub fn ladder_tail_bound(beta: f64, de: f64, n_trunc: usize) -> f64 {
    let b = beta * de;
    (-b * n_trunc as f64).exp() / (1.0 - (-b).exp())
}

/// Image of the system-bath basis state `(s, n)` under the transport
/// permutation, for a bath with `levels` levels.
fn permute(s: usize, n: usize, levels: usize) -> (usize, usize) {
    let k = s + n;
    let exists = |s: usize| s <= k && k - s < levels;
    match k {
        0 => (0, 0),
        1 => (1 - s, k - (1 - s)),
        _ => {
            // next existing level in the cycle 2 → 1 → 0 → 2
            let mut t = s;
            loop {
                t = (t + 2) % 3;
                if exists(t) {
                    return (t, k - t);
                }
            }
        }
    }
}

/// The reduced channel `ρ ↦ tr_B[U (ρ ⊗ γ_B) U†]` (or with `U†` for
/// [`Direction::Up`]) as Kraus operators `√γ_n ⟨m|U|n⟩`.
pub fn ladder_channel(de: f64, beta: f64, n_trunc: usize, direction: Direction) -> Result<QuantumChannel> {
    if n_trunc < 3 {
        return Err(Error::Resolution(format!(
            "bath truncation {n_trunc} is too small; need at least 3"
        )));
    }
    if !(de > 0.0 && de.is_finite()) || !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("need gap > 0 and beta >= 0, got {de}, {beta}")));
    }
    let levels = bath_levels(n_trunc);
    let weights: Vec<f64> = (0..levels).map(|n| (-beta * de * n as f64).exp()).collect();
    let z: f64 = weights.iter().sum();
    // U as a map on basis labels; U† is its inverse
    let mut image = vec![(0, 0); 3 * levels];
    for s in 0..3 {
        for n in 0..levels {
            let (t, m) = permute(s, n, levels);
            match direction {
                Direction::Down => image[s * levels + n] = (t, m),
                Direction::Up => image[t * levels + m] = (s, n),
            }
        }
    }
    let mut kraus = Vec::new();
    for n in 0..levels {
        let amp = (weights[n] / z).sqrt();
        for m in 0..levels {
            let mut k = CMat::zeros(3, 3);
            let mut any = false;
            for s in 0..3 {
                let (t, out) = image[s * levels + n];
                if out == m {
                    k[(t, s)] = C64::new(amp, 0.0);
                    any = true;
                }
            }
            if any {
                kraus.push(k);
            }
        }
    }
    QuantumChannel::new(kraus)
}

/// Applies the ladder channel to `ρ`.
pub fn ladder_simulate(
    rho: &crate::density::DensityMatrix,
    de: f64,
    beta: f64,
    n_trunc: usize,
    direction: Direction,
) -> Result<crate::density::DensityMatrix> {
    ladder_channel(de, beta, n_trunc, direction)?.apply(rho)
}

/// Output coherence per unit input coherence: `|σ_10| / |ρ_21|` going down,
/// `|σ_21| / |ρ_10|` going up.
pub fn ladder_transport_factor(de: f64, beta: f64, n_trunc: usize, direction: Direction) -> Result<f64> {
    let ch = ladder_channel(de, beta, n_trunc, direction)?;
    let (from, to) = match direction {
        Direction::Down => ((2, 1), (1, 0)),
        Direction::Up => ((1, 0), (2, 1)),
    };
    let mut m = CMat::zeros(3, 3);
    m[from] = C64::new(1.0, 0.0);
    Ok(ch.apply_operator(&m)[to].norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::channel::{channel_covariance_check, gibbs_preserving_check};
    use crate::spectrum::GibbsContext;
    use approx::assert_abs_diff_eq;

    #[test]
    fn permutation_is_a_bijection_preserving_energy() {
        for levels in [5, 8] {
            let mut seen = vec![false; 3 * levels];
            for s in 0..3 {
                for n in 0..levels {
                    let (t, m) = permute(s, n, levels);
                    assert_eq!(t + m, s + n);
                    assert!(m < levels);
                    assert!(!seen[t * levels + m]);
                    seen[t * levels + m] = true;
                }
            }
        }
    }

    #[test]
    fn full_blocks_follow_the_cycle() {
        assert_eq!(permute(2, 0, 10), (1, 1));
        assert_eq!(permute(1, 1, 10), (0, 2));
        assert_eq!(permute(0, 2, 10), (2, 0));
        assert_eq!(permute(0, 1, 10), (1, 0));
        assert_eq!(permute(1, 0, 10), (0, 1));
    }

    #[test]
    fn transport_factors() {
        let down = ladder_transport_factor(1.0, 1.0, 40, Direction::Down).unwrap();
        let up = ladder_transport_factor(1.0, 1.0, 40, Direction::Up).unwrap();
        assert_abs_diff_eq!(down, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(up, (-1.0f64).exp(), epsilon = 1e-12);
        let tail = ladder_tail_bound(0.3, 1.0, 12);
        assert!((ladder_transport_factor(1.0, 0.3, 12, Direction::Down).unwrap() - 1.0).abs() <= tail);
        assert!((ladder_transport_factor(1.0, 0.3, 12, Direction::Up).unwrap() - (-0.3f64).exp()).abs() <= tail);
        assert!(ladder_channel(1.0, 1.0, 2, Direction::Down).is_err());
    }

    #[test]
    fn channels_are_thermal() {
        let ctx = GibbsContext::from_energies(vec![0.0, 1.0, 2.0], 0.8).unwrap();
        for dir in [Direction::Down, Direction::Up] {
            let ch = ladder_channel(1.0, 0.8, 30, dir).unwrap();
            assert!(channel_covariance_check(&ch, ctx.spectrum(), 1e-12).unwrap());
            // the truncated joint Gibbs state still depends on total energy only
            assert!(gibbs_preserving_check(&ch, &ctx, 1e-12).unwrap());
        }
    }
}
