//! Thermo-majorisation: β-ordering, thermo-majorisation curves and the
//! ordering they induce, the embedding that reduces it to plain majorisation,
//! constructive synthesis of Gibbs-stochastic maps, an independent linear
//! programming decider, and the explicit bath model behind Gibbs-stochastic
//! matrices.

mod bath;
mod construct;
mod embedding;
mod lp;

pub use bath::{bath_model_simulate, bath_model_simulate_with, BathModel};
pub use construct::construct_gibbs_stochastic;
pub use embedding::{embed, rationalize, unembed, EmbeddingSpec};
pub use lp::{feasibility_lp_oracle, phase_one_infeasibility};

use crate::curve::PLCurve;
use crate::error::{check_dim, Result};
use crate::prob::ProbVec;
use crate::spectrum::GibbsContext;
use crate::tol;

/// Permutation sorting `x_i / g_i` in non-increasing order (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaOrder {
    pub perm: Vec<usize>,
}

/// β-ordering of `x`; ties keep ascending index order.
pub fn beta_order(x: &ProbVec, ctx: &GibbsContext) -> Result<BetaOrder> {
    ctx.check_dim(x.len())?;
    Ok(BetaOrder {
        perm: beta_order_raw(x.as_slice(), ctx.gibbs().as_slice()),
    })
}

pub(crate) fn beta_order_raw(x: &[f64], g: &[f64]) -> Vec<usize> {
    let ratios: Vec<f64> = x.iter().zip(g).map(|(p, q)| p / q).collect();
    let mut perm: Vec<usize> = (0..x.len()).collect();
    perm.sort_by(|&a, &b| ratios[b].total_cmp(&ratios[a]));
    perm
}

/// Curve through the origin and `(Σ_{i≤k} e^{-β E_{π(i)}}, Σ_{i≤k} x_{π(i)})`,
/// `π` the β-ordering; it ends at `(Z, 1)`.
pub fn thermo_curve(x: &ProbVec, ctx: &GibbsContext) -> Result<PLCurve> {
    ctx.check_dim(x.len())?;
    let mut weights = ctx.boltzmann_weights();
    if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        // absolute scale overflowed; the shape of the curve is unaffected
        weights = ctx.gibbs().as_slice().to_vec();
    }
    let perm = beta_order_raw(x.as_slice(), ctx.gibbs().as_slice());
    Ok(curve_from_weights(x.as_slice(), &weights, &perm))
}

pub(crate) fn curve_from_weights(x: &[f64], weights: &[f64], perm: &[usize]) -> PLCurve {
    let mut points = Vec::with_capacity(perm.len() + 1);
    points.push((0.0, 0.0));
    let (mut sx, mut sy) = (0.0, 0.0);
    for &i in perm {
        sx += weights[i];
        sy += x[i];
        points.push((sx, sy));
    }
    PLCurve::new(points).expect("thermo-majorisation breakpoints are increasing")
}

/// `x ≻_g y` with the default slack.
pub fn thermo_majorizes(x: &ProbVec, y: &ProbVec, ctx: &GibbsContext) -> Result<bool> {
    thermo_majorizes_with(x, y, ctx, tol::ORDER_EPS)
}

/// The thermo-majorisation curve of `x` lies nowhere below that of `y` (minus `eps`).
pub fn thermo_majorizes_with(
    x: &ProbVec,
    y: &ProbVec,
    ctx: &GibbsContext,
    eps: f64,
) -> Result<bool> {
    check_dim(x.len(), y.len())?;
    Ok(thermo_curve(x, ctx)?.dominates(&thermo_curve(y, ctx)?, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::{lorenz_curve, majorizes};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    fn example_ctx() -> GibbsContext {
        GibbsContext::from_energies(vec![0.0, 1.0, 2.0], 1.2).unwrap()
    }

    #[test]
    fn example_beta_orders() {
        let ctx = example_ctx();
        let x = ProbVec::uniform(3).unwrap();
        let y = pv(&[2.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert_eq!(beta_order(&x, &ctx).unwrap().perm, vec![2, 1, 0]);
        assert_eq!(beta_order(&y, &ctx).unwrap().perm, vec![1, 0, 2]);
        let hot = ctx.with_beta(0.0).unwrap();
        let z = pv(&[0.2, 0.5, 0.3]);
        assert_eq!(beta_order(&z, &hot).unwrap().perm, vec![1, 2, 0]);
    }

    #[test]
    fn example_curves_cross() {
        let ctx = example_ctx();
        let x = ProbVec::uniform(3).unwrap();
        let y = pv(&[2.0 / 3.0, 1.0 / 3.0, 0.0]);
        let (a, b) = ((-2.4f64).exp(), (-1.2f64).exp());
        let tx = thermo_curve(&x, &ctx).unwrap();
        let want_x = [(0.0, 0.0), (a, 1.0 / 3.0), (a + b, 2.0 / 3.0), (a + b + 1.0, 1.0)];
        for (got, want) in tx.points().iter().zip(want_x) {
            assert_abs_diff_eq!(got.0, want.0, epsilon = 1e-12);
            assert_abs_diff_eq!(got.1, want.1, epsilon = 1e-12);
        }
        let ty = thermo_curve(&y, &ctx).unwrap();
        let want_y = [(0.0, 0.0), (b, 1.0 / 3.0), (b + 1.0, 1.0), (a + b + 1.0, 1.0)];
        for (got, want) in ty.points().iter().zip(want_y) {
            assert_abs_diff_eq!(got.0, want.0, epsilon = 1e-12);
            assert_abs_diff_eq!(got.1, want.1, epsilon = 1e-12);
        }
        assert!(!thermo_majorizes(&x, &y, &ctx).unwrap());
        assert!(!thermo_majorizes(&y, &x, &ctx).unwrap());
    }

    #[test]
    fn thermal_state_is_a_straight_line() {
        let ctx = example_ctx();
        let t = thermo_curve(ctx.gibbs(), &ctx).unwrap();
        let slope = 1.0 / ctx.partition();
        assert!(t.slopes().iter().all(|s| (s - slope).abs() < 1e-12));
        assert_abs_diff_eq!(t.x_max(), ctx.partition(), epsilon = 1e-12);
    }

    #[test]
    fn bottom_and_top_elements() {
        let ctx = example_ctx();
        let top = ProbVec::sharp(3, 2).unwrap();
        for x in [pv(&[0.1, 0.2, 0.7]), pv(&[1.0, 0.0, 0.0]), ProbVec::uniform(3).unwrap()] {
            assert!(thermo_majorizes(&x, ctx.gibbs(), &ctx).unwrap());
            assert!(thermo_majorizes(&top, &x, &ctx).unwrap());
        }
    }

    #[test]
    fn ties_do_not_change_the_curve() {
        let ctx = GibbsContext::from_energies(vec![0.0, 0.0, 1.0], 0.7).unwrap();
        let x = pv(&[0.3, 0.3, 0.4]);
        let w = ctx.boltzmann_weights();
        let a = curve_from_weights(x.as_slice(), &w, &beta_order_raw(x.as_slice(), ctx.gibbs().as_slice()));
        let swapped: Vec<usize> = {
            let mut p = beta_order_raw(x.as_slice(), ctx.gibbs().as_slice());
            let i = p.iter().position(|&k| k == 0).unwrap();
            let j = p.iter().position(|&k| k == 1).unwrap();
            p.swap(i, j);
            p
        };
        let b = curve_from_weights(x.as_slice(), &w, &swapped);
        assert!(a.max_vertical_distance(&b) < 1e-15);
    }

    fn dist(n: usize) -> impl Strategy<Value = ProbVec> {
        prop::collection::vec(0.001f64..1.0, n).prop_map(|v| {
            let s: f64 = v.iter().sum();
            ProbVec::new(v.iter().map(|x| x / s).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn infinite_temperature_reduces_to_majorisation(x in dist(4), y in dist(4)) {
            let ctx = GibbsContext::from_energies(vec![0.0, 0.3, 1.0, 2.0], 0.0).unwrap();
            prop_assert_eq!(thermo_majorizes(&x, &y, &ctx).unwrap(), majorizes(&x, &y).unwrap());
            let scaled = lorenz_curve(&x).scale_x(1.0 / 4.0);
            let t = thermo_curve(&x, &ctx).unwrap().scale_x(1.0 / 4.0);
            prop_assert!(scaled.max_vertical_distance(&t) < 1e-12);
        }

        #[test]
        fn curves_are_concave(x in dist(5), beta in 0.0f64..4.0) {
            let ctx = GibbsContext::from_energies(vec![0.0, 0.5, 0.9, 1.7, 2.0], beta).unwrap();
            prop_assert!(thermo_curve(&x, &ctx).unwrap().is_concave(1e-9));
        }

        #[test]
        fn reflexive_and_transitive(x in dist(3), y in dist(3), z in dist(3), beta in 0.0f64..3.0) {
            let ctx = GibbsContext::from_energies(vec![0.0, 1.0, 1.5], beta).unwrap();
            prop_assert!(thermo_majorizes(&x, &x, &ctx).unwrap());
            if thermo_majorizes(&x, &y, &ctx).unwrap() && thermo_majorizes(&y, &z, &ctx).unwrap() {
                prop_assert!(thermo_majorizes_with(&x, &z, &ctx, 2e-9).unwrap());
            }
        }
    }
}
