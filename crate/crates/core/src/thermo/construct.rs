use nalgebra::DMatrix;

use super::embedding::{embed_raw, rationalize, unembed_raw};
use super::thermo_majorizes;
use crate::error::{check_dim, Error, Result};
use crate::majorization::{hlp_unchecked, majorizes_raw};
use crate::prob::{ProbVec, StochasticMatrix};
use crate::spectrum::GibbsContext;
use crate::tol;

/// A Gibbs-stochastic `G` with `G x = y`, obtained by lifting both vectors
/// through the embedding, building the doubly-stochastic map there with
/// T-transforms and compressing it back.
///
/// The compression averages over the block columns of the embedded map,
/// which is the same as feeding it the embedding of each basis vector.
pub fn construct_gibbs_stochastic(
    x: &ProbVec,
    y: &ProbVec,
    ctx: &GibbsContext,
    d_max: u64,
) -> Result<StochasticMatrix> {
    check_dim(x.len(), y.len())?;
    ctx.check_dim(x.len())?;
    if !thermo_majorizes(x, y, ctx)? {
        return Err(Error::Ordering("x does not thermo-majorise y".into()));
    }
    let spec = rationalize(ctx, d_max)?;
    let ex = embed_raw(x.as_slice(), &spec);
    let ey = embed_raw(y.as_slice(), &spec);
    let slack = tol::ORDER_EPS + x.len() as f64 * spec.approx_error();
    if !majorizes_raw(&ex, &ey, slack) {
        return Err(Error::Approximation {
            approx_error: spec.approx_error(),
            reason: format!(
                "embedded vectors are not majorised at D = {}; raise d_max",
                spec.total()
            ),
        });
    }
    let plan = hlp_unchecked(&ex, &ey);
    let n = x.len();
    let mut g = DMatrix::<f64>::zeros(n, n);
    let mut basis = vec![0.0; n];
    for j in 0..n {
        basis[j] = 1.0;
        let column = plan.apply_raw(&embed_raw(&basis, &spec))?;
        for (i, v) in unembed_raw(&column, &spec).into_iter().enumerate() {
            g[(i, j)] = v;
        }
        basis[j] = 0.0;
    }
    // undo accumulated round-off in the column sums before validation
    for mut col in g.column_iter_mut() {
        col.iter_mut().for_each(|v| *v = v.max(0.0));
        let s = col.sum();
        col /= s;
    }
    StochasticMatrix::new(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::embedding::rationalize;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    fn fig2_ctx() -> GibbsContext {
        // g = (1/2, 3/8, 1/8)
        let e = [0.0, (4.0f64 / 3.0).ln(), 4.0f64.ln()];
        GibbsContext::from_energies(e.to_vec(), 1.0).unwrap()
    }

    #[test]
    fn identity_when_nothing_moves() {
        let ctx = fig2_ctx();
        let x = pv(&[0.2, 0.3, 0.5]);
        let g = construct_gibbs_stochastic(&x, &x, &ctx, 8).unwrap();
        assert!(g.max_abs_diff(&StochasticMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn thermalising_target() {
        let ctx = fig2_ctx();
        let x = pv(&[0.05, 0.15, 0.8]);
        let g = construct_gibbs_stochastic(&x, ctx.gibbs(), &ctx, 8).unwrap();
        assert!(g.apply(&x).unwrap().max_abs_diff(ctx.gibbs()) < 1e-9);
        assert!(g.fixed_point_residual(ctx.gibbs().as_slice()).unwrap() < 1e-10);
    }

    #[test]
    fn rejects_unordered_pairs() {
        let ctx = GibbsContext::from_energies(vec![0.0, 1.0, 2.0], 1.2).unwrap();
        let x = ProbVec::uniform(3).unwrap();
        let y = pv(&[2.0 / 3.0, 1.0 / 3.0, 0.0]);
        let err = construct_gibbs_stochastic(&x, &y, &ctx, 1000).unwrap_err();
        assert_eq!(err.name(), "OrderingError");
    }

    #[test]
    fn random_pairs_on_exact_rational_gibbs() {
        let ctx = fig2_ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut built = 0;
        while built < 50 {
            let raw: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            let s: f64 = raw.iter().sum();
            let x = pv(&raw.iter().map(|v| v / s).collect::<Vec<_>>());
            // y = random Gibbs-stochastic image of x, so the pair is ordered
            let lam: f64 = rng.gen();
            let y = pv(&x
                .iter()
                .zip(ctx.gibbs().iter())
                .map(|(a, b)| (1.0 - lam) * a + lam * b)
                .collect::<Vec<_>>());
            let g = construct_gibbs_stochastic(&x, &y, &ctx, 8).unwrap();
            assert!(g.apply(&x).unwrap().max_abs_diff(&y) < 1e-9);
            assert!(g.fixed_point_residual(ctx.gibbs().as_slice()).unwrap() < 1e-10);
            built += 1;
        }
    }

    #[test]
    fn irrational_gibbs_within_budget() {
        let ctx = GibbsContext::from_energies(vec![0.0, 1.0, 2.0], 1.2).unwrap();
        let x = pv(&[0.1, 0.1, 0.8]);
        let y = pv(&[0.5, 0.3, 0.2]);
        assert!(thermo_majorizes(&x, &y, &ctx).unwrap());
        let g = construct_gibbs_stochastic(&x, &y, &ctx, 2000).unwrap();
        let spec = rationalize(&ctx, 2000).unwrap();
        let budget = (3.0 * spec.approx_error()).max(1e-9);
        assert!(g.apply(&x).unwrap().max_abs_diff(&y) <= budget);
        assert!(g.fixed_point_residual(spec.rational_gibbs().as_slice()).unwrap() < 1e-10);
    }
}
