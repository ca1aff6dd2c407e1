use nalgebra::DMatrix;

use crate::prob::ProbVec;

/// Entries of magnitude below this are treated as zero when pivoting.
const PIVOT_EPS: f64 = 1e-12;

/// Phase-one residual above which the system is declared infeasible.
const FEASIBILITY_TOL: f64 = 1e-9;

/// Smallest achievable `Σ_k |(A z - b)_k|` over `z >= 0`, via the phase-one
/// simplex method on a dense tableau with Bland's anti-cycling rule.
///
/// Zero (up to round-off) means `{z >= 0 : A z = b}` is non-empty.
pub fn phase_one_infeasibility(a: &DMatrix<f64>, b: &[f64]) -> f64 {
    let (m, nv) = a.shape();
    assert_eq!(m, b.len(), "one right-hand side per constraint");
    let cols = nv + m + 1;
    let rhs = cols - 1;
    let mut t = DMatrix::<f64>::zeros(m + 1, cols);
    for r in 0..m {
        let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for c in 0..nv {
            t[(r, c)] = sign * a[(r, c)];
        }
        t[(r, nv + r)] = 1.0;
        t[(r, rhs)] = sign * b[r];
    }
    // reduced costs of the artificial objective: minus the sum of the rows
    for c in 0..nv {
        t[(m, c)] = -(0..m).map(|r| t[(r, c)]).sum::<f64>();
    }
    t[(m, rhs)] = -(0..m).map(|r| t[(r, rhs)]).sum::<f64>();
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    while let Some(enter) = (0..nv + m).find(|&c| t[(m, c)] < -PIVOT_EPS) {
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            let p = t[(r, enter)];
            if p > PIVOT_EPS {
                let ratio = t[(r, rhs)] / p;
                let better = match leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < best - PIVOT_EPS
                            || (ratio <= best + PIVOT_EPS && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // the artificial objective is bounded below by zero, so a ratio always exists
        let Some((row, _)) = leave else { break };
        pivot(&mut t, row, enter);
        basis[row] = enter;
    }
    (-t[(m, rhs)]).max(0.0)
}

fn pivot(t: &mut DMatrix<f64>, row: usize, col: usize) {
    let p = t[(row, col)];
    let cols = t.ncols();
    for c in 0..cols {
        t[(row, c)] /= p;
    }
    for r in 0..t.nrows() {
        if r == row {
            continue;
        }
        let f = t[(r, col)];
        if f != 0.0 {
            for c in 0..cols {
                let v = t[(row, c)];
                t[(r, c)] -= f * v;
            }
        }
    }
}

/// Decides whether some column-stochastic `G` satisfies `G x = y` and
/// `G g = g`, by linear feasibility over the `n²` entries of `G`.
///
/// This does not look at curves at all, so it serves as an independent
/// check of [`thermo_majorizes`](super::thermo_majorizes).
pub fn feasibility_lp_oracle(x: &ProbVec, y: &ProbVec, g: &ProbVec) -> bool {
    let n = x.len();
    assert!(y.len() == n && g.len() == n, "dimensions must agree");
    // variable G_{i|j} lives at column i * n + j
    let mut a = DMatrix::<f64>::zeros(3 * n, n * n);
    let mut b = vec![0.0; 3 * n];
    for j in 0..n {
        for i in 0..n {
            a[(j, i * n + j)] = 1.0;
        }
        b[j] = 1.0;
    }
    for i in 0..n {
        for j in 0..n {
            a[(n + i, i * n + j)] = x[j];
            a[(2 * n + i, i * n + j)] = g[j];
        }
        b[n + i] = y[i];
        b[2 * n + i] = g[i];
    }
    phase_one_infeasibility(&a, &b) <= FEASIBILITY_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::GibbsContext;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_systems() {
        // z1 + z2 = 1, z1 - z2 = 3 has no non-negative solution
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0]);
        assert!(phase_one_infeasibility(&a, &[1.0, 3.0]) > 0.5);
        assert!(phase_one_infeasibility(&a, &[1.0, 0.5]) < 1e-12);
        // negative right-hand sides are flipped
        let a = DMatrix::from_row_slice(1, 2, &[-1.0, -1.0]);
        assert!(phase_one_infeasibility(&a, &[-2.0]) < 1e-12);
    }

    #[test]
    fn example_pair_is_infeasible() {
        let ctx = GibbsContext::from_energies(vec![0.0, 1.0, 2.0], 1.2).unwrap();
        let x = ProbVec::uniform(3).unwrap();
        let y = pv(&[2.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert!(!feasibility_lp_oracle(&x, &y, ctx.gibbs()));
        assert!(!feasibility_lp_oracle(&y, &x, ctx.gibbs()));
        assert!(feasibility_lp_oracle(ctx.gibbs(), ctx.gibbs(), ctx.gibbs()));
        assert!(feasibility_lp_oracle(&x, ctx.gibbs(), ctx.gibbs()));
        assert!(!feasibility_lp_oracle(ctx.gibbs(), &x, ctx.gibbs()));
    }
}
