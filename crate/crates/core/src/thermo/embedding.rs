use crate::error::{check_dim, Error, Result};
use crate::prob::ProbVec;
use crate::spectrum::GibbsContext;

/// Rational approximation `g ≈ (d_1/D, ..., d_n/D)` of a Gibbs vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpec {
    d: Vec<u64>,
    total: u64,
    approx_error: f64,
}

impl EmbeddingSpec {
    /// Spec from explicit block sizes; `approx_error` is measured against `d / D` itself (zero).
    pub fn from_degeneracies(d: Vec<u64>) -> Result<Self> {
        if d.is_empty() || d.contains(&0) {
            return Err(Error::InvalidInput("block sizes must be positive".into()));
        }
        let total = d.iter().sum();
        Ok(Self {
            d,
            total,
            approx_error: 0.0,
        })
    }

    pub fn degeneracies(&self) -> &[u64] {
        &self.d
    }

    /// `D = Σ d_i`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// `max_i |g_i - d_i / D|` for the Gibbs vector this spec was fitted to.
    pub fn approx_error(&self) -> f64 {
        self.approx_error
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// The rational thermal vector `d / D`.
    pub fn rational_gibbs(&self) -> ProbVec {
        let total = self.total as f64;
        ProbVec::new(self.d.iter().map(|&k| k as f64 / total).collect())
            .expect("block fractions sum to one")
    }

    fn block_starts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.d.iter().scan(0usize, |start, &k| {
            let s = *start;
            *start += k as usize;
            Some((s, k as usize))
        })
    }
}

/// Integer block sizes summing to `total` that track `g * total`, each at least 1.
fn round_to_total(g: &[f64], total: u64) -> Vec<u64> {
    let scaled: Vec<f64> = g.iter().map(|p| p * total as f64).collect();
    let mut d: Vec<u64> = scaled.iter().map(|s| (s.floor() as u64).max(1)).collect();
    let mut sum: u64 = d.iter().sum();
    // largest remainders receive the missing units
    let mut by_remainder: Vec<usize> = (0..g.len()).collect();
    by_remainder.sort_by(|&a, &b| {
        let ra = scaled[a] - d[a] as f64;
        let rb = scaled[b] - d[b] as f64;
        rb.total_cmp(&ra)
    });
    let mut k = 0;
    while sum < total {
        d[by_remainder[k % g.len()]] += 1;
        sum += 1;
        k += 1;
    }
    // forcing d_i >= 1 may overshoot: take back from the most over-allocated entries
    while sum > total {
        let i = (0..g.len())
            .filter(|&i| d[i] > 1)
            .max_by(|&a, &b| {
                let ea = d[a] as f64 - scaled[a];
                let eb = d[b] as f64 - scaled[b];
                ea.total_cmp(&eb)
            })
            .expect("total >= n leaves room for every block");
        d[i] -= 1;
        sum -= 1;
    }
    d
}

/// Best rational approximation of the Gibbs vector with denominator at most `d_max`.
///
/// Every denominator `n <= D* <= d_max` is scanned; the first one attaining
/// the smallest `max_i |g_i - d_i/D*|` wins.
pub fn rationalize(ctx: &GibbsContext, d_max: u64) -> Result<EmbeddingSpec> {
    rationalize_vector(ctx.gibbs(), d_max)
}

pub(crate) fn rationalize_vector(g: &ProbVec, d_max: u64) -> Result<EmbeddingSpec> {
    let n = g.len() as u64;
    if d_max < n {
        return Err(Error::InvalidInput(format!(
            "d_max = {d_max} is smaller than the dimension {n}"
        )));
    }
    let g = g.as_slice();
    let mut best: Option<(f64, Vec<u64>, u64)> = None;
    for total in n..=d_max {
        let d = round_to_total(g, total);
        let err = g
            .iter()
            .zip(&d)
            .map(|(p, &k)| (p - k as f64 / total as f64).abs())
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(e, _, _)| err < e - 1e-15) {
            let exact = err == 0.0;
            best = Some((err, d, total));
            if exact {
                break;
            }
        }
    }
    let (approx_error, d, total) = best.expect("at least one denominator scanned");
    Ok(EmbeddingSpec {
        d,
        total,
        approx_error,
    })
}

/// `Γ_d(x) = ⊕_i x_i u_{d_i}`: each `x_i` spread uniformly over `d_i` slots.
pub fn embed(x: &ProbVec, spec: &EmbeddingSpec) -> Result<ProbVec> {
    check_dim(spec.dim(), x.len())?;
    ProbVec::new(embed_raw(x.as_slice(), spec))
}

pub(crate) fn embed_raw(x: &[f64], spec: &EmbeddingSpec) -> Vec<f64> {
    let mut out = Vec::with_capacity(spec.total as usize);
    for (&p, &k) in x.iter().zip(&spec.d) {
        let v = p / k as f64;
        out.extend(std::iter::repeat_n(v, k as usize));
    }
    out
}

/// Left inverse of [`embed`]: block sums.
pub fn unembed(p: &ProbVec, spec: &EmbeddingSpec) -> Result<ProbVec> {
    check_dim(spec.total as usize, p.len())?;
    ProbVec::new(unembed_raw(p.as_slice(), spec))
}

pub(crate) fn unembed_raw(p: &[f64], spec: &EmbeddingSpec) -> Vec<f64> {
    spec.block_starts()
        .map(|(start, k)| p[start..start + k].iter().sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    #[test]
    fn exact_three_level_spec() {
        let spec = rationalize_vector(&pv(&[0.5, 0.375, 0.125]), 8).unwrap();
        assert_eq!(spec.degeneracies(), &[4, 3, 1]);
        assert_eq!(spec.total(), 8);
        assert_eq!(spec.approx_error(), 0.0);
    }

    #[test]
    fn uniform_spec() {
        let spec = rationalize_vector(&ProbVec::uniform(4).unwrap(), 4).unwrap();
        assert_eq!(spec.degeneracies(), &[1, 1, 1, 1]);
        assert!(rationalize_vector(&ProbVec::uniform(4).unwrap(), 3).is_err());
    }

    #[test]
    fn reference_gibbs_is_well_approximated() {
        let ctx = GibbsContext::from_energies(vec![0.0, 1.0, 2.0], 1.2).unwrap();
        let spec = rationalize(&ctx, 10_000).unwrap();
        assert!(spec.approx_error() <= 1e-4);
        // exhaustive oracle over denominators whose plain rounding already sums correctly
        let g = ctx.gibbs().as_slice();
        let brute = (3..=10_000u64)
            .filter_map(|total| {
                let d: Vec<f64> = g.iter().map(|p| (p * total as f64).round().max(1.0)).collect();
                (d.iter().sum::<f64>() == total as f64).then(|| {
                    g.iter()
                        .zip(&d)
                        .map(|(p, k)| (p - k / total as f64).abs())
                        .fold(0.0, f64::max)
                })
            })
            .fold(f64::INFINITY, f64::min);
        assert!(spec.approx_error() <= brute + 1e-15);
    }

    #[test]
    fn embedding_examples() {
        let spec = EmbeddingSpec::from_degeneracies(vec![2, 2]).unwrap();
        assert_eq!(embed(&pv(&[1.0, 0.0]), &spec).unwrap().as_slice(), &[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(unembed(&pv(&[0.5, 0.5, 0.0, 0.0]), &spec).unwrap().as_slice(), &[1.0, 0.0]);

        let fig = EmbeddingSpec::from_degeneracies(vec![4, 3, 1]).unwrap();
        let x = pv(&[0.2, 0.3, 0.5]);
        let e = embed(&x, &fig).unwrap();
        let want = [0.05, 0.05, 0.05, 0.05, 0.1, 0.1, 0.1, 0.5];
        for (a, b) in e.iter().zip(want) {
            assert!((a - b).abs() < 1e-16);
        }
        let g = fig.rational_gibbs();
        assert!(embed(&g, &fig).unwrap().iter().all(|v| (v - 0.125).abs() < 1e-16));
        let u = ProbVec::uniform(8).unwrap();
        assert!(unembed(&u, &fig).unwrap().max_abs_diff(&g) < 1e-16);
        assert!(unembed(&x, &fig).is_err());
    }

    proptest! {
        #[test]
        fn unembed_inverts_embed(v in prop::collection::vec(0.0f64..1.0, 3), d in prop::collection::vec(1u64..50, 3)) {
            let s: f64 = v.iter().sum::<f64>() + 1e-9;
            let x = ProbVec::new(v.iter().map(|a| (a + 1e-9 / 3.0) / s).collect()).unwrap();
            let spec = EmbeddingSpec::from_degeneracies(d).unwrap();
            let back = unembed(&embed(&x, &spec).unwrap(), &spec).unwrap();
            // summing k copies of p/k loses up to k ulps
            prop_assert!(back.max_abs_diff(&x) <= 64.0 * f64::EPSILON);
        }
    }
}
