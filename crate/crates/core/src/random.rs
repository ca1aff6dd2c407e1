//! Random sampling of states, stochastic matrices and channels, used by the
//! property tests and by the command-line tool.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::coherence::QuantumChannel;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, C64, ZERO};
use crate::prob::{ProbVec, StochasticMatrix};
use crate::spectrum::{EnergySpectrum, GibbsContext};

fn nonempty(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    Ok(())
}

/// Uniform (flat Dirichlet) sample from the simplex.
pub fn random_prob_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ProbVec> {
    nonempty(n)?;
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    ProbVec::new(w.into_iter().map(|v| v / s).collect())
}

/// Like [`random_prob_vec`] but supported on `rank` randomly chosen entries.
pub fn random_prob_vec_with_rank<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Result<ProbVec> {
    if rank == 0 || rank > n {
        return Err(Error::InvalidInput(format!("rank {rank} outside 1..={n}")));
    }
    let head = random_prob_vec(rank, rng)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut p = vec![0.0; n];
    for (k, &i) in idx[..rank].iter().enumerate() {
        p[i] = head[k];
    }
    ProbVec::new(p)
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `A A† / tr(A A†)` for an `n × n` matrix with independent uniform entries.
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    nonempty(n)?;
    let a = ginibre(n, n, rng);
    let m = &a * a.adjoint();
    let t = linalg::trace(&m).re;
    DensityMatrix::new(linalg::hermitian_part(&m.unscale(t)))
}

pub fn random_pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    nonempty(n)?;
    let v = ginibre(n, 1, rng);
    let norm = v.norm();
    let psi: Vec<C64> = v.iter().map(|z| z / norm).collect();
    DensityMatrix::pure(&psi)
}

/// Product of `steps` partial thermalisations of random level pairs; each
/// factor fixes the Gibbs state, hence so does the product.
pub fn random_gibbs_stochastic<R: Rng + ?Sized>(
    ctx: &GibbsContext,
    steps: usize,
    rng: &mut R,
) -> Result<StochasticMatrix> {
    let n = ctx.dim();
    let g = ctx.gibbs();
    let mut acc = StochasticMatrix::identity(n);
    if n < 2 {
        return Ok(acc);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let t: f64 = rng.gen();
        let mut m = nalgebra::DMatrix::<f64>::identity(n, n);
        let (gi, gj) = (g[i] / (g[i] + g[j]), g[j] / (g[i] + g[j]));
        // (p_i, p_j) ↦ (1-t)(p_i, p_j) + t (g_i, g_j)(p_i + p_j)/(g_i + g_j)
        m[(i, i)] = 1.0 - t + t * gi;
        m[(i, j)] = t * gi;
        m[(j, i)] = t * gj;
        m[(j, j)] = 1.0 - t + t * gj;
        acc = StochasticMatrix::new(m)?.compose(&acc)?;
    }
    Ok(acc)
}

/// Random mixture of `terms` permutation matrices.
pub fn random_doubly_stochastic<R: Rng + ?Sized>(n: usize, terms: usize, rng: &mut R) -> Result<StochasticMatrix> {
    nonempty(n)?;
    if terms == 0 {
        return Err(Error::InvalidInput("need at least one permutation".into()));
    }
    let w = random_prob_vec(terms, rng)?;
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..terms {
        perm.shuffle(rng);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] += w[k];
        }
    }
    StochasticMatrix::new(m)
}

/// Random channel commuting with time translations: each Kraus operator is
/// supported on a single Bohr frequency, and the set is made complete by
/// `K_k ↦ K_k S^{-1/2}` with `S = Σ K†K` (itself frequency zero, so the
/// repair keeps every operator in its mode).
pub fn random_covariant_channel<R: Rng + ?Sized>(
    spectrum: &EnergySpectrum,
    n_kraus: usize,
    rng: &mut R,
) -> Result<QuantumChannel> {
    let n = spectrum.dim();
    let e = spectrum.energies();
    let delta = crate::coherence::default_delta(spectrum);
    let bohr = crate::coherence::bohr_spectrum(spectrum, delta)?;
    // always include a full-rank diagonal operator so S is invertible
    let mut kraus = vec![CMat::from_fn(n, n, |a, b| {
        if (e[a] - e[b]).abs() <= delta {
            c(rng.gen_range(0.5..1.0), 0.0) * if a == b { 1.0 } else { 0.1 }
        } else {
            ZERO
        }
    })];
    for _ in 1..n_kraus.max(1) {
        let omega = bohr.frequencies[rng.gen_range(0..bohr.len())];
        kraus.push(CMat::from_fn(n, n, |a, b| {
            if (e[a] - e[b] - omega).abs() <= delta {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                ZERO
            }
        }));
    }
    let s = kraus.iter().fold(CMat::zeros(n, n), |acc, k| acc + k.adjoint() * k);
    let root = linalg::psd_power(&s, -0.5, 1e-14);
    QuantumChannel::new(kraus.into_iter().map(|k| k * &root).collect())
}

/// Random thermal-looking channel: with probability weight `w` a diagonal
/// phase unitary, otherwise measure-and-resample with a random
/// Gibbs-stochastic matrix. Covariant and Gibbs preserving.
pub fn random_thermal_channel<R: Rng + ?Sized>(ctx: &GibbsContext, rng: &mut R) -> Result<QuantumChannel> {
    let n = ctx.dim();
    let phases = CMat::from_fn(n, n, |a, b| {
        if a == b {
            C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
        } else {
            ZERO
        }
    });
    let g = random_gibbs_stochastic(ctx, 3 * n, rng)?;
    let w: f64 = rng.gen();
    QuantumChannel::unitary(phases)?.mix(&QuantumChannel::from_stochastic(&g), w)
}
