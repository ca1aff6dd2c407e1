//! Density matrices in the energy eigenbasis.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64};
use crate::prob::ProbVec;
use crate::tol;

/// A quantum state written in the energy eigenbasis of some [`EnergySpectrum`].
///
/// Hermitian within `1e-10`, unit trace within `1e-9`, eigenvalues `>= -1e-9`.
///
/// [`EnergySpectrum`]: crate::EnergySpectrum
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMat);

impl DensityMatrix {
    pub fn new(entries: CMat) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "density matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("density matrix has non-finite entries".into()));
        }
        let asym = linalg::max_abs(&(&entries - entries.adjoint()));
        if asym > tol::HERMITIAN {
            return Err(Error::InvalidInput(format!(
                "density matrix is not Hermitian (deviation {asym:e})"
            )));
        }
        let tr = linalg::trace(&entries).re;
        if (tr - 1.0).abs() > tol::VALIDATION {
            return Err(Error::InvalidInput(format!("density matrix has trace {tr}")));
        }
        let min_eig = linalg::hermitian_eigenvalues(&entries)[0];
        if min_eig < -tol::PSD {
            return Err(Error::InvalidInput(format!(
                "density matrix is not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self(linalg::hermitian_part(&entries)))
    }

    /// Diagonal (incoherent) state with the given populations.
    pub fn from_diag(p: &ProbVec) -> Self {
        Self(linalg::diag_real(p.as_slice()))
    }

    /// Pure state `|ψ⟩⟨ψ|`, normalising `ψ`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidInput("state vector must be non-zero".into()));
        }
        let normed: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(linalg::projector(&normed)))
    }

    /// `|+⟩ = (|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self(linalg::projector(&[linalg::real(h), linalg::real(h)]))
    }

    /// Energy eigenstate `|k⟩⟨k|` in dimension `n`.
    pub fn eigenstate(n: usize, k: usize) -> Result<Self> {
        Ok(Self::from_diag(&ProbVec::sharp(n, k)?))
    }

    /// Convex combination `w ρ + (1 - w) σ`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<Self> {
        crate::error::check_dim(self.dim(), other.dim())?;
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidInput(format!("mixing weight {w} outside [0, 1]")));
        }
        Ok(Self(self.0.scale(w) + other.0.scale(1.0 - w)))
    }

    /// Wraps the output of a trace-preserving map, re-symmetrising round-off.
    pub(crate) fn from_channel_output(m: CMat) -> Self {
        Self(linalg::hermitian_part(&m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.0[(a, b)]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.0)
    }

    pub fn entropy(&self) -> f64 {
        linalg::von_neumann_entropy(&self.0)
    }

    /// Largest modulus of an off-diagonal entry.
    pub fn max_coherence(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .map(|(a, b)| self.0[(a, b)].norm())
            .fold(0.0, f64::max)
    }
}

/// Populations `p_i = Re ρ_ii`.
pub fn population_of(rho: &DensityMatrix) -> ProbVec {
    let p: Vec<f64> = rho.0.diagonal().iter().map(|z| z.re.max(0.0)).collect();
    let total: f64 = p.iter().sum();
    ProbVec::new(p.into_iter().map(|x| x / total).collect())
        .expect("diagonal of a density matrix is a distribution")
}
