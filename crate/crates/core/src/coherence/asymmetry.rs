use super::modes::dephase;
use crate::density::{population_of, DensityMatrix};
use crate::divergences::shannon_entropy;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, CMat, C64};
use crate::spectrum::{EnergySpectrum, GibbsContext};

/// Eigenvalues below this are treated as outside the support when taking
/// matrix powers and logarithms.
const SUPPORT_CUTOFF: f64 = 1e-14;

/// `A(ρ) = S(D(ρ)) - S(ρ)`.
pub fn asymmetry(rho: &DensityMatrix, spectrum: &EnergySpectrum) -> Result<f64> {
    check_dim(spectrum.dim(), rho.dim())?;
    Ok(dephase(rho, spectrum)?.entropy() - rho.entropy())
}

/// Rényi asymmetry `A_α(ρ) = S_α(ρ‖D(ρ))`: the Petz form for `α < 1`, the
/// sandwiched form for `α > 1`, Umegaki relative entropy at `α = 1`.
///
/// The support of `D(ρ)` always contains that of `ρ` (a vanishing diagonal
/// entry forces its row and column to vanish), so the value is finite.
pub fn asymmetry_alpha(rho: &DensityMatrix, spectrum: &EnergySpectrum, alpha: f64) -> Result<f64> {
    check_dim(spectrum.dim(), rho.dim())?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "asymmetry order must be a positive finite number, got {alpha}"
        )));
    }
    let sigma = dephase(rho, spectrum)?;
    quantum_renyi_divergence(rho.matrix(), sigma.matrix(), alpha)
}

/// `S_α(ρ‖σ)` for `supp ρ ⊆ supp σ`; Petz below one, sandwiched above.
pub fn quantum_renyi_divergence(rho: &CMat, sigma: &CMat, alpha: f64) -> Result<f64> {
    check_dim(rho.nrows(), sigma.nrows())?;
    if alpha == 1.0 {
        let log = |x: f64| if x > SUPPORT_CUTOFF { x.ln() } else { 0.0 };
        let log_rho = linalg::hermitian_fn(rho, log);
        let log_sigma = linalg::hermitian_fn(sigma, log);
        return Ok(linalg::trace(&(rho * (log_rho - log_sigma))).re);
    }
    let q = if alpha < 1.0 {
        let a = linalg::psd_power(rho, alpha, SUPPORT_CUTOFF);
        let b = linalg::psd_power(sigma, 1.0 - alpha, SUPPORT_CUTOFF);
        linalg::trace(&(a * b)).re
    } else {
        let s = linalg::psd_power(sigma, (1.0 - alpha) / (2.0 * alpha), SUPPORT_CUTOFF);
        let inner = &s * rho * &s;
        linalg::hermitian_eigenvalues(&inner)
            .into_iter()
            .filter(|&l| l > 0.0)
            .map(|l| l.powf(alpha))
            .sum()
    };
    Ok(q.ln() / (alpha - 1.0))
}

/// Holevo asymmetry for the uniform average over the `U(1)` group generated
/// by `axis`: `S(G(ρ)) - S(ρ)` with `G` dephasing in the eigenbasis of the
/// generator.
pub fn holevo_asymmetry(rho: &DensityMatrix, axis: &EnergySpectrum) -> Result<f64> {
    asymmetry(rho, axis)
}

/// Fidelity `F(ρ, σ) = ‖√ρ √σ‖_1`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(rho.dim(), sigma.dim())?;
    let a = linalg::psd_power(rho.matrix(), 0.5, 0.0);
    let b = linalg::psd_power(sigma.matrix(), 0.5, 0.0);
    Ok(linalg::trace_norm(&(a * b)))
}

/// Quantum Fisher information of the family `e^{-iHt} ρ e^{iHt}` at `t = 0`,
/// estimated as `4 (1 - F(ρ, ρ_δ)²) / δ²` and Richardson-extrapolated over
/// `δ` and `δ/2`. Normalised so that a pure state gives `4 Var(H)`.
pub fn qfi(rho: &DensityMatrix, spectrum: &EnergySpectrum, delta_t: f64) -> Result<f64> {
    check_dim(spectrum.dim(), rho.dim())?;
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(Error::InvalidInput(format!("delta_t must be positive, got {delta_t}")));
    }
    // F(ρ, UρU†) = ‖√Λ V†UV √Λ‖_1 for ρ = VΛV†; dividing by tr Λ₊ keeps
    // clamped round-off eigenvalues from biasing 1 - F² by a constant
    let (values, v) = linalg::hermitian_eig(rho.matrix());
    let roots: Vec<f64> = values.iter().map(|l| l.max(0.0).sqrt()).collect();
    let mass: f64 = values.iter().map(|l| l.max(0.0)).sum();
    let e = spectrum.energies();
    let n = rho.dim();
    let estimate = |d: f64| -> Result<f64> {
        let uv = CMat::from_fn(n, n, |a, b| v[(a, b)] * C64::from_polar(1.0, -e[a] * d));
        let w = v.adjoint() * uv;
        let m = CMat::from_fn(n, n, |a, b| w[(a, b)] * (roots[a] * roots[b]));
        let f = (linalg::trace_norm(&m) / mass).min(1.0);
        Ok(4.0 * (1.0 - f * f) / (d * d))
    };
    let coarse = estimate(delta_t)?;
    let fine = estimate(0.5 * delta_t)?;
    Ok(((4.0 * fine - coarse) / 3.0).max(0.0))
}

/// Non-equilibrium free energy split into classical and coherent parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergySplit {
    /// `kT S(ρ‖γ)`.
    pub total: f64,
    /// `kT S(D(ρ)‖γ)`.
    pub classical: f64,
    /// `kT A(ρ)`.
    pub coherent: f64,
}

pub fn free_energy_split(rho: &DensityMatrix, ctx: &GibbsContext) -> Result<FreeEnergySplit> {
    check_dim(ctx.dim(), rho.dim())?;
    let kt = ctx.kt()?;
    let p = population_of(rho);
    // -tr ρ log γ only involves the populations since γ is diagonal
    let cross: f64 = p
        .iter()
        .zip(ctx.gibbs().iter())
        .map(|(pi, gi)| -pi * gi.ln())
        .sum();
    let s_rho = rho.entropy();
    let h_p = shannon_entropy(&p);
    Ok(FreeEnergySplit {
        total: kt * (cross - s_rho),
        classical: kt * (cross - h_p),
        coherent: kt * asymmetry(rho, ctx.spectrum())?,
    })
}
